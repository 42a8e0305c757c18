use serde::Serialize;

use super::{DslError, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Number,
    Identifier,
    Operator,
    Punctuation,
    Keyword,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: Span,
}

pub const KEYWORDS: [&str; 6] = ["piecewise", "if", "else", "and", "or", "in"];

/// Splits `source` into tokens. Whitespace separates tokens and is
/// otherwise ignored.
///
/// Numbers are `digits ('.' digits*)? ([eE] [+-]? digits)?`. Two-character
/// operators are `<=`, `>=` and `==`; a lone `=` is also an operator.
pub fn tokenize(source: &str) -> Result<Vec<Token>, DslError> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let kind = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                i = scan_number(source, i)?;
                TokenKind::Number
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                if KEYWORDS.contains(&&source[start..i]) {
                    TokenKind::Keyword
                } else {
                    TokenKind::Identifier
                }
            }
            b'<' | b'>' | b'=' => {
                i += if bytes.get(i + 1) == Some(&b'=') {
                    2
                } else {
                    1
                };
                TokenKind::Operator
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                i += 1;
                TokenKind::Operator
            }
            b'(' | b')' | b'[' | b']' | b'{' | b'}' | b',' | b':' | b';' => {
                i += 1;
                TokenKind::Punctuation
            }
            _ => return Err(unexpected_char(source, i)),
        };
        tokens.push(Token {
            kind,
            lexeme: source[start..i].to_string(),
            span: Span::new(start, i),
        });
    }
    Ok(tokens)
}

fn scan_number(source: &str, start: usize) -> Result<usize, DslError> {
    let bytes = source.as_bytes();
    let digits = |mut i: usize| {
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    let mut i = digits(start);
    if bytes.get(i) == Some(&b'.') {
        i = digits(i + 1);
    }
    if matches!(bytes.get(i), Some(b'e' | b'E')) {
        let mut j = i + 1;
        if matches!(bytes.get(j), Some(b'+' | b'-')) {
            j += 1;
        }
        if !bytes.get(j).is_some_and(u8::is_ascii_digit) {
            return Err(DslError::lexical(
                source,
                Span::new(start, j),
                "exponent needs at least one digit",
            ));
        }
        i = digits(j);
    }
    Ok(i)
}

fn unexpected_char(source: &str, offset: usize) -> DslError {
    let ch = source[offset..].chars().next().unwrap_or('\u{fffd}');
    DslError::lexical(
        source,
        Span::new(offset, offset + ch.len_utf8()),
        format!("unexpected character {ch:?}"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> Vec<(TokenKind, String)> {
        tokenize(s)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.lexeme))
            .collect()
    }

    #[test]
    fn harmonic_expression_has_eleven_tokens() {
        let t = tokenize("2*x*y/(x+y)").unwrap();
        assert_eq!(t.len(), 11);
        assert_eq!(t[0].kind, TokenKind::Number);
        assert_eq!(t[5].lexeme, "/");
        assert_eq!(t[10].span, Span::new(10, 11));
    }

    #[test]
    fn interval_membership_tokens() {
        let k = kinds("x in [0, 1/2)");
        assert_eq!(k[1], (TokenKind::Keyword, "in".into()));
        assert_eq!(k[2], (TokenKind::Punctuation, "[".into()));
        assert_eq!(k.last().unwrap(), &(TokenKind::Punctuation, ")".into()));
    }

    #[test]
    fn double_dot_fails_at_second_dot() {
        let e = tokenize("0..5").unwrap_err();
        assert_eq!(e.span, Span::new(2, 3));
        assert!(e.message.contains("'.'"));
    }

    #[test]
    fn numbers_and_operators() {
        let k = kinds("1.5e-3 <= 2. >= 3E2 == 4 = 5");
        let lex: Vec<&str> = k.iter().map(|(_, l)| l.as_str()).collect();
        assert_eq!(
            lex,
            ["1.5e-3", "<=", "2.", ">=", "3E2", "==", "4", "=", "5"]
        );
        assert!(tokenize("1e+").is_err());
    }

    #[test]
    fn spans_cover_input_minus_whitespace() {
        let s = " piecewise {if x<y: x ; else:y}\n";
        let t = tokenize(s).unwrap();
        let mut covered = String::new();
        let mut last = 0;
        for tok in &t {
            assert!(tok.span.start >= last);
            last = tok.span.end;
            covered.push_str(&s[tok.span.start..tok.span.end]);
        }
        let stripped: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        assert_eq!(covered, stripped);
    }

    #[test]
    fn non_ascii_is_rejected_with_offset() {
        let e = tokenize("x ≤ y").unwrap_err();
        assert_eq!(e.span.start, 2);
    }
}
