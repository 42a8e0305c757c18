use super::ast::{BinOp, Case, CmpOp, Cond, Expr, Func, MapAst, Var};
use super::lexer::{tokenize, Token, TokenKind};
use super::{DslError, Span};

/// Deepest accepted nesting of parentheses, calls and unary minus.
pub const MAX_NESTING: usize = 128;

/// Parses a map definition.
pub fn parse(source: &str) -> Result<MapAst, DslError> {
    let tokens = tokenize(source)?;
    let mut p = Parser {
        source,
        tokens,
        pos: 0,
        depth: 0,
    };
    let ast = p.map()?;
    if let Some(t) = p.peek() {
        return Err(p.error_at(t.span, "unexpected trailing input", &["end of input"]));
    }
    Ok(ast)
}

struct Parser<'a> {
    source: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
}

type PResult<T> = Result<T, DslError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&Token> {
        self.tokens.get(self.pos + offset)
    }

    fn is(&self, kind: TokenKind, lexeme: &str) -> bool {
        self.peek()
            .is_some_and(|t| t.kind == kind && t.lexeme == lexeme)
    }

    fn eat(&mut self, kind: TokenKind, lexeme: &str) -> bool {
        let hit = self.is(kind, lexeme);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect(&mut self, kind: TokenKind, lexeme: &str) -> PResult<()> {
        if self.eat(kind, lexeme) {
            Ok(())
        } else {
            Err(self.error_here(&format!("expected `{lexeme}`"), &[lexeme]))
        }
    }

    fn current_span(&self) -> Span {
        match self.peek() {
            Some(t) => t.span,
            None => Span::new(self.source.len(), self.source.len()),
        }
    }

    fn error_at(&self, span: Span, message: &str, expected: &[&str]) -> DslError {
        DslError::syntax(
            self.source,
            span,
            message,
            expected.iter().map(|s| s.to_string()).collect(),
        )
    }

    fn error_here(&self, message: &str, expected: &[&str]) -> DslError {
        let message = match self.peek() {
            Some(t) => format!("{message}, found `{}`", t.lexeme),
            None => format!("{message}, found end of input"),
        };
        self.error_at(self.current_span(), &message, expected)
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(self.error_at(
                self.current_span(),
                &format!("nesting deeper than {MAX_NESTING}"),
                &[],
            ));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn map(&mut self) -> PResult<MapAst> {
        if !self.eat(TokenKind::Keyword, "piecewise") {
            return Ok(MapAst::Expr { body: self.expr()? });
        }
        self.expect(TokenKind::Punctuation, "{")?;
        let mut cases = Vec::new();
        loop {
            if self.eat(TokenKind::Keyword, "if") {
                let guard = self.cond()?;
                self.expect(TokenKind::Punctuation, ":")?;
                let body = self.expr()?;
                self.expect(TokenKind::Punctuation, ";")?;
                cases.push(Case { guard, body });
            } else if self.eat(TokenKind::Keyword, "else") {
                self.expect(TokenKind::Punctuation, ":")?;
                let otherwise = self.expr()?;
                self.eat(TokenKind::Punctuation, ";");
                self.expect(TokenKind::Punctuation, "}")?;
                return Ok(MapAst::Piecewise { cases, otherwise });
            } else {
                return Err(self.error_here("expected a case", &["if", "else"]));
            }
        }
    }

    fn cond(&mut self) -> PResult<Cond> {
        let mut left = self.conj()?;
        while self.eat(TokenKind::Keyword, "or") {
            let right = self.conj()?;
            left = Cond::Or {
                left: Box::new(left),
                right: Box::new(right),
            };
        }
        Ok(left)
    }

    fn conj(&mut self) -> PResult<Cond> {
        let mut left = self.atom()?;
        while self.eat(TokenKind::Keyword, "and") {
            let right = self.atom()?;
            left = Cond::And {
                left: Box::new(left),
                right: Box::new(right),
            };
        }
        Ok(left)
    }

    fn atom(&mut self) -> PResult<Cond> {
        if let (Some(var), true) = (
            self.peek().and_then(as_var),
            self.peek_at(1)
                .is_some_and(|t| t.kind == TokenKind::Keyword && t.lexeme == "in"),
        ) {
            self.pos += 2;
            return self.membership(var);
        }
        if self.is(TokenKind::Punctuation, "(") {
            // `(` opens either a grouped condition or an arithmetic
            // subexpression; try the condition first and fall back.
            let (pos, depth) = (self.pos, self.depth);
            let grouped = self.grouped_cond();
            match grouped {
                Ok(c) if !self.peek().is_some_and(|t| t.kind == TokenKind::Operator) => {
                    return Ok(c)
                }
                _ => {}
            }
            self.pos = pos;
            self.depth = depth;
            return match self.comparison() {
                Ok(c) => Ok(c),
                Err(e) => match grouped {
                    Err(g) if g.span.start > e.span.start => Err(g),
                    _ => Err(e),
                },
            };
        }
        self.comparison()
    }

    fn grouped_cond(&mut self) -> PResult<Cond> {
        self.expect(TokenKind::Punctuation, "(")?;
        self.enter()?;
        let c = self.cond()?;
        self.expect(TokenKind::Punctuation, ")")?;
        self.leave();
        Ok(c)
    }

    fn comparison(&mut self) -> PResult<Cond> {
        let left = self.expr()?;
        let op = match self.peek() {
            Some(t) if t.kind == TokenKind::Operator => CmpOp::from_symbol(&t.lexeme),
            _ => None,
        };
        let Some(op) = op else {
            return Err(
                self.error_here("expected a comparison", &["<", "<=", ">", ">=", "==", "in"])
            );
        };
        self.pos += 1;
        let right = self.expr()?;
        Ok(Cond::Cmp { op, left, right })
    }

    fn membership(&mut self, var: Var) -> PResult<Cond> {
        let lo_closed = if self.eat(TokenKind::Punctuation, "[") {
            true
        } else if self.eat(TokenKind::Punctuation, "(") || self.eat(TokenKind::Punctuation, "]") {
            false
        } else {
            return Err(self.error_here("expected an interval", &["[", "(", "]"]));
        };
        let lo = self.expr()?;
        self.expect(TokenKind::Punctuation, ",")?;
        let hi = self.expr()?;
        let hi_closed = if self.eat(TokenKind::Punctuation, "]") {
            true
        } else if self.eat(TokenKind::Punctuation, ")") || self.eat(TokenKind::Punctuation, "[") {
            false
        } else {
            return Err(self.error_here("expected the end of the interval", &["]", ")", "["]));
        };
        Ok(Cond::In {
            var,
            lo,
            lo_closed,
            hi,
            hi_closed,
        })
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut left = self.term()?;
        loop {
            let op = if self.eat(TokenKind::Operator, "+") {
                BinOp::Add
            } else if self.eat(TokenKind::Operator, "-") {
                BinOp::Sub
            } else {
                return Ok(left);
            };
            left = Expr::binary(op, left, self.term()?);
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut left = self.unary()?;
        loop {
            let op = if self.eat(TokenKind::Operator, "*") {
                BinOp::Mul
            } else if self.eat(TokenKind::Operator, "/") {
                BinOp::Div
            } else {
                return Ok(left);
            };
            left = Expr::binary(op, left, self.unary()?);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat(TokenKind::Operator, "-") {
            self.enter()?;
            let arg = self.unary()?;
            self.leave();
            return Ok(Expr::Neg { arg: Box::new(arg) });
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.primary()?;
        if self.eat(TokenKind::Operator, "^") {
            self.enter()?;
            let exponent = self.unary()?;
            self.leave();
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> PResult<Expr> {
        const START: [&str; 5] = ["number", "x", "y", "function", "("];
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error_here("expected an expression", &START));
        };
        match tok.kind {
            TokenKind::Number => {
                self.pos += 1;
                let value: f64 = tok
                    .lexeme
                    .parse()
                    .map_err(|_| self.error_at(tok.span, "malformed number", &[]))?;
                if !value.is_finite() {
                    return Err(self.error_at(tok.span, "number literal out of range", &[]));
                }
                Ok(Expr::Num { value })
            }
            TokenKind::Identifier => {
                self.pos += 1;
                if let Some(var) = as_var(&tok) {
                    return Ok(Expr::Var { var });
                }
                let Some(func) = Func::from_name(&tok.lexeme) else {
                    return Err(self.error_at(
                        tok.span,
                        &format!("unknown identifier `{}`", tok.lexeme),
                        &["x", "y", "sqrt", "exp", "log", "abs", "min", "max"],
                    ));
                };
                self.call(func)
            }
            TokenKind::Punctuation if tok.lexeme == "(" => {
                self.pos += 1;
                self.enter()?;
                let inner = self.expr()?;
                self.expect(TokenKind::Punctuation, ")")?;
                self.leave();
                Ok(inner)
            }
            _ => Err(self.error_here("expected an expression", &START)),
        }
    }

    fn call(&mut self, func: Func) -> PResult<Expr> {
        self.expect(TokenKind::Punctuation, "(")?;
        self.enter()?;
        let mut args = vec![self.expr()?];
        while args.len() < func.arity() {
            self.expect(TokenKind::Punctuation, ",")?;
            args.push(self.expr()?);
        }
        if self.is(TokenKind::Punctuation, ",") {
            return Err(self.error_here(
                &format!("{} takes {} argument(s)", func.name(), func.arity()),
                &[")"],
            ));
        }
        self.expect(TokenKind::Punctuation, ")")?;
        self.leave();
        Ok(Expr::Call { func, args })
    }
}

fn as_var(t: &Token) -> Option<Var> {
    match (t.kind, t.lexeme.as_str()) {
        (TokenKind::Identifier, "x") => Some(Var::X),
        (TokenKind::Identifier, "y") => Some(Var::Y),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_1: &str = "piecewise { if y in [0, 1/2): 2*x*y/(x+y); \
        if x in [0, 1/2] and y in [1/2, 1]: sqrt(x*y); else: (x+y)/2 }";

    fn x() -> Expr {
        Expr::Var { var: Var::X }
    }

    fn y() -> Expr {
        Expr::Var { var: Var::Y }
    }

    fn num(value: f64) -> Expr {
        Expr::Num { value }
    }

    #[test]
    fn example_1_has_two_cases_and_else() {
        let MapAst::Piecewise { cases, otherwise } = parse(EXAMPLE_1).unwrap() else {
            panic!("expected piecewise");
        };
        assert_eq!(cases.len(), 2);
        assert_eq!(
            cases[0].guard,
            Cond::In {
                var: Var::Y,
                lo: num(0.0),
                lo_closed: true,
                hi: Expr::binary(BinOp::Div, num(1.0), num(2.0)),
                hi_closed: false,
            }
        );
        assert!(matches!(cases[1].guard, Cond::And { .. }));
        assert_eq!(
            otherwise,
            Expr::binary(BinOp::Div, Expr::binary(BinOp::Add, x(), y()), num(2.0))
        );
    }

    #[test]
    fn misplaced_operator_is_reported_at_its_span() {
        let e = parse("x + * y").unwrap_err();
        assert_eq!(e.span, Span::new(4, 5));
        assert!(e.expected.contains(&"(".to_string()));
        assert_eq!(e.snippet, "x + * y");
        assert_eq!((e.line, e.column), (1, 5));
    }

    #[test]
    fn else_only_piecewise_is_a_plain_mean() {
        let ast = parse("piecewise {else: (x+y)/2}").unwrap();
        assert_eq!(
            ast,
            MapAst::Piecewise {
                cases: vec![],
                otherwise: Expr::binary(BinOp::Div, Expr::binary(BinOp::Add, x(), y()), num(2.0)),
            }
        );
    }

    #[test]
    fn precedence_and_associativity() {
        // -x^2 is -(x^2); ^ is right associative; 2^-x is allowed
        assert_eq!(
            parse("-x^2").unwrap(),
            MapAst::Expr {
                body: Expr::Neg {
                    arg: Box::new(Expr::binary(BinOp::Pow, x(), num(2.0)))
                }
            }
        );
        assert_eq!(
            parse("x^y^2").unwrap(),
            MapAst::Expr {
                body: Expr::binary(BinOp::Pow, x(), Expr::binary(BinOp::Pow, y(), num(2.0)))
            }
        );
        assert!(parse("2^-x").is_ok());
        assert_eq!(
            parse("x - y - 1").unwrap(),
            MapAst::Expr {
                body: Expr::binary(BinOp::Sub, Expr::binary(BinOp::Sub, x(), y()), num(1.0))
            }
        );
    }

    #[test]
    fn conditions_group_and_fall_back_to_arithmetic() {
        let src = "piecewise { if (x < 1 or y < 1) and (x + y) / 2 >= 0: x; else: y }";
        let MapAst::Piecewise { cases, .. } = parse(src).unwrap() else {
            panic!()
        };
        let Cond::And { left, right } = &cases[0].guard else {
            panic!("and binds the group and the comparison")
        };
        assert!(matches!(**left, Cond::Or { .. }));
        assert!(matches!(**right, Cond::Cmp { op: CmpOp::Ge, .. }));
        // and binds tighter than or
        let MapAst::Piecewise { cases, .. } =
            parse("piecewise { if x < 1 or y < 1 and x = y: x; else: y }").unwrap()
        else {
            panic!()
        };
        assert!(matches!(cases[0].guard, Cond::Or { .. }));
    }

    #[test]
    fn european_half_open_brackets() {
        let a = parse("piecewise { if y in [0, 1/2[: x; else: y }").unwrap();
        let b = parse("piecewise { if y in [0, 1/2): x; else: y }").unwrap();
        assert_eq!(a, b);
        let c = parse("piecewise { if y in ]0, 1/2]: x; else: y }").unwrap();
        let d = parse("piecewise { if y in (0, 1/2]: x; else: y }").unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn rejects_bad_inputs() {
        for src in [
            "",
            "z + x",
            "sqrt(x, y)",
            "min(x)",
            "piecewise { if x: y; else: x }",
            "piecewise { if x < y: x else: y }",
            "piecewise { if x < y: x; }",
            "x y",
            "1e999",
            "(x",
            "x in [0, 1]",
        ] {
            assert!(parse(src).is_err(), "{src:?} should not parse");
        }
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let deep = "(".repeat(10_000) + "x" + &")".repeat(10_000);
        assert!(parse(&deep).unwrap_err().message.contains("nesting"));
        let negs = "-".repeat(10_000) + "x";
        assert!(parse(&negs).is_err());
        let ok = "(".repeat(50) + "x" + &")".repeat(50);
        assert!(parse(&ok).is_ok());
    }

    #[test]
    fn pretty_print_round_trips() {
        for src in [
            EXAMPLE_1,
            "piecewise { if x in [1/2, 1] and y in [1/2, 1]: y; else: min(x, y) }",
            "-(x + y) ^ 2 - -x ^ -y ^ 2",
            "(x ^ y) ^ 2 / (x * (y / 3))",
            "piecewise { if (x < 1 or y > 2) and sqrt(x) < 1: x; else: y }",
            "piecewise { if x < 1 or (y > 2 and x == y): abs(x - y); else: exp(log(x)) }",
        ] {
            let Ok(ast) = parse(src) else { continue };
            let printed = ast.to_string();
            assert_eq!(parse(&printed).unwrap(), ast, "{src} -> {printed}");
        }
    }
}
