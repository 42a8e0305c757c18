//! A small language for binary maps `F(x, y)`.
//!
//! ```text
//! map   := "piecewise" "{" case* "else" ":" expr "}" | expr
//! case  := "if" cond ":" expr ";"
//! cond  := conj ("or" conj)*
//! conj  := atom ("and" atom)*
//! atom  := expr cmp expr | var "in" ivl | "(" cond ")"
//! ivl   := ("[" | "(" | "]") expr "," expr ("]" | ")" | "[")
//! cmp   := "<" | "<=" | ">" | ">=" | "==" | "="
//! ```
//!
//! Expressions use `+ - * / ^`, unary minus, the variables `x` and `y`,
//! and the functions `sqrt exp log abs` (one argument) and `min max` (two).
//! `^` binds tightest and is right associative, so `-x^2` is `-(x^2)` and
//! `2^-x` is allowed. Guards are tested top to bottom with exact
//! floating-point comparison.
//!
//! ```
//! use bisym_core::dsl::compile_source;
//! use bisym_core::Interval;
//!
//! let f = compile_source("piecewise { if x < y: x; else: y }", Interval::UNIT).unwrap();
//! assert_eq!(f.eval(0.25, 0.75).unwrap(), 0.25);
//! ```

mod ast;
mod compile;
mod lexer;
mod parser;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use ast::{BinOp, Case, CmpOp, Cond, Expr, Func, MapAst, Var};
pub use compile::{compile, compile_source};
pub use lexer::{tokenize, Token, TokenKind, KEYWORDS};
pub use parser::{parse, MAX_NESTING};

/// Byte range `start..end` in the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DslErrorKind {
    Lexical,
    Syntax,
}

/// A lexical or syntax error with enough context to point at the problem.
#[derive(Debug, Clone, PartialEq, Error, Serialize)]
pub struct DslError {
    pub kind: DslErrorKind,
    pub message: String,
    pub span: Span,
    /// Token descriptions that would have been accepted; empty for lexical
    /// errors.
    pub expected: Vec<String>,
    /// 1-based line and column of `span.start`.
    pub line: usize,
    pub column: usize,
    /// The offending source line.
    pub snippet: String,
}

impl DslError {
    pub(crate) fn lexical(source: &str, span: Span, message: impl Into<String>) -> Self {
        Self::build(
            source,
            DslErrorKind::Lexical,
            span,
            message.into(),
            Vec::new(),
        )
    }

    pub(crate) fn syntax(
        source: &str,
        span: Span,
        message: impl Into<String>,
        expected: Vec<String>,
    ) -> Self {
        Self::build(source, DslErrorKind::Syntax, span, message.into(), expected)
    }

    fn build(
        source: &str,
        kind: DslErrorKind,
        span: Span,
        message: String,
        expected: Vec<String>,
    ) -> Self {
        let start = span.start.min(source.len());
        let line_start = source[..start].rfind('\n').map_or(0, |p| p + 1);
        let line_end = source[start..]
            .find('\n')
            .map_or(source.len(), |p| start + p);
        let line = source[..start].matches('\n').count() + 1;
        let column = source[line_start..start].chars().count() + 1;
        DslError {
            kind,
            message,
            span,
            expected,
            line,
            column,
            snippet: source[line_start..line_end].to_string(),
        }
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            DslErrorKind::Lexical => "lexical",
            DslErrorKind::Syntax => "syntax",
        };
        write!(
            f,
            "{kind} error at {}:{} (bytes {}..{}): {}",
            self.line, self.column, self.span.start, self.span.end, self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, "; expected one of: {}", self.expected.join(", "))?;
        }
        let width = self
            .snippet
            .chars()
            .count()
            .min(self.column.saturating_sub(1));
        write!(f, "\n  {}\n  {}^", self.snippet, " ".repeat(width))
    }
}
