//! A small expression language over opinions.
//!
//! ```text
//! program  := { "let" IDENT "=" expr ";" } expr
//! expr     := term { ("+" | "-") term }
//! term     := factor { ("|" | "%") factor }
//! factor   := unary { ("*" | "/") unary }
//! unary    := "!" unary | atom
//! atom     := "(" n "," n "," n "," n ")" | "beta" "(" n "," n "," n ")"
//!           | "pv" "(" n "," n "," n ")" | IDENT | call | "(" expr ")"
//! call     := ("deduce" | "abduce") "(" expr { "," expr } [ "," n ] ")"
//! ```
//!
//! `+` union, `-` difference, `*` AND, `/` UN-AND, `|` OR, `%` UN-OR,
//! `!` NOT. All binary operators are left-associative.

pub mod ast;
pub mod eval;
pub mod format;
pub mod lexer;
pub mod parser;

use std::fmt;

pub use ast::{BinOp, Binding, Expr, ExprKind, Func, Program, Span, UnOp};
pub use eval::{evaluate, evaluate_program, evaluate_with_diagnostics, Env, EvalError, Evaluation};
pub use format::{format_expr, format_program};
pub use lexer::{tokenize, LexError, Pos, Token, TokenKind};
pub use parser::{parse, parse_expr, ParseError};

/// Lexing or parsing failure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SyntaxError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl SyntaxError {
    pub fn span(&self) -> Span {
        match self {
            SyntaxError::Lex(e) => Span {
                start: e.pos,
                end: Pos {
                    line: e.pos.line,
                    column: e.pos.column + 1,
                },
            },
            SyntaxError::Parse(e) => e.span,
        }
    }
}

pub fn parse_str(src: &str) -> Result<Program, SyntaxError> {
    Ok(parse(&tokenize(src)?)?)
}

/// Source excerpt with a caret line under `span`.
pub struct Snippet<'a> {
    pub src: &'a str,
    pub span: Span,
}

impl fmt::Display for Snippet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(line) = self.src.lines().nth(self.span.start.line.saturating_sub(1)) else {
            return Ok(());
        };
        let start = self.span.start.column.max(1);
        let width = line.chars().count() + 1;
        let end = if self.span.end.line == self.span.start.line {
            self.span.end.column.max(start + 1)
        } else {
            width.max(start + 1)
        };
        let gutter = self.span.start.line.to_string();
        writeln!(f, "{gutter} | {line}")?;
        write!(
            f,
            "{} | {}{}",
            " ".repeat(gutter.len()),
            " ".repeat(start - 1),
            "^".repeat(end - start)
        )
    }
}
