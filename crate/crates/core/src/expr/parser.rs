use thiserror::Error;

use super::ast::{BinOp, Binding, Expr, ExprKind, Func, Program, Span, UnOp, RESERVED};
use super::lexer::{Pos, Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{message} at {pos}")]
pub struct ParseError {
    pub message: String,
    pub expected: Vec<&'static str>,
    pub found: String,
    pub pos: Pos,
    pub span: Span,
}

struct Parser<'a> {
    tokens: &'a [Token],
    i: usize,
}

type PResult<T> = Result<T, ParseError>;

/// Parses a full program: `let` bindings followed by one expression.
pub fn parse(tokens: &[Token]) -> PResult<Program> {
    let mut p = Parser { tokens, i: 0 };
    let mut bindings = Vec::new();
    while p.peek().kind == TokenKind::Let {
        p.advance();
        let name_tok = p.expect(TokenKind::Ident)?;
        if RESERVED.contains(&name_tok.lexeme.as_str()) {
            return Err(p.error_at(
                &name_tok,
                format!("`{}` is reserved and cannot be bound", name_tok.lexeme),
                vec!["identifier"],
            ));
        }
        p.expect(TokenKind::Equals)?;
        let value = p.expr()?;
        p.expect(TokenKind::Semicolon)?;
        bindings.push(Binding {
            name: name_tok.lexeme,
            value,
        });
    }
    let body = p.expr()?;
    p.expect(TokenKind::End)?;
    Ok(Program { bindings, body })
}

/// Parses a single expression with no bindings.
pub fn parse_expr(tokens: &[Token]) -> PResult<Expr> {
    let mut p = Parser { tokens, i: 0 };
    let e = p.expr()?;
    p.expect(TokenKind::End)?;
    Ok(e)
}

fn token_span(t: &Token) -> Span {
    Span {
        start: t.pos,
        end: t.end(),
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &'a Token {
        &self.tokens[self.i.min(self.tokens.len() - 1)]
    }

    fn peek_at(&self, k: usize) -> &'a Token {
        &self.tokens[(self.i + k).min(self.tokens.len() - 1)]
    }

    fn advance(&mut self) -> &'a Token {
        let t = self.peek();
        if t.kind != TokenKind::End {
            self.i += 1;
        }
        t
    }

    fn error_at(&self, t: &Token, message: String, expected: Vec<&'static str>) -> ParseError {
        let found = if t.kind == TokenKind::End {
            "end of input".to_string()
        } else {
            format!("`{}`", t.lexeme)
        };
        ParseError {
            message,
            expected,
            found,
            pos: t.pos,
            span: token_span(t),
        }
    }

    fn unexpected(&self, expected: Vec<&'static str>) -> ParseError {
        let t = self.peek();
        let found = if t.kind == TokenKind::End {
            "end of input".to_string()
        } else {
            format!("`{}`", t.lexeme)
        };
        let message = format!("expected {}, found {}", expected.join(" or "), found);
        self.error_at(t, message, expected)
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<Token> {
        if self.peek().kind == kind {
            Ok(self.advance().clone())
        } else {
            Err(self.unexpected(vec![kind.describe()]))
        }
    }

    fn number(&mut self) -> PResult<(f64, Span)> {
        let t = self.expect(TokenKind::Number)?;
        let v = t.lexeme.parse::<f64>().map_err(|_| {
            self.error_at(&t, format!("invalid number `{}`", t.lexeme), vec!["number"])
        })?;
        Ok((v, token_span(&t)))
    }

    fn binary_level(
        &mut self,
        ops: &[(TokenKind, BinOp)],
        next: fn(&mut Self) -> PResult<Expr>,
    ) -> PResult<Expr> {
        let mut lhs = next(self)?;
        while let Some(&(_, op)) = ops.iter().find(|(k, _)| *k == self.peek().kind) {
            self.advance();
            let rhs = next(self)?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.binary_level(
            &[(TokenKind::Plus, BinOp::Add), (TokenKind::Minus, BinOp::Sub)],
            Self::term,
        )
    }

    fn term(&mut self) -> PResult<Expr> {
        self.binary_level(
            &[(TokenKind::Bar, BinOp::Comult), (TokenKind::Percent, BinOp::Codiv)],
            Self::factor,
        )
    }

    fn factor(&mut self) -> PResult<Expr> {
        self.binary_level(
            &[(TokenKind::Star, BinOp::Mult), (TokenKind::Slash, BinOp::Div)],
            Self::unary,
        )
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.peek().kind == TokenKind::Bang {
            let bang = token_span(self.advance());
            let operand = self.unary()?;
            let span = bang.to(operand.span);
            return Ok(Expr::new(ExprKind::Unary(UnOp::Not, Box::new(operand)), span));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Expr> {
        let t = self.peek();
        match t.kind {
            TokenKind::LParen if self.peek_at(1).kind == TokenKind::Number => {
                let (values, span) = self.number_tuple::<4>("opinion literal")?;
                Ok(Expr::new(ExprKind::OpinionLit(values), span))
            }
            TokenKind::LParen => {
                let open = token_span(self.advance());
                let inner = self.expr()?;
                let close = self.expect(TokenKind::RParen)?;
                // the group's span covers the parentheses
                Ok(Expr::new(inner.kind, open.to(token_span(&close))))
            }
            TokenKind::Ident => match t.lexeme.as_str() {
                "beta" | "pv" => {
                    let head = token_span(self.advance());
                    let what = if t.lexeme == "beta" {
                        "beta literal"
                    } else {
                        "pv literal"
                    };
                    let (values, span) = self.number_tuple::<3>(what)?;
                    let kind = if t.lexeme == "beta" {
                        ExprKind::BetaLit(values)
                    } else {
                        ExprKind::PvLit(values)
                    };
                    Ok(Expr::new(kind, head.to(span)))
                }
                "deduce" => self.call(Func::Deduce),
                "abduce" => self.call(Func::Abduce),
                _ => {
                    self.advance();
                    Ok(Expr::new(ExprKind::Var(t.lexeme.clone()), token_span(t)))
                }
            },
            _ => Err(self.unexpected(vec!["`!`", "`(`", "identifier", "`beta`", "`pv`"])),
        }
    }

    /// `( n , n , ... )` with exactly `N` numbers.
    fn number_tuple<const N: usize>(&mut self, what: &str) -> PResult<([f64; N], Span)> {
        let open = token_span(&self.expect(TokenKind::LParen)?);
        let mut values = [0.0; N];
        for (k, slot) in values.iter_mut().enumerate() {
            if k > 0 {
                if self.peek().kind != TokenKind::Comma {
                    let mut err = self.unexpected(vec![TokenKind::Comma.describe()]);
                    err.message = format!("{what} needs {N} components, found {k}");
                    return Err(err);
                }
                self.advance();
            }
            *slot = self.number()?.0;
        }
        if self.peek().kind != TokenKind::RParen {
            let mut err = self.unexpected(vec![TokenKind::RParen.describe()]);
            if self.peek().kind == TokenKind::Comma {
                err.message = format!("{what} needs {N} components, found more");
            }
            return Err(err);
        }
        let close = token_span(self.advance());
        Ok((values, open.to(close)))
    }

    fn call(&mut self, func: Func) -> PResult<Expr> {
        let head_tok = self.advance();
        let head = token_span(head_tok);
        self.expect(TokenKind::LParen)?;
        let (n_args, wants_scalar) = func.arity();
        let mut args = Vec::new();
        let mut scalar = None;
        loop {
            if !args.is_empty() || scalar.is_some() {
                if self.peek().kind == TokenKind::RParen {
                    break;
                }
                self.expect(TokenKind::Comma)?;
            }
            if self.peek().kind == TokenKind::Number {
                let (v, span) = self.number()?;
                if !wants_scalar || args.len() != n_args || scalar.is_some() {
                    return Err(ParseError {
                        message: format!(
                            "{} takes {} opinion arguments{}",
                            func.name(),
                            n_args,
                            if wants_scalar { " then a scalar" } else { "" }
                        ),
                        expected: vec!["expression"],
                        found: format!("`{v}`"),
                        pos: span.start,
                        span,
                    });
                }
                scalar = Some(v);
                continue;
            }
            if scalar.is_some() {
                return Err(self.unexpected(vec![TokenKind::RParen.describe()]));
            }
            args.push(self.expr()?);
        }
        let close = self.expect(TokenKind::RParen)?;
        let span = head.to(token_span(&close));
        if args.len() != n_args || scalar.is_some() != wants_scalar {
            let message = if wants_scalar {
                format!("{} takes {} opinion arguments then a scalar", func.name(), n_args)
            } else {
                format!("{} takes {} opinion arguments", func.name(), n_args)
            };
            return Err(ParseError {
                message,
                expected: vec![],
                found: format!("{} arguments", args.len() + scalar.is_some() as usize),
                pos: head.start,
                span,
            });
        }
        Ok(Expr::new(ExprKind::Call { func, args, scalar }, span))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::lexer::tokenize;

    fn p(s: &str) -> Expr {
        parse_expr(&tokenize(s).unwrap()).unwrap()
    }

    fn perr(s: &str) -> ParseError {
        parse_expr(&tokenize(s).unwrap()).unwrap_err()
    }

    #[test]
    fn precedence() {
        let want = Expr::binary(
            BinOp::Comult,
            Expr::binary(BinOp::Mult, Expr::var("a"), Expr::var("b")),
            Expr::var("c"),
        );
        assert_eq!(p("a*b|c"), want);
        let want = Expr::binary(BinOp::Mult, Expr::negation(Expr::var("a")), Expr::var("b"));
        assert_eq!(p("!a*b"), want);
        let want = Expr::binary(
            BinOp::Add,
            Expr::var("a"),
            Expr::binary(BinOp::Codiv, Expr::var("b"), Expr::var("c")),
        );
        assert_eq!(p("a+b%c"), want);
    }

    #[test]
    fn left_associative() {
        let want = Expr::binary(
            BinOp::Sub,
            Expr::binary(BinOp::Sub, Expr::var("a"), Expr::var("b")),
            Expr::var("c"),
        );
        assert_eq!(p("a-b-c"), want);
        let want = Expr::binary(
            BinOp::Div,
            Expr::binary(BinOp::Div, Expr::var("a"), Expr::var("b")),
            Expr::var("c"),
        );
        assert_eq!(p("a/b/c"), want);
    }

    #[test]
    fn literals_and_groups() {
        assert_eq!(p("(0.7,0.1,0.2,0.5)"), Expr::opinion(0.7, 0.1, 0.2, 0.5));
        assert_eq!(p("beta(7,1,0.5)").kind, ExprKind::BetaLit([7.0, 1.0, 0.5]));
        assert_eq!(p("pv(0.8,0.2,0.5)").kind, ExprKind::PvLit([0.8, 0.2, 0.5]));
        let want = Expr::binary(
            BinOp::Mult,
            Expr::var("a"),
            Expr::binary(BinOp::Add, Expr::var("b"), Expr::var("c")),
        );
        assert_eq!(p("a * (b + c)"), want);
        assert_eq!(p("((a))"), Expr::var("a"));
    }

    #[test]
    fn short_opinion_literal() {
        let err = perr("(0.7,0.1,0.2)");
        assert!(err.message.contains("needs 4 components"), "{}", err.message);
        assert_eq!(err.pos, Pos { line: 1, column: 13 });
        assert!(perr("(0.7,0.1,0.2,0.5,0.1)").message.contains("found more"));
    }

    #[test]
    fn calls() {
        let e = p("deduce(x, (0.9,0.1,0,0.5), y)");
        match e.kind {
            ExprKind::Call { func, args, scalar } => {
                assert_eq!(func, Func::Deduce);
                assert_eq!(args.len(), 3);
                assert_eq!(scalar, None);
            }
            other => panic!("unexpected {other:?}"),
        }
        let e = p("abduce(x, p, n, 0.3)");
        assert!(matches!(e.kind, ExprKind::Call { scalar: Some(s), .. } if s == 0.3));
        assert!(perr("deduce(x, p)").message.contains("takes 3"));
        assert!(perr("abduce(x, p, n)").message.contains("then a scalar"));
        assert!(perr("deduce(x, p, n, 0.3)").message.contains("takes 3"));
        assert!(perr("abduce(x, 0.3, p, n)").message.contains("then a scalar"));
    }

    #[test]
    fn spans() {
        let e = p("a * (b + c)");
        assert_eq!(e.span.start, Pos { line: 1, column: 1 });
        assert_eq!(e.span.end, Pos { line: 1, column: 12 });
        match e.kind {
            ExprKind::Binary(_, _, rhs) => {
                assert_eq!(rhs.span.start, Pos { line: 1, column: 5 });
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn programs() {
        let toks = tokenize("let x = (0.7,0.1,0.2,0.5); let y = !x; x*y").unwrap();
        let prog = parse(&toks).unwrap();
        assert_eq!(prog.bindings.len(), 2);
        assert_eq!(prog.bindings[1].name, "y");
        assert!(parse(&tokenize("let beta = a; beta").unwrap()).is_err());
        assert!(parse(&tokenize("let x = a x").unwrap()).is_err());
    }

    #[test]
    fn error_reports_expected_set() {
        let err = perr("a +");
        assert_eq!(err.found, "end of input");
        assert!(err.expected.contains(&"identifier"));
        let err = perr("a b");
        assert_eq!(err.expected, vec!["end of input"]);
        assert_eq!(err.pos, Pos { line: 1, column: 3 });
    }
}
