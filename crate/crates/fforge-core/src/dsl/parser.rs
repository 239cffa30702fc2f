//! Recursive-descent parser.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! expr   := 'let' IDENT '=' expr 'in' expr | sum
//! sum    := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?                  (right-associative)
//! atom   := NUMBER | IDENT | IDENT '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` means `-(x^2)` while `x^-2`
//! parses with the minus inside the exponent.

use super::ast::{BinaryOp, Expr, ExprKind, UnaryOp};
use super::token::{tokenize, Tok, Token};
use super::{diag, DslError};

/// Parses a complete expression; trailing input is an error.
pub fn parse_expr(src: &str) -> Result<Expr, DslError> {
    parse_expr_at(src, 1, 1)
}

/// Parses with an explicit start position for fragments of larger files.
pub(crate) fn parse_expr_at(src: &str, line: u32, col: u32) -> Result<Expr, DslError> {
    let tokens = tokenize(src, line, col)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    match &p.peek().tok {
        Tok::Eof => Ok(e),
        t => Err(p.err_here(format!("unexpected `{}` after expression", show(t)))),
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, want: &Tok, what: &str) -> Result<Token, DslError> {
        if &self.peek().tok == want {
            Ok(self.bump())
        } else {
            Err(self.err_here(format!("expected {what}, found `{}`", show(&self.peek().tok))))
        }
    }

    fn err_here(&self, message: String) -> DslError {
        let t = self.peek();
        diag(t.line, t.col, message)
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        if matches!(self.peek().tok, Tok::Let) {
            let at = self.bump();
            let name = match self.bump() {
                Token { tok: Tok::Ident(s), .. } => s,
                t => return Err(diag(t.line, t.col, "expected a name after `let`")),
            };
            self.eat(&Tok::Equals, "`=`")?;
            let value = self.expr()?;
            self.eat(&Tok::In, "`in`")?;
            let body = self.expr()?;
            return Ok(Expr::new(
                ExprKind::Let { name, value: Box::new(value), body: Box::new(body) },
                at.line,
                at.col,
            ));
        }
        self.sum()
    }

    fn sum(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            let at = self.bump();
            let rhs = self.term()?;
            lhs = Expr::new(
                ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                at.line,
                at.col,
            );
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            let at = self.bump();
            let rhs = self.unary()?;
            lhs = Expr::new(
                ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                at.line,
                at.col,
            );
        }
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if matches!(self.peek().tok, Tok::Minus) {
            let at = self.bump();
            let inner = self.unary()?;
            return Ok(Expr::new(
                ExprKind::Unary(UnaryOp::Neg, Box::new(inner)),
                at.line,
                at.col,
            ));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, DslError> {
        let base = self.atom()?;
        if matches!(self.peek().tok, Tok::Caret) {
            let at = self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::new(
                ExprKind::Binary(BinaryOp::Pow, Box::new(base), Box::new(exponent)),
                at.line,
                at.col,
            ));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let t = self.bump();
        match t.tok {
            Tok::Num(v) => Ok(Expr::new(ExprKind::Number(v), t.line, t.col)),
            Tok::Ident(name) => {
                if matches!(self.peek().tok, Tok::LParen) {
                    self.bump();
                    let mut args = vec![self.expr()?];
                    while matches!(self.peek().tok, Tok::Comma) {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    self.eat(&Tok::RParen, "`)`")?;
                    Ok(Expr::new(ExprKind::Call(name, args), t.line, t.col))
                } else {
                    Ok(Expr::new(ExprKind::Ident(name), t.line, t.col))
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.eat(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            tok => Err(diag(t.line, t.col, format!("expected an expression, found `{}`", show(&tok)))),
        }
    }
}

fn show(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("{v}"),
        Tok::Ident(s) => s.clone(),
        Tok::Let => "let".into(),
        Tok::In => "in".into(),
        Tok::Plus => "+".into(),
        Tok::Minus => "-".into(),
        Tok::Star => "*".into(),
        Tok::Slash => "/".into(),
        Tok::Caret => "^".into(),
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
        Tok::Comma => ",".into(),
        Tok::Equals => "=".into(),
        Tok::Eof => "end of input".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(src: &str) -> Expr {
        parse_expr(src).unwrap()
    }

    #[test]
    fn precedence_nests_as_documented() {
        assert_eq!(p("1 + 2*3"), p("1 + (2*3)"));
        assert_eq!(p("2*3^2"), p("2*(3^2)"));
        assert_eq!(p("-x^2"), p("-(x^2)"));
        assert_eq!(p("2^3^2"), p("2^(3^2)"));
        assert_ne!(p("2^3^2"), p("(2^3)^2"));
        assert_eq!(p("1 - 2 - 3"), p("(1 - 2) - 3"));
    }

    #[test]
    fn exponent_accepts_unary_minus() {
        assert_eq!(p("x^-2"), p("x^(-2)"));
    }

    #[test]
    fn let_extends_to_the_right() {
        let e = p("let u = dt in u*u + 1");
        match e.kind {
            ExprKind::Let { body, .. } => {
                assert_eq!(*body, p("u*u + 1"));
            }
            _ => panic!("expected let"),
        }
    }

    #[test]
    fn call_arguments_are_comma_separated() {
        let e = p("pow(r, 2)");
        match e.kind {
            ExprKind::Call(name, args) => {
                assert_eq!(name, "pow");
                assert_eq!(args.len(), 2);
            }
            _ => panic!("expected call"),
        }
    }

    #[test]
    fn diagnostics_carry_positions() {
        let err = parse_expr("1 + ").unwrap_err();
        assert_eq!(err.to_string(), "1:5: expected an expression, found `end of input`");
        let err = parse_expr("(1ok").unwrap_err();
        assert_eq!(err.to_string(), "1:3: expected `)`, found `ok`");
        let err = parse_expr("1 2").unwrap_err();
        assert_eq!(err.to_string(), "1:3: unexpected `2` after expression");
    }

    #[test]
    fn printer_round_trips_structure() {
        for src in [
            "dt^2 - dr^2 - r^2*w^2",
            "(1 - rs/r)*dt^2 - dr^2/(1 - rs/r)",
            "let u = dt - a*dr in u^2*exp(mu*(c*dr^2 - w^2)/u^2)",
            "-x^2 + x^-2",
            "1 - (2 - 3)",
            "a/(b*c)",
            "pow(abs(u), 0.5)",
        ] {
            let once = p(src);
            let printed = once.to_string();
            let twice = p(&printed);
            assert_eq!(once, twice, "round-trip failed for `{src}` -> `{printed}`");
            assert_eq!(printed, twice.to_string());
        }
    }
}
