//! Expression trees with source positions and a canonical printer.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// An expression node. Equality compares structure only, so a tree survives
/// printing and re-parsing even though the positions move.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Number(f64),
    Ident(String),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
    Let { name: String, value: Box<Expr>, body: Box<Expr> },
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind, line: u32, col: u32) -> Self {
        Expr { kind, line, col }
    }

    /// Walks the tree, visiting every node (parents before children).
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Expr)) {
        visit(self);
        match &self.kind {
            ExprKind::Number(_) | ExprKind::Ident(_) => {}
            ExprKind::Unary(_, e) => e.walk(visit),
            ExprKind::Binary(_, l, r) => {
                l.walk(visit);
                r.walk(visit);
            }
            ExprKind::Call(_, args) => {
                for a in args {
                    a.walk(visit);
                }
            }
            ExprKind::Let { value, body, .. } => {
                value.walk(visit);
                body.walk(visit);
            }
        }
    }
}

/// Binding strength used by the printer; larger binds tighter.
fn prec(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Let { .. } => 0,
        ExprKind::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => 1,
        ExprKind::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => 2,
        ExprKind::Unary(..) => 3,
        ExprKind::Binary(BinaryOp::Pow, ..) => 4,
        ExprKind::Number(_) | ExprKind::Ident(_) | ExprKind::Call(..) => 5,
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Canonical form: additive operators are spaced, multiplicative and power
/// operators are not, and parentheses appear exactly where needed to
/// reconstruct this tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Number(v) => write!(f, "{v}"),
            ExprKind::Ident(s) => write!(f, "{s}"),
            ExprKind::Unary(UnaryOp::Neg, e) => {
                write!(f, "-")?;
                write_child(f, e, prec(e) < 4)
            }
            ExprKind::Binary(op, l, r) => {
                let (sym, level) = match op {
                    BinaryOp::Add => (" + ", 1),
                    BinaryOp::Sub => (" - ", 1),
                    BinaryOp::Mul => ("*", 2),
                    BinaryOp::Div => ("/", 2),
                    BinaryOp::Pow => ("^", 4),
                };
                if *op == BinaryOp::Pow {
                    write_child(f, l, prec(l) < 5)?;
                    write!(f, "{sym}")?;
                    // The exponent slot accepts unary minus and nested powers
                    // without parentheses (right-associative).
                    write_child(f, r, prec(r) < 3)
                } else {
                    write_child(f, l, prec(l) < level)?;
                    write!(f, "{sym}")?;
                    // Same-level right children keep their parentheses so the
                    // tree shape is preserved, not just the value.
                    write_child(f, r, prec(r) <= level)
                }
            }
            ExprKind::Call(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            ExprKind::Let { name, value, body } => {
                write!(f, "let {name} = {value} in {body}")
            }
        }
    }
}
