//! A small expression language for defining Finsler functions and
//! connection-coefficient profiles in plain text files.
//!
//! The language has numbers, identifiers, `+ - * / ^` with conventional
//! precedence (`^` is right-associative and binds tighter than unary minus),
//! function calls (`exp`, `ln`, `sqrt`, `sin`, `cos`, `abs`, `pow`), and
//! local bindings `let name = expr in expr`. Comments run from `#` to the end
//! of the line.
//!
//! Coordinates are `t, r, theta, phi` with velocities `dt, dr, dtheta,
//! dphi`. The builtin symbol `w` denotes the angular speed,
//! `w^2 = dtheta^2 + sin(theta)^2*dphi^2`, and may only appear raised to a
//! positive even integer power so that every expression stays smooth.
//!
//! Exponents must be parameter-constant expressions: they may use numbers
//! and declared parameters but not coordinates. Integer exponents work for
//! any base sign; fractional ones require a positive base at evaluation
//! time, which is what the `domain:` declaration of a spec file guarantees.

mod ast;
mod eval;
mod parser;
mod spec;
mod token;

pub use ast::{BinaryOp, Expr, ExprKind, UnaryOp};
pub use eval::{eval_jet, eval_scalar, fold_constant, JetEnv, ScalarEnv};
pub use parser::parse_expr;
pub use spec::{FinslerSpec, KProfile};

use crate::jet::JetError;
use thiserror::Error;

/// Coordinate names in seed order; velocities follow positions.
pub const COORD_NAMES: [&str; 8] = ["t", "r", "theta", "phi", "dt", "dr", "dtheta", "dphi"];

/// Builtin function names (reserved; parameters may not reuse them).
pub const FUNCTIONS: [&str; 7] = ["exp", "ln", "sqrt", "sin", "cos", "abs", "pow"];

/// Index of a coordinate or velocity name in seed order.
pub fn coord_index(name: &str) -> Option<usize> {
    COORD_NAMES.iter().position(|c| *c == name)
}

/// Errors from parsing, validating, or evaluating expressions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslError {
    /// A source-location-tagged problem in the input text.
    #[error("{line}:{col}: {message}")]
    Diagnostic { line: u32, col: u32, message: String },
    /// An arithmetic failure while evaluating a well-formed expression.
    #[error(transparent)]
    Jet(#[from] JetError),
}

pub(crate) fn diag(line: u32, col: u32, message: impl Into<String>) -> DslError {
    DslError::Diagnostic { line, col, message: message.into() }
}
