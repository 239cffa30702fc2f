//! Expression evaluation: exact jet semantics and a deliberately separate
//! plain-`f64` path.
//!
//! The scalar path shares no arithmetic with the jet path — it is the
//! independent reference that finite-difference checks are built on.

use std::collections::BTreeMap;

use super::ast::{BinaryOp, Expr, ExprKind, UnaryOp};
use super::{coord_index, diag, DslError};
use crate::jet::{Jet, JetConfig};

/// Evaluation context for jet semantics.
#[derive(Debug, Clone)]
pub struct JetEnv<'a> {
    pub position: [f64; 4],
    pub velocity: [f64; 4],
    pub config: JetConfig,
    pub params: &'a BTreeMap<String, f64>,
}

/// Evaluation context for scalar semantics.
#[derive(Debug, Clone)]
pub struct ScalarEnv<'a> {
    pub position: [f64; 4],
    pub velocity: [f64; 4],
    pub params: &'a BTreeMap<String, f64>,
}

impl JetEnv<'_> {
    fn seed(&self, var: usize) -> Jet {
        let value = if var < 4 { self.position[var] } else { self.velocity[var - 4] };
        Jet::variable(var, value, self.config)
    }
}

/// Folds an expression that uses only numbers, parameters, and builtin
/// functions down to a value. Returns `None` if it touches a coordinate,
/// `w`, or a `let` binding — i.e. if it is not parameter-constant.
pub fn fold_constant(e: &Expr, params: &BTreeMap<String, f64>) -> Option<f64> {
    match &e.kind {
        ExprKind::Number(v) => Some(*v),
        ExprKind::Ident(name) => {
            if coord_index(name).is_some() || name == "w" {
                None
            } else {
                params.get(name).copied()
            }
        }
        ExprKind::Unary(UnaryOp::Neg, inner) => Some(-fold_constant(inner, params)?),
        ExprKind::Binary(op, l, r) => {
            let a = fold_constant(l, params)?;
            let b = fold_constant(r, params)?;
            Some(match op {
                BinaryOp::Add => a + b,
                BinaryOp::Sub => a - b,
                BinaryOp::Mul => a * b,
                BinaryOp::Div => a / b,
                BinaryOp::Pow => a.powf(b),
            })
        }
        ExprKind::Call(name, args) => {
            let vals: Vec<f64> =
                args.iter().map(|a| fold_constant(a, params)).collect::<Option<_>>()?;
            match (name.as_str(), vals.as_slice()) {
                ("exp", [x]) => Some(x.exp()),
                ("ln", [x]) => Some(x.ln()),
                ("sqrt", [x]) => Some(x.sqrt()),
                ("sin", [x]) => Some(x.sin()),
                ("cos", [x]) => Some(x.cos()),
                ("abs", [x]) => Some(x.abs()),
                ("pow", [x, y]) => Some(x.powf(*y)),
                _ => None,
            }
        }
        ExprKind::Let { .. } => None,
    }
}

/// Interprets an exponent value: near-integers dispatch to the exact integer
/// power, everything else to the real power (which needs a positive base).
fn split_exponent(x: f64) -> Option<i32> {
    let r = x.round();
    if (x - r).abs() < 1e-12 && r.abs() <= 1e6 {
        Some(r as i32)
    } else {
        None
    }
}

/// Evaluates to a jet around the seeded point.
pub fn eval_jet(e: &Expr, env: &JetEnv<'_>) -> Result<Jet, DslError> {
    let mut lets = Vec::new();
    eval_jet_inner(e, env, &mut lets)
}

fn eval_jet_inner(
    e: &Expr,
    env: &JetEnv<'_>,
    lets: &mut Vec<(String, Jet)>,
) -> Result<Jet, DslError> {
    match &e.kind {
        ExprKind::Number(v) => Ok(Jet::constant(*v)),
        ExprKind::Ident(name) => {
            if let Some((_, j)) = lets.iter().rev().find(|(n, _)| n == name) {
                return Ok(j.clone());
            }
            if let Some(var) = coord_index(name) {
                return Ok(env.seed(var));
            }
            if let Some(v) = env.params.get(name) {
                return Ok(Jet::constant(*v));
            }
            if name == "w" {
                return Err(diag(
                    e.line,
                    e.col,
                    "`w` may only appear raised to a positive even integer power",
                ));
            }
            Err(diag(e.line, e.col, format!("unknown identifier `{name}`")))
        }
        ExprKind::Unary(UnaryOp::Neg, inner) => Ok(eval_jet_inner(inner, env, lets)?.neg()),
        ExprKind::Binary(op, l, r) => match op {
            BinaryOp::Add => {
                Ok(eval_jet_inner(l, env, lets)?.add(&eval_jet_inner(r, env, lets)?))
            }
            BinaryOp::Sub => {
                Ok(eval_jet_inner(l, env, lets)?.sub(&eval_jet_inner(r, env, lets)?))
            }
            BinaryOp::Mul => {
                Ok(eval_jet_inner(l, env, lets)?.mul(&eval_jet_inner(r, env, lets)?))
            }
            BinaryOp::Div => {
                Ok(eval_jet_inner(l, env, lets)?.div(&eval_jet_inner(r, env, lets)?)?)
            }
            BinaryOp::Pow => eval_jet_power(l, r, env, lets),
        },
        ExprKind::Call(name, args) => match (name.as_str(), args.as_slice()) {
            ("exp", [x]) => Ok(eval_jet_inner(x, env, lets)?.exp()?),
            ("ln", [x]) => Ok(eval_jet_inner(x, env, lets)?.ln()?),
            ("sqrt", [x]) => Ok(eval_jet_inner(x, env, lets)?.sqrt()?),
            ("sin", [x]) => Ok(eval_jet_inner(x, env, lets)?.sin()?),
            ("cos", [x]) => Ok(eval_jet_inner(x, env, lets)?.cos()?),
            ("abs", [x]) => Ok(eval_jet_inner(x, env, lets)?.abs()?),
            ("pow", [x, y]) => eval_jet_power(x, y, env, lets),
            _ => Err(call_error(e, name, args.len())),
        },
        ExprKind::Let { name, value, body } => {
            let v = eval_jet_inner(value, env, lets)?;
            lets.push((name.clone(), v));
            let out = eval_jet_inner(body, env, lets);
            lets.pop();
            out
        }
    }
}

fn eval_jet_power(
    base: &Expr,
    exponent: &Expr,
    env: &JetEnv<'_>,
    lets: &mut Vec<(String, Jet)>,
) -> Result<Jet, DslError> {
    let Some(x) = fold_constant(exponent, env.params) else {
        return Err(diag(
            exponent.line,
            exponent.col,
            "exponent is not a parameter-constant expression",
        ));
    };
    if let ExprKind::Ident(name) = &base.kind {
        if name == "w" && lets.iter().all(|(n, _)| n != name) {
            return match split_exponent(x) {
                Some(n) if n > 0 && n % 2 == 0 => {
                    Ok(angular_speed_squared_jet(env).powi(n / 2)?)
                }
                _ => Err(diag(
                    base.line,
                    base.col,
                    "`w` may only appear raised to a positive even integer power",
                )),
            };
        }
    }
    let b = eval_jet_inner(base, env, lets)?;
    match split_exponent(x) {
        Some(n) => Ok(b.powi(n)?),
        None => Ok(b.pow_real(x)?),
    }
}

/// The jet of `w^2 = dtheta^2 + sin(theta)^2*dphi^2`. The polar angle enters
/// as a coordinate jet, so position derivatives of the angular term are
/// carried exactly.
fn angular_speed_squared_jet(env: &JetEnv<'_>) -> Jet {
    let theta = env.seed(2);
    let dtheta = env.seed(6);
    let dphi = env.seed(7);
    let s = theta.sin().expect("sin is total");
    dtheta.mul(&dtheta).add(&s.mul(&s).mul(&dphi.mul(&dphi)))
}

fn call_error(e: &Expr, name: &str, got: usize) -> DslError {
    let known: &[(&str, usize)] = &[
        ("exp", 1),
        ("ln", 1),
        ("sqrt", 1),
        ("sin", 1),
        ("cos", 1),
        ("abs", 1),
        ("pow", 2),
    ];
    match known.iter().find(|(n, _)| *n == name) {
        Some((_, want)) => diag(
            e.line,
            e.col,
            format!("`{name}` takes {want} argument(s), found {got}"),
        ),
        None => diag(e.line, e.col, format!("unknown function `{name}`")),
    }
}

/// Plain floating-point evaluation. Domain violations surface as IEEE NaN or
/// infinity rather than errors; unknown identifiers yield NaN (validated
/// expressions never contain any).
pub fn eval_scalar(e: &Expr, env: &ScalarEnv<'_>) -> f64 {
    let mut lets = Vec::new();
    eval_scalar_inner(e, env, &mut lets)
}

fn eval_scalar_inner(e: &Expr, env: &ScalarEnv<'_>, lets: &mut Vec<(String, f64)>) -> f64 {
    match &e.kind {
        ExprKind::Number(v) => *v,
        ExprKind::Ident(name) => {
            if let Some((_, v)) = lets.iter().rev().find(|(n, _)| n == name) {
                return *v;
            }
            if let Some(var) = coord_index(name) {
                return if var < 4 { env.position[var] } else { env.velocity[var - 4] };
            }
            env.params.get(name).copied().unwrap_or(f64::NAN)
        }
        ExprKind::Unary(UnaryOp::Neg, inner) => -eval_scalar_inner(inner, env, lets),
        ExprKind::Binary(op, l, r) => {
            if *op == BinaryOp::Pow {
                return eval_scalar_power(l, r, env, lets);
            }
            let a = eval_scalar_inner(l, env, lets);
            let b = eval_scalar_inner(r, env, lets);
            match op {
                BinaryOp::Add => a + b,
                BinaryOp::Sub => a - b,
                BinaryOp::Mul => a * b,
                BinaryOp::Div => a / b,
                BinaryOp::Pow => unreachable!(),
            }
        }
        ExprKind::Call(name, args) => match (name.as_str(), args.as_slice()) {
            ("exp", [x]) => eval_scalar_inner(x, env, lets).exp(),
            ("ln", [x]) => eval_scalar_inner(x, env, lets).ln(),
            ("sqrt", [x]) => eval_scalar_inner(x, env, lets).sqrt(),
            ("sin", [x]) => eval_scalar_inner(x, env, lets).sin(),
            ("cos", [x]) => eval_scalar_inner(x, env, lets).cos(),
            ("abs", [x]) => eval_scalar_inner(x, env, lets).abs(),
            ("pow", [x, y]) => eval_scalar_power(x, y, env, lets),
            _ => f64::NAN,
        },
        ExprKind::Let { name, value, body } => {
            let v = eval_scalar_inner(value, env, lets);
            lets.push((name.clone(), v));
            let out = eval_scalar_inner(body, env, lets);
            lets.pop();
            out
        }
    }
}

fn eval_scalar_power(
    base: &Expr,
    exponent: &Expr,
    env: &ScalarEnv<'_>,
    lets: &mut Vec<(String, f64)>,
) -> f64 {
    let Some(x) = fold_constant(exponent, env.params) else {
        return f64::NAN;
    };
    if let ExprKind::Ident(name) = &base.kind {
        if name == "w" && lets.iter().all(|(n, _)| n != name) {
            let s = env.position[2].sin();
            let w2 = env.velocity[2] * env.velocity[2]
                + s * s * env.velocity[3] * env.velocity[3];
            return match split_exponent(x) {
                Some(n) if n > 0 && n % 2 == 0 => w2.powi(n / 2),
                _ => f64::NAN,
            };
        }
    }
    let b = eval_scalar_inner(base, env, lets);
    match split_exponent(x) {
        Some(n) => b.powi(n),
        None => b.powf(x),
    }
}
