//! File formats: Finsler function specs (`.geom`) and connection-coefficient
//! profiles (`.kprof`).
//!
//! A spec file holds one declaration per line:
//!
//! ```text
//! name: schwarzschild
//! param rs = 1.0
//! domain: r - rs
//! L: (1 - rs/r)*dt^2 - dr^2/(1 - rs/r) - r^2*w^2
//! ```
//!
//! `domain:` is an expression that must be strictly positive for a sample
//! point to be admissible; omit it for globally defined functions. Parameter
//! values may be constant expressions over earlier parameters.
//!
//! Long expressions may continue across lines: every immediately following
//! line that starts with whitespace extends the expression, and diagnostics
//! keep pointing at the original file position.
//!
//! A profile file assigns the independent connection coefficients of a
//! spherically symmetric affine connection as functions of `t` and `r`:
//!
//! ```text
//! k9: 1/r
//! k10: -r
//! ```
//!
//! Unassigned coefficients are zero.

use std::collections::BTreeMap;

use super::ast::{Expr, ExprKind};
use super::eval::{eval_jet, eval_scalar, fold_constant, JetEnv, ScalarEnv};
use super::parser::parse_expr_at;
use super::{coord_index, diag, DslError, FUNCTIONS};
use crate::jet::{Jet, JetConfig, MultiIndex};
use crate::so3::ConnectionField;

/// A parsed, validated Finsler function definition.
#[derive(Debug, Clone)]
pub struct FinslerSpec {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub domain: Option<Expr>,
    pub lagrangian: Expr,
}

/// A parsed, validated connection-coefficient profile.
#[derive(Debug, Clone)]
pub struct KProfile {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    /// `entries[i]` defines coefficient `k(i+1)`.
    pub entries: Vec<Option<Expr>>,
}

/// Which identifiers an expression may reference.
#[derive(Clone, Copy, PartialEq)]
enum Scope {
    /// All coordinates, velocities, and `w`.
    Full,
    /// Only `t` and `r`.
    PositionTR,
}

impl FinslerSpec {
    pub fn parse(text: &str) -> Result<Self, DslError> {
        let mut name: Option<String> = None;
        let mut params = BTreeMap::new();
        let mut domain: Option<Expr> = None;
        let mut lagrangian: Option<Expr> = None;
        for raw in gather_fields(text)? {
            let line1 = raw.line;
            match raw.field {
                Field::Name => {
                    check_unset(name.is_none(), "name", line1)?;
                    name = Some(raw.text.trim().to_string());
                }
                Field::Param => {
                    parse_param(&raw.text, line1, raw.col, &mut params)?;
                }
                Field::Domain => {
                    check_unset(domain.is_none(), "domain", line1)?;
                    domain = Some(parse_expr_at(&raw.text, line1, raw.col)?);
                }
                Field::Lagrangian => {
                    check_unset(lagrangian.is_none(), "L", line1)?;
                    lagrangian = Some(parse_expr_at(&raw.text, line1, raw.col)?);
                }
                Field::K(_) => {
                    return Err(diag(line1, 1, "coefficient lines belong in profile files"));
                }
                Field::Unknown => {
                    return Err(diag(
                        line1,
                        1,
                        "expected `name:`, `param`, `domain:`, or `L:`",
                    ));
                }
            }
        }
        let name = name.ok_or_else(|| diag(1, 1, "missing `name:` line"))?;
        let lagrangian = lagrangian.ok_or_else(|| diag(1, 1, "missing `L:` line"))?;
        if let Some(d) = &domain {
            validate_expr(d, &params, Scope::Full)?;
        }
        validate_expr(&lagrangian, &params, Scope::Full)?;
        Ok(FinslerSpec { name, params, domain, lagrangian })
    }

    /// The jet of `L` around the given point and direction.
    pub fn eval_jet(
        &self,
        position: [f64; 4],
        velocity: [f64; 4],
        config: JetConfig,
    ) -> Result<Jet, DslError> {
        let env = JetEnv { position, velocity, config, params: &self.params };
        eval_jet(&self.lagrangian, &env)
    }

    /// Plain scalar value of `L` (independent of the jet machinery).
    pub fn eval_scalar(&self, position: [f64; 4], velocity: [f64; 4]) -> f64 {
        let env = ScalarEnv { position, velocity, params: &self.params };
        eval_scalar(&self.lagrangian, &env)
    }

    /// The domain expression's value, if one was declared.
    pub fn domain_value(&self, position: [f64; 4], velocity: [f64; 4]) -> Option<f64> {
        let env = ScalarEnv { position, velocity, params: &self.params };
        self.domain.as_ref().map(|d| eval_scalar(d, &env))
    }

    /// Whether the point satisfies the declared domain (strictly positive).
    pub fn in_domain(&self, position: [f64; 4], velocity: [f64; 4]) -> bool {
        match self.domain_value(position, velocity) {
            Some(v) => v > 0.0,
            None => true,
        }
    }
}

impl KProfile {
    pub fn parse(text: &str) -> Result<Self, DslError> {
        let mut name = String::new();
        let mut params = BTreeMap::new();
        let mut entries: Vec<Option<Expr>> = vec![None; 12];
        for raw in gather_fields(text)? {
            let line1 = raw.line;
            match raw.field {
                Field::Name => name = raw.text.trim().to_string(),
                Field::Param => parse_param(&raw.text, line1, raw.col, &mut params)?,
                Field::K(i) => {
                    check_unset(entries[i - 1].is_none(), "coefficient", line1)?;
                    entries[i - 1] = Some(parse_expr_at(&raw.text, line1, raw.col)?);
                }
                Field::Domain | Field::Lagrangian => {
                    return Err(diag(line1, 1, "spec lines belong in `.geom` files"));
                }
                Field::Unknown => {
                    return Err(diag(line1, 1, "expected `name:`, `param`, or `k<N>:`"));
                }
            }
        }
        for e in entries.iter().flatten() {
            validate_expr(e, &params, Scope::PositionTR)?;
        }
        Ok(KProfile { name, params, entries })
    }

    /// Coefficient values and their first `t`/`r` derivatives at a point.
    pub fn eval(&self, t: f64, r: f64) -> Result<ConnectionField, DslError> {
        let env = JetEnv {
            position: [t, r, 0.0, 0.0],
            velocity: [0.0; 4],
            config: JetConfig::new(1, 1, 0),
            params: &self.params,
        };
        let mut field = ConnectionField::zero();
        for (i, entry) in self.entries.iter().enumerate() {
            if let Some(e) = entry {
                let jet = eval_jet(e, &env)?;
                field.k[i] = jet.value();
                field.k_t[i] = jet.extract_partial(MultiIndex::unit(0))?;
                field.k_r[i] = jet.extract_partial(MultiIndex::unit(1))?;
            }
        }
        Ok(field)
    }
}

enum Field {
    Name,
    Param,
    Domain,
    Lagrangian,
    K(usize),
    Unknown,
}

/// One logical declaration: its tag, the expression text (continuation
/// lines joined with their original indentation so positions stay exact),
/// and the file position where the expression starts.
struct RawField {
    field: Field,
    text: String,
    line: u32,
    col: u32,
}

fn strip_comment(raw: &str) -> &str {
    match raw.find('#') {
        Some(i) => &raw[..i],
        None => raw,
    }
}

/// Splits declarations out of the file, joining indented continuation
/// lines onto the preceding expression-valued field.
fn gather_fields(text: &str) -> Result<Vec<RawField>, DslError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let raw = lines[i];
        let line1 = i as u32 + 1;
        if strip_comment(raw).trim().is_empty() {
            i += 1;
            continue;
        }
        if raw.starts_with(' ') || raw.starts_with('\t') {
            return Err(diag(
                line1,
                1,
                "indented continuation line has no preceding declaration",
            ));
        }
        let (field, rest, col) = split_line(raw);
        let mut text = rest.to_string();
        let joins = !matches!(field, Field::Name | Field::Unknown);
        let mut j = i + 1;
        while joins && j < lines.len() {
            let next = lines[j];
            if !(next.starts_with(' ') || next.starts_with('\t'))
                || strip_comment(next).trim().is_empty()
            {
                break;
            }
            text.push('\n');
            text.push_str(next);
            j += 1;
        }
        out.push(RawField { field, text, line: line1, col });
        i = j;
    }
    Ok(out)
}

/// Splits a non-blank, non-indented line into its field tag and expression
/// text. The returned column is where the expression starts (1-based).
fn split_line(raw: &str) -> (Field, &str, u32) {
    let line = strip_comment(raw).trim_end();
    let at = |prefix: &str| (prefix.len() + 1) as u32;
    if let Some(rest) = line.strip_prefix("name:") {
        return (Field::Name, rest, at("name:"));
    }
    if let Some(rest) = line.strip_prefix("param ") {
        return (Field::Param, rest, at("param "));
    }
    if let Some(rest) = line.strip_prefix("domain:") {
        return (Field::Domain, rest, at("domain:"));
    }
    if let Some(rest) = line.strip_prefix("L:") {
        return (Field::Lagrangian, rest, at("L:"));
    }
    for i in (1..=12).rev() {
        // Reverse order so `k10:` is not claimed by the `k1:` prefix.
        let prefix = format!("k{i}:");
        if let Some(rest) = line.strip_prefix(prefix.as_str()) {
            return (Field::K(i), rest, at(&prefix));
        }
    }
    (Field::Unknown, line, 1)
}

fn check_unset(unset: bool, what: &str, line: u32) -> Result<(), DslError> {
    if unset {
        Ok(())
    } else {
        Err(diag(line, 1, format!("duplicate `{what}` line")))
    }
}

fn parse_param(
    text: &str,
    line: u32,
    col: u32,
    params: &mut BTreeMap<String, f64>,
) -> Result<(), DslError> {
    let Some(eq) = text.find('=') else {
        return Err(diag(line, col, "expected `param <name> = <value>`"));
    };
    let name = text[..eq].trim();
    if name.is_empty() || !name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
        return Err(diag(line, col, format!("invalid parameter name `{name}`")));
    }
    if coord_index(name).is_some() {
        return Err(diag(line, col, format!("parameter `{name}` shadows a coordinate")));
    }
    if name == "w" || FUNCTIONS.contains(&name) || name == "let" || name == "in" {
        return Err(diag(line, col, format!("parameter name `{name}` is reserved")));
    }
    if params.contains_key(name) {
        return Err(diag(line, col, format!("duplicate parameter `{name}`")));
    }
    let value_col = col + eq as u32 + 1;
    let value_expr = parse_expr_at(&text[eq + 1..], line, value_col)?;
    let Some(value) = fold_constant(&value_expr, params) else {
        return Err(diag(line, value_col, "parameter value must be a constant expression"));
    };
    params.insert(name.to_string(), value);
    Ok(())
}

/// Static checks that evaluation relies on: identifiers resolve, functions
/// have the right arity, exponents are parameter-constant, and `w` appears
/// only under even powers (or not at all in profile scope).
fn validate_expr(
    e: &Expr,
    params: &BTreeMap<String, f64>,
    scope: Scope,
) -> Result<(), DslError> {
    let mut lets: Vec<String> = Vec::new();
    validate_inner(e, params, scope, &mut lets)
}

fn validate_inner(
    e: &Expr,
    params: &BTreeMap<String, f64>,
    scope: Scope,
    lets: &mut Vec<String>,
) -> Result<(), DslError> {
    use super::ast::BinaryOp;
    match &e.kind {
        ExprKind::Number(_) => Ok(()),
        ExprKind::Ident(name) => {
            if lets.iter().any(|n| n == name) || params.contains_key(name) {
                return Ok(());
            }
            match coord_index(name) {
                Some(i) if scope == Scope::Full || i < 2 => Ok(()),
                Some(_) => Err(diag(
                    e.line,
                    e.col,
                    format!("only `t` and `r` may appear here, not `{name}`"),
                )),
                None if name == "w" => Err(diag(
                    e.line,
                    e.col,
                    "`w` may only appear raised to a positive even integer power",
                )),
                None => Err(diag(e.line, e.col, format!("unknown identifier `{name}`"))),
            }
        }
        ExprKind::Unary(_, inner) => validate_inner(inner, params, scope, lets),
        ExprKind::Binary(BinaryOp::Pow, base, exponent) => {
            validate_power(base, exponent, params, scope, lets)
        }
        ExprKind::Binary(_, l, r) => {
            validate_inner(l, params, scope, lets)?;
            validate_inner(r, params, scope, lets)
        }
        ExprKind::Call(name, args) => {
            let arity = match name.as_str() {
                "exp" | "ln" | "sqrt" | "sin" | "cos" | "abs" => 1,
                "pow" => 2,
                _ => return Err(diag(e.line, e.col, format!("unknown function `{name}`"))),
            };
            if args.len() != arity {
                return Err(diag(
                    e.line,
                    e.col,
                    format!("`{name}` takes {arity} argument(s), found {}", args.len()),
                ));
            }
            if name == "pow" {
                return validate_power(&args[0], &args[1], params, scope, lets);
            }
            for a in args {
                validate_inner(a, params, scope, lets)?;
            }
            Ok(())
        }
        ExprKind::Let { name, value, body } => {
            validate_inner(value, params, scope, lets)?;
            lets.push(name.clone());
            let out = validate_inner(body, params, scope, lets);
            lets.pop();
            out
        }
    }
}

fn validate_power(
    base: &Expr,
    exponent: &Expr,
    params: &BTreeMap<String, f64>,
    scope: Scope,
    lets: &mut Vec<String>,
) -> Result<(), DslError> {
    let Some(x) = fold_constant(exponent, params) else {
        return Err(diag(
            exponent.line,
            exponent.col,
            "exponent is not a parameter-constant expression",
        ));
    };
    if let ExprKind::Ident(name) = &base.kind {
        if name == "w" && !lets.iter().any(|n| n == name) {
            if scope == Scope::PositionTR {
                return Err(diag(base.line, base.col, "only `t` and `r` may appear here, not `w`"));
            }
            let r = x.round();
            let even_positive = (x - r).abs() < 1e-12 && r > 0.0 && (r as i64) % 2 == 0;
            if !even_positive {
                return Err(diag(
                    base.line,
                    base.col,
                    "`w` may only appear raised to a positive even integer power",
                ));
            }
            return Ok(());
        }
    }
    validate_inner(base, params, scope, lets)
}
