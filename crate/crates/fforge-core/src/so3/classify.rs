//! Classification of the Finsler structures compatible with a given
//! rotation-invariant connection.
//!
//! When the angular coefficient `k10` is nonzero, the connection determines
//! three structure functions
//!
//! ```text
//! a = k7/k10,   b = k8/k10,   c = (k9 k10 - k7 k8) / k10²
//! ```
//!
//! Seven linear relations among the curvature invariants (`a6 = a·a7`,
//! `a8 = b·a7`, …) are necessary for a non-quadratic parallel-transport-
//! invariant function to exist. When they hold, three derived discriminants
//! `D`, `E`, `F` decide which constructive family the function belongs to:
//!
//! * `D ≠ 0` — power-law family `ϑ·u^(2-2λ)(v + ρu²)^λ` with `λ = F/D`,
//!   `ρ = E/D`;
//! * `D = 0, E ≠ 0` — exponential family `φ·u²·exp(μ v/u²)` with `μ = F/E`;
//! * `D = E = F = 0` — one-variable family `u²·Ξ(v/u²)`;
//! * `b = c = 0` — the structure degenerates and only the purely angular
//!   families remain (reported as one group).
//!
//! When the linear relations fail, the connection may still be the
//! Levi-Civita connection of a quadratic (pseudo-Riemannian) metric; a
//! pointwise linear fit checks for that. Every zero/nonzero decision uses a
//! relative tolerance with a gray zone: residuals between `tol` and
//! `10·tol` make the outcome `Unclassified` rather than silently picking a
//! side.

use std::fmt;

use nalgebra::DMatrix;

use super::curvature::{ConnectionField, CurvatureInvariants};
use crate::tol::{residual_with_scales, SCALE_FLOOR};

/// The three functions `a`, `b`, `c` extracted from the angular block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureFunctions {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Raw discriminant values together with the scales of the terms that
/// formed them (for normalized zero tests).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discriminants {
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub d_scale: f64,
    pub e_scale: f64,
    pub f_scale: f64,
}

/// The constructive family a compatible Finsler function belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BerwaldClass {
    PowerLaw,
    Exponential,
    OneVariable,
    Class4Or5,
    Riemannian,
    Unclassified,
}

impl fmt::Display for BerwaldClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BerwaldClass::PowerLaw => "power-law",
            BerwaldClass::Exponential => "exponential",
            BerwaldClass::OneVariable => "one-variable",
            BerwaldClass::Class4Or5 => "Class4/5 group",
            BerwaldClass::Riemannian => "Riemannian",
            BerwaldClass::Unclassified => "unclassified",
        };
        f.write_str(s)
    }
}

/// Full classification record for one connection point.
#[derive(Debug, Clone)]
pub struct Classification {
    pub class: BerwaldClass,
    pub structure: Option<StructureFunctions>,
    /// Normalized residuals of the seven linear compatibility relations.
    pub compatibility: [f64; 7],
    /// Normalized residuals of the three consistency combinations that must
    /// vanish for any compatible family.
    pub consistency: [f64; 3],
    pub discriminants: Option<Discriminants>,
    /// Exponent `λ = F/D` (power-law) or scalar `μ = F/E` (exponential).
    pub exponent: Option<f64>,
    /// Ratio `ρ = E/D` for the power-law family.
    pub rho: Option<f64>,
    /// Fitted quadratic metric `[g_tt, g_tr, g_rr, g_S]` when the
    /// Riemannian branch applies.
    pub quadratic_metric: Option<[f64; 4]>,
    /// Human-readable reason when the outcome is `Unclassified`.
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ZeroTest {
    Zero,
    NonZero,
    Gray,
}

fn zero_test(value: f64, scale: f64, tol: f64) -> ZeroTest {
    let ratio = value.abs() / scale.max(SCALE_FLOOR);
    if ratio < tol {
        ZeroTest::Zero
    } else if ratio > 10.0 * tol {
        ZeroTest::NonZero
    } else {
        ZeroTest::Gray
    }
}

/// Compatibility residuals `[a6-a·a7, a8-b·a7, a9-(ab+c)a7, a10-a·a11,
/// a12-b·a11, a13-(ab+c)a11, a5-((ab+c)a7 - b·a11)]`. Each residual is
/// normalized by the largest term scale carried over from the invariants,
/// so an invariant that already cancelled to rounding noise cannot fake a
/// violation.
pub fn compatibility_residuals(
    inv: &CurvatureInvariants,
    s: &StructureFunctions,
) -> [f64; 7] {
    let a = |i: usize| inv.a(i);
    let sc = |i: usize| inv.s(i);
    let abc = s.a * s.b + s.c;
    [
        residual_with_scales(&[(a(6), sc(6)), (-s.a * a(7), s.a.abs() * sc(7))]),
        residual_with_scales(&[(a(8), sc(8)), (-s.b * a(7), s.b.abs() * sc(7))]),
        residual_with_scales(&[(a(9), sc(9)), (-abc * a(7), abc.abs() * sc(7))]),
        residual_with_scales(&[(a(10), sc(10)), (-s.a * a(11), s.a.abs() * sc(11))]),
        residual_with_scales(&[(a(12), sc(12)), (-s.b * a(11), s.b.abs() * sc(11))]),
        residual_with_scales(&[(a(13), sc(13)), (-abc * a(11), abc.abs() * sc(11))]),
        residual_with_scales(&[
            (a(5), sc(5)),
            (-abc * a(7), abc.abs() * sc(7)),
            (s.b * a(11), s.b.abs() * sc(11)),
        ]),
    ]
}

/// Consistency combinations `A`, `B`, `C` that vanish identically on every
/// compatible family, as scale-normalized residuals.
pub fn consistency_residuals(
    inv: &CurvatureInvariants,
    s: &StructureFunctions,
) -> [f64; 3] {
    let a = |i: usize| inv.a(i);
    let sc = |i: usize| inv.s(i);
    let (sa, sb) = (s.a, s.b);
    let abc = sa * sb + s.c;
    let p1 = sa * a(1) + a(2);
    let p1_scale = (sa.abs() * sc(1)).max(sc(2));
    let p3 = sa * a(3) + a(4);
    let p3_scale = (sa.abs() * sc(3)).max(sc(4));
    [
        residual_with_scales(&[
            (sb * p1, sb.abs() * p1_scale),
            (abc * p3, abc.abs() * p3_scale),
            (-a(5) * (2.0 * sa * sb + s.c), (2.0 * sa * sb + s.c).abs() * sc(5)),
        ]),
        residual_with_scales(&[(sa * p3, sa.abs() * p3_scale), (-p1, p1_scale)]),
        residual_with_scales(&[
            (abc * a(3), abc.abs() * sc(3)),
            (sb * p3, sb.abs() * p3_scale),
            (sb * a(1), sb.abs() * sc(1)),
            (-2.0 * sb * a(5), 2.0 * sb.abs() * sc(5)),
        ]),
    ]
}

/// Discriminants `D = a·a3 - a1 + a5`, `E = b·a3`, `F = a·a3 - a1` together
/// with the scales of their constituent terms, propagated from the
/// invariants' own term scales.
pub fn discriminants(inv: &CurvatureInvariants, s: &StructureFunctions) -> Discriminants {
    let a = |i: usize| inv.a(i);
    let sc = |i: usize| inv.s(i);
    let a3_scale = s.a.abs() * sc(3);
    Discriminants {
        d: s.a * a(3) - a(1) + a(5),
        e: s.b * a(3),
        f: s.a * a(3) - a(1),
        d_scale: a3_scale.max(sc(1)).max(sc(5)),
        e_scale: s.b.abs() * sc(3),
        f_scale: a3_scale.max(sc(1)),
    }
}

/// The four signed residuals of the Ricci-flat system for a connection
/// compatible with a non-quadratic invariant function:
///
/// ```text
/// a3 + 2b·a7,   a1 - a4 - 2a5 - 4b·a11,
/// a2 - 2(ab+c)·a11,   a·a7 + a11 - a14
/// ```
///
/// All four vanish exactly when the connection is Ricci-flat (given the
/// compatibility relations). The values are raw, not normalized: the
/// constant contradiction of the angular-degenerate families shows up as a
/// fourth residual of exactly `-1`.
pub fn ricci_flat_system(inv: &CurvatureInvariants, s: &StructureFunctions) -> [f64; 4] {
    let a = |i: usize| inv.a(i);
    let abc = s.a * s.b + s.c;
    [
        a(3) + 2.0 * s.b * a(7),
        a(1) - a(4) - 2.0 * a(5) - 4.0 * s.b * a(11),
        a(2) - 2.0 * abc * a(11),
        s.a * a(7) + a(11) - a(14),
    ]
}

/// Scale-normalized residual of the closed form of the angular invariant,
///
/// ```text
/// a14 = 1 + k10²·(2ab + c),
/// ```
///
/// an algebraic identity of every connection with `k10 != 0`. Returns
/// `None` when `k10` vanishes relative to the field's own scale (the
/// structure functions are then undefined).
pub fn angular_identity_residual(field: &ConnectionField) -> Option<f64> {
    let k10 = field.k[9];
    if k10.abs() <= 1.0e-14 * field.scale().max(1.0) {
        return None;
    }
    let inv = field.invariants();
    let s = structure_functions(field)?;
    let two_abc = 2.0 * s.a * s.b + s.c;
    Some(residual_with_scales(&[
        (inv.a(14), inv.s(14)),
        (-1.0, 1.0),
        (-k10 * k10 * two_abc, (k10 * k10 * two_abc).abs()),
    ]))
}

/// Scale-normalized residuals of the slope form of the angular invariant,
///
/// ```text
/// ∂_t a14 = -2·k10·(2ab + c)·a7,   ∂_r a14 = -2·k10·(2ab + c)·a11,
/// ```
///
/// valid on connections compatible with a non-quadratic invariant function.
/// The measured slopes `d14_dt`, `d14_dr` are supplied by the caller
/// (analytically or by finite differences along a field). Returns `None`
/// when `k10` vanishes.
pub fn angular_slope_residuals(
    field: &ConnectionField,
    d14_dt: f64,
    d14_dr: f64,
) -> Option<[f64; 2]> {
    let k10 = field.k[9];
    if k10.abs() <= 1.0e-14 * field.scale().max(1.0) {
        return None;
    }
    let inv = field.invariants();
    let s = structure_functions(field)?;
    let factor = -2.0 * k10 * (2.0 * s.a * s.b + s.c);
    let predict = |ai: f64, si: f64| (factor * ai, factor.abs() * si);
    let (pt, pt_scale) = predict(inv.a(7), inv.s(7));
    let (pr, pr_scale) = predict(inv.a(11), inv.s(11));
    Some([
        residual_with_scales(&[(d14_dt, d14_dt.abs()), (-pt, pt_scale)]),
        residual_with_scales(&[(d14_dr, d14_dr.abs()), (-pr, pr_scale)]),
    ])
}

/// The structure functions `a = k7/k10`, `b = k8/k10`,
/// `c = (k9·k10 - k7·k8)/k10²`, defined when `k10 != 0`.
pub fn structure_functions(field: &ConnectionField) -> Option<StructureFunctions> {
    let k10 = field.k[9];
    if k10 == 0.0 {
        return None;
    }
    Some(StructureFunctions {
        a: field.k[6] / k10,
        b: field.k[7] / k10,
        c: (field.k[8] * k10 - field.k[6] * field.k[7]) / (k10 * k10),
    })
}

/// Classifies the Finsler structures compatible with `field`.
pub fn classify(field: &ConnectionField, tol: f64) -> Classification {
    let inv = field.invariants();
    let k_scale = field.scale().max(1.0);
    let mut out = Classification {
        class: BerwaldClass::Unclassified,
        structure: None,
        compatibility: [0.0; 7],
        consistency: [0.0; 3],
        discriminants: None,
        exponent: None,
        rho: None,
        quadratic_metric: None,
        reason: None,
    };

    // The whole angular coefficient block vanishing puts the connection in
    // the purely angular-degenerate families: the compatible functions
    // depend on `(ṫ, ṙ, w)` in a way that never admits structure functions.
    if field.is_angular_block_zero(tol) {
        out.class = BerwaldClass::Class4Or5;
        return out;
    }

    let k10 = field.k[9];
    match zero_test(k10, k_scale, tol) {
        ZeroTest::NonZero => {}
        _ => {
            out.reason = Some(
                "angular coefficient k10 vanishes; structure functions are undefined".into(),
            );
            // The connection may still be quadratic-metrizable.
            if let Some(g) = quadratic_metric_fit(&inv, tol) {
                out.class = BerwaldClass::Riemannian;
                out.quadratic_metric = Some(g);
            }
            return out;
        }
    }

    let s = structure_functions(field).expect("k10 was checked nonzero above");
    out.structure = Some(s);
    out.compatibility = compatibility_residuals(&inv, &s);
    out.consistency = consistency_residuals(&inv, &s);

    let worst_compat = out.compatibility.iter().fold(0.0f64, |m, v| m.max(*v));
    if worst_compat > 10.0 * tol {
        // Not compatible with any non-quadratic family; check for a plain
        // quadratic metric.
        match quadratic_metric_fit(&inv, tol) {
            Some(g) => {
                out.class = BerwaldClass::Riemannian;
                out.quadratic_metric = Some(g);
            }
            None => {
                out.reason = Some(format!(
                    "compatibility relations fail (worst residual {worst_compat:.3e}) and no \
                     quadratic metric fits"
                ));
            }
        }
        return out;
    }
    if worst_compat > tol {
        out.reason = Some(format!(
            "compatibility residual {worst_compat:.3e} falls in the undecidable band"
        ));
        return out;
    }
    let worst_consistency = out.consistency.iter().fold(0.0f64, |m, v| m.max(*v));
    if worst_consistency > tol {
        out.reason = Some(format!(
            "consistency combinations do not vanish (worst residual {worst_consistency:.3e})"
        ));
        return out;
    }

    let disc = discriminants(&inv, &s);
    out.discriminants = Some(disc);
    let d_test = zero_test(disc.d, disc.d_scale, tol);
    let e_test = zero_test(disc.e, disc.e_scale, tol);
    let f_test = zero_test(disc.f, disc.f_scale, tol);
    if d_test == ZeroTest::Gray || e_test == ZeroTest::Gray || f_test == ZeroTest::Gray {
        out.reason = Some("discriminants sit in the undecidable band".into());
        return out;
    }
    match (d_test, e_test, f_test) {
        (ZeroTest::NonZero, _, _) => {
            out.class = BerwaldClass::PowerLaw;
            out.exponent = Some(disc.f / disc.d);
            out.rho = Some(disc.e / disc.d);
        }
        (ZeroTest::Zero, ZeroTest::NonZero, _) => {
            out.class = BerwaldClass::Exponential;
            out.exponent = Some(disc.f / disc.e);
        }
        (ZeroTest::Zero, ZeroTest::Zero, ZeroTest::Zero) => {
            out.class = BerwaldClass::OneVariable;
        }
        (ZeroTest::Zero, ZeroTest::Zero, ZeroTest::NonZero) => {
            out.reason =
                Some("D = E = 0 with F != 0 admits no homogeneous solution".into());
        }
        _ => unreachable!("gray cases returned above"),
    }
    out
}

/// Pointwise necessary condition for a quadratic metric: a symmetric
/// rotation-invariant `g = [g_tt, g_tr, g_rr, g_S]` (angular block
/// `g_S·(dθ² + sin²θ dφ²)`) with `g_{ad}R^d_{e,bc} + g_{ed}R^d_{a,bc} = 0`
/// for all index choices, evaluated on the equator. Returns a nondegenerate
/// solution of the linear system if one exists.
pub fn quadratic_metric_fit(inv: &CurvatureInvariants, tol: f64) -> Option<[f64; 4]> {
    let theta = std::f64::consts::FRAC_PI_2;
    let r = inv.affine_curvature(theta);
    // Map (row index a, col index d) -> coefficient of each unknown in
    // g_{ad}; unknowns ordered [g_tt, g_tr, g_rr, g_S].
    let g_coeff = |a: usize, d: usize| -> [f64; 4] {
        let mut c = [0.0; 4];
        match (a, d) {
            (0, 0) => c[0] = 1.0,
            (0, 1) | (1, 0) => c[1] = 1.0,
            (1, 1) => c[2] = 1.0,
            (2, 2) | (3, 3) => c[3] = 1.0, // sin²θ = 1 on the equator
            _ => {}
        }
        c
    };
    let mut rows: Vec<[f64; 4]> = Vec::new();
    for b in 0..4 {
        for c in b..4 {
            for e in 0..4 {
                for f in e..4 {
                    let mut row = [0.0; 4];
                    for d in 0..4 {
                        let ce = g_coeff(e, d);
                        let cf = g_coeff(f, d);
                        for u in 0..4 {
                            row[u] += ce[u] * r[d][f][b][c] + cf[u] * r[d][e][b][c];
                        }
                    }
                    if row.iter().any(|v| v.abs() > 0.0) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    if rows.is_empty() {
        // Zero curvature: any metric is invariant; return the standard one.
        return Some([1.0, 0.0, -1.0, -1.0]);
    }
    let m = DMatrix::from_fn(rows.len(), 4, |i, j| rows[i][j]);
    let svd = m.svd(false, true);
    let v_t = svd.v_t.as_ref()?;
    let sigma_max = svd.singular_values.iter().fold(0.0f64, |m, v| m.max(*v));
    let mut basis: Vec<[f64; 4]> = Vec::new();
    for (i, sv) in svd.singular_values.iter().enumerate() {
        if *sv <= tol * sigma_max.max(SCALE_FLOOR) {
            let row = v_t.row(i);
            basis.push([row[0], row[1], row[2], row[3]]);
        }
    }
    // Singular values are not padded for wide systems; directions beyond the
    // rank also belong to the nullspace.
    for i in svd.singular_values.len()..4 {
        if i < v_t.nrows() {
            let row = v_t.row(i);
            basis.push([row[0], row[1], row[2], row[3]]);
        }
    }
    if basis.is_empty() {
        return None;
    }
    // Search the nullspace for a nondegenerate representative.
    let nondegenerate = |g: &[f64; 4]| {
        let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale < SCALE_FLOOR {
            return false;
        }
        let det_tr = g[0] * g[2] - g[1] * g[1];
        det_tr.abs() > tol * scale * scale && g[3].abs() > tol * scale
    };
    for g in &basis {
        if nondegenerate(g) {
            return Some(*g);
        }
    }
    if basis.len() >= 2 {
        for alpha in [1.0, -1.0, 0.5, -0.5, 2.0, -2.0, 0.1, -0.1] {
            for i in 0..basis.len() {
                for j in 0..basis.len() {
                    if i == j {
                        continue;
                    }
                    let mut g = [0.0; 4];
                    for u in 0..4 {
                        g[u] = basis[i][u] + alpha * basis[j][u];
                    }
                    if nondegenerate(&g) {
                        return Some(g);
                    }
                }
            }
        }
    }
    None
}
