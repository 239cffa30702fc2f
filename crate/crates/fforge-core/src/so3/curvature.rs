//! Curvature data of a rotation-invariant affine connection.
//!
//! Coefficient dictionary (all functions of `t`, `r`; `x^0..x^3` are
//! `t, r, theta, phi`):
//!
//! ```text
//! Γ^t_tt = k1        Γ^t_tr = k2        Γ^t_rr = k3
//! Γ^r_tt = k4        Γ^r_rr = k5        Γ^r_tr = k6
//! Γ^t_θθ = k7        Γ^t_φφ = k7 sin²θ
//! Γ^θ_θt = Γ^φ_φt = k8               Γ^θ_θr = Γ^φ_φr = k9
//! Γ^r_θθ = k10       Γ^r_φφ = k10 sin²θ
//! Γ^φ_tθ = k11/sinθ  Γ^θ_tφ = -k11 sinθ
//! Γ^φ_rθ = k12/sinθ  Γ^θ_rφ = -k12 sinθ
//! Γ^θ_φφ = -sinθ cosθ               Γ^φ_θφ = cotθ
//! ```
//!
//! The curvature of such a connection is carried by fourteen invariant
//! functions `a1..a14` of `(t, r)`; `k11` and `k12` drop out of all of them.

use crate::tol::{residual_with_scales, SCALE_FLOOR};

/// Connection coefficients and their first derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionField {
    /// `k[i]` is the value of `k(i+1)`.
    pub k: [f64; 12],
    /// `k_t[i]` is `∂_t k(i+1)`.
    pub k_t: [f64; 12],
    /// `k_r[i]` is `∂_r k(i+1)`.
    pub k_r: [f64; 12],
}

/// The fourteen curvature invariants of a rotation-invariant connection.
///
/// Each invariant is a short sum of coefficient products; alongside the
/// value, the magnitude of its largest term is kept so that "this invariant
/// vanishes" can be decided relative to the cancellation that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureInvariants {
    /// `a[i]` is the value of `a(i+1)`.
    pub a: [f64; 14],
    /// `scale[i]` is the largest term magnitude inside `a(i+1)`.
    pub scale: [f64; 14],
}

impl ConnectionField {
    pub fn zero() -> Self {
        ConnectionField { k: [0.0; 12], k_t: [0.0; 12], k_r: [0.0; 12] }
    }

    /// Largest magnitude among coefficient values and slopes (used for
    /// scale-aware zero tests).
    pub fn scale(&self) -> f64 {
        self.k
            .iter()
            .chain(&self.k_t)
            .chain(&self.k_r)
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Whether the angular coefficient block `k7..k10` (values and slopes)
    /// vanishes — the structurally degenerate branch in which the angular
    /// sector decouples from `(t, r)`.
    pub fn is_angular_block_zero(&self, tol: f64) -> bool {
        let scale = self.scale().max(1.0);
        (6..10).all(|i| {
            self.k[i].abs() <= tol * scale
                && self.k_t[i].abs() <= tol * scale
                && self.k_r[i].abs() <= tol * scale
        })
    }

    /// The curvature invariants at this point.
    pub fn invariants(&self) -> CurvatureInvariants {
        let [k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, _k11, _k12] = self.k;
        let kt = &self.k_t;
        let kr = &self.k_r;
        let mut a = [0.0; 14];
        let mut scale = [0.0; 14];
        let mut put = |i: usize, terms: &[f64]| {
            a[i - 1] = terms.iter().sum();
            scale[i - 1] = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        };
        put(1, &[kr[0], -kt[1], k3 * k4, -k2 * k6]);
        put(2, &[kr[1], -kt[2], k2 * k2, k3 * k6, -k1 * k3, -k2 * k5]);
        put(3, &[kr[3], -kt[5], k1 * k6, k4 * k5, -k2 * k4, -k6 * k6]);
        put(4, &[kr[5], -kt[4], k2 * k6, -k3 * k4]);
        put(5, &[kr[7], -kt[8]]);
        put(6, &[-kt[6], k7 * k8, -k1 * k7, -k2 * k10]);
        put(7, &[-kt[9], k8 * k10, -k4 * k7, -k6 * k10]);
        put(8, &[-kt[7], k1 * k8, k4 * k9, -k8 * k8]);
        put(9, &[-kt[8], k2 * k8, k6 * k9, -k8 * k9]);
        put(10, &[-kr[6], k7 * k9, -k2 * k7, -k3 * k10]);
        put(11, &[-kr[9], k9 * k10, -k6 * k7, -k5 * k10]);
        put(12, &[-kr[7], k2 * k8, k6 * k9, -k8 * k9]);
        put(13, &[-kr[8], k3 * k8, k5 * k9, -k9 * k9]);
        put(14, &[1.0, k7 * k8, k9 * k10]);
        CurvatureInvariants { a, scale }
    }
}

impl CurvatureInvariants {
    /// An invariant array with every term scale set to `1`, for synthetic
    /// inputs whose entries are plain numbers rather than sums.
    pub fn from_values(a: [f64; 14]) -> Self {
        CurvatureInvariants { a, scale: [1.0; 14] }
    }

    /// `a(i)` with the conventional 1-based numbering.
    pub fn a(&self, i: usize) -> f64 {
        self.a[i - 1]
    }

    /// The term scale of `a(i)` (1-based).
    pub fn s(&self, i: usize) -> f64 {
        self.scale[i - 1]
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Largest invariant magnitude after dividing each by its own term
    /// scale; small exactly when the whole connection is curvature-free.
    pub fn max_normalized(&self) -> f64 {
        self.a
            .iter()
            .zip(&self.scale)
            .fold(0.0f64, |m, (a, s)| m.max(a.abs() / s.max(SCALE_FLOOR)))
    }

    /// Coefficients of the Ricci contraction, ordered as the quadratic forms
    /// `[dt², dt·dr, dr², w²]` where `w² = dθ² + sin²θ dφ²`:
    ///
    /// ```text
    /// Ric = -(a3 + 2 a8) dt² + (a1 - a4 - 2(a9 + a12)) dt dr
    ///       + (a2 - 2 a13) dr² + (a6 + a11 - a14) w²
    /// ```
    pub fn ricci_coefficients(&self) -> [f64; 4] {
        let a = |i: usize| self.a(i);
        [
            -(a(3) + 2.0 * a(8)),
            a(1) - a(4) - 2.0 * (a(9) + a(12)),
            a(2) - 2.0 * a(13),
            a(6) + a(11) - a(14),
        ]
    }

    /// Scale-normalized residuals of the four Ricci coefficients. Each sum
    /// is divided by the largest term scale propagated from the invariants
    /// themselves, so exact cancellations upstream do not show up as
    /// spurious curvature here.
    pub fn ricci_residuals(&self) -> [f64; 4] {
        let a = |i: usize| self.a(i);
        let s = |i: usize| self.s(i);
        [
            residual_with_scales(&[(-a(3), s(3)), (-2.0 * a(8), 2.0 * s(8))]),
            residual_with_scales(&[
                (a(1), s(1)),
                (-a(4), s(4)),
                (-2.0 * a(9), 2.0 * s(9)),
                (-2.0 * a(12), 2.0 * s(12)),
            ]),
            residual_with_scales(&[(a(2), s(2)), (-2.0 * a(13), 2.0 * s(13))]),
            residual_with_scales(&[(a(6), s(6)), (a(11), s(11)), (-a(14), s(14))]),
        ]
    }

    /// The geodesic-deviation curvature `R^a_{bc}` at polar angle `theta`
    /// for direction `velocity`, as a dense `[a][b][c]` array antisymmetric
    /// in `(b, c)`.
    pub fn spray_curvature(&self, theta: f64, velocity: [f64; 4]) -> [[[f64; 4]; 4]; 4] {
        let [vt, vr, vth, vph] = velocity;
        let s2 = theta.sin() * theta.sin();
        let a = |i: usize| self.a(i);
        let mut out = [[[0.0; 4]; 4]; 4];
        let mut set = |up: usize, b: usize, c: usize, v: f64| {
            out[up][b][c] = v;
            out[up][c][b] = -v;
        };
        // (b,c) = (t,r)
        set(0, 0, 1, a(1) * vt + a(2) * vr);
        set(1, 0, 1, a(3) * vt + a(4) * vr);
        set(2, 0, 1, a(5) * vth);
        set(3, 0, 1, a(5) * vph);
        // (b,c) = (t,theta)
        set(0, 0, 2, a(6) * vth);
        set(1, 0, 2, a(7) * vth);
        set(2, 0, 2, a(8) * vt + a(9) * vr);
        // (b,c) = (t,phi)
        set(0, 0, 3, a(6) * vph * s2);
        set(1, 0, 3, a(7) * vph * s2);
        set(3, 0, 3, a(8) * vt + a(9) * vr);
        // (b,c) = (r,theta)
        set(0, 1, 2, a(10) * vth);
        set(1, 1, 2, a(11) * vth);
        set(2, 1, 2, a(12) * vt + a(13) * vr);
        // (b,c) = (r,phi)
        set(0, 1, 3, a(10) * vph * s2);
        set(1, 1, 3, a(11) * vph * s2);
        set(3, 1, 3, a(12) * vt + a(13) * vr);
        // (b,c) = (theta,phi)
        set(2, 2, 3, -a(14) * vph * s2);
        set(3, 2, 3, a(14) * vth);
        out
    }

    /// The affine curvature tensor `R^a_{e,bc}` (direction slot `e` made
    /// explicit), antisymmetric in `(b, c)`, at polar angle `theta`. The
    /// contraction `R^a_{e,bc} v^e` reproduces [`Self::spray_curvature`].
    pub fn affine_curvature(&self, theta: f64) -> [[[[f64; 4]; 4]; 4]; 4] {
        let mut out = [[[[0.0; 4]; 4]; 4]; 4];
        for e in 0..4 {
            let mut v = [0.0; 4];
            v[e] = 1.0;
            let r = self.spray_curvature(theta, v);
            for up in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        out[up][e][b][c] = r[up][b][c];
                    }
                }
            }
        }
        out
    }
}
