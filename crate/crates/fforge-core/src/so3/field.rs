//! Closed-form families of rotation-invariant connections and random draws
//! from them.
//!
//! A connection that parallel-transports some non-quadratic function falls
//! into one of three constructive regimes, distinguished by the structure
//! functions `a`, `b`, `c` (see [`super::classify`]):
//!
//! * **case 1** — `b != 0` and `2ab + c != 0`: every coefficient is a fixed
//!   linear combination of two free functions `k4(t, r)`, `k10(t, r)`;
//! * **case 2** — `b != 0` and `c = -2ab`: three free functions `k4`, `k6`,
//!   `k10`;
//! * **case 3** — `b = 0`, `c != 0`: two free functions `k1`, `k10`.
//!
//! Because each coefficient depends linearly on the free functions with
//! *constant* coefficients, the `t`/`r` slopes of the free functions
//! determine all coefficient slopes, and a single parameter struct pins the
//! whole [`ConnectionField`] at a point. The draw functions sample such
//! fields with degeneracy-avoiding margins; the `*_ricci_flat_tr` variants
//! additionally solve the `dt²`, `dt·dr`, `dr²` components of the vacuum
//! equations for two of the slopes, which is the configuration the
//! obstruction replay in [`super::birkhoff`] probes.

use rand::Rng;

use super::curvature::ConnectionField;

/// Point data for a case-1 connection (`b != 0`, `2ab + c != 0`): constant
/// structure functions plus the two free coefficients and their slopes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case1Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub k4: f64,
    pub k10: f64,
    pub k4_t: f64,
    pub k4_r: f64,
    pub k10_t: f64,
    pub k10_r: f64,
}

/// Point data for a case-2 connection (`b != 0`, `c = -2ab`): three free
/// coefficients and their slopes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case2Params {
    pub a: f64,
    pub b: f64,
    pub k4: f64,
    pub k6: f64,
    pub k10: f64,
    pub k4_t: f64,
    pub k4_r: f64,
    pub k6_t: f64,
    pub k6_r: f64,
    pub k10_t: f64,
    pub k10_r: f64,
}

/// Point data for a case-3 connection (`b = 0`, `c != 0`): two free
/// coefficients and their slopes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case3Params {
    pub a: f64,
    pub c: f64,
    pub k1: f64,
    pub k10: f64,
    pub k1_t: f64,
    pub k1_r: f64,
    pub k10_t: f64,
    pub k10_r: f64,
}

/// Builds a [`ConnectionField`] from per-coefficient linear forms in the
/// free functions: `coeffs[i]` holds the constants multiplying each free
/// function in `k(i+1)`, and the same constants multiply the free slopes.
fn assemble<const N: usize>(
    coeffs: &[[f64; N]; 12],
    values: [f64; N],
    slopes_t: [f64; N],
    slopes_r: [f64; N],
) -> ConnectionField {
    let mut f = ConnectionField::zero();
    for (i, row) in coeffs.iter().enumerate() {
        for (j, w) in row.iter().enumerate() {
            f.k[i] += w * values[j];
            f.k_t[i] += w * slopes_t[j];
            f.k_r[i] += w * slopes_r[j];
        }
    }
    f
}

/// The case-1 connection at a point. Writing `β = (ab + c)/b`:
///
/// ```text
/// k1 = b·k10 - β·k4          k2 = aβ·k4
/// k3 = a(ab+c)·k10 - a²β·k4  k5 = a²·k4 + c·k10
/// k6 = b·k10 - a·k4          k7 = a·k10
/// k8 = b·k10                 k9 = (ab+c)·k10
/// ```
pub fn case1_field(p: &Case1Params) -> ConnectionField {
    let Case1Params { a, b, c, .. } = *p;
    let abc = a * b + c;
    let beta = abc / b;
    let coeffs: [[f64; 2]; 12] = [
        [-beta, b],             // k1
        [a * beta, 0.0],        // k2
        [-a * a * beta, a * abc], // k3
        [1.0, 0.0],             // k4
        [a * a, c],             // k5
        [-a, b],                // k6
        [0.0, a],               // k7
        [0.0, b],               // k8
        [0.0, abc],             // k9
        [0.0, 1.0],             // k10
        [0.0, 0.0],
        [0.0, 0.0],
    ];
    assemble(
        &coeffs,
        [p.k4, p.k10],
        [p.k4_t, p.k10_t],
        [p.k4_r, p.k10_r],
    )
}

/// The case-2 connection at a point (`c = -2ab` implied):
///
/// ```text
/// k1 = 2b·k10 - k6                 k2 = a(a·k4 + 2k6 - 2b·k10)
/// k3 = -2a³·k4 - 3a²·k6 + 2a²b·k10 k5 = -a²·k4 - 2a·k6
/// k7 = a·k10   k8 = b·k10   k9 = -ab·k10
/// ```
pub fn case2_field(p: &Case2Params) -> ConnectionField {
    let Case2Params { a, b, .. } = *p;
    let coeffs: [[f64; 3]; 12] = [
        [0.0, -1.0, 2.0 * b],                       // k1
        [a * a, 2.0 * a, -2.0 * a * b],             // k2
        [-2.0 * a * a * a, -3.0 * a * a, 2.0 * a * a * b], // k3
        [1.0, 0.0, 0.0],                            // k4
        [-a * a, -2.0 * a, 0.0],                    // k5
        [0.0, 1.0, 0.0],                            // k6
        [0.0, 0.0, a],                              // k7
        [0.0, 0.0, b],                              // k8
        [0.0, 0.0, -a * b],                         // k9
        [0.0, 0.0, 1.0],                            // k10
        [0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
    ];
    assemble(
        &coeffs,
        [p.k4, p.k6, p.k10],
        [p.k4_t, p.k6_t, p.k10_t],
        [p.k4_r, p.k6_r, p.k10_r],
    )
}

/// The case-3 connection at a point (`b = 0`):
///
/// ```text
/// k2 = -a·k1    k3 = a²·k1 + ac·k10    k4 = k6 = 0
/// k5 = c·k10    k7 = a·k10    k8 = 0   k9 = c·k10
/// ```
pub fn case3_field(p: &Case3Params) -> ConnectionField {
    let Case3Params { a, c, .. } = *p;
    let coeffs: [[f64; 2]; 12] = [
        [1.0, 0.0],      // k1
        [-a, 0.0],       // k2
        [a * a, a * c],  // k3
        [0.0, 0.0],      // k4
        [0.0, c],        // k5
        [0.0, 0.0],      // k6
        [0.0, a],        // k7
        [0.0, 0.0],      // k8
        [0.0, c],        // k9
        [0.0, 1.0],      // k10
        [0.0, 0.0],
        [0.0, 0.0],
    ];
    assemble(
        &coeffs,
        [p.k1, p.k10],
        [p.k1_t, p.k10_t],
        [p.k1_r, p.k10_r],
    )
}

fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

/// A value in `[-1.5, 1.5]` bounded away from zero.
fn bounded_nonzero<R: Rng>(rng: &mut R, min_mag: f64) -> f64 {
    loop {
        let x = uniform(rng, -1.5, 1.5);
        if x.abs() >= min_mag {
            return x;
        }
    }
}

/// Random case-1 parameters with `|b| ≥ 0.2`, `|k10| ≥ 0.2` and
/// `|2ab + c| ≥ 0.2` so the regime is well inside its defining
/// inequalities.
pub fn draw_case1<R: Rng>(rng: &mut R) -> Case1Params {
    let a = uniform(rng, -1.0, 1.0);
    let b = bounded_nonzero(rng, 0.2);
    let c = loop {
        let c = uniform(rng, -1.5, 1.5);
        if (2.0 * a * b + c).abs() >= 0.2 {
            break c;
        }
    };
    Case1Params {
        a,
        b,
        c,
        k4: uniform(rng, -1.0, 1.0),
        k10: bounded_nonzero(rng, 0.2),
        k4_t: uniform(rng, -1.0, 1.0),
        k4_r: uniform(rng, -1.0, 1.0),
        k10_t: uniform(rng, -1.0, 1.0),
        k10_r: uniform(rng, -1.0, 1.0),
    }
}

/// Random case-2 parameters with `|b| ≥ 0.2` and `|k10| ≥ 0.2`.
pub fn draw_case2<R: Rng>(rng: &mut R) -> Case2Params {
    Case2Params {
        a: uniform(rng, -1.0, 1.0),
        b: bounded_nonzero(rng, 0.2),
        k4: uniform(rng, -1.0, 1.0),
        k6: uniform(rng, -1.0, 1.0),
        k10: bounded_nonzero(rng, 0.2),
        k4_t: uniform(rng, -1.0, 1.0),
        k4_r: uniform(rng, -1.0, 1.0),
        k6_t: uniform(rng, -1.0, 1.0),
        k6_r: uniform(rng, -1.0, 1.0),
        k10_t: uniform(rng, -1.0, 1.0),
        k10_r: uniform(rng, -1.0, 1.0),
    }
}

/// Random case-3 parameters with `|c| ≥ 0.2` and `|k10| ≥ 0.2`.
pub fn draw_case3<R: Rng>(rng: &mut R) -> Case3Params {
    Case3Params {
        a: uniform(rng, -1.0, 1.0),
        c: bounded_nonzero(rng, 0.2),
        k1: uniform(rng, -1.0, 1.0),
        k10: bounded_nonzero(rng, 0.2),
        k1_t: uniform(rng, -1.0, 1.0),
        k1_r: uniform(rng, -1.0, 1.0),
        k10_t: uniform(rng, -1.0, 1.0),
        k10_r: uniform(rng, -1.0, 1.0),
    }
}

/// Random case-2 parameters tuned so the first classification discriminant
/// vanishes exactly while the second stays away from zero — the
/// configuration whose compatible functions form the exponential family.
pub fn draw_class2<R: Rng>(rng: &mut R) -> Case2Params {
    loop {
        let mut p = draw_case2(rng);
        // D = a·q + a·s + u6r + a²·p - b·n - ab·m, with u6r = ∂_r k6; solve
        // D = 0 for u6r.
        p.k6_r = -p.a * p.k4_r - p.a * p.k6_t - p.a * p.a * p.k4_t
            + p.b * p.k10_r
            + p.a * p.b * p.k10_t;
        // E = b·(q - s + 2TW); keep it clearly nonzero.
        let t_comb = p.a * p.k4 + p.k6;
        let w_comb = p.b * p.k10 - t_comb;
        let e = p.b * (p.k4_r - p.k6_t + 2.0 * t_comb * w_comb);
        if e.abs() >= 0.05 {
            return p;
        }
    }
}

/// Random case-1 parameters tuned so all three discriminants vanish — the
/// configuration whose compatible functions form the one-variable family.
pub fn draw_class3<R: Rng>(rng: &mut R) -> Case1Params {
    let mut p = draw_case1(rng);
    let m = bounded_nonzero(rng, 0.2);
    p.k10_t = m;
    // a3 = 0 requires q = b·m - a·p; a5 = 0 requires n = (ab+c)·m/b.
    p.k4_r = p.b * m - p.a * p.k4_t;
    p.k10_r = (p.a * p.b + p.c) * m / p.b;
    p
}

/// Random case-1 parameters tuned so *every* curvature invariant vanishes,
/// including the angular one (`c` is chosen to make `1 + (2ab+c)·k10² = 0`).
pub fn draw_flat<R: Rng>(rng: &mut R) -> Case1Params {
    let a = uniform(rng, -1.0, 1.0);
    let b = bounded_nonzero(rng, 0.2);
    let k10 = {
        let mag = uniform(rng, 0.4, 1.5);
        if rng.gen::<bool>() {
            mag
        } else {
            -mag
        }
    };
    let c = -2.0 * a * b - 1.0 / (k10 * k10);
    let k4_t = uniform(rng, -1.0, 1.0);
    Case1Params {
        a,
        b,
        c,
        k4: uniform(rng, -1.0, 1.0),
        k10,
        k4_t,
        k4_r: -a * k4_t,
        k10_t: 0.0,
        k10_r: 0.0,
    }
}

/// Random connection whose angular block `k7..k10` vanishes identically
/// (values and slopes); the `(t, r)` block is free. Such connections arise
/// from functions of the angular speed alone and can never satisfy the
/// angular vacuum equation.
pub fn draw_group2<R: Rng>(rng: &mut R) -> ConnectionField {
    let mut f = ConnectionField::zero();
    for i in 0..6 {
        f.k[i] = uniform(rng, -1.0, 1.0);
        f.k_t[i] = uniform(rng, -1.0, 1.0);
        f.k_r[i] = uniform(rng, -1.0, 1.0);
    }
    f
}

/// Case-1 draw with the slopes `∂_r k4` and `∂_r k10` solved from the
/// `dt²`, `dt·dr` and `dr²` components of the vacuum equations:
/// `q + a·p = 3b·m` and `n = -a·m`. The angular component is left free.
pub fn draw_case1_ricci_flat_tr<R: Rng>(rng: &mut R) -> Case1Params {
    let mut p = draw_case1(rng);
    let m = bounded_nonzero(rng, 0.2);
    p.k10_t = m;
    p.k4_r = 3.0 * p.b * m - p.a * p.k4_t;
    p.k10_r = -p.a * m;
    p
}

/// Case-2 draw with `∂_r k4` and `∂_r k6` solved from the `dt²` and
/// `dt·dr` vacuum components (the `dr²` component then holds
/// automatically).
pub fn draw_case2_ricci_flat_tr<R: Rng>(rng: &mut R) -> Case2Params {
    let mut p = draw_case2(rng);
    let t_comb = p.a * p.k4 + p.k6;
    let w_comb = p.b * p.k10 - t_comb;
    let (s, m, n) = (p.k6_t, p.k10_t, p.k10_r);
    // a3 = -2b·a7 fixes q; a4 = -2b·a11 fixes u6r.
    p.k4_r = s - 2.0 * t_comb * w_comb + 2.0 * p.b * m - 2.0 * p.b * w_comb * p.k10;
    p.k6_r = 2.0 * p.b * n + 2.0 * p.a * p.b * w_comb * p.k10
        - p.a * p.a * p.k4_t
        - 2.0 * p.a * s
        + 2.0 * p.a * t_comb * w_comb;
    p
}

/// Case-3 draw with `∂_r k1` and `∂_r k10` solved from the `dt·dr` and
/// `dr²` vacuum components (`dt²` is identically zero in this regime):
/// `a1 = -3c·m` and `n = -a·m`.
pub fn draw_case3_ricci_flat_tr<R: Rng>(rng: &mut R) -> Case3Params {
    let mut p = draw_case3(rng);
    let m = bounded_nonzero(rng, 0.2);
    p.k10_t = m;
    p.k1_r = -3.0 * p.c * m - p.a * p.k1_t;
    p.k10_r = -p.a * m;
    p
}

/// A hand-picked case-1 field with genuinely position-dependent free
/// functions (`a = b = c = 1`; `k10 = 1 + 0.3t + 0.2r`;
/// `k4 = 0.1 + 0.05·t·r`), used to cross-check invariant slope formulas
/// against finite differences.
pub fn synthetic_class1_field(t: f64, r: f64) -> ConnectionField {
    case1_field(&Case1Params {
        a: 1.0,
        b: 1.0,
        c: 1.0,
        k4: 0.1 + 0.05 * t * r,
        k10: 1.0 + 0.3 * t + 0.2 * r,
        k4_t: 0.05 * r,
        k4_r: 0.05 * t,
        k10_t: 0.3,
        k10_r: 0.2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::so3::classify::{classify, discriminants, BerwaldClass};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn case1_invariants_match_closed_forms() {
        let mut rng = rng(11);
        for _ in 0..50 {
            let p = draw_case1(&mut rng);
            let inv = case1_field(&p).invariants();
            let Case1Params { a, b, c, .. } = p;
            let abc = a * b + c;
            let beta = abc / b;
            let (pt, q, m, n) = (p.k4_t, p.k4_r, p.k10_t, p.k10_r);
            let expect = [
                b * n - beta * q - a * beta * pt,
                a * beta * q - a * abc * m + a * a * beta * pt,
                q - b * m + a * pt,
                b * n - a * q - a * a * pt - c * m,
                b * n - abc * m,
                -a * m,
                -m,
                -b * m,
                -abc * m,
                -a * n,
                -n,
                -b * n,
                -abc * n,
                1.0 + (2.0 * a * b + c) * p.k10 * p.k10,
            ];
            for (i, e) in expect.iter().enumerate() {
                assert_relative_eq!(inv.a[i], *e, max_relative = 1e-12, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn case2_invariants_match_closed_forms() {
        let mut rng = rng(12);
        for _ in 0..50 {
            let p = draw_case2(&mut rng);
            let inv = case2_field(&p).invariants();
            let Case2Params { a, b, .. } = p;
            let t_comb = a * p.k4 + p.k6;
            let w_comb = b * p.k10 - t_comb;
            let (pt, q, s, u6r, m, n) =
                (p.k4_t, p.k4_r, p.k6_t, p.k6_r, p.k10_t, p.k10_r);
            let a7 = -m + w_comb * p.k10;
            let a11 = -n - a * w_comb * p.k10;
            let a5 = b * n + a * b * m;
            let a3 = q - s + 2.0 * t_comb * w_comb;
            let a4 = u6r + a * a * pt + 2.0 * a * s - 2.0 * a * t_comb * w_comb;
            let a1 = 2.0 * a5 - a4;
            let a2 = a * a * a3 + 2.0 * a * (a4 - a5);
            for (i, e) in [
                (1, a1),
                (2, a2),
                (3, a3),
                (4, a4),
                (5, a5),
                (6, a * a7),
                (7, a7),
                (8, b * a7),
                (11, a11),
                (14, 1.0), // 2ab + c = 0 here
            ] {
                assert_relative_eq!(inv.a(i), e, max_relative = 1e-12, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn case3_invariants_match_closed_forms() {
        let mut rng = rng(13);
        for _ in 0..50 {
            let p = draw_case3(&mut rng);
            let inv = case3_field(&p).invariants();
            let Case3Params { a, c, .. } = p;
            let (g1, h1, m, n) = (p.k1_t, p.k1_r, p.k10_t, p.k10_r);
            let a1 = h1 + a * g1;
            let expect = [
                a1,
                -a * a1 - a * c * m,
                0.0,
                -c * m,
                -c * m,
                -a * m,
                -m,
                0.0,
                -c * m,
                -a * n,
                -n,
                0.0,
                -c * n,
                1.0 + c * p.k10 * p.k10,
            ];
            for (i, e) in expect.iter().enumerate() {
                assert_relative_eq!(inv.a[i], *e, max_relative = 1e-12, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn angular_invariant_closed_form_holds_on_all_cases() {
        // a14 = 1 + (2ab + c)·k10² across every family.
        let mut rng = rng(14);
        for _ in 0..200 {
            let p = draw_case1(&mut rng);
            let inv = case1_field(&p).invariants();
            let predicted = 1.0 + (2.0 * p.a * p.b + p.c) * p.k10 * p.k10;
            assert_relative_eq!(inv.a(14), predicted, max_relative = 1e-12, epsilon = 1e-13);

            let p = draw_case3(&mut rng);
            let inv = case3_field(&p).invariants();
            let predicted = 1.0 + p.c * p.k10 * p.k10;
            assert_relative_eq!(inv.a(14), predicted, max_relative = 1e-12, epsilon = 1e-13);
        }
    }

    #[test]
    fn generic_case1_classifies_as_power_law() {
        let mut rng = rng(15);
        let mut seen = 0;
        for _ in 0..40 {
            let p = draw_case1(&mut rng);
            let cls = classify(&case1_field(&p), 1e-9);
            // Generic slopes make D nonzero; tuned draws cover other classes.
            if cls.class == BerwaldClass::PowerLaw {
                seen += 1;
                let d = cls.discriminants.unwrap();
                assert_relative_eq!(
                    cls.exponent.unwrap(),
                    d.f / d.d,
                    max_relative = 1e-14
                );
            }
        }
        assert!(seen >= 35, "only {seen}/40 generic draws were power-law");
    }

    #[test]
    fn tuned_class2_draws_classify_as_exponential() {
        let mut rng = rng(16);
        for _ in 0..40 {
            let p = draw_class2(&mut rng);
            let cls = classify(&case2_field(&p), 1e-9);
            assert_eq!(
                cls.class,
                BerwaldClass::Exponential,
                "draw {p:?} gave {:?} ({:?})",
                cls.class,
                cls.reason
            );
            assert!(cls.exponent.is_some());
        }
    }

    #[test]
    fn tuned_class3_draws_classify_as_one_variable() {
        let mut rng = rng(17);
        for _ in 0..40 {
            let p = draw_class3(&mut rng);
            let field = case1_field(&p);
            let cls = classify(&field, 1e-9);
            assert_eq!(
                cls.class,
                BerwaldClass::OneVariable,
                "draw {p:?} gave {:?} ({:?})",
                cls.class,
                cls.reason
            );
            // The tuned draw is still curved.
            assert!(field.invariants().max_normalized() > 1e-3);
        }
    }

    #[test]
    fn flat_draws_have_no_curvature_at_all() {
        let mut rng = rng(18);
        for _ in 0..40 {
            let p = draw_flat(&mut rng);
            let inv = case1_field(&p).invariants();
            assert!(
                inv.max_normalized() < 1e-13,
                "flat draw {p:?} left residual {}",
                inv.max_normalized()
            );
        }
    }

    #[test]
    fn group2_draws_have_zero_angular_block_and_unit_a14() {
        let mut rng = rng(19);
        for _ in 0..20 {
            let f = draw_group2(&mut rng);
            assert!(f.is_angular_block_zero(1e-12));
            let inv = f.invariants();
            assert_eq!(inv.a(14), 1.0);
            for i in 5..=13 {
                assert_eq!(inv.a(i), 0.0, "a{i} should vanish");
            }
        }
    }

    #[test]
    fn tr_vacuum_case1_draws_force_the_expected_identities() {
        let mut rng = rng(20);
        for _ in 0..60 {
            let p = draw_case1_ricci_flat_tr(&mut rng);
            let field = case1_field(&p);
            let inv = field.invariants();
            let res = inv.ricci_residuals();
            assert!(res[0] < 1e-13 && res[1] < 1e-13 && res[2] < 1e-13, "{res:?}");
            let (a, b, c) = (p.a, p.b, p.c);
            let (a7, a11) = (inv.a(7), inv.a(11));
            assert_relative_eq!(
                inv.a(1),
                3.0 * (c + a * b) * a7 - b * a11,
                max_relative = 1e-11,
                epsilon = 1e-12
            );
            assert_relative_eq!(
                inv.a(2),
                -2.0 * a * (c + a * b) * a7,
                max_relative = 1e-11,
                epsilon = 1e-12
            );
            assert_relative_eq!(
                inv.a(4),
                (c + 3.0 * a * b) * a7 - b * a11,
                max_relative = 1e-11,
                epsilon = 1e-12
            );
            // The discriminant ratio is pinned to 3/2 and D to -2(2ab+c)a7.
            let s = crate::so3::classify::StructureFunctions { a, b, c };
            let d = discriminants(&inv, &s);
            assert_relative_eq!(d.f / d.d, 1.5, max_relative = 1e-10);
            assert_relative_eq!(
                d.d,
                -2.0 * (2.0 * a * b + c) * a7,
                max_relative = 1e-10,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn tr_vacuum_case2_draws_force_the_expected_identities() {
        let mut rng = rng(21);
        for _ in 0..60 {
            let p = draw_case2_ricci_flat_tr(&mut rng);
            let field = case2_field(&p);
            let inv = field.invariants();
            let res = inv.ricci_residuals();
            assert!(res[0] < 1e-12 && res[1] < 1e-12 && res[2] < 1e-12, "{res:?}");
            let (a, b) = (p.a, p.b);
            let (a7, a11) = (inv.a(7), inv.a(11));
            // Forced: a4 = -2b·a11, a2 = -2ab·a11, F = 0, a5 = -b(a·a7 + a11).
            assert_relative_eq!(inv.a(4), -2.0 * b * a11, max_relative = 1e-11, epsilon = 1e-12);
            assert_relative_eq!(
                inv.a(2),
                -2.0 * a * b * a11,
                max_relative = 1e-11,
                epsilon = 1e-12
            );
            assert_relative_eq!(
                inv.a(5),
                -b * (a * a7 + a11),
                max_relative = 1e-11,
                epsilon = 1e-12
            );
            let s = crate::so3::classify::StructureFunctions { a, b, c: -2.0 * a * b };
            let d = discriminants(&inv, &s);
            assert!(
                d.f.abs() <= 1e-12 * d.f_scale.max(1.0),
                "F = {} (scale {})",
                d.f,
                d.f_scale
            );
        }
    }

    #[test]
    fn tr_vacuum_case3_draws_force_the_expected_identities() {
        let mut rng = rng(22);
        for _ in 0..60 {
            let p = draw_case3_ricci_flat_tr(&mut rng);
            let inv = case3_field(&p).invariants();
            let res = inv.ricci_residuals();
            assert!(res[0] < 1e-13 && res[1] < 1e-13 && res[2] < 1e-13, "{res:?}");
            let (a7, a11) = (inv.a(7), inv.a(11));
            assert_relative_eq!(inv.a(1), 3.0 * p.c * a7, max_relative = 1e-11, epsilon = 1e-12);
            assert_relative_eq!(a11, -p.a * a7, max_relative = 1e-11, epsilon = 1e-12);
            let s = crate::so3::classify::StructureFunctions { a: p.a, b: 0.0, c: p.c };
            let d = discriminants(&inv, &s);
            assert_relative_eq!(d.d, 2.0 * p.c * p.k10_t, max_relative = 1e-11, epsilon = 1e-12);
            assert_relative_eq!(d.f / d.d, 1.5, max_relative = 1e-10);
        }
    }

    #[test]
    fn synthetic_field_slopes_match_finite_differences() {
        // The a14 slope formula: ∂_t a14 = -2·k10·(2ab+c)·a7 (and the same
        // with a11 for ∂_r), checked against central differences of the
        // field itself.
        let (t, r) = (0.4, -0.3);
        let f0 = synthetic_class1_field(t, r);
        let inv0 = f0.invariants();
        let h = 1e-5;
        let a14 = |t: f64, r: f64| synthetic_class1_field(t, r).invariants().a(14);
        let dt_fd = (a14(t + h, r) - a14(t - h, r)) / (2.0 * h);
        let dr_fd = (a14(t, r + h) - a14(t, r - h)) / (2.0 * h);
        let k10 = f0.k[9];
        let factor = -2.0 * k10 * (2.0 * 1.0 * 1.0 + 1.0);
        assert_relative_eq!(dt_fd, factor * inv0.a(7), max_relative = 1e-8);
        assert_relative_eq!(dr_fd, factor * inv0.a(11), max_relative = 1e-8);
        // The synthetic field sits well inside the power-law regime.
        let cls = classify(&f0, 1e-9);
        assert_eq!(cls.class, BerwaldClass::PowerLaw);
    }
}
