//! Independent cross-checks for the jet pipeline: finite differences on the
//! plain scalar evaluator, and closed-form formulas valid for functions
//! quadratic in the velocities.
//!
//! Nothing here touches the jet machinery — every number comes from repeated
//! calls to [`FinslerSpec::eval_scalar`] plus ordinary dense linear algebra,
//! so agreement between this module and the jet pipeline validates both the
//! Taylor arithmetic and the tensor formulas on top of it.
//!
//! Stencils are fourth-order central differences; with steps around `1e-3`
//! to `1e-2` they reach `1e-8`-ish accuracy on smooth inputs before roundoff
//! takes over.

use crate::dsl::FinslerSpec;
use crate::geometry::{invert4, solve4, GeometryError};

/// Fourth-order central first derivative of `f` at `0`.
pub fn d1(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h)
}

/// Fourth-order central second derivative of `f` at `0`.
pub fn d2(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h))
        / (12.0 * h * h)
}

/// Mixed second derivative `∂_x ∂_y f` at `(0, 0)` by nesting [`d1`].
pub fn mixed(f: impl Fn(f64, f64) -> f64, h: f64) -> f64 {
    d1(|x| d1(|y| f(x, y), h), h)
}

/// The velocity Hessian `½ ∂̇_a ∂̇_b L` by finite differences.
pub fn metric_fd(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
    h: f64,
) -> [[f64; 4]; 4] {
    let mut g = [[0.0; 4]; 4];
    for a in 0..4 {
        g[a][a] = 0.5
            * d2(
                |s| {
                    let mut v = velocity;
                    v[a] += s;
                    spec.eval_scalar(position, v)
                },
                h,
            );
        for b in a + 1..4 {
            let v = 0.5
                * mixed(
                    |x, y| {
                        let mut v = velocity;
                        v[a] += x;
                        v[b] += y;
                        spec.eval_scalar(position, v)
                    },
                    h,
                );
            g[a][b] = v;
            g[b][a] = v;
        }
    }
    g
}

/// The spray coefficients `G^a = ¼ g^{ab}(ẋ^c ∂_c ∂̇_b L − ∂_b L)` with every
/// ingredient taken by finite differences.
pub fn spray_fd(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
    h: f64,
) -> Result<[f64; 4], GeometryError> {
    let g = metric_fd(spec, position, velocity, h);
    let mut rhs = [0.0; 4];
    for b in 0..4 {
        let mut acc = -d1(
            |s| {
                let mut p = position;
                p[b] += s;
                spec.eval_scalar(p, velocity)
            },
            h,
        );
        for c in 0..4 {
            acc += velocity[c]
                * mixed(
                    |x, y| {
                        let mut p = position;
                        let mut v = velocity;
                        p[c] += x;
                        v[b] += y;
                        spec.eval_scalar(p, v)
                    },
                    h,
                );
        }
        rhs[b] = 0.25 * acc;
    }
    solve4(&g, &rhs)
}

/// The metric of a function quadratic in the velocities, by polarization —
/// exact up to roundoff, no step parameter.
///
/// Only meaningful when `L(x, ·)` really is a quadratic form; on other
/// functions the result is just some symmetrization of samples.
pub fn metric_polarization(spec: &FinslerSpec, position: [f64; 4]) -> [[f64; 4]; 4] {
    let q = |v: [f64; 4]| spec.eval_scalar(position, v);
    let mut g = [[0.0; 4]; 4];
    for a in 0..4 {
        let mut ea = [0.0; 4];
        ea[a] = 1.0;
        g[a][a] = q(ea);
        for b in a + 1..4 {
            let mut eb = [0.0; 4];
            eb[b] = 1.0;
            let mut eab = ea;
            eab[b] = 1.0;
            let v = 0.5 * (q(eab) - q(ea) - q(eb));
            g[a][b] = v;
            g[b][a] = v;
        }
    }
    g
}

/// Christoffel symbols `Γ^a_bc = ½ g^{ad}(∂_b g_dc + ∂_c g_db − ∂_d g_bc)`
/// of a quadratic function, with the metric from [`metric_polarization`] and
/// its position derivatives by fourth-order differences.
pub fn christoffel_reference(
    spec: &FinslerSpec,
    position: [f64; 4],
    h: f64,
) -> Result<[[[f64; 4]; 4]; 4], GeometryError> {
    let g = metric_polarization(spec, position);
    let ginv = invert4(&g)?;
    // dg[d][a][b] = ∂_d g_ab
    let mut dg = [[[0.0; 4]; 4]; 4];
    for d in 0..4 {
        let at = |s: f64| {
            let mut p = position;
            p[d] += s;
            metric_polarization(spec, p)
        };
        let (p2, p1, m1, m2) = (at(2.0 * h), at(h), at(-h), at(-2.0 * h));
        for a in 0..4 {
            for b in 0..4 {
                dg[d][a][b] =
                    (-p2[a][b] + 8.0 * p1[a][b] - 8.0 * m1[a][b] + m2[a][b]) / (12.0 * h);
            }
        }
    }
    let mut gamma = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let mut acc = 0.0;
                for d in 0..4 {
                    acc += ginv[a][d] * (dg[b][d][c] + dg[c][d][b] - dg[d][b][c]);
                }
                gamma[a][b][c] = 0.5 * acc;
            }
        }
    }
    Ok(gamma)
}

/// Riemann tensor `R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce} Γ^e_{db}
/// − Γ^a_{de} Γ^e_{cb}` of a quadratic function, differencing
/// [`christoffel_reference`] in position.
pub fn riemann_reference(
    spec: &FinslerSpec,
    position: [f64; 4],
    h: f64,
) -> Result<[[[[f64; 4]; 4]; 4]; 4], GeometryError> {
    let gamma = christoffel_reference(spec, position, h)?;
    // dgamma[c][a][d][b] = ∂_c Γ^a_db
    let mut dgamma = [[[[0.0; 4]; 4]; 4]; 4];
    for c in 0..4 {
        let at = |s: f64| {
            let mut p = position;
            p[c] += s;
            christoffel_reference(spec, p, h)
        };
        let (p2, p1, m1, m2) = (at(2.0 * h)?, at(h)?, at(-h)?, at(-2.0 * h)?);
        for a in 0..4 {
            for d in 0..4 {
                for b in 0..4 {
                    dgamma[c][a][d][b] = (-p2[a][d][b] + 8.0 * p1[a][d][b]
                        - 8.0 * m1[a][d][b]
                        + m2[a][d][b])
                        / (12.0 * h);
                }
            }
        }
    }
    let mut r = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut acc = dgamma[c][a][d][b] - dgamma[d][a][c][b];
                    for e in 0..4 {
                        acc += gamma[a][c][e] * gamma[e][d][b] - gamma[a][d][e] * gamma[e][c][b];
                    }
                    r[a][b][c][d] = acc;
                }
            }
        }
    }
    Ok(r)
}

/// The connection curvature of a quadratic function through the Riemann
/// route: `R^a_bc = R^a_{ecb} ẋ^e`.
pub fn spray_curvature_reference(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
    h: f64,
) -> Result<[[[f64; 4]; 4]; 4], GeometryError> {
    let riem = riemann_reference(spec, position, h)?;
    let mut r = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let mut acc = 0.0;
                for e in 0..4 {
                    acc += riem[a][e][c][b] * velocity[e];
                }
                r[a][b][c] = acc;
            }
        }
    }
    Ok(r)
}

/// The trace curvature of a quadratic function through the Ricci route:
/// `R = −Ric_{eb} ẋ^e ẋ^b` with `Ric_{eb} = R^a_{eab}`.
pub fn ricci_trace_reference(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
    h: f64,
) -> Result<f64, GeometryError> {
    let riem = riemann_reference(spec, position, h)?;
    let mut acc = 0.0;
    for e in 0..4 {
        for b in 0..4 {
            let mut ric = 0.0;
            for a in 0..4 {
                ric += riem[a][e][a][b];
            }
            acc -= ric * velocity[e] * velocity[b];
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry;
    use crate::so3::power_law_text;
    use approx::assert_relative_eq;

    fn schwarzschild() -> FinslerSpec {
        FinslerSpec::parse(
            "name: schw\nparam rs = 1\nL: let f = 1 - rs/r in f*dt^2 - dr^2/f - r^2*w^2\n",
        )
        .unwrap()
    }

    fn de_sitter() -> FinslerSpec {
        FinslerSpec::parse("name: desitter\nL: dt^2 - exp(2*t)*(dr^2 + r^2*w^2)\n").unwrap()
    }

    fn sample() -> ([f64; 4], [f64; 4]) {
        ([0.2, 5.0, 1.1, 0.4], [1.2, 0.2, 0.05, 0.04])
    }

    #[test]
    fn fd_metric_matches_the_jet_metric_on_a_nonquadratic_function() {
        let text = power_law_text(0.3, 1.0, 0.0, 0.0, -1.0, 1.0);
        let spec = FinslerSpec::parse(&text).unwrap();
        let (pos, vel) = sample();
        let jet = geometry::metric(&spec, pos, vel).unwrap();
        let fd = metric_fd(&spec, pos, vel, 1e-2);
        let scale = jet.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        for a in 0..4 {
            for b in 0..4 {
                assert!(
                    (jet[a][b] - fd[a][b]).abs() <= 1e-6 * scale,
                    "g[{a}][{b}]: jet {} fd {}",
                    jet[a][b],
                    fd[a][b]
                );
            }
        }
    }

    #[test]
    fn fd_spray_matches_the_jet_spray_on_a_nonquadratic_function() {
        let text = power_law_text(0.3, 1.0, 0.0, 0.0, -1.0, 1.0);
        let spec = FinslerSpec::parse(&text).unwrap();
        let (pos, vel) = sample();
        let jet = geometry::spray(&spec, pos, vel).unwrap().spray;
        let fd = spray_fd(&spec, pos, vel, 1e-2).unwrap();
        let scale = jet.iter().fold(1e-6f64, |m, v| m.max(v.abs()));
        for a in 0..4 {
            assert!(
                (jet[a] - fd[a]).abs() <= 1e-5 * scale,
                "G[{a}]: jet {} fd {}",
                jet[a],
                fd[a]
            );
        }
    }

    #[test]
    fn polarization_metric_is_exact_on_a_quadratic_function() {
        let spec = schwarzschild();
        let (pos, vel) = sample();
        let jet = geometry::metric(&spec, pos, vel).unwrap();
        let pol = metric_polarization(&spec, pos);
        for a in 0..4 {
            for b in 0..4 {
                assert_relative_eq!(jet[a][b], pol[a][b], epsilon = 1e-12, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn christoffel_reference_matches_the_affine_connection() {
        let spec = schwarzschild();
        let (pos, vel) = sample();
        let jet = geometry::berwald_coefficients(&spec, pos, vel).unwrap();
        let reference = christoffel_reference(&spec, pos, 1e-3).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    assert!(
                        (jet[a][b][c] - reference[a][b][c]).abs() < 1e-9,
                        "Γ[{a}][{b}][{c}]: jet {} reference {}",
                        jet[a][b][c],
                        reference[a][b][c]
                    );
                }
            }
        }
    }

    #[test]
    fn riemann_route_reproduces_the_jet_curvature() {
        let spec = schwarzschild();
        let (pos, vel) = sample();
        let jet = geometry::spray_curvature(&spec, pos, vel).unwrap();
        let reference = spray_curvature_reference(&spec, pos, vel, 1e-3).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    assert!(
                        (jet[a][b][c] - reference[a][b][c]).abs() < 1e-8,
                        "R[{a}][{b}][{c}]: jet {} reference {}",
                        jet[a][b][c],
                        reference[a][b][c]
                    );
                }
            }
        }
    }

    #[test]
    fn expanding_universe_pins_the_sign_and_scale_of_the_trace_curvature() {
        // For L = dt² − e^{2t}(dr² + r² w²) the Ricci tensor is −3 g, so the
        // trace curvature must equal 3 L — in particular +3 on the unit time
        // direction — and the vacuum residual must be exactly 6.
        let spec = de_sitter();
        let pos = [0.1, 2.0, 1.0, 0.5];
        let e_t = [1.0, 0.0, 0.0, 0.0];
        let r = geometry::ricci_scalar(&spec, pos, e_t).unwrap();
        assert_relative_eq!(r, 3.0, epsilon = 1e-9, max_relative = 1e-9);
        let (_, vel) = sample();
        let l = spec.eval_scalar(pos, vel);
        let r_generic = geometry::ricci_scalar(&spec, pos, vel).unwrap();
        assert_relative_eq!(r_generic, 3.0 * l, epsilon = 1e-9, max_relative = 1e-9);
        let reference = ricci_trace_reference(&spec, pos, vel, 1e-3).unwrap();
        assert_relative_eq!(r_generic, reference, epsilon = 1e-7, max_relative = 1e-6);
        let residual = geometry::vacuum_residual(&spec, pos, vel).unwrap();
        assert_relative_eq!(residual, 6.0, epsilon = 1e-8, max_relative = 1e-8);
    }
}
