//! From the function jet to the tensor chain: metric, Cartan tensor,
//! geodesic spray, nonlinear and affine connections, curvature, and the
//! Landsberg tensor.
//!
//! Index conventions: latin indices `a, b, c, d ∈ {0..4}` label the
//! coordinates `(t, r, θ, φ)`; the corresponding velocity seed of the jet
//! algebra is `FIRST_VELOCITY + a`. Writing `∂_a` for a position derivative
//! and `∂̇_a` for a velocity derivative, the chain is
//!
//! * metric           `g_ab  = ½ ∂̇_a ∂̇_b L`
//! * Cartan tensor    `C_abc = ¼ ∂̇_a ∂̇_b ∂̇_c L`
//! * spray            `G^a   = ¼ g^{ab} (ẋ^c ∂̇_b ∂_c L − ∂_b L)`
//! * nonlinear conn.  `N^a_b = ∂̇_b G^a`
//! * affine conn.     `Γ^a_bc = ∂̇_b ∂̇_c G^a`
//! * curvature        `R^a_bc = ∂_c N^a_b − N^d_c ∂̇_d N^a_b − (b ↔ c)`
//! * trace curvature  `R     = R^a_ab ẋ^b`
//! * Landsberg        `S_abc = ẋ^d δ_d C_abc − N^d_a C_dbc − N^d_b C_adc − N^d_c C_abd`
//!
//! with `δ_d = ∂_d − N^e_d ∂̇_e` the horizontal derivative. Every step is jet
//! arithmetic on a single evaluation of `L`, so the derivative budget of the
//! entry config has to cover the whole chain; the `CFG_*` constants encode
//! those budgets and each operation documents its own.

use std::array::from_fn;

use crate::dsl::FinslerSpec;
use crate::jet::{Jet, JetConfig, JetError, MultiIndex, FIRST_VELOCITY};
use crate::tol::residual_with_scales;

use super::linalg::{invert4, solve4, solve4_jets};
use super::GeometryError;

/// Budget for the metric alone: two velocity derivatives.
pub const CFG_METRIC: JetConfig =
    JetConfig { max_total_order: 2, max_position_order: 0, max_velocity_order: 2 };

/// Budget for the Cartan tensor (and the metric): three velocity derivatives.
pub const CFG_CARTAN: JetConfig =
    JetConfig { max_total_order: 3, max_position_order: 0, max_velocity_order: 3 };

/// Budget for spray and nonlinear connection values.
pub const CFG_SPRAY: JetConfig =
    JetConfig { max_total_order: 4, max_position_order: 1, max_velocity_order: 3 };

/// Budget for the affine connection coefficients `∂̇∂̇G`.
pub const CFG_BERWALD: JetConfig =
    JetConfig { max_total_order: 5, max_position_order: 1, max_velocity_order: 4 };

/// Budget for curvature, Landsberg, and compatibility checks: one position
/// derivative of the connection on top of [`CFG_BERWALD`]'s needs.
pub const CFG_CURVATURE: JetConfig =
    JetConfig { max_total_order: 5, max_position_order: 2, max_velocity_order: 4 };

/// Budget for the velocity Hessian of the trace curvature: the contracted
/// curvature must survive as a jet of velocity order two.
pub const CFG_HESSIAN: JetConfig =
    JetConfig { max_total_order: 6, max_position_order: 2, max_velocity_order: 6 };

/// Budget for the right-hand side of the geodesic equation only (plain
/// values, no connection derivatives) — the integrator's fast path.
pub const CFG_GEODESIC: JetConfig =
    JetConfig { max_total_order: 2, max_position_order: 1, max_velocity_order: 2 };

/// Evaluates the function jet after checking the declared domain.
pub(crate) fn l_jet(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
    config: JetConfig,
) -> Result<Jet, GeometryError> {
    if let Some(value) = spec.domain_value(position, velocity) {
        if !(value > 0.0) {
            return Err(GeometryError::OutsideDomain { value });
        }
    }
    Ok(spec.eval_jet(position, velocity, config)?)
}

fn velocity_pair(a: usize, b: usize) -> MultiIndex {
    MultiIndex::unit(FIRST_VELOCITY + a).bump(FIRST_VELOCITY + b)
}

fn metric_values_from(l: &Jet) -> Result<[[f64; 4]; 4], JetError> {
    let mut g = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in a..4 {
            let v = 0.5 * l.extract_partial(velocity_pair(a, b))?;
            g[a][b] = v;
            g[b][a] = v;
        }
    }
    Ok(g)
}

pub(crate) fn cartan_values_from(l: &Jet) -> Result<[[[f64; 4]; 4]; 4], JetError> {
    let mut c = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in a..4 {
            for d in b..4 {
                let idx = velocity_pair(a, b).bump(FIRST_VELOCITY + d);
                let v = 0.25 * l.extract_partial(idx)?;
                set_symmetric3(&mut c, a, b, d, v);
            }
        }
    }
    Ok(c)
}

fn set_symmetric3(t: &mut [[[f64; 4]; 4]; 4], a: usize, b: usize, c: usize, v: f64) {
    for (i, j, k) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
        t[i][j][k] = v;
    }
}

/// The velocity Hessian `g_ab = ½ ∂̇_a ∂̇_b L` at a sample.
pub fn metric(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
) -> Result<[[f64; 4]; 4], GeometryError> {
    let l = l_jet(spec, position, velocity, CFG_METRIC)?;
    Ok(metric_values_from(&l)?)
}

/// The Cartan tensor `C_abc = ¼ ∂̇_a ∂̇_b ∂̇_c L` at a sample. Vanishes
/// identically iff the metric is quadratic in the velocities there.
pub fn cartan(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
) -> Result<[[[f64; 4]; 4]; 4], GeometryError> {
    let l = l_jet(spec, position, velocity, CFG_CARTAN)?;
    Ok(cartan_values_from(&l)?)
}

/// Jet-valued core of the pipeline: the function jet, the metric jets, the
/// spray coefficient jets, and the nonlinear connection jets, all sharing one
/// evaluation of `L`.
///
/// The certificates degrade down the chain: with an entry budget of
/// `(T, P, V)`, the metric jets carry `(T−2, P, V−2)`, the spray jets
/// `(T−2, P−1, min(V−2, ·))`, and the connection jets one velocity order
/// less again. Callers pick the entry budget so the extractions they need
/// stay admissible.
pub struct SprayJets {
    /// Jet of `L` at the entry budget.
    pub l: Jet,
    /// Jets of `g_ab`.
    pub g: [[Jet; 4]; 4],
    /// Jets of the spray coefficients `G^a`.
    pub spray: [Jet; 4],
    /// Jets of the nonlinear connection `N^a_b`.
    pub n: [[Jet; 4]; 4],
    /// The velocity of the sample (needed for contractions with `ẋ`).
    pub velocity: [f64; 4],
}

impl SprayJets {
    /// Runs the jet chain at the given entry budget.
    pub fn compute(
        spec: &FinslerSpec,
        position: [f64; 4],
        velocity: [f64; 4],
        config: JetConfig,
    ) -> Result<Self, GeometryError> {
        let l = l_jet(spec, position, velocity, config)?;
        Self::from_function_jet(l, velocity)
    }

    /// Runs the chain on an already-evaluated function jet.
    pub fn from_function_jet(l: Jet, velocity: [f64; 4]) -> Result<Self, GeometryError> {
        let g: [[Jet; 4]; 4] = from_fn(|a| {
            let da = l.derive(FIRST_VELOCITY + a);
            from_fn(|b| da.derive(FIRST_VELOCITY + b).scale(0.5))
        });
        let xdot: [Jet; 4] =
            from_fn(|c| Jet::variable(FIRST_VELOCITY + c, velocity[c], l.config()));
        let rhs: [Jet; 4] = from_fn(|b| {
            let db = l.derive(FIRST_VELOCITY + b);
            let mut acc = l.derive(b).neg();
            for c in 0..4 {
                acc = acc.add(&xdot[c].mul(&db.derive(c)));
            }
            acc.scale(0.25)
        });
        let spray = solve4_jets(&g, &rhs)?;
        let n: [[Jet; 4]; 4] = from_fn(|a| from_fn(|b| spray[a].derive(FIRST_VELOCITY + b)));
        Ok(SprayJets { l, g, spray, n, velocity })
    }

    /// Plain values of the chain at the sample.
    pub fn values(&self) -> SprayData {
        SprayData {
            metric: from_fn(|a| from_fn(|b| self.g[a][b].value())),
            spray: from_fn(|a| self.spray[a].value()),
            nonlinear: from_fn(|a| from_fn(|b| self.n[a][b].value())),
        }
    }
}

/// Values of the spray chain at a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SprayData {
    /// `g_ab`.
    pub metric: [[f64; 4]; 4],
    /// `G^a`.
    pub spray: [f64; 4],
    /// `N^a_b`.
    pub nonlinear: [[f64; 4]; 4],
}

/// Metric, spray coefficients, and nonlinear connection at a sample.
pub fn spray(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
) -> Result<SprayData, GeometryError> {
    Ok(SprayJets::compute(spec, position, velocity, CFG_SPRAY)?.values())
}

/// Spray coefficient values only, through a value-level solve — the cheap
/// path for the geodesic integrator.
pub fn spray_values(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
) -> Result<[f64; 4], GeometryError> {
    let l = l_jet(spec, position, velocity, CFG_GEODESIC)?;
    let g = metric_values_from(&l)?;
    let mut rhs = [0.0; 4];
    for b in 0..4 {
        let mut acc = -l.extract_partial(MultiIndex::unit(b))?;
        for c in 0..4 {
            let idx = MultiIndex::unit(c).bump(FIRST_VELOCITY + b);
            acc += velocity[c] * l.extract_partial(idx)?;
        }
        rhs[b] = 0.25 * acc;
    }
    solve4(&g, &rhs)
}

/// The affine connection coefficients `Γ^a_bc = ∂̇_b ∂̇_c G^a` at a sample.
///
/// On a Berwald structure these are functions of position alone; their
/// velocity dependence is exactly what [`super::berwald_test`] measures.
pub fn berwald_coefficients(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
) -> Result<[[[f64; 4]; 4]; 4], GeometryError> {
    let sj = SprayJets::compute(spec, position, velocity, CFG_BERWALD)?;
    Ok(berwald_from_spray(&sj))
}

pub(crate) fn berwald_from_spray(sj: &SprayJets) -> [[[f64; 4]; 4]; 4] {
    from_fn(|a| from_fn(|b| from_fn(|c| sj.n[a][b].derive(FIRST_VELOCITY + c).value())))
}

pub(crate) fn curvature_from_spray(sj: &SprayJets) -> [[[f64; 4]; 4]; 4] {
    let nv: [[f64; 4]; 4] = from_fn(|a| from_fn(|b| sj.n[a][b].value()));
    let dn_pos: [[[f64; 4]; 4]; 4] =
        from_fn(|a| from_fn(|b| from_fn(|c| sj.n[a][b].derive(c).value())));
    let dn_vel: [[[f64; 4]; 4]; 4] =
        from_fn(|a| from_fn(|b| from_fn(|d| sj.n[a][b].derive(FIRST_VELOCITY + d).value())));
    from_fn(|a| {
        from_fn(|b| {
            from_fn(|c| {
                let mut v = dn_pos[a][b][c] - dn_pos[a][c][b];
                for d in 0..4 {
                    v -= nv[d][c] * dn_vel[a][b][d];
                    v += nv[d][b] * dn_vel[a][c][d];
                }
                v
            })
        })
    })
}

/// The curvature `R^a_bc` of the nonlinear connection at a sample,
/// antisymmetric in `b, c`. All of it vanishes iff the structure is flat at
/// the sample.
pub fn spray_curvature(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
) -> Result<[[[f64; 4]; 4]; 4], GeometryError> {
    let sj = SprayJets::compute(spec, position, velocity, CFG_CURVATURE)?;
    Ok(curvature_from_spray(&sj))
}

/// Contracts the curvature to the scalar `R = R^a_ab ẋ^b`.
pub fn ricci_from_curvature(r: &[[[f64; 4]; 4]; 4], velocity: [f64; 4]) -> f64 {
    let mut acc = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            acc += r[a][a][b] * velocity[b];
        }
    }
    acc
}

/// The trace curvature `R = R^a_ab ẋ^b` at a sample.
pub fn ricci_scalar(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
) -> Result<f64, GeometryError> {
    let sj = SprayJets::compute(spec, position, velocity, CFG_CURVATURE)?;
    Ok(ricci_from_curvature(&curvature_from_spray(&sj), velocity))
}

/// The trace curvature as a jet in the velocities, from the contracted form
///
/// `R = ∂_b(tr N) ẋ^b − 2 G^d ∂̇_d(tr N) − ∂_a N^a_b ẋ^b + N^d_a N^a_d`,
///
/// which uses `N^d_b ẋ^b = 2 G^d` and `∂̇_d (N^a_b ẋ^b) = 2 N^a_d` (both
/// homogeneity identities) to avoid differentiating the full curvature.
pub(crate) fn ricci_jet(sj: &SprayJets) -> Jet {
    let cfg = sj.l.config();
    let xdot: [Jet; 4] =
        from_fn(|c| Jet::variable(FIRST_VELOCITY + c, sj.velocity[c], cfg));
    let mut trace = sj.n[0][0].clone();
    for a in 1..4 {
        trace = trace.add(&sj.n[a][a]);
    }
    let mut acc: Option<Jet> = None;
    let push = |term: Jet, acc: &mut Option<Jet>| {
        *acc = Some(match acc.take() {
            Some(a) => a.add(&term),
            None => term,
        });
    };
    for b in 0..4 {
        push(xdot[b].mul(&trace.derive(b)), &mut acc);
    }
    for d in 0..4 {
        push(sj.spray[d].mul(&trace.derive(FIRST_VELOCITY + d)).scale(-2.0), &mut acc);
    }
    for a in 0..4 {
        for b in 0..4 {
            push(xdot[b].mul(&sj.n[a][b].derive(a)).neg(), &mut acc);
        }
    }
    for a in 0..4 {
        for d in 0..4 {
            push(sj.n[d][a].mul(&sj.n[a][d]), &mut acc);
        }
    }
    acc.expect("at least one term")
}

/// Residual of the vacuum field equation
///
/// `g^{ab} ∂̇_a ∂̇_b R − 6 R / L`
///
/// at a sample. Zero (to roundoff) on solutions; requires `L ≠ 0` at the
/// sample and a nondegenerate metric.
pub fn vacuum_residual(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
) -> Result<f64, GeometryError> {
    let sj = SprayJets::compute(spec, position, velocity, CFG_HESSIAN)?;
    let g_val: [[f64; 4]; 4] = from_fn(|a| from_fn(|b| sj.g[a][b].value()));
    let ginv = invert4(&g_val)?;
    let l_value = sj.l.value();
    let g_scale = g_val.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let v_scale = velocity.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = (g_scale * v_scale * v_scale).max(f64::MIN_POSITIVE);
    if l_value.abs() <= super::NULL_RTOL * scale {
        return Err(GeometryError::NullSample { l_value, scale });
    }
    let r = ricci_jet(&sj);
    let mut hessian_trace = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            hessian_trace += ginv[a][b] * r.extract_partial(velocity_pair(a, b))?;
        }
    }
    Ok(hessian_trace - 6.0 * r.value() / l_value)
}

fn det3_jets(m: &[[&Jet; 3]; 3]) -> Jet {
    let a = m[1][1].mul(m[2][2]).sub(&m[1][2].mul(m[2][1]));
    let b = m[1][0].mul(m[2][2]).sub(&m[1][2].mul(m[2][0]));
    let c = m[1][0].mul(m[2][1]).sub(&m[1][1].mul(m[2][0]));
    m[0][0].mul(&a).sub(&m[0][1].mul(&b)).add(&m[0][2].mul(&c))
}

pub(crate) fn det4_jets(g: &[[Jet; 4]; 4]) -> Jet {
    let mut acc: Option<Jet> = None;
    for j in 0..4 {
        let minor: [[&Jet; 3]; 3] = from_fn(|r| {
            let mut cols = (0..4).filter(|&c| c != j);
            from_fn(|_| {
                let c = cols.next().expect("three remaining columns");
                &g[r + 1][c]
            })
        });
        let term = g[0][j].mul(&det3_jets(&minor));
        let signed = if j % 2 == 0 { term } else { term.neg() };
        acc = Some(match acc {
            Some(a) => a.add(&signed),
            None => signed,
        });
    }
    acc.expect("four columns")
}

/// `½ ln |det g|` as a jet, the potential of the mean Cartan form.
fn half_log_det(g: &[[Jet; 4]; 4]) -> Result<Jet, GeometryError> {
    let det = det4_jets(g);
    match det.abs().and_then(|a| a.ln()) {
        Ok(j) => Ok(j.scale(0.5)),
        Err(_) => Err(GeometryError::DegenerateMetric { pivot: det.value() }),
    }
}

/// The mean Cartan form `C_a = ∂̇_a ln √|det g|` at a sample.
pub fn mean_cartan(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
) -> Result<[f64; 4], GeometryError> {
    let l = l_jet(spec, position, velocity, CFG_CARTAN)?;
    let g: [[Jet; 4]; 4] = from_fn(|a| {
        let da = l.derive(FIRST_VELOCITY + a);
        from_fn(|b| da.derive(FIRST_VELOCITY + b).scale(0.5))
    });
    let pot = half_log_det(&g)?;
    Ok(from_fn(|a| pot.derive(FIRST_VELOCITY + a).value()))
}

/// The mean Cartan form through the independent contraction
/// `C_a = g^{bc} C_abc` — a cross-check of [`mean_cartan`].
pub fn mean_cartan_contracted(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
) -> Result<[f64; 4], GeometryError> {
    let l = l_jet(spec, position, velocity, CFG_CARTAN)?;
    let g = metric_values_from(&l)?;
    let c = cartan_values_from(&l)?;
    let ginv = invert4(&g)?;
    Ok(from_fn(|a| {
        let mut acc = 0.0;
        for b in 0..4 {
            for d in 0..4 {
                acc += ginv[b][d] * c[a][b][d];
            }
        }
        acc
    }))
}

/// The Landsberg tensor
///
/// `S_abc = ẋ^d ∂_d C_abc − 2 G^e ∂̇_e C_abc − N^d_a C_dbc − N^d_b C_adc − N^d_c C_abd`
///
/// at a sample (the horizontal spray derivative of the Cartan tensor).
/// Vanishes identically on Berwald structures.
pub fn landsberg(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
) -> Result<[[[f64; 4]; 4]; 4], GeometryError> {
    let sj = SprayJets::compute(spec, position, velocity, CFG_CURVATURE)?;
    landsberg_from_spray(&sj)
}

pub(crate) fn landsberg_from_spray(
    sj: &SprayJets,
) -> Result<[[[f64; 4]; 4]; 4], GeometryError> {
    let c_val = cartan_values_from(&sj.l)?;
    let spray_val: [f64; 4] = from_fn(|a| sj.spray[a].value());
    let n_val: [[f64; 4]; 4] = from_fn(|a| from_fn(|b| sj.n[a][b].value()));
    let mut s = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        let da = sj.l.derive(FIRST_VELOCITY + a);
        for b in a..4 {
            let dab = da.derive(FIRST_VELOCITY + b);
            for c in b..4 {
                let c_jet = dab.derive(FIRST_VELOCITY + c).scale(0.25);
                let mut v = 0.0;
                for d in 0..4 {
                    v += sj.velocity[d] * c_jet.derive(d).value();
                    v -= 2.0 * spray_val[d] * c_jet.derive(FIRST_VELOCITY + d).value();
                    v -= n_val[d][a] * c_val[d][b][c]
                        + n_val[d][b] * c_val[a][d][c]
                        + n_val[d][c] * c_val[a][b][d];
                }
                set_symmetric3(&mut s, a, b, c, v);
            }
        }
    }
    Ok(s)
}

/// The mean Landsberg form `S_a = ẋ^b δ_b C_a − N^b_a C_b` at a sample,
/// computed from the `ln √|det g|` potential.
pub fn mean_landsberg(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
) -> Result<[f64; 4], GeometryError> {
    let sj = SprayJets::compute(spec, position, velocity, CFG_CURVATURE)?;
    mean_landsberg_from_spray(&sj)
}

pub(crate) fn mean_landsberg_from_spray(sj: &SprayJets) -> Result<[f64; 4], GeometryError> {
    let pot = half_log_det(&sj.g)?;
    let ca: [Jet; 4] = from_fn(|a| pot.derive(FIRST_VELOCITY + a));
    let spray_val: [f64; 4] = from_fn(|a| sj.spray[a].value());
    let n_val: [[f64; 4]; 4] = from_fn(|a| from_fn(|b| sj.n[a][b].value()));
    Ok(from_fn(|a| {
        let mut v = 0.0;
        for b in 0..4 {
            v += sj.velocity[b] * ca[a].derive(b).value();
            v -= 2.0 * spray_val[b] * ca[a].derive(FIRST_VELOCITY + b).value();
            v -= n_val[b][a] * ca[b].value();
        }
        v
    }))
}

/// Largest normalized residual of the compatibility identity
///
/// `ẋ^d ∂_d g_ab − 2 G^d ∂̇_d g_ab − N^d_a g_db − N^d_b g_ad = 0`
///
/// over the index pairs. The canonical nonlinear connection satisfies this
/// identically, so the value measures pipeline self-consistency, not a
/// property of the input.
pub fn metric_compatibility(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
) -> Result<f64, GeometryError> {
    let sj = SprayJets::compute(spec, position, velocity, CFG_CURVATURE)?;
    let spray_val: [f64; 4] = from_fn(|a| sj.spray[a].value());
    let n_val: [[f64; 4]; 4] = from_fn(|a| from_fn(|b| sj.n[a][b].value()));
    let gm: [[f64; 4]; 4] = from_fn(|a| from_fn(|b| sj.g[a][b].value()));
    let mut worst = 0.0f64;
    for a in 0..4 {
        for b in a..4 {
            let mut terms = Vec::with_capacity(16);
            for d in 0..4 {
                let t = sj.velocity[d] * sj.g[a][b].derive(d).value();
                terms.push((t, t.abs()));
                let t = -2.0 * spray_val[d] * sj.g[a][b].derive(FIRST_VELOCITY + d).value();
                terms.push((t, t.abs()));
                let t = -n_val[d][a] * gm[d][b];
                terms.push((t, t.abs()));
                let t = -n_val[d][b] * gm[a][d];
                terms.push((t, t.abs()));
            }
            worst = worst.max(residual_with_scales(&terms));
        }
    }
    Ok(worst)
}
