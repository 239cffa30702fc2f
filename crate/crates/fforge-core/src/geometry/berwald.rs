//! Velocity-independence test for the affine connection.
//!
//! A structure is Berwald when the affine connection coefficients
//! `Γ^a_bc = ∂̇_b ∂̇_c G^a` depend on position only. The test samples many
//! velocities at each base point, measures the spread of the coefficients
//! across those velocities, and reports it together with two companion
//! quantities: the largest Cartan component (witnessing that the function is
//! genuinely non-quadratic) and the largest mean Landsberg component (which
//! must vanish on any Berwald structure — a cheap necessary condition
//! computed from the same jets).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dsl::FinslerSpec;

use super::pipeline::{
    berwald_from_spray, cartan_values_from, mean_landsberg_from_spray, SprayJets, CFG_CURVATURE,
};
use super::GeometryError;

/// Minimum number of admissible velocity samples per base point.
const MIN_SAMPLES: usize = 10;

/// How many draws to attempt per requested sample before giving up on a
/// base point.
const DRAW_FACTOR: usize = 25;

/// Outcome of [`berwald_test`].
#[derive(Debug, Clone, PartialEq)]
pub struct BerwaldReport {
    /// Number of base points visited.
    pub base_points: usize,
    /// Total admissible velocity samples across all base points.
    pub velocity_samples: usize,
    /// Largest normalized spread of any connection coefficient across the
    /// velocities of a single base point. Near roundoff iff the structure is
    /// Berwald on the sampled region.
    pub max_connection_deviation: f64,
    /// Largest Cartan tensor component seen; zero would mean the function is
    /// quadratic (pseudo-Riemannian) on the sampled region.
    pub max_cartan: f64,
    /// Largest mean Landsberg component seen; a Berwald structure must keep
    /// this at roundoff.
    pub max_mean_landsberg: f64,
}

/// Samples velocities at each base point and measures how much the affine
/// connection coefficients move with the velocity.
///
/// Velocities are drawn uniformly from `velocity_ranges` with a deterministic
/// generator seeded by `seed`; draws outside the declared domain or with a
/// degenerate velocity Hessian are discarded. A base point that cannot
/// collect [`MIN_SAMPLES`] admissible draws aborts the test with
/// [`GeometryError::InsufficientSamples`].
pub fn berwald_test(
    spec: &FinslerSpec,
    base_points: &[[f64; 4]],
    velocities_per_point: usize,
    velocity_ranges: &[(f64, f64); 4],
    seed: u64,
) -> Result<BerwaldReport, GeometryError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total_samples = 0usize;
    let mut max_deviation = 0.0f64;
    let mut max_cartan = 0.0f64;
    let mut max_mean_landsberg = 0.0f64;

    for &position in base_points {
        let mut collected = 0usize;
        let mut lo = [[[f64::INFINITY; 4]; 4]; 4];
        let mut hi = [[[f64::NEG_INFINITY; 4]; 4]; 4];
        let mut gamma_scale = 0.0f64;

        for _ in 0..velocities_per_point.max(MIN_SAMPLES) * DRAW_FACTOR {
            if collected >= velocities_per_point.max(MIN_SAMPLES) {
                break;
            }
            let velocity: [f64; 4] = std::array::from_fn(|i| {
                let (a, b) = velocity_ranges[i];
                rng.gen_range(a..=b)
            });
            if !spec.in_domain(position, velocity) {
                continue;
            }
            let sj = match SprayJets::compute(spec, position, velocity, CFG_CURVATURE) {
                Ok(sj) => sj,
                Err(GeometryError::DegenerateMetric { .. }) => continue,
                Err(e) => return Err(e),
            };
            let gamma = berwald_from_spray(&sj);
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        let v = gamma[a][b][c];
                        lo[a][b][c] = lo[a][b][c].min(v);
                        hi[a][b][c] = hi[a][b][c].max(v);
                        gamma_scale = gamma_scale.max(v.abs());
                    }
                }
            }
            let cartan = cartan_values_from(&sj.l).map_err(GeometryError::from)?;
            for row in cartan.iter().flatten().flatten() {
                max_cartan = max_cartan.max(row.abs());
            }
            let s = mean_landsberg_from_spray(&sj)?;
            for v in s {
                max_mean_landsberg = max_mean_landsberg.max(v.abs());
            }
            collected += 1;
        }

        if collected < MIN_SAMPLES {
            return Err(GeometryError::InsufficientSamples {
                got: collected,
                need: MIN_SAMPLES,
            });
        }
        total_samples += collected;
        let norm = gamma_scale.max(1.0);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let spread = hi[a][b][c] - lo[a][b][c];
                    if spread.is_finite() {
                        max_deviation = max_deviation.max(spread / norm);
                    }
                }
            }
        }
    }

    Ok(BerwaldReport {
        base_points: base_points.len(),
        velocity_samples: total_samples,
        max_connection_deviation: max_deviation,
        max_cartan,
        max_mean_landsberg,
    })
}
