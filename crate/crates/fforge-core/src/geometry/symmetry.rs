//! Symmetry diagnostics: rotational invariance via the complete lifts of the
//! rotation generators, and positive 2-homogeneity via the Euler identity.
//!
//! A vector field `X = X^i(x) ∂_i` on the base acts on functions of `(x, ẋ)`
//! through its complete lift `X^i ∂_i + ẋ^j (∂_j X^i) ∂̇_i`; the function is
//! invariant under the flow of `X` iff the lift annihilates it. The three
//! generators used here are the rotations
//!
//! * `X₁ =  sin φ ∂_θ + cot θ cos φ ∂_φ`
//! * `X₂ = −cos φ ∂_θ + cot θ sin φ ∂_φ`
//! * `X₃ =  ∂_φ`
//!
//! whose lifts only involve first derivatives of `L`, so one low-order jet
//! per sample suffices.

use crate::dsl::FinslerSpec;
use crate::jet::{JetConfig, MultiIndex, FIRST_VELOCITY};
use crate::tol::residual_with_scales;

use super::pipeline::l_jet;
use super::GeometryError;

/// Budget for the symmetry residuals: first derivatives only.
pub const CFG_KILLING: JetConfig =
    JetConfig { max_total_order: 1, max_position_order: 1, max_velocity_order: 1 };

/// Normalized residuals of the three lifted rotation generators applied to
/// the function at a sample. All three vanish (to roundoff) iff the function
/// is rotation-invariant there.
///
/// Each residual is `|Σ terms| / max |term|`, so cancellation quality is
/// measured independently of the overall magnitude of `L`.
pub fn killing_residuals(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
) -> Result<[f64; 3], GeometryError> {
    let l = l_jet(spec, position, velocity, CFG_KILLING)?;
    let d_theta = l.extract_partial(MultiIndex::unit(2))?;
    let d_phi = l.extract_partial(MultiIndex::unit(3))?;
    let dv_theta = l.extract_partial(MultiIndex::unit(FIRST_VELOCITY + 2))?;
    let dv_phi = l.extract_partial(MultiIndex::unit(FIRST_VELOCITY + 3))?;
    let (theta, phi) = (position[2], position[3]);
    let (vth, vph) = (velocity[2], velocity[3]);
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let cot = ct / st;
    let inv_s2 = 1.0 / (st * st);

    let norm = |terms: &[f64]| {
        let pairs: Vec<(f64, f64)> = terms.iter().map(|&t| (t, t.abs())).collect();
        residual_with_scales(&pairs)
    };
    // Complete lift of X₁: base part plus ẋ^j ∂_j X^i on the velocities.
    let x1 = norm(&[
        sp * d_theta,
        cot * cp * d_phi,
        vph * cp * dv_theta,
        -vth * cp * inv_s2 * dv_phi,
        -vph * cot * sp * dv_phi,
    ]);
    let x2 = norm(&[
        -cp * d_theta,
        cot * sp * d_phi,
        vph * sp * dv_theta,
        -vth * sp * inv_s2 * dv_phi,
        vph * cot * cp * dv_phi,
    ]);
    // X₃ has constant coefficients, so its lift is just ∂_φ. Normalize
    // against the scale of the other first derivatives of L.
    let scale = d_theta
        .abs()
        .max(dv_theta.abs())
        .max(dv_phi.abs())
        .max(d_phi.abs());
    let x3 = residual_with_scales(&[(d_phi, scale)]);
    Ok([x1, x2, x3])
}

/// Normalized residual of the Euler identity `ẋ^a ∂̇_a L − 2 L = 0`, the
/// infinitesimal form of positive 2-homogeneity in the velocities.
pub fn euler_residual(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
) -> Result<f64, GeometryError> {
    let cfg = JetConfig { max_total_order: 1, max_position_order: 0, max_velocity_order: 1 };
    let l = l_jet(spec, position, velocity, cfg)?;
    let mut terms = Vec::with_capacity(5);
    for a in 0..4 {
        let t = velocity[a] * l.extract_partial(MultiIndex::unit(FIRST_VELOCITY + a))?;
        terms.push((t, t.abs()));
    }
    let t = -2.0 * l.value();
    terms.push((t, t.abs()));
    Ok(residual_with_scales(&terms))
}
