//! Tensor pipeline of a Finsler function.
//!
//! Every object here is computed from truncated Taylor jets of the metric
//! function `L(x, ẋ)` at a sample point of phase space — no symbolic algebra,
//! no finite differences. One jet evaluation at a budgeted order feeds an
//! entire chain: the velocity Hessian (metric), the Cartan tensor, the
//! geodesic spray, the nonlinear connection, the affine (Berwald) connection,
//! the spray curvature, and the Landsberg tensor, each obtained from the
//! previous by formal differentiation and jet arithmetic.
//!
//! The derivative budget of each entry point is chosen so that the *last*
//! extraction in its chain is still inside the jet's validity certificate;
//! see the `CFG_*` constants. Requesting a deeper chain than the budget
//! allows fails loudly with [`crate::jet::JetError::OrderExceeded`] rather
//! than returning silently truncated numbers.

mod berwald;
mod linalg;
mod pipeline;
mod symmetry;

pub use berwald::{berwald_test, BerwaldReport};
pub use linalg::{invert4, solve4, solve4_jets};
pub use pipeline::{
    berwald_coefficients, cartan, landsberg, mean_cartan, mean_cartan_contracted, mean_landsberg,
    metric, metric_compatibility, ricci_from_curvature, ricci_scalar, spray, spray_curvature,
    spray_values, vacuum_residual, SprayData, SprayJets, CFG_BERWALD, CFG_CARTAN, CFG_CURVATURE,
    CFG_GEODESIC, CFG_HESSIAN, CFG_METRIC, CFG_SPRAY,
};
pub use symmetry::{euler_residual, killing_residuals, CFG_KILLING};

use crate::dsl::DslError;
use crate::jet::JetError;

/// Errors of the tensor pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    /// The sample point violates the declared domain of the function.
    #[error("sample outside the declared domain (domain expression = {value:.6e}, must be > 0)")]
    OutsideDomain { value: f64 },

    /// `L` vanishes at the sample relative to the metric scale, so ratios
    /// like `R/L` are undefined there (the sample sits on the null cone).
    #[error("function value {l_value:.6e} is null at this sample (scale {scale:.6e})")]
    NullSample { l_value: f64, scale: f64 },

    /// The velocity Hessian could not be inverted at the sample.
    #[error("velocity Hessian is degenerate at this sample (pivot {pivot:.6e})")]
    DegenerateMetric { pivot: f64 },

    /// A sampling routine could not collect enough admissible samples.
    #[error("only {got} admissible velocity samples at a base point, need at least {need}")]
    InsufficientSamples { got: usize, need: usize },

    /// Jet arithmetic failed (division by zero jet, domain error, or an
    /// extraction beyond the validity certificate).
    #[error(transparent)]
    Jet(#[from] JetError),

    /// Expression evaluation failed.
    #[error(transparent)]
    Dsl(#[from] DslError),
}

/// Relative threshold under which a Hessian pivot counts as degenerate.
pub(crate) const PIVOT_RTOL: f64 = 1e-12;

/// Relative threshold under which `L` counts as null for `R/L`-type ratios.
pub(crate) const NULL_RTOL: f64 = 1e-12;
