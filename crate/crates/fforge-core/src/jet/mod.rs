//! Truncated multivariate Taylor arithmetic over the eight phase-space
//! variables.
//!
//! A [`Jet`] stores the Taylor coefficients of a scalar function around a
//! sample point `(t, r, theta, phi, dt, dr, dtheta, dphi)`, truncated by a
//! [`JetConfig`]. Arithmetic on jets propagates full derivative information:
//! the coefficient of the monomial `α` in a jet equals `∂^α f / α!` evaluated
//! at the sample point, so mixed partials of any admissible order fall out of
//! a single evaluation.
//!
//! The variable classes matter: variables `0..4` are *positions* and `4..8`
//! are *velocities*, and the truncation bounds are enforced per class as well
//! as in total degree. All downstream tensor computations budget their
//! derivative needs through these caps — a jet whose caps have been exhausted
//! refuses extraction with [`JetError::OrderExceeded`] instead of silently
//! returning a truncated (wrong) coefficient.

mod index;
mod taylor;

pub use index::MultiIndex;
pub use taylor::Jet;

/// Number of base variables of the jet algebra.
pub const NUM_VARS: usize = 8;

/// Canonical variable names, in seed order.
pub const VAR_NAMES: [&str; NUM_VARS] = ["t", "r", "theta", "phi", "dt", "dr", "dtheta", "dphi"];

/// Index of the first velocity variable; variables below this are positions.
pub const FIRST_VELOCITY: usize = 4;

/// Truncation bounds for jet storage and validity.
///
/// `max_total_order` bounds the total degree of a stored monomial;
/// `max_position_order` and `max_velocity_order` bound the partial degrees in
/// the position block `(t, r, theta, phi)` and the velocity block
/// `(dt, dr, dtheta, dphi)` separately. The per-class bounds are enforced at
/// multiplication time, which keeps products from accumulating monomials that
/// no later extraction could legally use.
///
/// A config is also the *validity certificate* of a jet: operations combine
/// configs by taking the componentwise minimum, and formal differentiation
/// decrements the budget of the differentiated class. Extraction beyond the
/// certificate fails loudly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JetConfig {
    pub max_total_order: u8,
    pub max_position_order: u8,
    pub max_velocity_order: u8,
}

impl JetConfig {
    /// Sentinel for exactly-known jets (constants and polynomials of seeds
    /// whose expansion terminates). Not exported; arithmetic with any finite
    /// jet immediately demotes to the finite bounds.
    pub(crate) const EXACT: JetConfig = JetConfig {
        max_total_order: u8::MAX,
        max_position_order: u8::MAX,
        max_velocity_order: u8::MAX,
    };

    /// Creates a config.
    ///
    /// # Panics
    ///
    /// Panics if `max_total_order` is smaller than either per-class bound:
    /// such a config could never store the partials its class bounds promise.
    pub fn new(max_total_order: u8, max_position_order: u8, max_velocity_order: u8) -> Self {
        assert!(
            max_total_order >= max_position_order && max_total_order >= max_velocity_order,
            "max_total_order must dominate both class bounds"
        );
        JetConfig { max_total_order, max_position_order, max_velocity_order }
    }

    /// Whether the monomial `idx` is inside the truncation bounds.
    pub fn admits(&self, idx: MultiIndex) -> bool {
        idx.total_degree() <= self.max_total_order
            && idx.position_degree() <= self.max_position_order
            && idx.velocity_degree() <= self.max_velocity_order
    }

    /// Componentwise minimum: the validity certificate of a sum or product.
    pub fn meet(&self, other: &JetConfig) -> JetConfig {
        JetConfig {
            max_total_order: self.max_total_order.min(other.max_total_order),
            max_position_order: self.max_position_order.min(other.max_position_order),
            max_velocity_order: self.max_velocity_order.min(other.max_velocity_order),
        }
    }

    pub(crate) fn is_exact(&self) -> bool {
        *self == Self::EXACT
    }
}

impl Default for JetConfig {
    /// Defaults sized for the curvature pipeline: second position derivatives
    /// combined with up to fourth velocity derivatives of the metric function.
    fn default() -> Self {
        JetConfig { max_total_order: 5, max_position_order: 2, max_velocity_order: 4 }
    }
}

/// Errors of the jet algebra.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum JetError {
    /// Division by a jet whose value (constant term) is zero.
    #[error("division by a jet with zero constant term")]
    DivisionByZero,

    /// An elementary function was applied outside its domain, e.g. `ln` or a
    /// real power of a jet with non-positive constant term, or `abs` at zero.
    #[error("domain error: {func} applied to jet with constant term {value}")]
    Domain { func: &'static str, value: f64 },

    /// A partial derivative beyond the jet's validity certificate was
    /// requested.
    #[error("partial {requested} exceeds jet validity (total ≤ {max_total}, position ≤ {max_position}, velocity ≤ {max_velocity})")]
    OrderExceeded {
        requested: MultiIndex,
        max_total: u8,
        max_position: u8,
        max_velocity: u8,
    },
}
