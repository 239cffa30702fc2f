//! Core engine for computing with pseudo-Finsler metric functions on
//! 4-dimensional spacetimes.
//!
//! The crate is organised in layers:
//!
//! * [`jet`] — truncated multivariate Taylor arithmetic ("jets") over the
//!   eight phase-space variables `(t, r, theta, phi, dt, dr, dtheta, dphi)`.
//!   Every derivative the engine ever takes is an exact coefficient extraction
//!   from jet arithmetic; there is no symbolic differentiation and no hidden
//!   finite differencing.
//! * [`dsl`] — a small expression language for metric functions `L(x, dx)`,
//!   with a line-based geometry file format, validation diagnostics and a
//!   jet-valued evaluator.
//! * [`geometry`] — the tensor pipeline: metric, Cartan tensor, geodesic
//!   spray, nonlinear connection, curvature, Landsberg tensor, Berwald
//!   certification and the associated consistency checks.
//! * [`so3`] — the spherically symmetric Berwald layer: connection profiles
//!   `k1..k12`, curvature coefficients `a1..a14`, metrizability residuals,
//!   classification into the five Berwald families, and a mechanical replay
//!   of the vacuum rigidity argument (Ricci-flat + spherically symmetric +
//!   Berwald forces flatness or a quadratic metric).
//! * [`geodesic`] — fixed-step and adaptive integration of the spray ODE.
//! * [`sampling`] — deterministic low-discrepancy phase-space sampling.
//! * [`fdcheck`] — finite-difference and classical-curvature oracles used by
//!   the test suites; deliberately independent of the jet pipeline.

pub mod dsl;
pub mod fdcheck;
pub mod geodesic;
pub mod geometry;
pub mod jet;
pub mod sampling;
pub mod so3;
pub mod tol;
