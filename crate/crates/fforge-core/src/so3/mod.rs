//! Spherically symmetric affine connections: curvature invariants,
//! classification of the compatible Finsler structures, and the mechanical
//! replay of the rigidity argument for Ricci-flat rotation-invariant
//! geodesic structures.
//!
//! A rotation-invariant torsion-free affine connection on a
//! `(t, r, theta, phi)` chart is captured by twelve coefficient functions
//! `k1..k12` of `(t, r)` (plus two universal angular entries fixed by the
//! round sphere). Everything downstream — curvature channels, the Ricci
//! contraction, classification into metrizability families, and the final
//! flat-or-quadratic verdict — is computed from the coefficient values and
//! their first derivatives at a point.

mod birkhoff;
mod classify;
mod classspec;
mod curvature;
mod field;

pub use birkhoff::{
    decide, scan, Decision, DrawFamily, FamilyTally, ScanReport, SurvivorRecord, Verdict,
};
pub use classify::{
    angular_identity_residual, angular_slope_residuals, classify, compatibility_residuals,
    consistency_residuals, discriminants, quadratic_metric_fit, ricci_flat_system,
    structure_functions, BerwaldClass, Classification, Discriminants, StructureFunctions,
};
pub use classspec::{exponential_text, one_variable_text, power_law_text};
pub use curvature::{ConnectionField, CurvatureInvariants};
pub use field::{
    case1_field, case2_field, case3_field, draw_case1, draw_case1_ricci_flat_tr, draw_case2,
    draw_case2_ricci_flat_tr, draw_case3, draw_case3_ricci_flat_tr, draw_class2, draw_class3,
    draw_flat, draw_group2, synthetic_class1_field, Case1Params, Case2Params, Case3Params,
};
