//! Long-horizon integrator checks: closed-form endpoints in flat space,
//! conservation over a full orbital revolution, and the fourth-order
//! convergence of the fixed-step integrator.

use std::f64::consts::{FRAC_PI_2, PI};

use fforge_core::dsl::FinslerSpec;
use fforge_core::geodesic::{
    circular_orbit_speed, integrate, integrate_fixed_rk4, ExitStatus, IntegrationOptions,
};

fn corpus(name: &str) -> FinslerSpec {
    let path = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../geometries").join(name);
    FinslerSpec::parse(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

#[test]
fn oblique_straight_line_recovers_the_cartesian_closed_form() {
    // A straight line y = 0.4·tau through x = 5 in the equatorial plane,
    // expressed in spherical coordinates. Exercises the angular connection
    // channels, unlike a purely radial ray.
    let spec = corpus("minkowski.geom");
    let orbit = integrate(
        &spec,
        [0.0, 5.0, FRAC_PI_2, 0.0],
        [1.0, 0.0, 0.0, 0.4 / 5.0],
        10.0,
        &IntegrationOptions::default(),
    )
    .unwrap();
    assert_eq!(orbit.exit, ExitStatus::Completed);
    let end = orbit.last();
    let r_want = (25.0f64 + 16.0).sqrt();
    let phi_want = 4.0f64.atan2(5.0);
    assert!((end.position[1] - r_want).abs() < 1e-6, "r = {}", end.position[1]);
    assert!((end.position[3] - phi_want).abs() < 1e-6, "phi = {}", end.position[3]);
    assert!((end.position[2] - FRAC_PI_2).abs() < 1e-9, "theta drifted");
    assert!(orbit.max_l_drift < 1e-8, "L drift {}", orbit.max_l_drift);
}

#[test]
fn circular_orbit_stays_circular_for_a_full_revolution() {
    let spec = corpus("schwarzschild.geom");
    let radius = 4.0;
    let speed = circular_orbit_speed(&spec, radius).unwrap();
    assert!((speed - (1.0f64 / 128.0).sqrt()).abs() < 1e-10);

    let tau_rev = 2.0 * PI / speed;
    let orbit = integrate(
        &spec,
        [0.0, radius, FRAC_PI_2, 0.0],
        [1.0, 0.0, 0.0, speed],
        tau_rev,
        &IntegrationOptions::default(),
    )
    .unwrap();
    assert_eq!(orbit.exit, ExitStatus::Completed);

    // Radial drift stays below 1e-6 over the whole revolution, not just at
    // the endpoint, and the function value is conserved to 1e-8.
    let worst_r = orbit
        .points
        .iter()
        .map(|p| (p.position[1] - radius).abs())
        .fold(0.0f64, f64::max);
    assert!(worst_r < 1e-6, "radial drift {worst_r} over one revolution");
    assert!(orbit.max_l_drift < 1e-8, "L drift {}", orbit.max_l_drift);

    let end = orbit.last();
    assert!((end.position[3] - 2.0 * PI).abs() < 1e-6, "phi = {}", end.position[3]);
    assert!((end.position[2] - FRAC_PI_2).abs() < 1e-9, "theta drifted");
}

/// Endpoint state distance across all eight components.
fn endpoint_gap(a: &fforge_core::geodesic::Orbit, b: &fforge_core::geodesic::Orbit) -> f64 {
    let (pa, pb) = (a.last(), b.last());
    let mut worst = 0.0f64;
    for i in 0..4 {
        worst = worst.max((pa.position[i] - pb.position[i]).abs());
        worst = worst.max((pa.velocity[i] - pb.velocity[i]).abs());
    }
    worst
}

#[test]
fn fixed_step_integrator_converges_at_fourth_order() {
    let spec = corpus("schwarzschild.geom");
    // An eccentric orbit integrated with deliberately coarse steps, so the
    // fixed-step error sits far above the reference solution's noise floor.
    let position = [0.0, 6.0, FRAC_PI_2, 0.0];
    let velocity = [1.0, 0.2, 0.0, 0.06];
    let tau = 10.0;

    // Reference: the adaptive integrator at a much tighter tolerance.
    let tight = IntegrationOptions {
        rel_tol: 1e-13,
        abs_tol: 1e-13,
        ..IntegrationOptions::default()
    };
    let reference = integrate(&spec, position, velocity, tau, &tight).unwrap();

    let coarse = integrate_fixed_rk4(&spec, position, velocity, tau, 40).unwrap();
    let fine = integrate_fixed_rk4(&spec, position, velocity, tau, 80).unwrap();
    let err_coarse = endpoint_gap(&coarse, &reference);
    let err_fine = endpoint_gap(&fine, &reference);

    // Both errors must sit well above the reference noise floor for the
    // ratio to be meaningful.
    assert!(err_fine > 1e-12, "fine error {err_fine} is at the noise floor");
    let ratio = err_coarse / err_fine;
    assert!(
        (14.0..=18.0).contains(&ratio),
        "halving the step changed the error by {ratio} (coarse {err_coarse}, fine {err_fine})"
    );
}

#[test]
fn fixed_and_adaptive_integrators_agree_on_a_generic_orbit() {
    let spec = corpus("schwarzschild.geom");
    let position = [0.0, 6.0, 1.2, 0.3];
    let velocity = [1.0, 0.05, 0.02, 0.04];
    let tau = 10.0;
    let adaptive = integrate(&spec, position, velocity, tau, &IntegrationOptions::default()).unwrap();
    let fixed = integrate_fixed_rk4(&spec, position, velocity, tau, 4000).unwrap();
    let gap = endpoint_gap(&adaptive, &fixed);
    assert!(gap < 1e-8, "integrators disagree by {gap}");
    assert!(fixed.max_l_drift < 1e-9);
    assert!((adaptive.proper_time - fixed.proper_time).abs() < 1e-8);
}
