//! Geodesic integration of the spray equation `ẍ^a = −2 G^a(x, ẋ)`.
//!
//! Two integrators share the right-hand side (the value-level spray of the
//! tensor pipeline): an adaptive Dormand–Prince 5(4) pair with a PI step
//! controller for production use, and a fixed-step classical Runge–Kutta
//! scheme whose known fourth-order convergence doubles as a test oracle for
//! the right-hand side itself.
//!
//! Along the way the integrators monitor the function value `L(x, ẋ)`, which
//! is exactly conserved along geodesics — its drift is the cheapest global
//! correctness signal an orbit can emit — and accumulate the proper-time
//! integral `∫ √|L| dτ`.

use crate::dsl::FinslerSpec;
use crate::geometry::{spray_values, GeometryError};

/// Tuning knobs for the adaptive integrator.
#[derive(Debug, Clone)]
pub struct IntegrationOptions {
    /// Relative tolerance per step.
    pub rel_tol: f64,
    /// Absolute tolerance per step.
    pub abs_tol: f64,
    /// First step size to try.
    pub initial_step: f64,
    /// Smallest allowed step; shrinking past this aborts (or ends the orbit
    /// when the shrink was forced by a domain boundary).
    pub min_step: f64,
    /// Largest allowed step.
    pub max_step: f64,
    /// Hard cap on accepted plus rejected steps.
    pub max_steps: usize,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        IntegrationOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            initial_step: 1e-2,
            min_step: 1e-12,
            max_step: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }
}

/// One accepted sample of an orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitPoint {
    /// Curve parameter.
    pub tau: f64,
    /// Base coordinates `(t, r, θ, φ)`.
    pub position: [f64; 4],
    /// Velocities.
    pub velocity: [f64; 4],
}

/// How an integration ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExitStatus {
    /// Reached the requested parameter value.
    Completed,
    /// The orbit ran into the boundary of the declared domain; `tau` is the
    /// last parameter value still inside.
    DomainExit { tau: f64 },
}

/// Result of an integration.
#[derive(Debug, Clone)]
pub struct Orbit {
    /// Accepted samples, starting with the initial condition.
    pub points: Vec<OrbitPoint>,
    /// `L` at the initial condition.
    pub l_initial: f64,
    /// `L` at the final sample.
    pub l_final: f64,
    /// Largest `|L(τ) − L(0)| / max(|L(0)|, 1e-30)` over the orbit.
    pub max_l_drift: f64,
    /// `∫ √|L| dτ` by the trapezoid rule over accepted samples.
    pub proper_time: f64,
    /// Accepted step count.
    pub steps_accepted: usize,
    /// Rejected (error-controlled) step count.
    pub steps_rejected: usize,
    /// Why the integration stopped.
    pub exit: ExitStatus,
}

impl Orbit {
    /// The last accepted sample.
    pub fn last(&self) -> &OrbitPoint {
        self.points.last().expect("orbit holds at least the initial point")
    }
}

/// Integration failures.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeodesicError {
    /// The right-hand side failed for a reason other than leaving the domain.
    #[error(transparent)]
    Geometry(#[from] GeometryError),

    /// Error control pushed the step below `min_step` while still inside the
    /// domain.
    #[error("step size underflow at tau = {tau:.6e} (step {step:.3e})")]
    StepUnderflow { tau: f64, step: f64 },

    /// `max_steps` was reached before the requested parameter value.
    #[error("step limit reached at tau = {tau:.6e}")]
    StepLimit { tau: f64 },
}

type State = [f64; 8];

fn split(y: &State) -> ([f64; 4], [f64; 4]) {
    (
        [y[0], y[1], y[2], y[3]],
        [y[4], y[5], y[6], y[7]],
    )
}

/// Spray right-hand side: `d(x, ẋ)/dτ = (ẋ, −2G)`.
fn rhs(spec: &FinslerSpec, y: &State) -> Result<State, GeometryError> {
    let (pos, vel) = split(y);
    let g = spray_values(spec, pos, vel)?;
    Ok([
        vel[0], vel[1], vel[2], vel[3],
        -2.0 * g[0], -2.0 * g[1], -2.0 * g[2], -2.0 * g[3],
    ])
}

const DRIFT_FLOOR: f64 = 1e-30;

struct Monitor {
    l0: f64,
    max_drift: f64,
    proper: f64,
    last_tau: f64,
    last_speed: f64,
}

impl Monitor {
    fn new(l0: f64) -> Self {
        Monitor {
            l0,
            max_drift: 0.0,
            proper: 0.0,
            last_tau: 0.0,
            last_speed: l0.abs().sqrt(),
        }
    }

    fn record(&mut self, tau: f64, l: f64) {
        let drift = (l - self.l0).abs() / self.l0.abs().max(DRIFT_FLOOR);
        self.max_drift = self.max_drift.max(drift);
        let speed = l.abs().sqrt();
        self.proper += 0.5 * (self.last_speed + speed) * (tau - self.last_tau);
        self.last_tau = tau;
        self.last_speed = speed;
    }
}

// Dormand–Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn axpy(y: &State, h: f64, coeffs: &[f64], k: &[State]) -> State {
    let mut out = *y;
    for (c, ki) in coeffs.iter().zip(k) {
        if *c == 0.0 {
            continue;
        }
        for i in 0..8 {
            out[i] += h * c * ki[i];
        }
    }
    out
}

/// Integrates the spray equation from `(position, velocity)` to parameter
/// `tau_end` with the adaptive 5(4) pair.
///
/// A right-hand-side failure caused by the domain boundary makes the
/// controller shrink the step; if even `min_step` cannot stay inside, the
/// orbit ends early with [`ExitStatus::DomainExit`]. Any other failure is an
/// error.
pub fn integrate(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
    tau_end: f64,
    options: &IntegrationOptions,
) -> Result<Orbit, GeodesicError> {
    if let Some(value) = spec.domain_value(position, velocity) {
        if !(value > 0.0) {
            return Err(GeometryError::OutsideDomain { value }.into());
        }
    }
    let mut y: State = [
        position[0], position[1], position[2], position[3],
        velocity[0], velocity[1], velocity[2], velocity[3],
    ];
    let l0 = spec.eval_scalar(position, velocity);
    let mut monitor = Monitor::new(l0);
    let mut points = vec![OrbitPoint { tau: 0.0, position, velocity }];

    let mut tau = 0.0f64;
    let mut h = options.initial_step.min(options.max_step).min(tau_end.abs().max(1e-300));
    let mut k1 = rhs(spec, &y)?;
    let mut err_old: f64 = 1e-4;
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut l_final = l0;

    let finish = |points: Vec<OrbitPoint>, monitor: &Monitor, accepted, rejected, l_final, exit| Orbit {
        points,
        l_initial: l0,
        l_final,
        max_l_drift: monitor.max_drift,
        proper_time: monitor.proper,
        steps_accepted: accepted,
        steps_rejected: rejected,
        exit,
    };

    for _ in 0..options.max_steps {
        if tau >= tau_end || (tau_end - tau) < 1e-14 * tau_end.abs().max(1.0) {
            return Ok(finish(points, &monitor, accepted, rejected, l_final, ExitStatus::Completed));
        }
        h = h.min(tau_end - tau);

        // Stage evaluations; a domain failure forces a smaller step.
        let mut k = vec![k1];
        let mut domain_hit = false;
        for stage in 0..6 {
            let ys = axpy(&y, h, &A[stage], &k);
            match rhs(spec, &ys) {
                Ok(ki) => k.push(ki),
                Err(GeometryError::OutsideDomain { .. }) => {
                    domain_hit = true;
                    break;
                }
                Err(e) => return Err(e.into()),
            }
        }
        if domain_hit {
            h *= 0.5;
            if h < options.min_step {
                return Ok(finish(
                    points, &monitor, accepted, rejected, l_final,
                    ExitStatus::DomainExit { tau },
                ));
            }
            continue;
        }

        let y5 = axpy(&y, h, &B5, &k);
        let y4 = axpy(&y, h, &B4, &k);
        let mut err: f64 = 0.0;
        for i in 0..8 {
            let sc = options.abs_tol + options.rel_tol * y[i].abs().max(y5[i].abs());
            let e = (y5[i] - y4[i]) / sc;
            err += e * e;
        }
        err = (err / 8.0).sqrt();

        if err <= 1.0 {
            tau += h;
            y = y5;
            // The last stage was evaluated at the new state (its tableau row
            // equals the fifth-order weights), so it already vouches that the
            // new state is admissible and doubles as the next first stage.
            k1 = k[6];
            let (pos, vel) = split(&y);
            l_final = spec.eval_scalar(pos, vel);
            monitor.record(tau, l_final);
            points.push(OrbitPoint { tau, position: pos, velocity: vel });
            accepted += 1;
            // PI controller (Hairer's DOPRI5 constants).
            let e = err.max(1e-32);
            let fac = 0.9 * err_old.powf(0.04) / e.powf(0.17);
            h = (h * fac.clamp(0.2, 5.0)).min(options.max_step);
            err_old = e;
        } else {
            rejected += 1;
            let fac = (0.9 / err.powf(0.2)).clamp(0.1, 0.9);
            h *= fac;
        }
        if h < options.min_step {
            return Err(GeodesicError::StepUnderflow { tau, step: h });
        }
    }
    Err(GeodesicError::StepLimit { tau })
}

/// Integrates with the fixed-step classical fourth-order Runge–Kutta scheme.
///
/// Exists mainly as a convergence oracle: halving the step of a smooth orbit
/// must shrink the endpoint error by a factor of sixteen, which validates
/// the right-hand side independently of the adaptive machinery.
pub fn integrate_fixed_rk4(
    spec: &FinslerSpec,
    position: [f64; 4],
    velocity: [f64; 4],
    tau_end: f64,
    steps: usize,
) -> Result<Orbit, GeodesicError> {
    assert!(steps > 0, "need at least one step");
    if let Some(value) = spec.domain_value(position, velocity) {
        if !(value > 0.0) {
            return Err(GeometryError::OutsideDomain { value }.into());
        }
    }
    let mut y: State = [
        position[0], position[1], position[2], position[3],
        velocity[0], velocity[1], velocity[2], velocity[3],
    ];
    let l0 = spec.eval_scalar(position, velocity);
    let mut monitor = Monitor::new(l0);
    let mut points = vec![OrbitPoint { tau: 0.0, position, velocity }];
    let h = tau_end / steps as f64;
    let mut l_final = l0;

    for n in 0..steps {
        let tau = n as f64 * h;
        let step = || -> Result<State, GeometryError> {
            let k1 = rhs(spec, &y)?;
            let k2 = rhs(spec, &axpy(&y, h, &[0.5], std::slice::from_ref(&k1)))?;
            let k3 = rhs(spec, &axpy(&y, h, &[0.0, 0.5], &[k1, k2]))?;
            let k4 = rhs(spec, &axpy(&y, h, &[0.0, 0.0, 1.0], &[k1, k2, k3]))?;
            Ok(axpy(
                &y, h,
                &[1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
                &[k1, k2, k3, k4],
            ))
        }();
        match step {
            Ok(ynew) => {
                y = ynew;
                let (pos, vel) = split(&y);
                if !spec.in_domain(pos, vel) {
                    return Ok(Orbit {
                        points,
                        l_initial: l0,
                        l_final,
                        max_l_drift: monitor.max_drift,
                        proper_time: monitor.proper,
                        steps_accepted: n,
                        steps_rejected: 0,
                        exit: ExitStatus::DomainExit { tau },
                    });
                }
                l_final = spec.eval_scalar(pos, vel);
                monitor.record(tau + h, l_final);
                points.push(OrbitPoint { tau: tau + h, position: pos, velocity: vel });
            }
            Err(GeometryError::OutsideDomain { .. }) => {
                return Ok(Orbit {
                    points,
                    l_initial: l0,
                    l_final,
                    max_l_drift: monitor.max_drift,
                    proper_time: monitor.proper,
                    steps_accepted: n,
                    steps_rejected: 0,
                    exit: ExitStatus::DomainExit { tau },
                });
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Orbit {
        points,
        l_initial: l0,
        l_final,
        max_l_drift: monitor.max_drift,
        proper_time: monitor.proper,
        steps_accepted: steps,
        steps_rejected: 0,
        exit: ExitStatus::Completed,
    })
}

/// Finds the angular speed `φ̇` of a circular equatorial orbit at the given
/// radius, normalized to `ṫ = 1`, by bisecting the radial spray component
/// `G^r(x, (1, 0, 0, φ̇))` at `x = (0, radius, π/2, 0)`.
///
/// Works for any rotation-invariant structure whose radial pull weakens with
/// increasing angular speed (the bracket is grown geometrically until the
/// sign flips).
pub fn circular_orbit_speed(spec: &FinslerSpec, radius: f64) -> Result<f64, GeodesicError> {
    let pos = [0.0, radius, std::f64::consts::FRAC_PI_2, 0.0];
    let radial = |s: f64| -> Result<f64, GeometryError> {
        Ok(spray_values(spec, pos, [1.0, 0.0, 0.0, s])?[1])
    };
    let g0 = radial(0.0)?;
    if g0 == 0.0 {
        return Ok(0.0);
    }
    let mut lo = 0.0f64;
    let mut hi = 1e-3f64;
    let mut ghi = radial(hi)?;
    let mut grew = 0;
    while ghi * g0 > 0.0 {
        lo = hi;
        hi *= 2.0;
        ghi = radial(hi)?;
        grew += 1;
        if grew > 60 {
            return Err(GeodesicError::Geometry(GeometryError::InsufficientSamples {
                got: 0,
                need: 1,
            }));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = radial(mid)?;
        if gm * g0 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
