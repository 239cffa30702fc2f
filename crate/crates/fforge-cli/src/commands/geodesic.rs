//! `fforge geodesic` — integrate the geodesic flow of a geometry.

use fforge_core::dsl::FinslerSpec;
use fforge_core::geodesic::{
    circular_orbit_speed, integrate, integrate_fixed_rk4, ExitStatus, GeodesicError,
    IntegrationOptions, Orbit,
};

use super::{header, load_spec, parse_floats, Failure, Format, Outcome, Rendered};
use crate::report::{csv_row, fmt_f64, Value};

#[derive(Debug, clap::Args)]
pub struct GeodesicArgs {
    /// Geometry definition file.
    #[arg(long)]
    pub input: String,
    /// Initial state `t,r,theta,phi,dt,dr,dtheta,dphi`.
    #[arg(long, conflicts_with = "circular")]
    pub initial: Option<String>,
    /// Start on the equatorial circular orbit of this radius instead.
    #[arg(long)]
    pub circular: Option<f64>,
    /// Parameter span to integrate over.
    #[arg(long, default_value_t = 10.0)]
    pub tau: f64,
    /// Relative tolerance of the adaptive integrator.
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    /// Absolute tolerance of the adaptive integrator.
    #[arg(long, default_value_t = 1e-10)]
    pub abs_tol: f64,
    /// Use the fixed-step classical integrator with this many steps.
    #[arg(long)]
    pub rk4_steps: Option<usize>,
    /// Write the sampled trajectory as CSV to this path.
    #[arg(long)]
    pub trajectory: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<String>,
}

fn map_geodesic_error(e: GeodesicError) -> Failure {
    Failure::Runtime(format!("integration failed: {e}"))
}

fn trajectory_csv(spec: &FinslerSpec, orbit: &Orbit) -> String {
    let head: Vec<String> =
        ["tau", "t", "r", "theta", "phi", "dt", "dr", "dtheta", "dphi", "l"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    let mut out = csv_row(&head);
    for p in &orbit.points {
        let mut row = vec![fmt_f64(p.tau)];
        for v in p.position.iter().chain(&p.velocity) {
            row.push(fmt_f64(*v));
        }
        row.push(fmt_f64(spec.eval_scalar(p.position, p.velocity)));
        out.push_str(&csv_row(&row));
    }
    out
}

pub fn run(args: &GeodesicArgs) -> Result<Outcome, Failure> {
    let spec = load_spec(&args.input)?;
    if !(args.tau.is_finite() && args.tau > 0.0) {
        return Err(Failure::Input("--tau must be a positive finite number".into()));
    }

    let (position, velocity) = if let Some(radius) = args.circular {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Failure::Input("--circular radius must be positive".into()));
        }
        let omega = circular_orbit_speed(&spec, radius).map_err(|e| {
            Failure::Runtime(format!("no circular orbit at r = {radius}: {e}"))
        })?;
        (
            [0.0, radius, std::f64::consts::FRAC_PI_2, 0.0],
            [1.0, 0.0, 0.0, omega],
        )
    } else if let Some(text) = &args.initial {
        let x: [f64; 8] = parse_floats(text, "--initial")?;
        ([x[0], x[1], x[2], x[3]], [x[4], x[5], x[6], x[7]])
    } else {
        return Err(Failure::Input(
            "provide either --initial t,r,theta,phi,dt,dr,dtheta,dphi or --circular R".into(),
        ));
    };

    if !spec.in_domain(position, velocity) {
        return Err(Failure::Runtime(format!(
            "initial state lies outside the domain of `{}`",
            spec.name
        )));
    }

    let orbit = match args.rk4_steps {
        Some(0) => return Err(Failure::Input("--rk4-steps must be at least 1".into())),
        Some(steps) => integrate_fixed_rk4(&spec, position, velocity, args.tau, steps)
            .map_err(map_geodesic_error)?,
        None => {
            let options = IntegrationOptions {
                rel_tol: args.rel_tol,
                abs_tol: args.abs_tol,
                ..IntegrationOptions::default()
            };
            integrate(&spec, position, velocity, args.tau, &options).map_err(map_geodesic_error)?
        }
    };

    if let Some(path) = &args.trajectory {
        std::fs::write(path, trajectory_csv(&spec, &orbit))
            .map_err(|e| Failure::Runtime(format!("cannot write `{path}`: {e}")))?;
    }

    let last = orbit.last();
    let (termination, exit_tau) = match orbit.exit {
        ExitStatus::Completed => ("tau-limit", last.tau),
        ExitStatus::DomainExit { tau } => ("domain-exit", tau),
    };

    let rendered = match args.format {
        Format::Json => {
            let mut root = header("geodesic", Some(&args.input), Some(&spec.name));
            root.push("initial_position", Value::from_f64_slice(&position));
            root.push("initial_velocity", Value::from_f64_slice(&velocity));
            root.push("termination", Value::from(termination));
            root.push("tau_end", Value::Num(exit_tau));
            root.push("proper_time", Value::Num(orbit.proper_time));
            root.push("l_initial", Value::Num(orbit.l_initial));
            root.push("l_final", Value::Num(orbit.l_final));
            root.push("max_l_drift", Value::Num(orbit.max_l_drift));
            root.push("steps_accepted", Value::Int(orbit.steps_accepted as i64));
            root.push("steps_rejected", Value::Int(orbit.steps_rejected as i64));
            root.push("final_position", Value::from_f64_slice(&last.position));
            root.push("final_velocity", Value::from_f64_slice(&last.velocity));
            Rendered::Json(root)
        }
        Format::Csv => Rendered::Csv(trajectory_csv(&spec, &orbit)),
    };
    Ok(Outcome::ok(rendered))
}
