//! `fforge check` — run the structural invariant battery of a geometry over
//! sampled phase-space points and fail loudly when any identity breaks.

use fforge_core::dsl::FinslerSpec;
use fforge_core::geometry::{
    berwald_coefficients, berwald_test, cartan, euler_residual, killing_residuals, mean_cartan,
    mean_cartan_contracted, metric, metric_compatibility, spray,
};
use fforge_core::tol::{residual_with_scales, SCALE_FLOOR};

use super::{header, load_spec, Failure, Format, Outcome, Rendered, SampleSpace};
use crate::report::{csv_row, fmt_f64, Value};

#[derive(Debug, clap::Args)]
pub struct CheckArgs {
    /// Geometry definition file.
    #[arg(long)]
    pub input: String,
    /// Number of sampled phase-space points.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Seed of the deterministic sampler.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Threshold for the connection/compatibility invariants. The algebraic
    /// identities (homogeneity, trace duality, rotation invariance) keep
    /// their own tighter built-in thresholds.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Sampling-range override `coordinate=lo..hi` (repeatable).
    #[arg(long)]
    pub range: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<String>,
}

struct InvariantResult {
    name: &'static str,
    worst: f64,
    threshold: f64,
}

impl InvariantResult {
    fn pass(&self) -> bool {
        self.worst <= self.threshold
    }
}

/// `L(x, s·ẋ) = s² L(x, ẋ)` at `s = 2` and `s = ½`.
fn homogeneity_residual(spec: &FinslerSpec, p: [f64; 4], v: [f64; 4]) -> f64 {
    let l = spec.eval_scalar(p, v);
    let mut worst = 0.0f64;
    for s in [2.0, 0.5] {
        let sv = std::array::from_fn(|i| s * v[i]);
        let ls = spec.eval_scalar(p, sv);
        let expect = s * s * l;
        worst = worst.max(residual_with_scales(&[
            (ls, ls.abs()),
            (-expect, expect.abs()),
        ]));
    }
    worst
}

/// `g_ab ẋ^a ẋ^b = L` (the metric contracts back to the function).
fn metric_contraction_residual(
    spec: &FinslerSpec,
    p: [f64; 4],
    v: [f64; 4],
) -> Result<f64, Failure> {
    let g = metric(spec, p, v).map_err(runtime)?;
    let l = spec.eval_scalar(p, v);
    let mut terms = Vec::with_capacity(17);
    for a in 0..4 {
        for b in 0..4 {
            let t = g[a][b] * v[a] * v[b];
            terms.push((t, t.abs()));
        }
    }
    terms.push((-l, l.abs()));
    Ok(residual_with_scales(&terms))
}

/// `C_abc ẋ^c = 0` (the Cartan tensor annihilates the velocity). The defect
/// is normalized by the largest contraction term anywhere in the tensor, so
/// components that are analytically zero and carry only rounding noise
/// cannot inflate the residual.
fn cartan_transversality_residual(
    spec: &FinslerSpec,
    p: [f64; 4],
    v: [f64; 4],
) -> Result<f64, Failure> {
    let c = cartan(spec, p, v).map_err(runtime)?;
    let mut scale = SCALE_FLOOR;
    let mut worst_sum = 0.0f64;
    for a in 0..4 {
        for b in 0..4 {
            let mut sum = 0.0f64;
            for k in 0..4 {
                let t = c[a][b][k] * v[k];
                scale = scale.max(t.abs());
                sum += t;
            }
            worst_sum = worst_sum.max(sum.abs());
        }
    }
    Ok(worst_sum / scale)
}

/// `N^a_b = Γ^a_bc ẋ^c` (the nonlinear connection is the velocity trace of
/// the affine one). Normalized by the global connection scale, as above.
fn torsion_free_residual(spec: &FinslerSpec, p: [f64; 4], v: [f64; 4]) -> Result<f64, Failure> {
    let data = spray(spec, p, v).map_err(runtime)?;
    let gamma = berwald_coefficients(spec, p, v).map_err(runtime)?;
    let mut scale = SCALE_FLOOR;
    let mut worst_sum = 0.0f64;
    for a in 0..4 {
        for b in 0..4 {
            let mut sum = data.nonlinear[a][b];
            scale = scale.max(sum.abs());
            for c in 0..4 {
                let t = gamma[a][b][c] * v[c];
                scale = scale.max(t.abs());
                sum -= t;
            }
            worst_sum = worst_sum.max(sum.abs());
        }
    }
    Ok(worst_sum / scale)
}

/// Both computations of the mean Cartan form agree.
fn trace_duality_residual(spec: &FinslerSpec, p: [f64; 4], v: [f64; 4]) -> Result<f64, Failure> {
    let direct = mean_cartan(spec, p, v).map_err(runtime)?;
    let contracted = mean_cartan_contracted(spec, p, v).map_err(runtime)?;
    let scale = direct
        .iter()
        .chain(&contracted)
        .fold(SCALE_FLOOR, |m, t| m.max(t.abs()));
    let worst = direct
        .iter()
        .zip(&contracted)
        .map(|(a, b)| (a - b).abs() / scale)
        .fold(0.0f64, f64::max);
    Ok(worst)
}

fn runtime(e: fforge_core::geometry::GeometryError) -> Failure {
    Failure::Runtime(format!("invariant evaluation failed: {e}"))
}

pub fn run(args: &CheckArgs) -> Result<Outcome, Failure> {
    let spec = load_spec(&args.input)?;
    if args.samples == 0 {
        return Err(Failure::Input("--samples must be at least 1".into()));
    }
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(Failure::Input("--tol must be a positive finite number".into()));
    }
    let mut space = SampleSpace::default();
    for r in &args.range {
        space.apply(r)?;
    }
    let samples = space.draw(&spec, args.samples, args.seed)?;

    let mut homogeneity = 0.0f64;
    let mut euler = 0.0f64;
    let mut contraction = 0.0f64;
    let mut transversality = 0.0f64;
    let mut torsion = 0.0f64;
    let mut compatibility = 0.0f64;
    let mut duality = 0.0f64;
    let mut rotation = 0.0f64;
    for &(p, v) in &samples {
        homogeneity = homogeneity.max(homogeneity_residual(&spec, p, v));
        euler = euler.max(euler_residual(&spec, p, v).map_err(runtime)?);
        contraction = contraction.max(metric_contraction_residual(&spec, p, v)?);
        transversality = transversality.max(cartan_transversality_residual(&spec, p, v)?);
        torsion = torsion.max(torsion_free_residual(&spec, p, v)?);
        compatibility = compatibility.max(metric_compatibility(&spec, p, v).map_err(runtime)?);
        duality = duality.max(trace_duality_residual(&spec, p, v)?);
        let k = killing_residuals(&spec, p, v).map_err(runtime)?;
        rotation = rotation.max(k.into_iter().fold(0.0, f64::max));
    }

    // Velocity-independence of the affine connection, measured across fresh
    // velocity draws at a subset of the sampled base points.
    let base_points: Vec<[f64; 4]> = samples
        .iter()
        .take(20.min(samples.len()))
        .map(|(p, _)| *p)
        .collect();
    let velocity_ranges = [
        space.ranges[4],
        space.ranges[5],
        space.ranges[6],
        space.ranges[7],
    ];
    let berwald = berwald_test(&spec, &base_points, 20, &velocity_ranges, args.seed)
        .map_err(runtime)?;

    let results = vec![
        InvariantResult { name: "homogeneity", worst: homogeneity, threshold: 1e-9 },
        InvariantResult { name: "euler-degree", worst: euler, threshold: 1e-9 },
        InvariantResult { name: "metric-contraction", worst: contraction, threshold: 1e-9 },
        InvariantResult {
            name: "cartan-transversality",
            worst: transversality,
            threshold: 1e-9,
        },
        InvariantResult { name: "torsion-free", worst: torsion, threshold: args.tol },
        InvariantResult {
            name: "metric-compatibility",
            worst: compatibility,
            threshold: args.tol,
        },
        InvariantResult { name: "cartan-trace-duality", worst: duality, threshold: args.tol },
        InvariantResult { name: "rotation-invariance", worst: rotation, threshold: 1e-10 },
        InvariantResult {
            name: "berwald",
            worst: berwald.max_connection_deviation,
            threshold: args.tol,
        },
        InvariantResult {
            name: "landsberg-trace",
            worst: berwald.max_mean_landsberg,
            threshold: args.tol,
        },
    ];
    let failed: Vec<&InvariantResult> = results.iter().filter(|r| !r.pass()).collect();

    let rendered = match args.format {
        Format::Json => {
            let mut root = header("check", Some(&args.input), Some(&spec.name));
            root.push("seed", Value::Int(args.seed as i64));
            root.push("samples", Value::Int(samples.len() as i64));
            root.push("tol", Value::Num(args.tol));
            let mut list = Vec::with_capacity(results.len());
            for r in &results {
                let mut o = Value::obj();
                o.push("name", Value::from(r.name));
                o.push("worst_residual", Value::Num(r.worst));
                o.push("threshold", Value::Num(r.threshold));
                o.push("pass", Value::Bool(r.pass()));
                list.push(o);
            }
            root.push("invariants", Value::Arr(list));
            root.push("berwald_base_points", Value::Int(berwald.base_points as i64));
            root.push(
                "berwald_velocity_samples",
                Value::Int(berwald.velocity_samples as i64),
            );
            root.push("max_cartan", Value::Num(berwald.max_cartan));
            root.push("pass", Value::Bool(failed.is_empty()));
            Rendered::Json(root)
        }
        Format::Csv => {
            let head: Vec<String> = ["invariant", "worst_residual", "threshold", "pass"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let mut out = csv_row(&head);
            for r in &results {
                out.push_str(&csv_row(&[
                    r.name.to_string(),
                    fmt_f64(r.worst),
                    fmt_f64(r.threshold),
                    r.pass().to_string(),
                ]));
            }
            Rendered::Csv(out)
        }
    };

    let failure = if failed.is_empty() {
        None
    } else {
        let list: Vec<String> = failed
            .iter()
            .map(|r| format!("{} ({} > {})", r.name, fmt_f64(r.worst), fmt_f64(r.threshold)))
            .collect();
        Some(Failure::InvariantFailure(format!(
            "{} invariant(s) failed on `{}`: {}",
            failed.len(),
            spec.name,
            list.join("; ")
        )))
    };
    Ok(Outcome { rendered, failure })
}
