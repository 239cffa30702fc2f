//! `fforge eval` — evaluate tensor fields of a geometry at sampled or
//! explicit phase-space points.

use fforge_core::dsl::FinslerSpec;
use fforge_core::geometry;

use super::{header, load_spec, parse_floats, Failure, Format, Outcome, Rendered, SampleSpace, COORDS};
use crate::report::{csv_row, fmt_f64, Value};

/// Tensor fields the command can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Which {
    Metric,
    Cartan,
    Spray,
    Curvature,
    Ricci,
    Landsberg,
    VacuumResidual,
}

impl Which {
    const ALL: [Which; 7] = [
        Which::Metric,
        Which::Cartan,
        Which::Spray,
        Which::Curvature,
        Which::Ricci,
        Which::Landsberg,
        Which::VacuumResidual,
    ];

    fn name(self) -> &'static str {
        match self {
            Which::Metric => "metric",
            Which::Cartan => "cartan",
            Which::Spray => "spray",
            Which::Curvature => "curvature",
            Which::Ricci => "ricci",
            Which::Landsberg => "landsberg",
            Which::VacuumResidual => "vacuum-residual",
        }
    }

    fn parse_list(text: &str) -> Result<Vec<Which>, Failure> {
        let mut out = Vec::new();
        for part in text.split(',') {
            let p = part.trim();
            if p.is_empty() {
                continue;
            }
            let w = Which::ALL
                .iter()
                .copied()
                .find(|w| w.name() == p)
                .ok_or_else(|| {
                    Failure::Input(format!(
                        "unknown field `{p}` in --which (expected one of {})",
                        Which::ALL.map(Which::name).join(", ")
                    ))
                })?;
            if !out.contains(&w) {
                out.push(w);
            }
        }
        if out.is_empty() {
            return Err(Failure::Input("--which selected no fields".into()));
        }
        Ok(out)
    }
}

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    /// Geometry definition file.
    #[arg(long)]
    pub input: String,
    /// Comma-separated fields to evaluate.
    #[arg(long, default_value = "metric,cartan,spray,curvature,ricci,landsberg,vacuum-residual")]
    pub which: String,
    /// Number of sampled phase-space points (ignored when --at is given).
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Seed of the deterministic sampler.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Explicit sample `t,r,theta,phi,dt,dr,dtheta,dphi` (repeatable).
    #[arg(long)]
    pub at: Vec<String>,
    /// Sampling-range override `coordinate=lo..hi` (repeatable).
    #[arg(long)]
    pub range: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<String>,
}

/// One evaluated field: flattened (label, value) pairs in a fixed order.
type Entries = Vec<(String, f64)>;

fn metric_entries(g: &[[f64; 4]; 4]) -> Entries {
    let mut out = Vec::with_capacity(10);
    for a in 0..4 {
        for b in a..4 {
            out.push((format!("{}.{}", COORDS[a], COORDS[b]), g[a][b]));
        }
    }
    out
}

fn symmetric3_entries(t: &[[[f64; 4]; 4]; 4]) -> Entries {
    let mut out = Vec::with_capacity(20);
    for a in 0..4 {
        for b in a..4 {
            for c in b..4 {
                out.push((
                    format!("{}.{}.{}", COORDS[a], COORDS[b], COORDS[c]),
                    t[a][b][c],
                ));
            }
        }
    }
    out
}

fn spray_entries(s: &[f64; 4]) -> Entries {
    (0..4).map(|a| (COORDS[a].to_string(), s[a])).collect()
}

/// The curvature tensor is antisymmetric in its two lower slots, so only
/// `b < c` is emitted.
fn curvature_entries(r: &[[[f64; 4]; 4]; 4]) -> Entries {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in (b + 1)..4 {
                out.push((
                    format!("{}.{}.{}", COORDS[a], COORDS[b], COORDS[c]),
                    r[a][b][c],
                ));
            }
        }
    }
    out
}

struct SampleResult {
    position: [f64; 4],
    velocity: [f64; 4],
    l: f64,
    fields: Vec<(Which, Entries)>,
}

fn evaluate(
    spec: &FinslerSpec,
    which: &[Which],
    position: [f64; 4],
    velocity: [f64; 4],
) -> Result<SampleResult, Failure> {
    let fail = |e: geometry::GeometryError| {
        Failure::Runtime(format!(
            "evaluation failed at position {position:?}, velocity {velocity:?}: {e}"
        ))
    };
    let l = spec.eval_scalar(position, velocity);
    let mut fields = Vec::with_capacity(which.len());
    for &w in which {
        let entries = match w {
            Which::Metric => metric_entries(&geometry::metric(spec, position, velocity).map_err(fail)?),
            Which::Cartan => {
                symmetric3_entries(&geometry::cartan(spec, position, velocity).map_err(fail)?)
            }
            Which::Spray => {
                spray_entries(&geometry::spray_values(spec, position, velocity).map_err(fail)?)
            }
            Which::Curvature => curvature_entries(
                &geometry::spray_curvature(spec, position, velocity).map_err(fail)?,
            ),
            Which::Ricci => vec![(
                "value".to_string(),
                geometry::ricci_scalar(spec, position, velocity).map_err(fail)?,
            )],
            Which::Landsberg => {
                symmetric3_entries(&geometry::landsberg(spec, position, velocity).map_err(fail)?)
            }
            Which::VacuumResidual => vec![(
                "value".to_string(),
                geometry::vacuum_residual(spec, position, velocity).map_err(fail)?,
            )],
        };
        fields.push((w, entries));
    }
    Ok(SampleResult { position, velocity, l, fields })
}

fn json_report(args: &EvalArgs, spec: &FinslerSpec, results: &[SampleResult]) -> Value {
    let mut root = header("eval", Some(&args.input), Some(&spec.name));
    root.push("seed", Value::Int(args.seed as i64));
    root.push("samples", Value::Int(results.len() as i64));
    let mut list = Vec::with_capacity(results.len());
    for (i, res) in results.iter().enumerate() {
        let mut s = Value::obj();
        s.push("index", Value::Int(i as i64));
        s.push("position", Value::from_f64_slice(&res.position));
        s.push("velocity", Value::from_f64_slice(&res.velocity));
        s.push("l", Value::Num(res.l));
        for (w, entries) in &res.fields {
            match w {
                Which::Ricci | Which::VacuumResidual => {
                    s.push(w.name(), Value::Num(entries[0].1));
                }
                _ => {
                    let mut obj = Value::obj();
                    for (k, v) in entries {
                        obj.push(k, Value::Num(*v));
                    }
                    s.push(w.name(), obj);
                }
            }
        }
        list.push(s);
    }
    root.push("results", Value::Arr(list));
    root
}

fn csv_report(results: &[SampleResult]) -> String {
    let mut head = vec!["index".to_string()];
    for c in ["t", "r", "theta", "phi", "dt", "dr", "dtheta", "dphi", "l"] {
        head.push(c.to_string());
    }
    if let Some(first) = results.first() {
        for (w, entries) in &first.fields {
            for (k, _) in entries {
                if k == "value" {
                    head.push(w.name().to_string());
                } else {
                    head.push(format!("{}.{}", w.name(), k));
                }
            }
        }
    }
    let mut out = csv_row(&head);
    for (i, res) in results.iter().enumerate() {
        let mut row = vec![i.to_string()];
        for v in res.position.iter().chain(&res.velocity) {
            row.push(fmt_f64(*v));
        }
        row.push(fmt_f64(res.l));
        for (_, entries) in &res.fields {
            for (_, v) in entries {
                row.push(fmt_f64(*v));
            }
        }
        out.push_str(&csv_row(&row));
    }
    out
}

pub fn run(args: &EvalArgs) -> Result<Outcome, Failure> {
    let spec = load_spec(&args.input)?;
    let which = Which::parse_list(&args.which)?;

    let samples: Vec<([f64; 4], [f64; 4])> = if args.at.is_empty() {
        if args.samples == 0 {
            return Err(Failure::Input("--samples must be at least 1".into()));
        }
        let mut space = SampleSpace::default();
        for r in &args.range {
            space.apply(r)?;
        }
        space.draw(&spec, args.samples, args.seed)?
    } else {
        let mut out = Vec::with_capacity(args.at.len());
        for at in &args.at {
            let x: [f64; 8] = parse_floats(at, "--at")?;
            let position = [x[0], x[1], x[2], x[3]];
            let velocity = [x[4], x[5], x[6], x[7]];
            if !spec.in_domain(position, velocity) {
                return Err(Failure::Runtime(format!(
                    "explicit sample `{at}` lies outside the domain of `{}`",
                    spec.name
                )));
            }
            out.push((position, velocity));
        }
        out
    };

    let mut results = Vec::with_capacity(samples.len());
    for (position, velocity) in samples {
        results.push(evaluate(&spec, &which, position, velocity)?);
    }

    let rendered = match args.format {
        Format::Json => Rendered::Json(json_report(args, &spec, &results)),
        Format::Csv => Rendered::Csv(csv_report(&results)),
    };
    Ok(Outcome::ok(rendered))
}
