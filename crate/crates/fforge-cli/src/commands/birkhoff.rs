//! `fforge birkhoff` — randomized replay of the rigidity argument: every
//! admissible spherically symmetric Berwald connection draw must land on
//! the flat or pseudo-Riemannian branch once the vacuum equations are
//! imposed, or expose an explicit contradiction.

use fforge_core::so3::{scan, DrawFamily};

use super::{header, Failure, Format, Outcome, Rendered};
use crate::report::{csv_row, fmt_f64, Value};

#[derive(Debug, clap::Args)]
pub struct BirkhoffArgs {
    /// Comma-separated draw families to scan
    /// (case1, case2, case3, class2, class3, flat, group2).
    #[arg(long, default_value = "case1,case2,case3,class2,class3,flat,group2")]
    pub classes: String,
    /// Draws per family.
    #[arg(long, default_value_t = 1000)]
    pub draws: usize,
    /// Seed of the deterministic draw stream.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Residual tolerance for the decision chain.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<String>,
}

fn parse_family(name: &str) -> Result<DrawFamily, Failure> {
    // `group2` is the user-facing alias for the draws whose angular
    // connection block vanishes identically.
    if name == "group2" || name == "angular-zero" {
        return Ok(DrawFamily::AngularBlockZero);
    }
    DrawFamily::ALL
        .iter()
        .copied()
        .find(|f| f.to_string() == name)
        .ok_or_else(|| {
            Failure::Input(format!(
                "unknown family `{name}` in --classes (expected case1, case2, case3, \
                 class2, class3, flat, group2)"
            ))
        })
}

pub fn run(args: &BirkhoffArgs) -> Result<Outcome, Failure> {
    if args.draws == 0 {
        return Err(Failure::Input("--draws must be at least 1".into()));
    }
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(Failure::Input("--tol must be a positive finite number".into()));
    }
    let mut families = Vec::new();
    for part in args.classes.split(',') {
        let p = part.trim();
        if p.is_empty() {
            continue;
        }
        let fam = parse_family(p)?;
        if families.iter().any(|(f, _)| *f == fam) {
            continue;
        }
        families.push((fam, args.draws));
    }
    if families.is_empty() {
        return Err(Failure::Input("--classes selected no families".into()));
    }

    let report = scan(&families, args.seed, args.tol);
    let survivors = report.survivors.len();
    let undecided: usize = report.tallies.iter().map(|t| t.undecided).sum();
    let verdict = if survivors > 0 {
        "survivors-found"
    } else if undecided > 0 {
        "undecided"
    } else {
        "confirmed"
    };

    let rendered = match args.format {
        Format::Json => {
            let mut root = header("birkhoff", None, None);
            root.push("seed", Value::Int(report.seed as i64));
            root.push("tol", Value::Num(report.tol));
            root.push("draws_per_family", Value::Int(args.draws as i64));
            let mut fams = Vec::with_capacity(report.tallies.len());
            for t in &report.tallies {
                let mut o = Value::obj();
                o.push("family", Value::from(t.family.to_string()));
                o.push("draws", Value::Int(t.draws as i64));
                o.push("flat", Value::Int(t.flat as i64));
                o.push("pseudo_riemannian", Value::Int(t.pseudo_riemannian as i64));
                o.push("inconsistent", Value::Int(t.inconsistent as i64));
                o.push("undecided", Value::Int(t.undecided as i64));
                o.push("survivors", Value::Int(t.survivors as i64));
                o.push(
                    "sample_trace",
                    t.sample_trace.as_deref().map(Value::from).unwrap_or(Value::Null),
                );
                fams.push(o);
            }
            root.push("families", Value::Arr(fams));
            let mut surv = Vec::with_capacity(survivors);
            for s in &report.survivors {
                let mut o = Value::obj();
                o.push("family", Value::from(s.family.to_string()));
                o.push("index", Value::Int(s.index as i64));
                o.push("detail", Value::from(s.detail.as_str()));
                surv.push(o);
            }
            root.push("survivors", Value::Arr(surv));
            root.push("total_draws", Value::Int(report.total_draws() as i64));
            root.push("verdict", Value::from(verdict));
            Rendered::Json(root)
        }
        Format::Csv => {
            let head: Vec<String> = [
                "family", "draws", "flat", "pseudo_riemannian", "inconsistent", "undecided",
                "survivors",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            let mut out = csv_row(&head);
            for t in &report.tallies {
                let row = vec![
                    t.family.to_string(),
                    t.draws.to_string(),
                    t.flat.to_string(),
                    t.pseudo_riemannian.to_string(),
                    t.inconsistent.to_string(),
                    t.undecided.to_string(),
                    t.survivors.to_string(),
                ];
                out.push_str(&csv_row(&row));
            }
            Rendered::Csv(out)
        }
    };

    let failure = if survivors > 0 {
        let first = &report.survivors[0];
        Some(Failure::TheoremViolation(format!(
            "{survivors} draw(s) survived the decision chain (first: family {}, \
             draw {}: {}); tolerance {}",
            first.family, first.index, first.detail, fmt_f64(args.tol)
        )))
    } else if undecided > 0 {
        Some(Failure::Runtime(format!(
            "{undecided} draw(s) were undecidable at tolerance {}; tighten draws or \
             loosen --tol",
            fmt_f64(args.tol)
        )))
    } else {
        None
    };

    Ok(Outcome { rendered, failure })
}
