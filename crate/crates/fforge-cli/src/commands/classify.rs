//! `fforge classify` — classify a spherically symmetric connection profile.

use fforge_core::dsl::KProfile;
use fforge_core::so3::{
    angular_identity_residual, classify, ricci_flat_system, BerwaldClass,
};

use super::{header, parse_floats, Failure, Format, Outcome, Rendered};
use crate::report::{csv_row, fmt_f64, Value};

#[derive(Debug, clap::Args)]
pub struct ClassifyArgs {
    /// Connection-profile definition file.
    #[arg(long)]
    pub input: String,
    /// Evaluation point `t,r`.
    #[arg(long, default_value = "0,4")]
    pub at: String,
    /// Residual tolerance separating "zero" from "structure".
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<String>,
}

fn residual_array(values: &[f64]) -> Value {
    Value::from_f64_slice(values)
}

pub fn run(args: &ClassifyArgs) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Failure::Input(format!("cannot read `{}`: {e}", args.input)))?;
    let profile = KProfile::parse(&text)
        .map_err(|e| Failure::Input(format!("{}:{e}", args.input)))?;
    let [t, r] = parse_floats(&args.at, "--at")?;
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(Failure::Input("--tol must be a positive finite number".into()));
    }

    let field = profile
        .eval(t, r)
        .map_err(|e| Failure::Runtime(format!("cannot evaluate profile at (t={t}, r={r}): {e}")))?;
    let inv = field.invariants();
    let result = classify(&field, args.tol);

    let ricci = inv.ricci_residuals();
    let flat_system = result
        .structure
        .as_ref()
        .map(|s| ricci_flat_system(&inv, s));
    let angular = angular_identity_residual(&field);
    // Membership in any recognized family implies a compatible metric exists.
    let metrizable = result.class != BerwaldClass::Unclassified;

    let rendered = match args.format {
        Format::Json => {
            let mut root = header("classify", Some(&args.input), Some(&profile.name));
            root.push("at", Value::from_f64_slice(&[t, r]));
            root.push("tol", Value::Num(args.tol));
            root.push("class", Value::from(result.class.to_string()));
            root.push(
                "structure",
                match &result.structure {
                    Some(s) => {
                        let mut o = Value::obj();
                        o.push("a", Value::Num(s.a));
                        o.push("b", Value::Num(s.b));
                        o.push("c", Value::Num(s.c));
                        o
                    }
                    None => Value::Null,
                },
            );
            root.push(
                "discriminants",
                match &result.discriminants {
                    Some(d) => {
                        let mut o = Value::obj();
                        o.push("d", Value::Num(d.d));
                        o.push("e", Value::Num(d.e));
                        o.push("f", Value::Num(d.f));
                        o
                    }
                    None => Value::Null,
                },
            );
            root.push(
                "exponent",
                result.exponent.map(Value::Num).unwrap_or(Value::Null),
            );
            root.push("rho", result.rho.map(Value::Num).unwrap_or(Value::Null));
            root.push("compatibility", residual_array(&result.compatibility));
            root.push("consistency", residual_array(&result.consistency));
            root.push("ricci_residuals", residual_array(&ricci));
            root.push(
                "ricci_flat_system",
                flat_system
                    .as_ref()
                    .map(|v| residual_array(v))
                    .unwrap_or(Value::Null),
            );
            root.push(
                "angular_identity",
                angular.map(Value::Num).unwrap_or(Value::Null),
            );
            root.push("metrizable", Value::Bool(metrizable));
            root.push(
                "quadratic_metric",
                result
                    .quadratic_metric
                    .as_ref()
                    .map(|g| Value::from_f64_slice(g))
                    .unwrap_or(Value::Null),
            );
            root.push(
                "reason",
                result.reason.as_deref().map(Value::from).unwrap_or(Value::Null),
            );
            root.push("flatness", Value::Num(inv.max_normalized()));
            Rendered::Json(root)
        }
        Format::Csv => {
            let head: Vec<String> = [
                "name", "t", "r", "class", "a", "b", "c", "exponent", "rho", "metrizable",
                "worst_compatibility", "flatness",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            let worst = result
                .compatibility
                .iter()
                .fold(0.0f64, |m, v| m.max(*v));
            let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_else(|| "".into());
            let row = vec![
                profile.name.clone(),
                fmt_f64(t),
                fmt_f64(r),
                result.class.to_string(),
                opt(result.structure.as_ref().map(|s| s.a)),
                opt(result.structure.as_ref().map(|s| s.b)),
                opt(result.structure.as_ref().map(|s| s.c)),
                opt(result.exponent),
                opt(result.rho),
                metrizable.to_string(),
                fmt_f64(worst),
                fmt_f64(inv.max_normalized()),
            ];
            let mut out = csv_row(&head);
            out.push_str(&csv_row(&row));
            Rendered::Csv(out)
        }
    };
    Ok(Outcome::ok(rendered))
}
