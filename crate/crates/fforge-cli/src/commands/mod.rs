//! Command implementations and the plumbing they share.

pub mod birkhoff;
pub mod check;
pub mod classify;
pub mod eval;
pub mod geodesic;

use fforge_core::dsl::FinslerSpec;
use fforge_core::sampling::Halton;

use crate::report::Value;

/// A failed run, carrying the process exit code contract:
/// 2 input, 3 runtime, 4 theorem violation, 5 invariant failure.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Runtime(String),
    TheoremViolation(String),
    InvariantFailure(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Runtime(_) => 3,
            Failure::TheoremViolation(_) => 4,
            Failure::InvariantFailure(_) => 5,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m)
            | Failure::Runtime(m)
            | Failure::TheoremViolation(m)
            | Failure::InvariantFailure(m) => m,
        }
    }
}

/// A rendered report ready to be written out.
pub enum Rendered {
    Json(Value),
    Csv(String),
}

/// What a command produced: a report to print, plus — for verdict commands —
/// a failure that sets the exit code *after* the report is written.
pub struct Outcome {
    pub rendered: Rendered,
    pub failure: Option<Failure>,
}

impl Outcome {
    pub fn ok(rendered: Rendered) -> Self {
        Outcome { rendered, failure: None }
    }
}

/// Output format selection shared by all commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub const COORD_NAMES: [&str; 8] = ["t", "r", "theta", "phi", "dt", "dr", "dtheta", "dphi"];

/// Position-name shorthand for tensor index labels.
pub const COORDS: [&str; 4] = ["t", "r", "theta", "phi"];

/// The sampling box over phase space. Defaults cover the timelike regime of
/// every bundled geometry: `r` stays away from coordinate degeneracies,
/// `theta` away from the poles, and `dt` dominates the spatial velocities.
#[derive(Debug, Clone)]
pub struct SampleSpace {
    pub ranges: [(f64, f64); 8],
}

impl Default for SampleSpace {
    fn default() -> Self {
        SampleSpace {
            ranges: [
                (0.0, 1.0),
                (2.5, 10.0),
                (0.6, 2.5),
                (0.0, 6.2),
                (1.0, 2.0),
                (-0.25, 0.25),
                (-0.25, 0.25),
                (-0.25, 0.25),
            ],
        }
    }
}

impl SampleSpace {
    /// Applies one `--range name=lo..hi` override.
    pub fn apply(&mut self, flag: &str) -> Result<(), Failure> {
        let bad = || {
            Failure::Input(format!(
                "invalid --range `{flag}`: expected <coordinate>=<lo>..<hi>"
            ))
        };
        let (name, span) = flag.split_once('=').ok_or_else(bad)?;
        let idx = COORD_NAMES
            .iter()
            .position(|c| *c == name.trim())
            .ok_or_else(|| {
                Failure::Input(format!(
                    "unknown coordinate `{}` in --range (expected one of {})",
                    name.trim(),
                    COORD_NAMES.join(", ")
                ))
            })?;
        let (lo, hi) = span.split_once("..").ok_or_else(bad)?;
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Failure::Input(format!(
                "empty or non-finite range `{flag}`: need lo < hi"
            )));
        }
        self.ranges[idx] = (lo, hi);
        Ok(())
    }

    /// Draws `n` in-domain phase-space samples with the deterministic
    /// low-discrepancy sequence, skipping points the geometry's domain
    /// predicate rejects. Fails when admissible points are too rare.
    pub fn draw(
        &self,
        spec: &FinslerSpec,
        n: usize,
        seed: u64,
    ) -> Result<Vec<([f64; 4], [f64; 4])>, Failure> {
        let mut halton = Halton::new(seed, 8);
        let mut out = Vec::with_capacity(n);
        let mut attempts = 0usize;
        let cap = 200 * n.max(1);
        while out.len() < n {
            if attempts >= cap {
                return Err(Failure::Runtime(format!(
                    "only {} of {} requested samples fell inside the domain of `{}` after \
                     {} attempts; widen --range or relax the domain",
                    out.len(),
                    n,
                    spec.name,
                    cap
                )));
            }
            attempts += 1;
            let u = halton.next_point();
            let mut x = [0.0; 8];
            for (i, (ui, (lo, hi))) in u.iter().zip(&self.ranges).enumerate() {
                x[i] = lo + ui * (hi - lo);
            }
            let position = [x[0], x[1], x[2], x[3]];
            let velocity = [x[4], x[5], x[6], x[7]];
            if spec.in_domain(position, velocity) {
                out.push((position, velocity));
            }
        }
        Ok(out)
    }
}

/// The header fields every JSON report starts with.
pub fn header(command: &str, input: Option<&str>, spec_name: Option<&str>) -> Value {
    let mut v = Value::obj();
    v.push("schema", Value::from("fforge-report/1"));
    v.push(
        "tool",
        Value::from(format!("fforge {}", env!("CARGO_PKG_VERSION"))),
    );
    v.push("command", Value::from(command));
    v.push(
        "input",
        input.map(Value::from).unwrap_or(Value::Null),
    );
    v.push(
        "spec",
        spec_name.map(Value::from).unwrap_or(Value::Null),
    );
    v
}

/// Loads and parses a geometry file.
pub fn load_spec(path: &str) -> Result<FinslerSpec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read `{path}`: {e}")))?;
    FinslerSpec::parse(&text).map_err(|e| Failure::Input(format!("{path}:{e}")))
}

/// Parses a comma-separated list of exactly `N` floats.
pub fn parse_floats<const N: usize>(text: &str, what: &str) -> Result<[f64; N], Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != N {
        return Err(Failure::Input(format!(
            "{what} needs {N} comma-separated values, found {}",
            parts.len()
        )));
    }
    let mut out = [0.0; N];
    for (i, p) in parts.iter().enumerate() {
        out[i] = p.trim().parse().map_err(|_| {
            Failure::Input(format!("{what}: `{}` is not a number", p.trim()))
        })?;
    }
    Ok(out)
}
