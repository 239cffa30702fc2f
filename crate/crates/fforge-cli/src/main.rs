//! `fforge` — command-line front end of the Finsler geometry engine.
//!
//! Five subcommands cover the pipeline end to end: `eval` computes tensor
//! fields of a geometry at sampled points, `classify` names the family of a
//! spherically symmetric connection profile, `birkhoff` replays the rigidity
//! scan over randomized connection draws, `geodesic` integrates the geodesic
//! flow, and `check` runs a structural invariant battery.
//!
//! Every report is deterministic: identical inputs and seeds produce
//! byte-identical output. Exit codes: 0 success, 2 bad input, 3 runtime
//! failure, 4 a scan draw survived the decision chain, 5 an invariant broke.

mod commands;
mod report;

use clap::Parser;

use commands::{Failure, Outcome, Rendered};
use report::render_json;

#[derive(Debug, Parser)]
#[command(
    name = "fforge",
    version,
    about = "Finsler geometry engine: exact tensor evaluation, classification, \
             rigidity scans, geodesics, and invariant checks"
)]
enum Cli {
    /// Evaluate tensor fields of a geometry at phase-space samples.
    Eval(commands::eval::EvalArgs),
    /// Classify a spherically symmetric connection profile.
    Classify(commands::classify::ClassifyArgs),
    /// Scan randomized connection draws through the rigidity decision chain.
    Birkhoff(commands::birkhoff::BirkhoffArgs),
    /// Integrate the geodesic flow of a geometry.
    Geodesic(commands::geodesic::GeodesicArgs),
    /// Run the structural invariant battery of a geometry.
    Check(commands::check::CheckArgs),
}

fn emit(rendered: &Rendered, output: Option<&str>) -> Result<(), Failure> {
    let text = match rendered {
        Rendered::Json(v) => render_json(v),
        Rendered::Csv(s) => s.clone(),
    };
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Runtime(format!("cannot write `{path}`: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match cli {
        Cli::Eval(a) => commands::eval::run(a),
        Cli::Classify(a) => commands::classify::run(a),
        Cli::Birkhoff(a) => commands::birkhoff::run(a),
        Cli::Geodesic(a) => commands::geodesic::run(a),
        Cli::Check(a) => commands::check::run(a),
    }
}

fn output_path(cli: &Cli) -> Option<&str> {
    match cli {
        Cli::Eval(a) => a.output.as_deref(),
        Cli::Classify(a) => a.output.as_deref(),
        Cli::Birkhoff(a) => a.output.as_deref(),
        Cli::Geodesic(a) => a.output.as_deref(),
        Cli::Check(a) => a.output.as_deref(),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.rendered, output_path(&cli)) {
                eprintln!("fforge: {}", e.message());
                std::process::exit(e.exit_code());
            }
            // The report is written even when the run carries a verdict
            // failure; the exit code alone distinguishes the outcomes.
            if let Some(f) = outcome.failure {
                eprintln!("fforge: {}", f.message());
                std::process::exit(f.exit_code());
            }
        }
        Err(e) => {
            eprintln!("fforge: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
