//! Regenerates the constructor-derived geometry files under `geometries/`.
//!
//! Run from the workspace root:
//!
//! ```text
//! cargo run -p fforge-core --example regen_geometries
//! ```
//!
//! The hand-written files (`minkowski.geom`, `schwarzschild.geom`, the
//! `.kprof` profiles) are left untouched; only the three files produced by
//! the family constructors are rewritten. Golden tests assert that the
//! checked-in files match the constructor output byte for byte.

use std::fs;
use std::path::Path;

use fforge_core::so3::{exponential_text, one_variable_text, power_law_text};

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "geometries".to_string());
    let dir = Path::new(&dir);
    fs::create_dir_all(dir)?;
    fs::write(
        dir.join("powerlaw.geom"),
        power_law_text(0.3, 1.0, 0.0, 0.0, -1.0, 1.0),
    )?;
    fs::write(
        dir.join("exponential.geom"),
        exponential_text(0.4, 0.0, 0.0, -1.0, 1.0),
    )?;
    fs::write(
        dir.join("onevariable.geom"),
        one_variable_text(0.0, 0.0, -1.0, "1 + z + 0.1*z^2"),
    )?;
    println!("wrote powerlaw.geom, exponential.geom, onevariable.geom to {}", dir.display());
    Ok(())
}
