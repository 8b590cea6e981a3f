//! Scheme-region maps: which transmission scheme is optimal at every
//! destination position, for users pinned at (±0.5, 0) under the
//! pathloss model.
//!
//! ```sh
//! cargo run --example scheme_map
//! ```

use std::fs::File;
use std::io::BufWriter;

use mactc::planner::{individual_scheme_map, sum_scheme_map, PhaseConfig, Topology};

fn main() -> mactc::Result<()> {
    let topo = Topology::new((-0.5, 0.0), (0.5, 0.0), (0.0, 1.0), 2.4)?;
    let bounds = (-2.0, 2.0, -2.0, 2.0);

    let ind = individual_scheme_map(
        &topo,
        PhaseConfig::Fixed { alpha1: 0.5, alpha2: 0.0 },
        bounds,
        61,
        2.0,
        2.0,
    )?;
    println!("individual-rate map (alpha1 = 0.5), 61x61 cells:");
    for (scheme, count) in ind.histogram() {
        println!("  {scheme:<18} {count}");
    }
    let path = std::env::temp_dir().join("individual_map.csv");
    ind.write_csv(BufWriter::new(File::create(&path)?))?;
    println!("  written to {}", path.display());

    let sum = sum_scheme_map(
        &topo,
        PhaseConfig::Fixed { alpha1: 0.2, alpha2: 0.2 },
        bounds,
        61,
        2.0,
        2.0,
    )?;
    println!("sum-rate map (alpha = 0.2), 61x61 cells:");
    for (scheme, count) in sum.histogram() {
        println!("  {scheme:<22} {count}");
    }
    let path = std::env::temp_dir().join("sum_map.csv");
    sum.write_csv(BufWriter::new(File::create(&path)?))?;
    println!("  written to {}", path.display());
    Ok(())
}
