//! Optimal phase durations: exhaustive grid search versus quadratic
//! interpolation, and a precomputed lookup table with local refinement.
//!
//! ```sh
//! cargo run --example phase_search
//! ```

use mactc::channel::ChannelGains;
use mactc::phase::{
    grid_search_individual, grid_search_sum, interpolate_individual, interpolate_sum,
    LookupObjective, LookupTable,
};

fn main() -> mactc::Result<()> {
    let ch = ChannelGains::symmetric(5.0, 1.0, 2.0)?;

    let grid = grid_search_individual(&ch, 0.01)?;
    let interp = interpolate_individual(&ch, 8)?;
    println!("individual rate, g12 = 5:");
    println!(
        "  grid (step 0.01):   alpha1* = {:.4}, rate = {:.6}  ({} samples)",
        grid.best_alphas.alpha1,
        grid.best_rate,
        grid.samples.len()
    );
    println!(
        "  interpolated (L=8): alpha1* = {:.4}, rate = {:.6}  ({} samples)",
        interp.best_alphas.alpha1,
        interp.best_rate,
        interp.samples.len()
    );

    let grid = grid_search_sum(&ch, 0.02)?;
    let interp = interpolate_sum(&ch, 8, 8)?;
    println!("sum rate, g12 = 5:");
    println!(
        "  grid (step 0.02):   alphas* = ({:.3}, {:.3}), rate = {:.6}",
        grid.best_alphas.alpha1, grid.best_alphas.alpha2, grid.best_rate
    );
    println!(
        "  interpolated (8x8): alphas* = ({:.3}, {:.3}), rate = {:.6}",
        interp.best_alphas.alpha1, interp.best_alphas.alpha2, interp.best_rate
    );

    // Lookup table over a gain lattice, then a query between lattice
    // points with local refinement.
    let lattice: Vec<ChannelGains> = [2.0, 3.0, 4.0, 6.0, 8.0]
        .iter()
        .map(|&g| ChannelGains::symmetric(g, 1.0, 2.0))
        .collect::<mactc::Result<_>>()?;
    let table = LookupTable::build(&lattice, LookupObjective::Individual, 0.02)?;
    let path = std::env::temp_dir().join("mactc_lookup.json");
    table.save(std::fs::File::create(&path)?)?;
    let table = LookupTable::load(std::fs::File::open(&path)?, LookupObjective::Individual)?;
    let query = ChannelGains::symmetric(5.0, 1.0, 2.0)?;
    let refined = table.lookup_refined(&query, 0.1, 0.005)?;
    println!(
        "\nlookup table ({} entries, saved to {}):",
        table.entries.len(),
        path.display()
    );
    println!(
        "  query g12 = 5 -> alpha1* = {:.4}, rate = {:.6} after local refinement",
        refined.best_alphas.alpha1, refined.best_rate
    );
    Ok(())
}
