//! Rate profile along the user axis: optimal rate against the classical
//! MAC and the outer bound as the destination slides past both users.
//!
//! ```sh
//! cargo run --example rate_profile
//! ```

use mactc::planner::{rate_profile_on_line, ProfileObjective, Topology};

fn main() -> mactc::Result<()> {
    let topo = Topology::new((-0.5, 0.0), (0.5, 0.0), (0.0, 1.0), 2.4)?;
    let profile = rate_profile_on_line(
        &topo,
        ((-2.0, 0.0), (2.0, 0.0)),
        21,
        ProfileObjective::Individual { alpha1: Some(0.5) },
        2.0,
        2.0,
    )?;
    println!("{:>8} {:>12} {:>12} {:>12} {:>10}", "x", "R1*", "MAC", "outer", "gap");
    for p in &profile {
        println!(
            "{:>8.2} {:>12.6} {:>12.6} {:>12.6} {:>10.6}",
            p.position.0,
            p.rate,
            p.baseline_rate,
            p.outer_bound_rate,
            p.outer_bound_rate - p.rate
        );
    }
    // The farther the destination is from user 1 relative to the
    // inter-user distance, the closer the scheme gets to the bound.
    let first_gap = profile.first().map(|p| p.outer_bound_rate - p.rate).unwrap_or(0.0);
    let mid = &profile[profile.len() / 2];
    println!(
        "\ngap at x = {:.1}: {:.4}; gap at x = {:.1}: {:.4}",
        profile[0].position.0,
        first_gap,
        mid.position.0,
        mid.outer_bound_rate - mid.rate
    );
    Ok(())
}
