//! Achievable rate region, classical-MAC baseline and outer bound,
//! exported as CSV frontiers.
//!
//! ```sh
//! cargo run --example rate_region
//! ```

use std::fs::File;
use std::io::BufWriter;

use mactc::channel::ChannelGains;
use mactc::region::{
    classical_mac_region, envelope_region, frontier_sum_apex, outer_bound_region,
    write_frontier_csv,
};

fn main() -> mactc::Result<()> {
    // Strong inter-user links against a range of direct-link qualities.
    for (tag, g10) in [("g10_1.0", 1.0), ("g10_0.5", 0.5)] {
        let ch = ChannelGains::new(5.0, 5.0, g10, g10, 2.0, 2.0)?;
        let mac = classical_mac_region(&ch);
        let front = envelope_region(&ch, 0.05, 14)?;
        let outer = outer_bound_region(&ch, 0.05, 14)?;

        let dir = std::env::temp_dir();
        let f1 = dir.join(format!("frontier_{tag}.csv"));
        let f2 = dir.join(format!("outer_{tag}.csv"));
        write_frontier_csv(BufWriter::new(File::create(&f1)?), &front)?;
        write_frontier_csv(BufWriter::new(File::create(&f2)?), &outer)?;

        println!("{tag}: g12/g10 = {:.1}", 5.0 / g10);
        println!("  classical MAC sum bound: {:.6}", mac.smin);
        println!("  achievable sum apex:     {:.6}", frontier_sum_apex(&front));
        println!("  outer-bound sum apex:    {:.6}", frontier_sum_apex(&outer));
        println!("  frontiers written to {} and {}", f1.display(), f2.display());
    }
    Ok(())
}
