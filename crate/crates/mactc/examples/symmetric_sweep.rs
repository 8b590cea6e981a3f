//! Symmetric-channel sweep: optimal exchange duration and sum rate as
//! functions of the inter-user gain, showing the shrinking duration and
//! the saturating rate.
//!
//! ```sh
//! cargo run --example symmetric_sweep
//! ```

use mactc::channel::{capacity, ChannelGains};
use mactc::sum::maximize_sum_symmetric;

fn main() -> mactc::Result<()> {
    let mac = capacity(4.0)?;
    println!("g10 = 1, P = 2, classical MAC sum rate = {mac:.6}");
    println!("{:>6} {:>10} {:>12} {:>10} {:>8}", "g12", "alpha*", "sum rate", "gain", "case");
    for g12i in (10..=100).step_by(10) {
        let g12 = g12i as f64 / 10.0;
        let ch = ChannelGains::symmetric(g12, 1.0, 2.0)?;
        let mut best_a = 0.0;
        let mut best = maximize_sum_symmetric(&ch, 0.0)?;
        let mut a = 0.0025;
        while a < 0.5 {
            let sol = maximize_sum_symmetric(&ch, a)?;
            if sol.sum_rate > best.sum_rate {
                best = sol;
                best_a = a;
            }
            a += 0.0025;
        }
        println!(
            "{g12:>6.1} {best_a:>10.4} {:>12.6} {:>10.6} {:>8}",
            best.sum_rate,
            best.sum_rate - mac,
            best.case.label()
        );
    }
    Ok(())
}
