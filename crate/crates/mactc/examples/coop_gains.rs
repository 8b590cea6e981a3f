//! Cooperation gains over the classical MAC: asymptotic closed forms and
//! their finite-power counterparts.
//!
//! ```sh
//! cargo run --example coop_gains
//! ```

use mactc::channel::ChannelGains;
use mactc::sum::gain_vs_mac;

fn main() -> mactc::Result<()> {
    println!("symmetric channel, g10 = g20 = 1:");
    println!("{:>6} {:>12} {:>12} {:>12}", "P", "dR1", "dR2", "dSum");
    for p in [2.0, 4.0, 10.0, 100.0] {
        let ch = ChannelGains::symmetric(50.0, 1.0, p)?;
        let g = gain_vs_mac(&ch)?;
        println!(
            "{p:>6} {:>12.6} {:>12.6} {:>12.6}",
            g.finite_delta_r1, g.finite_delta_r2, g.finite_delta_sum
        );
    }
    let ch = ChannelGains::symmetric(50.0, 1.0, 2.0)?;
    let g = gain_vs_mac(&ch)?;
    println!(
        "{:>6} {:>12.6} {:>12.6} {:>12.6}   (P -> infinity)",
        "inf", g.delta_r1, g.delta_r2, g.delta_sum
    );

    println!("\nasymmetric direct links, g10 = 1, g20 = 2:");
    let ch = ChannelGains::new(50.0, 50.0, 1.0, 2.0, 2.0, 2.0)?;
    let g = gain_vs_mac(&ch)?;
    println!("dR1 = {:.6}, dR2 = {:.6}, dSum = {:.6}", g.delta_r1, g.delta_r2, g.delta_sum);
    Ok(())
}
