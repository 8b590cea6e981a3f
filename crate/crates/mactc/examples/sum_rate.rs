//! Sum-rate optimization across the four channel regimes, plus the
//! symmetric fast path.
//!
//! ```sh
//! cargo run --example sum_rate
//! ```

use mactc::channel::ChannelGains;
use mactc::sum::{maximize_sum_fixed_alphas, maximize_sum_symmetric};

fn main() -> mactc::Result<()> {
    let cases = [
        ("both links weak", ChannelGains::new(0.5, 0.6, 1.0, 1.0, 2.0, 2.0)?),
        ("both links strong", ChannelGains::new(5.0, 5.0, 1.0, 1.0, 2.0, 2.0)?),
        ("only user 1 cooperates", ChannelGains::new(4.0, 0.5, 1.0, 1.0, 2.0, 2.0)?),
        ("only user 2 cooperates", ChannelGains::new(0.5, 4.0, 1.0, 1.0, 2.0, 2.0)?),
        ("asymmetric budgets", ChannelGains::new(4.4, 2.5, 1.1, 0.7, 3.0, 1.3)?),
    ];
    println!(
        "{:>24} {:>22} {:>10} {:>14} {:>9}",
        "channel", "case", "sum rate", "eff. alphas", "fallback"
    );
    for (name, ch) in cases {
        let sol = maximize_sum_fixed_alphas(&ch, 0.2, 0.2)?;
        println!(
            "{name:>24} {:>22} {:>10.6} ({:.2}, {:.2}) {:>9}",
            sol.case.to_string(),
            sol.sum_rate,
            sol.phases.alpha1,
            sol.phases.alpha2,
            sol.used_fallback
        );
    }

    // Symmetric channels get mirrored closed forms; both solvers agree.
    let ch = ChannelGains::symmetric(5.0, 1.0, 2.0)?;
    let sym = maximize_sum_symmetric(&ch, 0.2)?;
    let gen = maximize_sum_fixed_alphas(&ch, 0.2, 0.2)?;
    println!(
        "\nsymmetric fast path: {:.9} vs general solver {:.9} (case {})",
        sym.sum_rate, gen.sum_rate, sym.case
    );
    Ok(())
}
