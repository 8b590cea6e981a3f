//! Cross-check the closed-form optimizers against the brute-force grid
//! oracle on a handful of random channels.
//!
//! ```sh
//! cargo run --release --example oracle_check
//! ```

use mactc::channel::ChannelGains;
use mactc::individual::maximize_individual_fixed_alpha;
use mactc::oracle::{oracle_individual, oracle_sum, OracleConfig, OracleObjective};
use mactc::sum::maximize_sum_fixed_alphas;

// Small deterministic generator so the example needs no dependencies.
struct Lcg(u64);
impl Lcg {
    fn next(&mut self, lo: f64, hi: f64) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        lo + (hi - lo) * ((self.0 >> 11) as f64 / (1u64 << 53) as f64)
    }
}

fn main() -> mactc::Result<()> {
    let mut rng = Lcg(0xfeed_beef);
    println!(
        "{:>3} {:>22} {:>12} {:>12} {:>10} {:>9}",
        "#", "case", "closed", "oracle", "diff", "fallback"
    );
    for i in 0..6 {
        let ch = ChannelGains::new(
            rng.next(0.1, 5.0),
            rng.next(0.1, 5.0),
            rng.next(0.3, 2.0),
            rng.next(0.3, 2.0),
            rng.next(0.5, 4.0),
            rng.next(0.5, 4.0),
        )?;
        let a1 = rng.next(0.05, 0.35);
        let a2 = rng.next(0.05, 0.35);

        let sol = maximize_individual_fixed_alpha(&ch, a1)?;
        let cfg = OracleConfig::new(48, 0.05, OracleObjective::IndividualR1)?;
        let (orate, _) = oracle_individual(&ch, sol.phases.alpha1, &cfg)?;
        println!(
            "{i:>3} {:>22} {:>12.6} {:>12.6} {:>10.2e} {:>9}",
            format!("ind/{}", sol.case),
            sol.rate,
            orate,
            (sol.rate - orate).abs(),
            sol.used_fallback
        );

        let sol = maximize_sum_fixed_alphas(&ch, a1, a2)?;
        let cfg = OracleConfig::new(32, 0.05, OracleObjective::SumRate)?;
        let (orate, _) = oracle_sum(&ch, sol.phases.alpha1, sol.phases.alpha2, &cfg)?;
        println!(
            "{i:>3} {:>22} {:>12.6} {:>12.6} {:>10.2e} {:>9}",
            format!("sum/{}", sol.case),
            sol.sum_rate,
            orate,
            (sol.sum_rate - orate).abs(),
            sol.used_fallback
        );
    }
    Ok(())
}
