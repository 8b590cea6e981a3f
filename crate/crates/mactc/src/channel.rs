//! Channel description, resource-allocation variables and the rate
//! constraints of the three-phase cooperative scheme.
//!
//! Two users send to one destination.  A transmission block is split into
//! three phases: user 1 broadcasts a cooperative message part (phase 1),
//! user 2 does the same (phase 2), and both users transmit together
//! (phase 3), coherently combining the parts they exchanged.  All noise
//! variances are one, so every power in this crate is a noise-normalized
//! SNR contribution and every rate is in bits/s/Hz.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on the per-user power equalities.
pub const POWER_TOL: f64 = 1e-9;

/// `log2(1 + x)` for `x >= 0`, the AWGN capacity in bits/s/Hz.
///
/// Returns a domain error for negative SNR.
pub fn capacity(x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain(format!("capacity of negative SNR {x}")));
    }
    Ok(cap(x))
}

/// Infallible capacity for arguments already known to be nonnegative.
#[inline(always)]
pub(crate) fn cap(x: f64) -> f64 {
    debug_assert!(x >= -1e-12, "capacity argument {x} went negative");
    (1.0 + x.max(0.0)).log2()
}

/// Real amplitude gains of the four links plus the two power budgets.
///
/// `g12`/`g21` connect the users to each other, `g10`/`g20` connect each
/// user to the destination.  Phases are assumed perfectly compensated at
/// the receivers, so only amplitudes enter any rate expression.
#[derive(Debug,Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelGains {
    pub g12: f64,
    pub g21: f64,
    pub g10: f64,
    pub g20: f64,
    pub p1: f64,
    pub p2: f64,
}

impl ChannelGains {
    pub fn new(g12: f64, g21: f64, g10: f64, g20: f64, p1: f64, p2: f64) -> Result<Self> {
        let ch = Self { g12, g21, g10, g20, p1, p2 };
        ch.validate()?;
        Ok(ch)
    }

    /// Same gain and power at both users.
    pub fn symmetric(g12: f64, g10: f64, p: f64) -> Result<Self> {
        Self::new(g12, g12, g10, g10, p, p)
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [self.g12, self.g21, self.g10, self.g20, self.p1, self.p2];
        if vals.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gains and powers must be finite and nonnegative, got {self:?}"
            )));
        }
        Ok(())
    }

    /// True when both users see identical links and budgets.
    pub fn is_symmetric(&self) -> bool {
        let rel = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs() + b.abs());
        rel(self.g10, self.g20) && rel(self.g12, self.g21) && rel(self.p1, self.p2)
    }

    /// Gains strengthened for the cut-set style outer bound:
    /// each inter-user power gain is raised by the corresponding
    /// user-destination power gain.
    pub fn outer_bound_gains(&self) -> Self {
        Self {
            g12: (self.g10 * self.g10 + self.g12 * self.g12).sqrt(),
            g21: (self.g20 * self.g20 + self.g21 * self.g21).sqrt(),
            ..*self
        }
    }
}

/// Fractions of the block spent in each phase; `alpha3` is always the
/// remainder `1 - alpha1 - alpha2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseDurations {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
}

impl PhaseDurations {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self> {
        if !(alpha1 >= 0.0 && alpha2 >= 0.0 && alpha1 + alpha2 <= 1.0 + 1e-15) {
            return Err(Error::InvalidParameter(format!(
                "phase durations must satisfy alpha1, alpha2 >= 0 and alpha1 + alpha2 <= 1, \
                 got ({alpha1}, {alpha2})"
            )));
        }
        Ok(Self { alpha1, alpha2, alpha3: 1.0 - alpha1 - alpha2 })
    }

    /// Relay-style split with no phase 2.
    pub fn two_phase(alpha1: f64) -> Result<Self> {
        Self::new(alpha1, 0.0)
    }

    /// Degenerate schedule that spends the whole block in phase 3.
    pub fn all_phase3() -> Self {
        Self { alpha1: 0.0, alpha2: 0.0, alpha3: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let rebuilt = Self::new(self.alpha1, self.alpha2)?;
        if (rebuilt.alpha3 - self.alpha3).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "alpha3 must equal 1 - alpha1 - alpha2, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// The six per-phase transmit powers.
///
/// `rho11`/`rho22` are the phase-1/2 broadcast powers, `rho10`/`rho20` the
/// phase-3 private powers and `rho13`/`rho23` the phase-3 cooperative
/// (beamformed) powers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PowerAllocation {
    pub rho11: f64,
    pub rho22: f64,
    pub rho10: f64,
    pub rho20: f64,
    pub rho13: f64,
    pub rho23: f64,
}

impl PowerAllocation {
    pub fn values(&self) -> [f64; 6] {
        [self.rho11, self.rho22, self.rho10, self.rho20, self.rho13, self.rho23]
    }

    pub fn min_power(&self) -> f64 {
        self.values().iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Check nonnegativity and both power equalities for `(ch, pd)`.
    ///
    /// A phase of zero duration cannot carry power, so its entries must be
    /// zero for the allocation to be feasible at all.
    pub fn check_feasible(&self, ch: &ChannelGains, pd: &PhaseDurations) -> Result<()> {
        if self.min_power() < -POWER_TOL {
            return Err(Error::InfeasibleAllocation(format!(
                "negative power in {self:?}"
            )));
        }
        let zero_phase = |alpha: f64, powers: &[f64], what: &str| -> Result<()> {
            if alpha == 0.0 && powers.iter().any(|p| p.abs() > POWER_TOL) {
                return Err(Error::InfeasibleAllocation(format!(
                    "{what} has zero duration but nonzero power"
                )));
            }
            Ok(())
        };
        zero_phase(pd.alpha1, &[self.rho11], "phase 1")?;
        zero_phase(pd.alpha2, &[self.rho22], "phase 2")?;
        zero_phase(pd.alpha3, &[self.rho10, self.rho20, self.rho13, self.rho23], "phase 3")?;

        let used1 = pd.alpha1 * self.rho11 + pd.alpha3 * (self.rho10 + self.rho13);
        let used2 = pd.alpha2 * self.rho22 + pd.alpha3 * (self.rho20 + self.rho23);
        let tol1 = POWER_TOL * (1.0 + ch.p1.abs());
        let tol2 = POWER_TOL * (1.0 + ch.p2.abs());
        if (used1 - ch.p1).abs() > tol1 || (used2 - ch.p2).abs() > tol2 {
            return Err(Error::InfeasibleAllocation(format!(
                "power equalities violated: user 1 uses {used1} of {}, user 2 uses {used2} of {}",
                ch.p1, ch.p2
            )));
        }
        Ok(())
    }
}

/// All mutual-information bounds of the scheme for one parameter set,
/// together with the per-user and sum-rate constraints built from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateConstraints {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub i5: f64,
    pub i6: f64,
    pub i7: f64,
    pub i8: f64,
    pub zeta: f64,
    pub j1: f64,
    pub j2: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub s4: f64,
}

impl RateConstraints {
    /// The binding sum-rate bound.
    pub fn smin(&self) -> f64 {
        self.s1.min(self.s2).min(self.s3).min(self.s4)
    }
}

/// Effective phase-3 SNR at the destination, including the coherent
/// beamforming cross term:
/// `zeta = g10^2 (rho10 + rho13) + g20^2 (rho20 + rho23)
///         + 2 g10 g20 sqrt(rho13 rho23)`.
pub fn eval_zeta(ch: &ChannelGains, pa: &PowerAllocation) -> f64 {
    ch.g10 * ch.g10 * (pa.rho10 + pa.rho13)
        + ch.g20 * ch.g20 * (pa.rho20 + pa.rho23)
        + 2.0 * ch.g10 * ch.g20 * (pa.rho13 * pa.rho23).max(0.0).sqrt()
}

/// Evaluate every decoding constraint of the scheme.
///
/// The allocation must satisfy both power equalities for `(ch, pd)`;
/// otherwise an infeasible-allocation error is returned so that frozen
/// reference values can never be produced from an invalid point.
/// A phase with zero duration contributes zero rate.
pub fn eval_constraints(
    ch: &ChannelGains,
    pd: &PhaseDurations,
    pa: &PowerAllocation,
) -> Result<RateConstraints> {
    ch.validate()?;
    pd.validate()?;
    pa.check_feasible(ch, pd)?;

    let term = |alpha: f64, snr: f64| if alpha == 0.0 { 0.0 } else { alpha * cap(snr) };

    let zeta = eval_zeta(ch, pa);
    let i1 = term(pd.alpha1, ch.g12 * ch.g12 * pa.rho11);
    let i2 = term(pd.alpha2, ch.g21 * ch.g21 * pa.rho22);
    let i3 = term(pd.alpha3, ch.g10 * ch.g10 * pa.rho10);
    let i4 = term(pd.alpha3, ch.g20 * ch.g20 * pa.rho20);
    let i5 = term(pd.alpha3, ch.g10 * ch.g10 * pa.rho10 + ch.g20 * ch.g20 * pa.rho20);
    let d1 = term(pd.alpha1, ch.g10 * ch.g10 * pa.rho11);
    let d2 = term(pd.alpha2, ch.g20 * ch.g20 * pa.rho22);
    let bf = term(pd.alpha3, zeta);
    let i6 = d1 + bf;
    let i7 = d2 + bf;
    let i8 = d1 + d2 + bf;

    Ok(RateConstraints {
        i1,
        i2,
        i3,
        i4,
        i5,
        i6,
        i7,
        i8,
        zeta,
        j1: i1 + i3,
        j2: i2 + i4,
        s1: i1 + i2 + i5,
        s2: i2 + i6,
        s3: i1 + i7,
        s4: i8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn capacity_basics() {
        assert_eq!(capacity(0.0).unwrap(), 0.0);
        assert!(close(capacity(1.0).unwrap(), 1.0, 1e-15));
        assert!(close(capacity(3.0).unwrap(), 2.0, 1e-15));
        assert!(capacity(-0.5).is_err());
    }

    #[test]
    fn zeta_examples() {
        let ch = ChannelGains::new(5.0, 5.0, 1.0, 1.0, 4.0, 4.0).unwrap();
        // No beamforming term.
        let pa = PowerAllocation { rho10: 2.0, rho20: 2.0, ..Default::default() };
        assert!(close(eval_zeta(&ch, &pa), 4.0, 1e-15));
        // Fully cooperative, (sqrt(1) + sqrt(1))^2 = 4.
        let pa = PowerAllocation { rho13: 1.0, rho23: 1.0, ..Default::default() };
        assert!(close(eval_zeta(&ch, &pa), 4.0, 1e-15));
        // Mixed, checked by hand:
        // 1*(0.5 + 1) + 4*(0.25 + 0.25) + 2*1*2*sqrt(1*0.25) = 5.5.
        let ch = ChannelGains::new(5.0, 5.0, 1.0, 2.0, 4.0, 4.0).unwrap();
        let pa = PowerAllocation {
            rho10: 0.5,
            rho20: 0.25,
            rho13: 1.0,
            rho23: 0.25,
            ..Default::default()
        };
        assert!(close(eval_zeta(&ch, &pa), 5.5, 1e-15));
    }

    #[test]
    fn zeta_monotone_in_each_power() {
        let ch = ChannelGains::new(2.0, 2.0, 1.0, 0.7, 4.0, 4.0).unwrap();
        let base = PowerAllocation {
            rho10: 0.5,
            rho20: 0.4,
            rho13: 0.3,
            rho23: 0.2,
            ..Default::default()
        };
        let z0 = eval_zeta(&ch, &base);
        for bump in [
            PowerAllocation { rho10: base.rho10 + 0.1, ..base },
            PowerAllocation { rho20: base.rho20 + 0.1, ..base },
            PowerAllocation { rho13: base.rho13 + 0.1, ..base },
            PowerAllocation { rho23: base.rho23 + 0.1, ..base },
        ] {
            assert!(eval_zeta(&ch, &bump) >= z0);
        }
    }

    #[test]
    fn constraints_classical_mac_point() {
        // No exchange phases: the scheme degenerates to the classical MAC.
        let ch = ChannelGains::new(3.0, 3.0, 1.0, 1.0, 2.0, 2.0).unwrap();
        let pd = PhaseDurations::all_phase3();
        let pa = PowerAllocation { rho10: 2.0, rho20: 2.0, ..Default::default() };
        let rc = eval_constraints(&ch, &pd, &pa).unwrap();
        assert_eq!(rc.i1, 0.0);
        assert_eq!(rc.i2, 0.0);
        assert!(close(rc.s4, 5.0_f64.log2(), 1e-12));
    }

    #[test]
    fn constraints_single_phase_point() {
        // Whole block in phase 1 is infeasible for user 2 unless p2 = 0.
        let ch = ChannelGains::new(5.0, 5.0, 1.0, 1.0, 2.0, 0.0).unwrap();
        let pd = PhaseDurations::new(1.0, 0.0).unwrap();
        let pa = PowerAllocation { rho11: 2.0, ..Default::default() };
        let rc = eval_constraints(&ch, &pd, &pa).unwrap();
        assert!(close(rc.i1, 51.0_f64.log2(), 1e-12));
        // Every phase-3 bound vanishes; the destination still hears the
        // phase-1 broadcast directly.
        assert_eq!(rc.i3, 0.0);
        assert_eq!(rc.i4, 0.0);
        assert_eq!(rc.i5, 0.0);
        assert!(close(rc.s4, 3.0_f64.log2(), 1e-12));
    }

    #[test]
    fn golden_constraint_vector() {
        // Feasible equal-split allocation on a strong symmetric channel;
        // values frozen from an independent scripted evaluation of the
        // constraint formulas.
        let ch = ChannelGains::new(5.0, 5.0, 1.0, 1.0, 2.0, 2.0).unwrap();
        let pd = PhaseDurations::new(0.2, 0.2).unwrap();
        let third = 4.0 / 3.0;
        let pa = PowerAllocation {
            rho11: 2.0,
            rho22: 2.0,
            rho10: third,
            rho20: third,
            rho13: third,
            rho23: third,
        };
        let rc = eval_constraints(&ch, &pd, &pa).unwrap();
        let tol = 1e-12;
        assert!(close(rc.zeta, 8.0, tol));
        assert!(close(rc.i1, 1.134_485_068_394_299, tol));
        assert!(close(rc.i2, 1.134_485_068_394_299, tol));
        assert!(close(rc.i3, 0.7334354528018688, tol));
        assert!(close(rc.i4, 0.7334354528018688, tol));
        assert!(close(rc.i5, 1.1246814707496846, tol));
        assert!(close(rc.i6, 2.2189475010096187, tol));
        assert!(close(rc.i7, 2.2189475010096187, tol));
        assert!(close(rc.i8, 2.535_940_001_153_85, tol));
        assert!(close(rc.j1, 1.8679205211961679, tol));
        assert!(close(rc.j2, 1.8679205211961679, tol));
        assert!(close(rc.s1, 3.393_651_607_538_283, tol));
        assert!(close(rc.s2, 3.353_432_569_403_918, tol));
        assert!(close(rc.s3, 3.353_432_569_403_918, tol));
        assert!(close(rc.s4, 2.535_940_001_153_85, tol));
        assert!(close(rc.smin(), rc.s4, tol));
    }

    #[test]
    fn infeasible_power_is_rejected() {
        let ch = ChannelGains::new(5.0, 5.0, 1.0, 1.0, 2.0, 2.0).unwrap();
        let pd = PhaseDurations::new(0.2, 0.2).unwrap();
        // The "equal split with rho = 1" point underspends user 1 by 0.4.
        let pa = PowerAllocation {
            rho11: 2.0,
            rho22: 2.0,
            rho10: 1.0,
            rho20: 1.0,
            rho13: 1.0,
            rho23: 1.0,
        };
        assert!(matches!(
            eval_constraints(&ch, &pd, &pa),
            Err(Error::InfeasibleAllocation(_))
        ));
    }

    #[test]
    fn zero_duration_phase_must_be_silent() {
        let ch = ChannelGains::new(5.0, 5.0, 1.0, 1.0, 2.0, 2.0).unwrap();
        let pd = PhaseDurations::new(0.0, 0.0).unwrap();
        let pa = PowerAllocation { rho11: 1.0, rho10: 2.0, rho20: 2.0, ..Default::default() };
        assert!(eval_constraints(&ch, &pd, &pa).is_err());
    }

    #[test]
    fn scaling_invariance() {
        // g -> c g together with P -> P / c^2 leaves every bound unchanged.
        let ch = ChannelGains::new(3.0, 2.0, 1.1, 0.8, 2.0, 1.5).unwrap();
        let pd = PhaseDurations::new(0.25, 0.15).unwrap();
        let q1 = (ch.p1 - pd.alpha1 * 1.0) / pd.alpha3;
        let q2 = (ch.p2 - pd.alpha2 * 0.8) / pd.alpha3;
        let pa = PowerAllocation {
            rho11: 1.0,
            rho22: 0.8,
            rho10: 0.6 * q1,
            rho20: 0.3 * q2,
            rho13: 0.4 * q1,
            rho23: 0.7 * q2,
        };
        let rc = eval_constraints(&ch, &pd, &pa).unwrap();

        let c = 1.7;
        let ch2 = ChannelGains::new(
            c * ch.g12,
            c * ch.g21,
            c * ch.g10,
            c * ch.g20,
            ch.p1 / (c * c),
            ch.p2 / (c * c),
        )
        .unwrap();
        let scale = 1.0 / (c * c);
        let pa2 = PowerAllocation {
            rho11: pa.rho11 * scale,
            rho22: pa.rho22 * scale,
            rho10: pa.rho10 * scale,
            rho20: pa.rho20 * scale,
            rho13: pa.rho13 * scale,
            rho23: pa.rho23 * scale,
        };
        let rc2 = eval_constraints(&ch2, &pd, &pa2).unwrap();
        for (a, b) in rc.into_iter_pairs(rc2) {
            assert!(close(a, b, 1e-9), "{a} vs {b}");
        }
    }

    impl RateConstraints {
        fn into_iter_pairs(self, other: Self) -> impl Iterator<Item = (f64, f64)> {
            vec![
                (self.i1, other.i1),
                (self.i2, other.i2),
                (self.i3, other.i3),
                (self.i4, other.i4),
                (self.i5, other.i5),
                (self.i6, other.i6),
                (self.i7, other.i7),
                (self.i8, other.i8),
            ]
            .into_iter()
        }
    }
}
