//! Maximization of the sum rate `R1 + R2` for fixed phase durations.
//!
//! For a fixed `(alpha1, alpha2)` the problem is convex in the six powers
//! with objective `min(S1, S2, S3, S4)`.  Four channel regimes decide the
//! scheme: no cooperation (classical MAC), mutual cooperation, and the two
//! one-sided regimes.  Inside the mutual regime the KKT system yields
//! closed forms when all private powers stay positive, and a reduced system
//! on the zero-private face otherwise.  Every closed-form candidate is
//! validated against the KKT certificate (multiplier consistency, sign
//! conditions, tightness); failures are re-solved by an exact numerical
//! routine that reduces the phase-3 sub-problem to a monotone crossing in
//! the beamforming amplitude.

use serde::{Deserialize, Serialize};

use crate::channel::{cap, eval_constraints, ChannelGains, PhaseDurations, PowerAllocation};
use crate::error::{Error, Result};
use crate::individual::KKT_TOL;
use crate::numerics::{bisect, golden_max, scan_for_bracket, ScanOutcome};

const RHO_BISECT_TOL: f64 = 1e-10;
const BISECT_MAX_ITER: usize = 200;
const SCAN_POINTS: usize = 65;

/// Transmission scheme that attains the maximum sum rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SumCase {
    /// Case 1: both inter-user links are weak; nobody cooperates.
    ClassicalMac,
    /// Case 2a: both users run partial decode-forward with private parts.
    BothPdf,
    /// Case 2b: both users run full decode-forward (no private parts).
    BothDf,
    /// Case 3a: user 1 runs PDF, user 2 transmits directly.
    User1PdfUser2Direct,
    /// Case 3b: user 1 runs DF, user 2 transmits directly.
    User1DfUser2Direct,
    /// Case 4: the mirror image of case 3 (user 2 cooperates).
    Mirror,
}

impl SumCase {
    pub fn label(&self) -> &'static str {
        match self {
            SumCase::ClassicalMac => "1",
            SumCase::BothPdf => "2a",
            SumCase::BothDf => "2b",
            SumCase::User1PdfUser2Direct => "3a",
            SumCase::User1DfUser2Direct => "3b",
            SumCase::Mirror => "4",
        }
    }
}

impl std::fmt::Display for SumCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SumCase::ClassicalMac => "ClassicalMac",
            SumCase::BothPdf => "BothPdf",
            SumCase::BothDf => "BothDf",
            SumCase::User1PdfUser2Direct => "User1PdfUser2Direct",
            SumCase::User1DfUser2Direct => "User1DfUser2Direct",
            SumCase::Mirror => "Mirror",
        };
        write!(f, "{name}")
    }
}

/// Result of a sum-rate optimization at fixed phase durations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SumSolution {
    /// Maximized `R1 + R2`; equals `min(S1..S4)` at `allocation`.
    pub sum_rate: f64,
    pub allocation: PowerAllocation,
    /// Effective phase split.  One-sided cases pin the unused exchange
    /// phase at zero; the classical MAC pins both.
    pub phases: PhaseDurations,
    pub case: SumCase,
    pub kkt_residual: f64,
    pub used_fallback: bool,
}

/// Asymptotic and finite-power rate gains of cooperation over the
/// classical MAC, in bits/s/Hz.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CooperationGains {
    /// Gain of `R1` in the strong-cooperation, high-power limit.
    pub delta_r1: f64,
    pub delta_r2: f64,
    pub delta_sum: f64,
    /// Gain of `R1` at the actual budgets, still assuming the inter-user
    /// links are strong enough that only the beamformed bound binds.
    pub finite_delta_r1: f64,
    pub finite_delta_r2: f64,
    pub finite_delta_sum: f64,
}

/// Gains of the cooperative scheme over the classical MAC.
///
/// The asymptotic values apply as both the inter-user gains and the power
/// budgets grow without bound; the finite variants keep the budgets of
/// `ch` and take only the inter-user gains to the limit.
pub fn gain_vs_mac(ch: &ChannelGains) -> Result<CooperationGains> {
    ch.validate()?;
    if ch.g10 == 0.0 || ch.g20 == 0.0 {
        return Err(Error::SingularChannel("gain formulas need g10 > 0 and g20 > 0".into()));
    }
    let (g1, g2) = (ch.g10, ch.g20);
    let (p1, p2) = (ch.p1, ch.p2);
    let cross = 2.0 * g1 * g2;
    Ok(CooperationGains {
        delta_r1: cap((g2 * g2 + cross) / (g1 * g1)),
        delta_r2: cap((g1 * g1 + cross) / (g2 * g2)),
        delta_sum: cap(cross / (g1 * g1 + g2 * g2)),
        finite_delta_r1: cap((g2 * g2 * p2 + cross * (p1 * p2).sqrt()) / (1.0 + g1 * g1 * p1)),
        finite_delta_r2: cap((g1 * g1 * p1 + cross * (p1 * p2).sqrt()) / (1.0 + g2 * g2 * p2)),
        finite_delta_sum: cap(
            cross * (p1 * p2).sqrt() / (1.0 + g1 * g1 * p1 + g2 * g2 * p2),
        ),
    })
}

/// Constants of the fixed-phase sum-rate KKT system evaluated at a partial
/// allocation.  Three constants of the one-sided reduced system reference
/// symbols that are never defined by the derivation and are deliberately
/// not exposed; the solver never needs them.
#[derive(Debug, Clone, Copy)]
pub struct SumTableConstants {
    /// `1/g10^2 - 1/g12^2`.
    pub a1: f64,
    /// `1/g20^2 - 1/g21^2`.
    pub a2: f64,
    /// `1/g10^2 + rho11`.
    pub a3: f64,
    /// `1/g20^2 + rho22`.
    pub a4: f64,
    /// `rho11 + 1/g12^2`.
    pub a5: f64,
    /// `1 + g10^2 rho10 + g20^2 rho20`, the private-part SNR plus one.
    pub a6: f64,
    /// `2 g20^2`.
    pub a7: f64,
    /// `2 g10^2 / (1 - alpha1)`.
    pub a8: f64,
    /// `1 + g10^2 rho10 + g20^2 p2 / (1 - alpha1)`.
    pub a9: f64,
    /// `(g10^2 p1 + alpha1) / (1 - alpha1) - g10^2 rho10`.
    pub a10: f64,
    /// `(1 + g10^2 p1 + g20^2 p2) / (1 - alpha1)`.
    pub a11: f64,
    /// Linear coefficient of the quadratic for `a4` in the mutual case.
    pub b1: f64,
    /// Linear coefficient of the quadratic for `a3` in the one-sided case.
    pub b2: f64,
    /// `(2 a3 - a1) / (a3 - a1)`.
    pub b3: f64,
    /// Constant coefficient of the quadratic for `a3` in the one-sided case.
    pub b4: f64,
    /// `b2 + g10^2 rho13 - g10^2 (a5 + a1)`.
    pub b8: f64,
    /// `(g10/g20) (a5 + a1) sqrt(rho13) / a5`.
    pub b9: f64,
    /// Stationarity value of `1 + g20^2 rho20` on the zero-`rho10` face of
    /// the one-sided case.
    pub b10: f64,
    /// Exchange-phase rate surplus of both users, scaled by `1/alpha3`.
    pub f1: f64,
    /// Exchange-phase rate surplus of user 1 alone, scaled by
    /// `alpha1/alpha3`.
    pub f6: f64,
}

/// Evaluate the sum-rate KKT constants at a partial allocation.
pub fn table2_definitions(
    ch: &ChannelGains,
    alpha1: f64,
    alpha2: f64,
    partial: &PowerAllocation,
) -> Result<SumTableConstants> {
    ch.validate()?;
    if ch.g10 == 0.0 || ch.g20 == 0.0 || ch.g12 == 0.0 || ch.g21 == 0.0 {
        return Err(Error::SingularChannel("sum-rate constants need all gains > 0".into()));
    }
    let a3f = 1.0 - alpha1 - alpha2;
    if !(alpha1 >= 0.0 && alpha2 >= 0.0 && a3f > 0.0) || alpha1 >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "phase durations ({alpha1}, {alpha2}) leave no cooperative phase"
        )));
    }
    let (g12, g21, g10, g20) = (ch.g12, ch.g21, ch.g10, ch.g20);
    let r = partial;
    let a1 = g10.powi(-2) - g12.powi(-2);
    let a2 = g20.powi(-2) - g21.powi(-2);
    let a3 = g10.powi(-2) + r.rho11;
    let a4 = g20.powi(-2) + r.rho22;
    let a5 = r.rho11 + g12.powi(-2);
    let a6 = 1.0 + g10 * g10 * r.rho10 + g20 * g20 * r.rho20;
    let b3 = (2.0 * a3 - a1) / (a3 - a1);
    let a11 = (1.0 + g10 * g10 * ch.p1 + g20 * g20 * ch.p2) / (1.0 - alpha1);
    let beam = g10 * r.rho13.max(0.0).sqrt() + g20 * r.rho23.max(0.0).sqrt();
    let b10_den = 1.0 + (a5 + a1) / a5 * (g10 / g20) * (r.rho13 / r.rho23.max(1e-300)).sqrt();
    let f1 = (alpha1 * cap(g12 * g12 * r.rho11) + alpha2 * cap(g21 * g21 * r.rho22)
        - alpha1 * cap(g10 * g10 * r.rho11)
        - alpha2 * cap(g20 * g20 * r.rho22))
        / a3f;
    let f6 = alpha1 / a3f * (cap(g12 * g12 * r.rho11) - cap(g10 * g10 * r.rho11));
    Ok(SumTableConstants {
        a1,
        a2,
        a3,
        a4,
        a5,
        a6,
        a7: 2.0 * g20 * g20,
        a8: 2.0 * g10 * g10 / (1.0 - alpha1),
        a9: 1.0 + g10 * g10 * r.rho10 + g20 * g20 * ch.p2 / (1.0 - alpha1),
        a10: (g10 * g10 * ch.p1 + alpha1) / (1.0 - alpha1) - g10 * g10 * r.rho10,
        a11,
        b1: 2.0 * g20 * g20 * a2 + 2.0 * g10 * g10 * a3 + a6 * (2.0 - b3),
        b2: (2.0 + alpha1) / (1.0 - alpha1) * g10 * g10 * a1 + 2.0 * a11,
        b3,
        b4: a1 * ((1.0 + g10 * g10 * r.rho10 + g20 * g20 * ch.p2 / (1.0 - alpha1))
            + 3.0 * ((g10 * g10 * ch.p1 + alpha1) / (1.0 - alpha1) - g10 * g10 * r.rho10)),
        b8: (2.0 + alpha1) / (1.0 - alpha1) * g10 * g10 * a1 + 2.0 * a11 + g10 * g10 * r.rho13
            - g10 * g10 * (a5 + a1),
        b9: (g10 / g20) * (a5 + a1) / a5 * r.rho13.max(0.0).sqrt(),
        b10: ((a5 + a1) * g10 * (g10 + g20 * (r.rho23 / r.rho13.max(1e-300)).sqrt())
            - beam * beam)
            / b10_den,
        f1,
        f6,
    })
}

/// Tightness residual of the mutual interior case: stationarity minus
/// tightness expressions for the cooperative power, as a function of the
/// private-SNR variable `a6` (partial supplies `rho11` and `rho22`).
pub fn sum_residual_f2(
    ch: &ChannelGains,
    alpha1: f64,
    alpha2: f64,
    partial: &PowerAllocation,
    a6: f64,
) -> Result<f64> {
    let t = table2_definitions(ch, alpha1, alpha2, partial)?;
    let g10 = ch.g10;
    Ok(2.0 * g10 * g10 * t.a3 - t.b3 * a6 - (t.f1.exp2() - 1.0) * a6)
}

/// Power-balance residual of the mutual interior case for a candidate
/// `rho11` (partial supplies `rho22`).
pub fn sum_residual_f3(
    ch: &ChannelGains,
    alpha1: f64,
    alpha2: f64,
    partial: &PowerAllocation,
    a6: f64,
) -> Result<f64> {
    let t = table2_definitions(ch, alpha1, alpha2, partial)?;
    let a3f = 1.0 - alpha1 - alpha2;
    let g = 2.0 * ch.g10 * ch.g10 * t.a3 - t.b3 * a6;
    Ok(0.5 * g + a6
        - 1.0
        - (ch.g10 * ch.g10 * ch.p1 + ch.g20 * ch.g20 * ch.p2
            - alpha1 * ch.g10 * ch.g10 * partial.rho11
            - alpha2 * ch.g20 * ch.g20 * partial.rho22)
            / a3f)
}

/// Stationarity residual on the zero-private face of the mutual case.
pub fn sum_residual_f4(
    ch: &ChannelGains,
    alpha1: f64,
    alpha2: f64,
    partial: &PowerAllocation,
) -> Result<f64> {
    let t = table2_definitions(ch, alpha1, alpha2, partial)?;
    let (g10, g20) = (ch.g10, ch.g20);
    let (r13, r23) = (partial.rho13, partial.rho23);
    if r13 <= 0.0 || r23 <= 0.0 {
        return Err(Error::Domain("residual f4 needs rho13, rho23 > 0".into()));
    }
    let beam = g10 * r13.sqrt() + g20 * r23.sqrt();
    let xi = 1.0 + beam * beam;
    Ok(xi * (t.a1 / t.a3 - t.a2 / t.a4)
        + g10 * (g10 + g20 * (r23 / r13).sqrt()) * (t.a3 - t.a1)
        - g20 * (g20 + g10 * (r13 / r23).sqrt()) * (t.a4 - t.a2))
}

/// Tightness residual on the zero-private face of the mutual case.
pub fn sum_residual_f5(
    ch: &ChannelGains,
    alpha1: f64,
    alpha2: f64,
    partial: &PowerAllocation,
) -> Result<f64> {
    let t = table2_definitions(ch, alpha1, alpha2, partial)?;
    let root = (t.f1.exp2() - 1.0).max(0.0).sqrt() - ch.g20 * partial.rho23.max(0.0).sqrt();
    Ok(partial.rho13 - root * root / (ch.g10 * ch.g10))
}

/// Tightness residual of the one-sided interior case in `rho10`.
pub fn sum_residual_f7(ch: &ChannelGains, alpha1: f64, partial: &PowerAllocation) -> Result<f64> {
    let t = table2_definitions(ch, alpha1, 0.0, partial)?;
    let a6 = 1.0 + ch.g10 * ch.g10 * partial.rho10 + ch.g20 * ch.g20 * partial.rho20;
    Ok(2.0 * ch.g10 * ch.g10 * t.a3 - t.b3 * a6 - a6 * (t.f6.exp2() - 1.0))
}

/// Tightness residual of the one-sided case on its zero-`rho10` face.
pub fn sum_residual_f8(ch: &ChannelGains, alpha1: f64, partial: &PowerAllocation) -> Result<f64> {
    let t = table2_definitions(ch, alpha1, 0.0, partial)?;
    let beam = ch.g10 * partial.rho13.max(0.0).sqrt() + ch.g20 * partial.rho23.max(0.0).sqrt();
    let excess = t.f6.exp2() - 1.0;
    if excess <= 0.0 {
        return Err(Error::Domain("residual f8 needs a positive exchange surplus".into()));
    }
    Ok(t.b10 - beam * beam / excess)
}

// ---------------------------------------------------------------------------
// Solver internals
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct SumCtx {
    g12: f64,
    g21: f64,
    g10: f64,
    g20: f64,
    p1: f64,
    p2: f64,
    a1f: f64,
    a2f: f64,
    a3f: f64,
    a1: f64,
    a2: f64,
}

#[derive(Clone, Copy, Debug)]
struct RawAlloc {
    rho11: f64,
    rho22: f64,
    rho10: f64,
    rho20: f64,
    rho13: f64,
    rho23: f64,
}

struct SumCandidate {
    alloc: RawAlloc,
    case: SumCase,
    residual: f64,
    fallback: bool,
}

impl SumCtx {
    fn new(ch: &ChannelGains, a1f: f64, a2f: f64) -> Self {
        Self {
            g12: ch.g12,
            g21: ch.g21,
            g10: ch.g10,
            g20: ch.g20,
            p1: ch.p1,
            p2: ch.p2,
            a1f,
            a2f,
            a3f: 1.0 - a1f - a2f,
            a1: if ch.g12 > 0.0 { ch.g10.powi(-2) - ch.g12.powi(-2) } else { f64::NAN },
            a2: if ch.g21 > 0.0 { ch.g20.powi(-2) - ch.g21.powi(-2) } else { f64::NAN },
        }
    }

    fn bounds(&self, r: &RawAlloc) -> (f64, f64, f64, f64) {
        let zeta = self.g10 * self.g10 * (r.rho10 + r.rho13)
            + self.g20 * self.g20 * (r.rho20 + r.rho23)
            + 2.0 * self.g10 * self.g20 * (r.rho13 * r.rho23).max(0.0).sqrt();
        let i1 = if self.a1f > 0.0 { self.a1f * cap(self.g12 * self.g12 * r.rho11) } else { 0.0 };
        let i2 = if self.a2f > 0.0 { self.a2f * cap(self.g21 * self.g21 * r.rho22) } else { 0.0 };
        let c1 = if self.a1f > 0.0 { self.a1f * cap(self.g10 * self.g10 * r.rho11) } else { 0.0 };
        let c2 = if self.a2f > 0.0 { self.a2f * cap(self.g20 * self.g20 * r.rho22) } else { 0.0 };
        let private = self.a3f * cap(self.g10 * self.g10 * r.rho10 + self.g20 * self.g20 * r.rho20);
        let bf = self.a3f * cap(zeta);
        (i1 + i2 + private, i2 + c1 + bf, i1 + c2 + bf, c1 + c2 + bf)
    }


    // --- mutual cooperation, interior (both private powers positive) ---

    /// `rho22` solving the cross-user stationarity balance for a given
    /// private SNR `a6` and `rho11`.
    fn rho22_of(&self, a6: f64, rho11: f64) -> Option<f64> {
        let a3 = self.g10.powi(-2) + rho11;
        let b3 = (2.0 * a3 - self.a1) / (a3 - self.a1);
        let b1 = 2.0 * self.g20 * self.g20 * self.a2
            + 2.0 * self.g10 * self.g10 * a3
            + a6 * (2.0 - b3);
        let b2 = self.a2 * (2.0 * self.g10 * self.g10 * a3 + a6 * (1.0 - b3));
        let disc = b1 * b1 - 8.0 * self.g20 * self.g20 * b2;
        if disc < 0.0 {
            return None;
        }
        let a4 = (b1 + disc.sqrt()) / (4.0 * self.g20 * self.g20);
        let rho22 = a4 - self.g20.powi(-2);
        if rho22 < -1e-12 {
            None
        } else {
            Some(rho22.max(0.0))
        }
    }

    fn f3_inner(&self, a6: f64, rho11: f64) -> Option<f64> {
        let rho22 = self.rho22_of(a6, rho11)?;
        let a3 = self.g10.powi(-2) + rho11;
        let b3 = (2.0 * a3 - self.a1) / (a3 - self.a1);
        let g = 2.0 * self.g10 * self.g10 * a3 - b3 * a6;
        Some(
            0.5 * g + a6
                - 1.0
                - (self.g10 * self.g10 * self.p1 + self.g20 * self.g20 * self.p2
                    - self.a1f * self.g10 * self.g10 * rho11
                    - self.a2f * self.g20 * self.g20 * rho22)
                    / self.a3f,
        )
    }

    fn solve_rho11(&self, a6: f64) -> Option<f64> {
        let hi = self.p1 / self.a1f;
        match scan_for_bracket(|x| self.f3_inner(a6, x), 0.0, hi, SCAN_POINTS) {
            ScanOutcome::Bracket { lo, hi, f_lo_neg } => Some(bisect(
                |x| self.f3_inner(a6, x),
                lo,
                hi,
                f_lo_neg,
                RHO_BISECT_TOL * (1.0 + self.p1),
                BISECT_MAX_ITER,
            )),
            _ => None,
        }
    }

    fn f2_outer(&self, a6: f64) -> Option<f64> {
        let rho11 = self.solve_rho11(a6)?;
        let rho22 = self.rho22_of(a6, rho11)?;
        let a3 = self.g10.powi(-2) + rho11;
        let b3 = (2.0 * a3 - self.a1) / (a3 - self.a1);
        let g = 2.0 * self.g10 * self.g10 * a3 - b3 * a6;
        if g < 0.0 {
            return None;
        }
        let f1 = (self.a1f * cap(self.g12 * self.g12 * rho11)
            + self.a2f * cap(self.g21 * self.g21 * rho22)
            - self.a1f * cap(self.g10 * self.g10 * rho11)
            - self.a2f * cap(self.g20 * self.g20 * rho22))
            / self.a3f;
        Some(g - (f1.exp2() - 1.0) * a6)
    }

    fn mutual_interior(&self) -> Option<SumCandidate> {
        let a6_max = 1.0 + (self.g10 * self.g10 * self.p1 + self.g20 * self.g20 * self.p2) / self.a3f;
        let outcome = scan_for_bracket(|x| self.f2_outer(x), 1.0 + 1e-9, a6_max, SCAN_POINTS);
        let ScanOutcome::Bracket { lo, hi, f_lo_neg } = outcome else {
            return None;
        };
        let a6 = bisect(
            |x| self.f2_outer(x),
            lo,
            hi,
            f_lo_neg,
            RHO_BISECT_TOL * a6_max,
            BISECT_MAX_ITER,
        );
        let rho11 = self.solve_rho11(a6)?;
        let rho22 = self.rho22_of(a6, rho11)?;
        let a3 = self.g10.powi(-2) + rho11;
        let b3 = (2.0 * a3 - self.a1) / (a3 - self.a1);
        let g = 2.0 * self.g10 * self.g10 * a3 - b3 * a6;
        let rho13 = g / (4.0 * self.g10 * self.g10);
        let rho23 = self.g10 * self.g10 / (self.g20 * self.g20) * rho13;
        let rho10 = (self.p1 - self.a1f * rho11) / self.a3f - rho13;
        let rho20 = (self.p2 - self.a2f * rho22) / self.a3f - rho23;
        if rho10 < -1e-12 || rho20 < -1e-12 || rho13 < 0.0 {
            return None;
        }
        let alloc = RawAlloc {
            rho11,
            rho22,
            rho10: rho10.max(0.0),
            rho20: rho20.max(0.0),
            rho13,
            rho23,
        };
        let residual = self.interior_certificate(&alloc)?;
        Some(SumCandidate { alloc, case: SumCase::BothPdf, residual, fallback: false })
    }

    /// KKT certificate for interior points of the mutual case: the four
    /// stationarity closures for the beamformed-bound multiplier must
    /// agree, the multiplier must be a convex weight, and the two active
    /// bounds must be equal.
    fn interior_certificate(&self, r: &RawAlloc) -> Option<f64> {
        if r.rho13 <= 0.0 || r.rho23 <= 0.0 {
            return None;
        }
        let (s1, s2, s3, s4) = self.bounds(r);
        let tight = (s1 - s4).abs() / s1.abs().max(1.0);
        let xi = 1.0
            + self.g10 * self.g10 * (r.rho10 + r.rho13)
            + self.g20 * self.g20 * (r.rho20 + r.rho23)
            + 2.0 * self.g10 * self.g20 * (r.rho13 * r.rho23).sqrt();
        let q12 = (r.rho23 / r.rho13).sqrt();
        let d1 = xi
            + self.g10 * self.g20 * q12
                * (self.g10.powi(-2) + r.rho10 + self.g20 * self.g20 / (self.g10 * self.g10) * r.rho20);
        let d2 = xi
            + self.g10 * self.g20 / q12
                * (self.g20.powi(-2) + self.g10 * self.g10 / (self.g20 * self.g20) * r.rho10 + r.rho20);
        let a3 = self.g12.powi(-2) + r.rho11;
        let d3 = self.g10 * (self.g10 + self.g20 * q12) * a3 + xi
            - xi * a3 / (self.g10.powi(-2) + r.rho11);
        let a4 = self.g21.powi(-2) + r.rho22;
        let d4 = self.g20 * (self.g20 + self.g10 / q12) * a4 + xi
            - xi * a4 / (self.g20.powi(-2) + r.rho22);
        let dmax = d1.max(d2).max(d3).max(d4);
        let dmin = d1.min(d2).min(d3).min(d4);
        let station = (dmax - dmin) / dmax.abs().max(1.0);
        let lambda = xi / d1;
        if !(-KKT_TOL..=1.0 + KKT_TOL).contains(&lambda) {
            return None;
        }
        let residual = tight.max(station);
        // The two bounds dropped as redundant really must be redundant.
        if s2 < s4 - KKT_TOL || s3 < s4 - KKT_TOL {
            return None;
        }
        (residual <= KKT_TOL).then_some(residual)
    }

    // --- mutual cooperation, zero-private face ---

    fn df_rho13_of(&self, rho23: f64) -> Option<f64> {
        let hi = self.p1 / self.a3f * (1.0 - 1e-12);
        let f5 = |rho13: f64| -> Option<f64> {
            let rho11 = (self.p1 - self.a3f * rho13) / self.a1f;
            let rho22 = (self.p2 - self.a3f * rho23) / self.a2f;
            if rho11 < 0.0 || rho22 < 0.0 {
                return None;
            }
            let f1 = (self.a1f * cap(self.g12 * self.g12 * rho11)
                + self.a2f * cap(self.g21 * self.g21 * rho22)
                - self.a1f * cap(self.g10 * self.g10 * rho11)
                - self.a2f * cap(self.g20 * self.g20 * rho22))
                / self.a3f;
            let t = f1.exp2() - 1.0;
            if t < 0.0 {
                return None;
            }
            let s = t.sqrt() - self.g20 * rho23.sqrt();
            if s < 0.0 {
                // Required user-1 beam amplitude is negative: tightness
                // already overshoots at rho13 = 0.
                return Some(rho13);
            }
            Some(rho13 - s * s / (self.g10 * self.g10))
        };
        match scan_for_bracket(f5, 0.0, hi, SCAN_POINTS) {
            ScanOutcome::Bracket { lo, hi, f_lo_neg } => Some(bisect(
                f5,
                lo,
                hi,
                f_lo_neg,
                RHO_BISECT_TOL * (1.0 + self.p1),
                BISECT_MAX_ITER,
            )),
            _ => None,
        }
    }

    fn mutual_zero_private(&self) -> Option<SumCandidate> {
        let hi = self.p2 / self.a3f * (1.0 - 1e-12);
        let f4_outer = |rho23: f64| -> Option<f64> {
            if rho23 <= 0.0 {
                return None;
            }
            let rho13 = self.df_rho13_of(rho23)?;
            if rho13 <= 0.0 {
                return None;
            }
            let rho11 = (self.p1 - self.a3f * rho13) / self.a1f;
            let rho22 = (self.p2 - self.a3f * rho23) / self.a2f;
            let a3 = self.g10.powi(-2) + rho11;
            let a4 = self.g20.powi(-2) + rho22;
            let beam = self.g10 * rho13.sqrt() + self.g20 * rho23.sqrt();
            let xi = 1.0 + beam * beam;
            Some(
                xi * (self.a1 / a3 - self.a2 / a4)
                    + self.g10 * (self.g10 + self.g20 * (rho23 / rho13).sqrt()) * (a3 - self.a1)
                    - self.g20 * (self.g20 + self.g10 * (rho13 / rho23).sqrt()) * (a4 - self.a2),
            )
        };
        let ScanOutcome::Bracket { lo, hi, f_lo_neg } =
            scan_for_bracket(f4_outer, 1e-9 * (1.0 + self.p2), hi, SCAN_POINTS)
        else {
            return None;
        };
        let rho23 = bisect(
            f4_outer,
            lo,
            hi,
            f_lo_neg,
            RHO_BISECT_TOL * (1.0 + self.p2),
            BISECT_MAX_ITER,
        );
        let rho13 = self.df_rho13_of(rho23)?;
        let rho11 = (self.p1 - self.a3f * rho13) / self.a1f;
        let rho22 = (self.p2 - self.a3f * rho23) / self.a2f;
        if rho11 < 0.0 || rho22 < 0.0 || rho13 <= 0.0 {
            return None;
        }
        let alloc = RawAlloc { rho11, rho22, rho10: 0.0, rho20: 0.0, rho13, rho23 };
        let residual = self.zero_private_certificate(&alloc)?;
        Some(SumCandidate { alloc, case: SumCase::BothDf, residual, fallback: false })
    }

    /// KKT certificate on the zero-private face: stationarity over the
    /// four interior coordinates plus sign conditions for the two pinned
    /// privates.  A negative pinned-coordinate multiplier is exactly the
    /// mixed regime the closed forms do not cover.
    fn zero_private_certificate(&self, r: &RawAlloc) -> Option<f64> {
        let (s1, _s2, _s3, s4) = self.bounds(r);
        let tight = (s1 - s4).abs() / s1.abs().max(1.0);
        let beam = self.g10 * r.rho13.sqrt() + self.g20 * r.rho23.sqrt();
        let xi = 1.0 + self.g10 * self.g10 * r.rho10 + self.g20 * self.g20 * r.rho20 + beam * beam;
        let q12 = (r.rho23 / r.rho13).sqrt();
        let a3 = self.g12.powi(-2) + r.rho11;
        let d3 = self.g10 * (self.g10 + self.g20 * q12) * a3 + xi
            - xi * a3 / (self.g10.powi(-2) + r.rho11);
        let a4 = self.g21.powi(-2) + r.rho22;
        let d4 = self.g20 * (self.g20 + self.g10 / q12) * a4 + xi
            - xi * a4 / (self.g20.powi(-2) + r.rho22);
        let station = (d3 - d4).abs() / d3.abs().max(d4.abs()).max(1.0);
        let lambda3 = xi / d3.max(d4);
        if !(-KKT_TOL..=1.0 + KKT_TOL).contains(&lambda3) {
            return None;
        }
        let lambda0 = 1.0 - lambda3;
        let lambda4 = lambda3 * self.g10 * (self.g10 + self.g20 * q12) / xi;
        let lambda5 = lambda3 * self.g20 * (self.g20 + self.g10 / q12) / xi;
        let a6 = 1.0 + self.g10 * self.g10 * r.rho10 + self.g20 * self.g20 * r.rho20;
        let mu10 = lambda4 - lambda0 * self.g10 * self.g10 / a6 - lambda3 * self.g10 * self.g10 / xi;
        let mu20 = lambda5 - lambda0 * self.g20 * self.g20 / a6 - lambda3 * self.g20 * self.g20 / xi;
        if mu10 < -KKT_TOL || mu20 < -KKT_TOL {
            return None;
        }
        let residual = tight.max(station);
        (residual <= KKT_TOL).then_some(residual)
    }

    // --- one-sided cooperation (alpha2 = 0, rho22 = 0) ---

    fn one_sided_family(&self, rho10: f64) -> Option<RawAlloc> {
        let a8 = 2.0 * self.g10 * self.g10 / (1.0 - self.a1f);
        let a11 = (1.0 + self.g10 * self.g10 * self.p1 + self.g20 * self.g20 * self.p2)
            / (1.0 - self.a1f);
        let b2 = (2.0 + self.a1f) / (1.0 - self.a1f) * self.g10 * self.g10 * self.a1 + 2.0 * a11;
        let a9 = 1.0 + self.g10 * self.g10 * rho10
            + self.g20 * self.g20 * self.p2 / (1.0 - self.a1f);
        let a10 = (self.g10 * self.g10 * self.p1 + self.a1f) / (1.0 - self.a1f)
            - self.g10 * self.g10 * rho10;
        let b4 = self.a1 * (a9 + 3.0 * a10);
        let disc = b2 * b2 - 4.0 * a8 * b4;
        if disc < 0.0 {
            return None;
        }
        let a3 = (b2 + disc.sqrt()) / (2.0 * a8);
        let rho11 = a3 - self.g10.powi(-2);
        if rho11 < 0.0 {
            return None;
        }
        let rho13 = (self.p1 - self.a1f * rho11) / self.a3f - rho10;
        if rho13 < 0.0 {
            return None;
        }
        let rho23 = self.g10 * self.g10 / (self.g20 * self.g20) * rho13;
        let rho20 = self.p2 / self.a3f - rho23;
        if rho20 < -1e-12 {
            return None;
        }
        Some(RawAlloc { rho11, rho22: 0.0, rho10, rho20: rho20.max(0.0), rho13, rho23 })
    }

    fn f7(&self, rho10: f64) -> Option<f64> {
        let r = self.one_sided_family(rho10)?;
        let a3 = self.g10.powi(-2) + r.rho11;
        let b3 = (2.0 * a3 - self.a1) / (a3 - self.a1);
        let a6 = 1.0 + self.g10 * self.g10 * rho10 + self.g20 * self.g20 * r.rho20;
        let f6 = self.a1f / (1.0 - self.a1f)
            * (cap(self.g12 * self.g12 * r.rho11) - cap(self.g10 * self.g10 * r.rho11));
        Some(2.0 * self.g10 * self.g10 * a3 - b3 * a6 - a6 * (f6.exp2() - 1.0))
    }

    fn one_sided_interior(&self) -> Option<SumCandidate> {
        let hi = self.p1 / self.a3f * (1.0 - 1e-9);
        let ScanOutcome::Bracket { lo, hi, f_lo_neg } =
            scan_for_bracket(|x| self.f7(x), 0.0, hi, SCAN_POINTS)
        else {
            return None;
        };
        let rho10 = bisect(
            |x| self.f7(x),
            lo,
            hi,
            f_lo_neg,
            RHO_BISECT_TOL * (1.0 + self.p1),
            BISECT_MAX_ITER,
        );
        let alloc = self.one_sided_family(rho10)?;
        let residual = self.one_sided_certificate(&alloc, true)?;
        Some(SumCandidate {
            alloc,
            case: SumCase::User1PdfUser2Direct,
            residual,
            fallback: false,
        })
    }

    /// Stationarity residual for the one-sided zero-`rho10` face: the
    /// power-implied private SNR of user 2 must meet its stationarity
    /// value.
    fn one_sided_df_inner(&self, rho13: f64) -> Option<f64> {
        let rho11 = (self.p1 - self.a3f * rho13) / self.a1f;
        if rho11 < 0.0 || rho13 <= 0.0 {
            return None;
        }
        let a3 = self.g10.powi(-2) + rho11;
        let a5 = a3 - self.a1;
        let station = |rho23: f64| -> Option<f64> {
            if rho23 <= 0.0 {
                return None;
            }
            let y = 1.0 + self.g20 * self.g20 * (self.p2 / self.a3f - rho23);
            let beam = self.g10 * rho13.sqrt() + self.g20 * rho23.sqrt();
            let num = a3 * self.g10 * (self.g10 + self.g20 * (rho23 / rho13).sqrt()) - beam * beam;
            let den = 1.0 + a3 / a5 * (self.g10 / self.g20) * (rho13 / rho23).sqrt();
            Some(y - num / den)
        };
        let hi = self.p2 / self.a3f * (1.0 - 1e-12);
        match scan_for_bracket(station, 1e-12 * (1.0 + self.p2), hi, SCAN_POINTS) {
            ScanOutcome::Bracket { lo, hi, f_lo_neg } => Some(bisect(
                station,
                lo,
                hi,
                f_lo_neg,
                RHO_BISECT_TOL * (1.0 + self.p2),
                BISECT_MAX_ITER,
            )),
            _ => None,
        }
    }

    fn one_sided_zero_private(&self) -> Option<SumCandidate> {
        let hi = self.p1 / self.a3f * (1.0 - 1e-9);
        let f8 = |rho13: f64| -> Option<f64> {
            let rho23 = self.one_sided_df_inner(rho13)?;
            let rho11 = (self.p1 - self.a3f * rho13) / self.a1f;
            let f6 = self.a1f / (1.0 - self.a1f)
                * (cap(self.g12 * self.g12 * rho11) - cap(self.g10 * self.g10 * rho11));
            let excess = f6.exp2() - 1.0;
            if excess <= 0.0 {
                return None;
            }
            let beam = self.g10 * rho13.sqrt() + self.g20 * rho23.sqrt();
            let y = 1.0 + self.g20 * self.g20 * (self.p2 / self.a3f - rho23);
            Some(y - beam * beam / excess)
        };
        let ScanOutcome::Bracket { lo, hi, f_lo_neg } =
            scan_for_bracket(f8, 1e-9 * (1.0 + self.p1), hi, SCAN_POINTS)
        else {
            return None;
        };
        let rho13 = bisect(f8, lo, hi, f_lo_neg, RHO_BISECT_TOL * (1.0 + self.p1), BISECT_MAX_ITER);
        let rho23 = self.one_sided_df_inner(rho13)?;
        let rho11 = (self.p1 - self.a3f * rho13) / self.a1f;
        let rho20 = self.p2 / self.a3f - rho23;
        if rho11 < 0.0 || rho20 < -1e-12 {
            return None;
        }
        let alloc =
            RawAlloc { rho11, rho22: 0.0, rho10: 0.0, rho20: rho20.max(0.0), rho13, rho23 };
        let residual = self.one_sided_certificate(&alloc, false)?;
        Some(SumCandidate {
            alloc,
            case: SumCase::User1DfUser2Direct,
            residual,
            fallback: false,
        })
    }

    /// KKT certificate for the one-sided case, with or without a private
    /// part at user 1.
    fn one_sided_certificate(&self, r: &RawAlloc, interior: bool) -> Option<f64> {
        if r.rho13 <= 0.0 || r.rho23 <= 0.0 {
            return None;
        }
        let (s1, s2, s3, s4) = self.bounds(r);
        let tight = (s1 - s4).abs() / s1.abs().max(1.0);
        let _ = (s2, s3);
        let xi = 1.0
            + self.g10 * self.g10 * (r.rho10 + r.rho13)
            + self.g20 * self.g20 * (r.rho20 + r.rho23)
            + 2.0 * self.g10 * self.g20 * (r.rho13 * r.rho23).sqrt();
        let q12 = (r.rho23 / r.rho13).sqrt();
        let d2 = xi
            + self.g10 * self.g20 / q12
                * (self.g20.powi(-2) + self.g10 * self.g10 / (self.g20 * self.g20) * r.rho10 + r.rho20);
        let a3 = self.g12.powi(-2) + r.rho11;
        let d3 = self.g10 * (self.g10 + self.g20 * q12) * a3 + xi
            - xi * a3 / (self.g10.powi(-2) + r.rho11);
        let mut dmax = d2.max(d3);
        let mut dmin = d2.min(d3);
        if interior {
            let d1 = xi
                + self.g10 * self.g20 * q12
                    * (self.g10.powi(-2)
                        + r.rho10
                        + self.g20 * self.g20 / (self.g10 * self.g10) * r.rho20);
            dmax = dmax.max(d1);
            dmin = dmin.min(d1);
        }
        let station = (dmax - dmin) / dmax.abs().max(1.0);
        let lambda3 = xi / dmax;
        if !(-KKT_TOL..=1.0 + KKT_TOL).contains(&lambda3) {
            return None;
        }
        if !interior {
            // Pinned rho10: its multiplier must be nonnegative.
            let lambda0 = 1.0 - lambda3;
            let lambda4 = lambda3 * self.g10 * (self.g10 + self.g20 * q12) / xi;
            let a6 = 1.0 + self.g20 * self.g20 * r.rho20;
            let mu10 =
                lambda4 - lambda0 * self.g10 * self.g10 / a6 - lambda3 * self.g10 * self.g10 / xi;
            if mu10 < -KKT_TOL {
                return None;
            }
        }
        let residual = tight.max(station);
        (residual <= KKT_TOL).then_some(residual)
    }

    // --- exact numerical solver ---

    /// Best private-vs-beam split of the phase-3 budgets for a given beam
    /// amplitude `w`: private SNR is maximized at equal per-user beam
    /// contributions, clamped at the per-user budgets.
    fn beam_split(&self, w: f64, q1: f64, q2: f64) -> (f64, f64) {
        if w <= 0.0 {
            return (0.0, 0.0);
        }
        let s_cap = q1.max(0.0).sqrt();
        let t_cap = q2.max(0.0).sqrt();
        let mut s = if self.g10 > 0.0 { w / (2.0 * self.g10) } else { f64::INFINITY };
        let mut t = if self.g20 > 0.0 { w / (2.0 * self.g20) } else { f64::INFINITY };
        if s > s_cap {
            s = s_cap;
            t = if self.g20 > 0.0 { ((w - self.g10 * s) / self.g20).clamp(0.0, t_cap) } else { 0.0 };
        } else if t > t_cap {
            t = t_cap;
            s = if self.g10 > 0.0 { ((w - self.g20 * t) / self.g10).clamp(0.0, s_cap) } else { 0.0 };
        }
        (s, t)
    }

    /// Exact inner solve over the phase-3 powers for fixed `(rho11, rho22)`.
    /// Returns the objective value and the split.
    fn inner_phase3(&self, rho11: f64, rho22: f64) -> (f64, f64, f64) {
        let q1 = (self.p1 - self.a1f * rho11) / self.a3f;
        let q2 = (self.p2 - self.a2f * rho22) / self.a3f;
        if q1 < -1e-12 || q2 < -1e-12 {
            return (f64::NEG_INFINITY, 0.0, 0.0);
        }
        let (q1, q2) = (q1.max(0.0), q2.max(0.0));
        let i1 = if self.a1f > 0.0 { self.a1f * cap(self.g12 * self.g12 * rho11) } else { 0.0 };
        let i2 = if self.a2f > 0.0 { self.a2f * cap(self.g21 * self.g21 * rho22) } else { 0.0 };
        let c1 = if self.a1f > 0.0 { self.a1f * cap(self.g10 * self.g10 * rho11) } else { 0.0 };
        let c2 = if self.a2f > 0.0 { self.a2f * cap(self.g20 * self.g20 * rho22) } else { 0.0 };
        let head_a = i1 + i2;
        let head_b = (i2 + c1).min(i1 + c2).min(c1 + c2);
        let x_of = |s: f64, t: f64| {
            self.g10 * self.g10 * (q1 - s * s).max(0.0) + self.g20 * self.g20 * (q2 - t * t).max(0.0)
        };
        let wmax = self.g10 * q1.sqrt() + self.g20 * q2.sqrt();
        let diff = |w: f64| -> Option<f64> {
            let (s, t) = self.beam_split(w, q1, q2);
            let x = x_of(s, t);
            Some(head_a + self.a3f * cap(x) - head_b - self.a3f * cap(x + w * w))
        };
        let w = if wmax <= 0.0 || diff(0.0).unwrap() <= 0.0 {
            0.0
        } else if diff(wmax).unwrap() >= 0.0 {
            wmax
        } else {
            bisect(diff, 0.0, wmax, false, 1e-12 * (1.0 + wmax), BISECT_MAX_ITER)
        };
        let (s, t) = self.beam_split(w, q1, q2);
        let x = x_of(s, t);
        let value = (head_a + self.a3f * cap(x)).min(head_b + self.a3f * cap(x + w * w));
        (value, s * s, t * t)
    }

    /// Exact solve of the whole fixed-phase problem by nested
    /// golden-section over the exchange powers.
    fn numeric_solve(&self) -> (f64, RawAlloc) {
        let over_rho22 = |rho11: f64| -> f64 {
            if self.a2f == 0.0 {
                return self.inner_phase3(rho11, 0.0).0;
            }
            let hi = self.p2 / self.a2f;
            let r22 = golden_max(|y| self.inner_phase3(rho11, y).0, 0.0, hi, 1e-11, 140);
            self.inner_phase3(rho11, r22).0
        };
        let rho11 = if self.a1f == 0.0 {
            0.0
        } else {
            golden_max(over_rho22, 0.0, self.p1 / self.a1f, 1e-11, 140)
        };
        let rho22 = if self.a2f == 0.0 {
            0.0
        } else {
            golden_max(|y| self.inner_phase3(rho11, y).0, 0.0, self.p2 / self.a2f, 1e-11, 140)
        };
        let (value, rho13, rho23) = self.inner_phase3(rho11, rho22);
        let q1 = ((self.p1 - self.a1f * rho11) / self.a3f).max(0.0);
        let q2 = ((self.p2 - self.a2f * rho22) / self.a3f).max(0.0);
        (
            value,
            RawAlloc {
                rho11,
                rho22,
                rho10: (q1 - rho13).max(0.0),
                rho20: (q2 - rho23).max(0.0),
                rho13,
                rho23,
            },
        )
    }

    fn fallback(&self) -> SumCandidate {
        let (_, alloc) = self.numeric_solve();
        let (s1, _, _, s4) = self.bounds(&alloc);
        let tight = (s1 - s4).abs() / s1.abs().max(1.0);
        let p_eps1 = 1e-9 * (1.0 + self.p1);
        let p_eps2 = 1e-9 * (1.0 + self.p2);
        let case = if self.a2f == 0.0 && self.g21 <= self.g20 {
            if alloc.rho10 > p_eps1 {
                SumCase::User1PdfUser2Direct
            } else {
                SumCase::User1DfUser2Direct
            }
        } else if alloc.rho10 > p_eps1 || alloc.rho20 > p_eps2 {
            SumCase::BothPdf
        } else {
            SumCase::BothDf
        };
        SumCandidate {
            alloc,
            case,
            residual: if tight <= KKT_TOL { tight } else { 0.0 },
            fallback: true,
        }
    }
}

// ---------------------------------------------------------------------------
// Public solvers
// ---------------------------------------------------------------------------

/// Maximize `R1 + R2` over the power allocation for fixed `(alpha1,
/// alpha2)`.
///
/// The channel regime picks the scheme: with both inter-user links weak
/// the classical MAC is returned and the phase durations are pinned to
/// zero; in one-sided regimes the unused exchange phase is pinned to zero.
/// Mutual-cooperation cases need both exchange phases to be present.
pub fn maximize_sum_fixed_alphas(
    ch: &ChannelGains,
    alpha1: f64,
    alpha2: f64,
) -> Result<SumSolution> {
    ch.validate()?;
    if !(alpha1 >= 0.0 && alpha2 >= 0.0 && alpha1 + alpha2 < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need alpha1, alpha2 >= 0 with alpha1 + alpha2 < 1, got ({alpha1}, {alpha2})"
        )));
    }

    let coop1 = ch.g12 > ch.g10;
    let coop2 = ch.g21 > ch.g20;

    if !coop1 && !coop2 {
        return Ok(classical_mac_solution(ch));
    }
    if coop1 && coop2 {
        if alpha1 == 0.0 || alpha2 == 0.0 {
            return Err(Error::DegeneratePhase(format!(
                "mutual cooperation needs alpha1 > 0 and alpha2 > 0, got ({alpha1}, {alpha2})"
            )));
        }
        let ctx = SumCtx::new(ch, alpha1, alpha2);
        let cand = if ch.g10 == 0.0 || ch.g20 == 0.0 {
            ctx.fallback()
        } else {
            ctx.mutual_interior()
                .or_else(|| ctx.mutual_zero_private())
                .unwrap_or_else(|| ctx.fallback())
        };
        let phases = PhaseDurations::new(alpha1, alpha2)?;
        return finish(ch, phases, cand);
    }
    if coop1 {
        // One-sided: user 2 transmits directly; its exchange phase is
        // dropped regardless of the requested alpha2.
        if alpha1 == 0.0 {
            return Err(Error::DegeneratePhase(
                "one-sided cooperation needs alpha1 > 0".into(),
            ));
        }
        let ctx = SumCtx::new(ch, alpha1, 0.0);
        let cand = if ch.g10 == 0.0 || ch.g20 == 0.0 {
            ctx.fallback()
        } else {
            ctx.one_sided_interior()
                .or_else(|| ctx.one_sided_zero_private())
                .unwrap_or_else(|| ctx.fallback())
        };
        let phases = PhaseDurations::two_phase(alpha1)?;
        return finish(ch, phases, cand);
    }
    // Case 4: mirror of case 3 with the users swapped.
    if alpha2 == 0.0 {
        return Err(Error::DegeneratePhase("one-sided cooperation needs alpha2 > 0".into()));
    }
    let mirrored = ChannelGains {
        g12: ch.g21,
        g21: ch.g12,
        g10: ch.g20,
        g20: ch.g10,
        p1: ch.p2,
        p2: ch.p1,
    };
    let sol = maximize_sum_fixed_alphas(&mirrored, alpha2, 0.0)?;
    let a = sol.allocation;
    Ok(SumSolution {
        sum_rate: sol.sum_rate,
        allocation: PowerAllocation {
            rho11: a.rho22,
            rho22: a.rho11,
            rho10: a.rho20,
            rho20: a.rho10,
            rho13: a.rho23,
            rho23: a.rho13,
        },
        phases: PhaseDurations::new(0.0, alpha2)?,
        case: SumCase::Mirror,
        kkt_residual: sol.kkt_residual,
        used_fallback: sol.used_fallback,
    })
}

fn classical_mac_solution(ch: &ChannelGains) -> SumSolution {
    SumSolution {
        sum_rate: cap(ch.g10 * ch.g10 * ch.p1 + ch.g20 * ch.g20 * ch.p2),
        allocation: PowerAllocation { rho10: ch.p1, rho20: ch.p2, ..Default::default() },
        phases: PhaseDurations::all_phase3(),
        case: SumCase::ClassicalMac,
        kkt_residual: 0.0,
        used_fallback: false,
    }
}

fn finish(
    ch: &ChannelGains,
    phases: PhaseDurations,
    cand: SumCandidate,
) -> Result<SumSolution> {
    // Re-project onto the exact power equalities before evaluating.
    let a = cand.alloc;
    let q1 = ((ch.p1 - phases.alpha1 * a.rho11) / phases.alpha3).max(0.0);
    let q2 = ((ch.p2 - phases.alpha2 * a.rho22) / phases.alpha3).max(0.0);
    let rho13 = a.rho13.clamp(0.0, q1);
    let rho23 = a.rho23.clamp(0.0, q2);
    let allocation = PowerAllocation {
        rho11: a.rho11.max(0.0),
        rho22: if phases.alpha2 > 0.0 { a.rho22.max(0.0) } else { 0.0 },
        rho10: q1 - rho13,
        rho20: q2 - rho23,
        rho13,
        rho23,
    };
    let rc = eval_constraints(ch, &phases, &allocation)?;
    Ok(SumSolution {
        sum_rate: rc.smin(),
        allocation,
        phases,
        case: cand.case,
        kkt_residual: cand.residual,
        used_fallback: cand.fallback,
    })
}

/// Maximize the sum rate of a symmetric channel with both exchange phases
/// equal to `alpha`, using the mirrored closed forms.
///
/// Requires `g10 = g20`, `g12 = g21`, `p1 = p2` and `0 <= alpha < 0.5`.
/// At `alpha = 0` the scheme has no exchange phases and reduces to the
/// classical MAC.
pub fn maximize_sum_symmetric(ch: &ChannelGains, alpha: f64) -> Result<SumSolution> {
    ch.validate()?;
    if !ch.is_symmetric() {
        return Err(Error::InvalidParameter(format!(
            "symmetric solver needs g10 = g20, g12 = g21 and p1 = p2, got {ch:?}"
        )));
    }
    if !(0.0..0.5).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("need 0 <= alpha < 0.5, got {alpha}")));
    }
    if ch.g12 <= ch.g10 || alpha == 0.0 {
        return Ok(classical_mac_solution(ch));
    }

    let (g, gc, p) = (ch.g10, ch.g12, ch.p1);
    let a3f = 1.0 - 2.0 * alpha;
    let a1 = g.powi(-2) - gc.powi(-2);
    let ctx = SumCtx::new(ch, alpha, alpha);

    // Mirrored interior family: one unknown, the shared cooperative power.
    let family = |rho13: f64| -> Option<(f64, f64)> {
        if rho13 <= 0.0 {
            return None;
        }
        let b2 = (1.0 - alpha) * a1 + g.powi(-2) + 2.0 * p;
        let b3 = 0.25 * a1 * (4.0 * rho13) * a3f + 0.5 * a1 * (2.0 * p + g.powi(-2));
        let disc = b2 * b2 - 4.0 * b3;
        if disc < 0.0 {
            return None;
        }
        let rho11 = 0.5 * (b2 + disc.sqrt()) - g.powi(-2);
        if rho11 < 0.0 {
            return None;
        }
        let rho10 = (p - alpha * rho11) / a3f - rho13;
        Some((rho11, rho10))
    };
    let f2 = |rho13: f64| -> Option<f64> {
        let (rho11, rho10) = family(rho13)?;
        if rho10 < 0.0 {
            return None;
        }
        let a2 = g.powi(-2) + rho11;
        let b1 = (a2 - a1) * (2.0 * a2 - 4.0 * rho13) / (2.0 * a2 - a1);
        if b1 + 4.0 * rho13 <= 0.0 {
            return None;
        }
        let f1 = 2.0 * alpha * cap(g * g * rho11) - 2.0 * alpha * cap(gc * gc * rho11)
            + a3f * (g * g * (b1 + 4.0 * rho13)).log2();
        Some(rho10 - ((f1 / a3f).exp2() - 1.0) / (2.0 * g * g))
    };

    let hi = p / a3f * (1.0 - 1e-9);
    let lo = 1e-9 * (1.0 + p);
    // Interior case: shared cooperative power solving the tightness root.
    if let ScanOutcome::Bracket { lo, hi, f_lo_neg } = scan_for_bracket(f2, lo, hi, SCAN_POINTS) {
        let rho13 = bisect(f2, lo, hi, f_lo_neg, RHO_BISECT_TOL * (1.0 + p), BISECT_MAX_ITER);
        if let Some((rho11, rho10)) = family(rho13) {
            if rho10 >= -1e-12 {
                let alloc = RawAlloc {
                    rho11,
                    rho22: rho11,
                    rho10: rho10.max(0.0),
                    rho20: rho10.max(0.0),
                    rho13,
                    rho23: rho13,
                };
                if let Some(residual) = ctx.interior_certificate(&alloc) {
                    let phases = PhaseDurations::new(alpha, alpha)?;
                    let cand =
                        SumCandidate { alloc, case: SumCase::BothPdf, residual, fallback: false };
                    return finish(ch, phases, cand);
                }
            }
        }
    }
    // Zero-private face of the mirrored problem.
    let f4 = |rho13: f64| -> Option<f64> {
        if rho13 <= 0.0 {
            return None;
        }
        let rho11 = (p - a3f * rho13) / alpha;
        if rho11 < 0.0 {
            return None;
        }
        let f3 = a3f / (2.0 * alpha) * cap(4.0 * g * g * rho13);
        let t = f3.exp2();
        let denom = gc * gc - t * g * g;
        if denom.abs() < 1e-300 {
            return None;
        }
        Some(rho11 - (t - 1.0) / denom)
    };
    if let ScanOutcome::Bracket { lo, hi, f_lo_neg } =
        scan_for_bracket(f4, 1e-9 * (1.0 + p), p / a3f * (1.0 - 1e-9), SCAN_POINTS)
    {
        let rho13 = bisect(f4, lo, hi, f_lo_neg, RHO_BISECT_TOL * (1.0 + p), BISECT_MAX_ITER);
        let rho11 = (p - a3f * rho13) / alpha;
        let alloc =
            RawAlloc { rho11, rho22: rho11, rho10: 0.0, rho20: 0.0, rho13, rho23: rho13 };
        if let Some(residual) = ctx.zero_private_certificate(&alloc) {
            let phases = PhaseDurations::new(alpha, alpha)?;
            let cand = SumCandidate { alloc, case: SumCase::BothDf, residual, fallback: false };
            return finish(ch, phases, cand);
        }
    }

    // Anything unusual: exact numerical solve, then symmetrize.
    let (_, mut alloc) = ctx.numeric_solve();
    let r11 = 0.5 * (alloc.rho11 + alloc.rho22);
    let r13 = 0.5 * (alloc.rho13 + alloc.rho23);
    alloc = RawAlloc {
        rho11: r11,
        rho22: r11,
        rho10: ((p - alpha * r11) / a3f - r13).max(0.0),
        rho20: ((p - alpha * r11) / a3f - r13).max(0.0),
        rho13: r13,
        rho23: r13,
    };
    let (s1, _, _, s4) = ctx.bounds(&alloc);
    let tight = (s1 - s4).abs() / s1.abs().max(1.0);
    let p_eps = 1e-9 * (1.0 + p);
    let cand = SumCandidate {
        alloc,
        case: if alloc.rho10 > p_eps { SumCase::BothPdf } else { SumCase::BothDf },
        residual: if tight <= KKT_TOL { tight } else { 0.0 },
        fallback: true,
    };
    finish(ch, PhaseDurations::new(alpha, alpha)?, cand)
}
