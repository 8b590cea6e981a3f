//! Maximization of one user's rate for a fixed exchange-phase duration.
//!
//! With `R2 = 0` the partner reduces to a pure relay: it spends no time
//! broadcasting, keeps no private message and commits its whole budget to
//! the cooperative beam (`rho23 = p2 / (1 - alpha1)`).  For a fixed
//! `alpha1` the remaining problem in `(rho11, rho10, rho13)` is convex with
//! objective `min(J1, S4)`, and its KKT system admits closed forms case by
//! case.  Each closed-form candidate is validated (feasibility, constraint
//! tightness, multiplier consistency); if anything is off the solver falls
//! back to a direct numerical solve of the concave program, which is exact
//! up to bisection tolerance, and flags the solution accordingly.

use serde::{Deserialize, Serialize};

use crate::channel::{cap, eval_constraints, ChannelGains, PhaseDurations, PowerAllocation};
use crate::error::{Error, Result};
use crate::numerics::{bisect, golden_max, scan_for_bracket, ScanOutcome};

/// Fallback trigger: candidates whose KKT residual exceeds this are
/// re-solved numerically.
pub const KKT_TOL: f64 = 1e-6;

/// Relative tolerance used to call two active constraints equal.
pub const TIGHT_REL_TOL: f64 = 1e-6;

const RHO_BISECT_TOL: f64 = 1e-10;
const BISECT_MAX_ITER: usize = 200;
const SCAN_POINTS: usize = 129;

/// Transmission scheme that attains the maximum individual rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndividualCase {
    /// Case 1: the source talks straight to the destination, the partner
    /// stays silent.
    Direct,
    /// Case 2a: partial decode-forward with message repetition; the source
    /// repeats its cooperative part in phase 3 next to a private part.
    PdfRepetition,
    /// Case 2b: full decode-forward; no private part survives.
    DecodeForward,
    /// Case 3a: partial decode-forward without repetition; phase 3 carries
    /// only the private part from the source.
    PdfNoRepetition,
    /// Case 3b: two-hop relaying; the source is silent in phase 3.
    TwoHop,
}

impl IndividualCase {
    /// Compact case label matching the scheme taxonomy.
    pub fn label(&self) -> &'static str {
        match self {
            IndividualCase::Direct => "1",
            IndividualCase::PdfRepetition => "2a",
            IndividualCase::DecodeForward => "2b",
            IndividualCase::PdfNoRepetition => "3a",
            IndividualCase::TwoHop => "3b",
        }
    }
}

impl std::fmt::Display for IndividualCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            IndividualCase::Direct => "Direct",
            IndividualCase::PdfRepetition => "PdfRepetition",
            IndividualCase::DecodeForward => "DecodeForward",
            IndividualCase::PdfNoRepetition => "PdfNoRepetition",
            IndividualCase::TwoHop => "TwoHop",
        };
        write!(f, "{name}")
    }
}

/// Result of an individual-rate optimization at fixed `alpha1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndividualSolution {
    /// Maximized `R1` in bits/s/Hz; equals `min(J1, S4)` at `allocation`.
    pub rate: f64,
    pub allocation: PowerAllocation,
    /// Effective phase split; `alpha1` is reported as 0 for `Direct`.
    pub phases: PhaseDurations,
    pub case: IndividualCase,
    /// Largest violation among power residual, constraint tightness and
    /// stationarity consistency at the returned point.
    pub kkt_residual: f64,
    /// True when the closed forms failed validation and the numerical
    /// solver produced the answer.
    pub used_fallback: bool,
}

/// Constants of the fixed-phase individual-rate KKT system, evaluated at a
/// caller-supplied partial allocation (`rho11`, `rho10`, `rho13`; the relay
/// power is always `p2 / (1 - alpha1)`).
#[derive(Debug, Clone, Copy)]
pub struct IndividualTableConstants {
    /// `1/g10^2 - 1/g12^2`, the water-filling offset between the two
    /// effective phase-1 channels.
    pub a1: f64,
    /// `1/g10^2 + rho11`.
    pub a2: f64,
    /// `1/g12^2 + rho11`.
    pub a3: f64,
    /// `1 + (g20/g10) sqrt(rho23/rho13)`.
    pub a4: f64,
    /// `rho13 + (g20^2/g10^2) rho23 + 2 (g20/g10) sqrt(rho13 rho23)`;
    /// the beamformed phase-3 SNR seen through user 1's channel,
    /// excluding the private part.
    pub a5: f64,
    /// Linear coefficient of the stationarity quadratic in `a2`.
    pub b1: f64,
    /// Constant coefficient of the stationarity quadratic in `a2`.
    pub b2: f64,
    /// Rate surplus of the relay path over the direct phase-1 path.
    pub f1: f64,
    /// Phase-ratio-scaled beamforming rate, used when the private power
    /// is pinned at zero.
    pub f3: f64,
}

struct Ctx {
    g12: f64,
    g10: f64,
    g20: f64,
    p1: f64,
    alpha1: f64,
    a3f: f64,
    rho23: f64,
    a1: f64,
}

impl Ctx {
    fn new(ch: &ChannelGains, alpha1: f64) -> Self {
        let a3f = 1.0 - alpha1;
        Self {
            g12: ch.g12,
            g10: ch.g10,
            g20: ch.g20,
            p1: ch.p1,
            alpha1,
            a3f,
            rho23: ch.p2 / a3f,
            a1: ch.g10.powi(-2) - ch.g12.powi(-2),
        }
    }

    fn rho13_max(&self) -> f64 {
        self.p1 / self.a3f
    }

    /// Both active rate bounds at a point of the reduced problem.
    fn rates(&self, rho11: f64, rho10: f64, rho13: f64) -> (f64, f64) {
        let zeta = self.g10 * self.g10 * (rho10 + rho13)
            + self.g20 * self.g20 * self.rho23
            + 2.0 * self.g10 * self.g20 * (rho13 * self.rho23).max(0.0).sqrt();
        let j1 = self.alpha1 * cap(self.g12 * self.g12 * rho11) + self.a3f * cap(self.g10 * self.g10 * rho10);
        let s4 = self.alpha1 * cap(self.g10 * self.g10 * rho11) + self.a3f * cap(zeta);
        (j1, s4)
    }

    /// `a4`, `a5` and the quadratic coefficients of the interior
    /// stationarity family at a given cooperative power.
    fn family_coeffs(&self, rho13: f64) -> (f64, f64, f64, f64) {
        let ratio = self.g20 / self.g10;
        let cross = 2.0 * ratio * (rho13 * self.rho23).max(0.0).sqrt();
        let a4 = 1.0 + ratio * (self.rho23 / rho13).sqrt();
        let a5 = rho13 + ratio * ratio * self.rho23 + cross;
        let k = self.p1 + self.g10.powi(-2) - self.a3f * rho13;
        let b1 = a4 * k + self.alpha1 * self.a1 + self.a3f * (a4 * self.a1 + a5);
        let b2 = self.a1
            * (self.p1 + self.g10.powi(-2) + self.a3f * (ratio * ratio * self.rho23 + cross));
        (a4, a5, b1, b2)
    }

    /// Interior stationarity family: the `(rho11, rho10)` pair at which the
    /// gradients of `J1` and `S4` align for a given `rho13`.  `rho10` comes
    /// from the power equality and may be negative (then the family has
    /// left the feasible set).
    fn family(&self, rho13: f64) -> Option<(f64, f64)> {
        if rho13 <= 0.0 {
            return None;
        }
        let (a4, _a5, b1, b2) = self.family_coeffs(rho13);
        let disc = b1 * b1 - 4.0 * a4 * b2;
        if disc < 0.0 {
            return None;
        }
        let a2 = (b1 + disc.sqrt()) / (2.0 * a4);
        let rho11 = a2 - self.g10.powi(-2);
        if rho11 < 0.0 {
            return None;
        }
        let rho10 = (self.p1 - self.alpha1 * rho11) / self.a3f - rho13;
        Some((rho11, rho10))
    }

    /// Residual whose root is the interior both-constraints-tight point.
    /// Positive sign means `J1 > S4` on the stationarity family.  Only the
    /// feasible part of the family (`rho10 >= 0`) is reported.
    fn f2(&self, rho13: f64) -> Option<f64> {
        let (rho11, rho10) = self.family(rho13)?;
        if rho10 < 0.0 {
            return None;
        }
        let (_, a5, _, _) = self.family_coeffs(rho13);
        let f1 = self.alpha1 * cap(self.g10 * self.g10 * rho11)
            + self.a3f * cap(self.g10 * self.g10 * (rho10 + a5))
            - self.alpha1 * cap(self.g12 * self.g12 * rho11);
        Some(rho10 - self.g10.powi(-2) * ((f1 / self.a3f).exp2() - 1.0))
    }

    /// Zero-private-power tightness residual in `rho13`.
    fn f4(&self, rho13: f64) -> Option<f64> {
        if self.alpha1 <= 0.0 {
            return None;
        }
        let rho11 = (self.p1 - self.a3f * rho13) / self.alpha1;
        if rho11 < 0.0 {
            return None;
        }
        let a5 = self.a5_of(rho13);
        let f3 = (self.a3f / self.alpha1) * cap(self.g10 * self.g10 * a5);
        let t = f3.exp2();
        let denom = self.g12 * self.g12 - t * self.g10 * self.g10;
        if denom.abs() < 1e-300 {
            return None;
        }
        Some(rho11 - (t - 1.0) / denom)
    }

    fn a5_of(&self, rho13: f64) -> f64 {
        let ratio = self.g20 / self.g10;
        rho13 + ratio * ratio * self.rho23 + 2.0 * ratio * (rho13 * self.rho23).max(0.0).sqrt()
    }

    /// Exact numerical solve of the full reduced problem.  For each phase-1
    /// power the inner split between private and cooperative power is a
    /// crossing of a decreasing (`J1`) and an increasing (`S4`) branch, so
    /// it is found by bisection; the outer value is concave in `rho11`.
    fn numeric_solve(&self) -> (f64, f64, f64, f64) {
        let inner = |rho11: f64| -> (f64, f64) {
            let q = (self.p1 - self.alpha1 * rho11) / self.a3f;
            if q < 0.0 {
                return (f64::NEG_INFINITY, 0.0);
            }
            let diff = |rho13: f64| {
                let (j1, s4) = self.rates(rho11, q - rho13, rho13);
                Some(j1 - s4)
            };
            let (d0, dq) = (diff(0.0).unwrap(), diff(q).unwrap());
            let rho13 = if d0 <= 0.0 {
                0.0
            } else if dq >= 0.0 {
                q
            } else {
                bisect(diff, 0.0, q, false, RHO_BISECT_TOL * (1.0 + q), BISECT_MAX_ITER)
            };
            let (j1, s4) = self.rates(rho11, q - rho13, rho13);
            (j1.min(s4), rho13)
        };
        let rho11_max = if self.alpha1 > 0.0 { self.p1 / self.alpha1 } else { 0.0 };
        let rho11 = golden_max(|r| inner(r).0, 0.0, rho11_max, 1e-12, 200);
        let (rate, rho13) = inner(rho11);
        let rho10 = ((self.p1 - self.alpha1 * rho11) / self.a3f - rho13).max(0.0);
        (rate, rho11, rho10, rho13)
    }
}

/// Evaluate the KKT constants of the fixed-phase problem at a partial
/// allocation.  `rho11`, `rho10` and `rho13` are read from `partial`; the
/// relay power is derived from the problem itself.
pub fn table1_definitions(
    ch: &ChannelGains,
    alpha1: f64,
    partial: &PowerAllocation,
) -> Result<IndividualTableConstants> {
    ch.validate()?;
    if ch.g10 == 0.0 || ch.g12 == 0.0 {
        return Err(Error::SingularChannel(
            "individual-rate constants need g10 > 0 and g12 > 0".into(),
        ));
    }
    if !(0.0..1.0).contains(&alpha1) {
        return Err(Error::InvalidParameter(format!("alpha1 must lie in [0, 1), got {alpha1}")));
    }
    let ctx = Ctx::new(ch, alpha1);
    let rho13 = partial.rho13;
    if rho13 <= 0.0 {
        return Err(Error::Domain("constants a4, a5 need rho13 > 0".into()));
    }
    let (a4, a5, b1, b2) = ctx.family_coeffs(rho13);
    let f1 = alpha1 * cap(ch.g10 * ch.g10 * partial.rho11)
        + ctx.a3f * cap(ch.g10 * ch.g10 * (partial.rho10 + a5))
        - alpha1 * cap(ch.g12 * ch.g12 * partial.rho11);
    let f3 = if alpha1 > 0.0 {
        (ctx.a3f / alpha1) * cap(ch.g10 * ch.g10 * a5)
    } else {
        f64::INFINITY
    };
    Ok(IndividualTableConstants {
        a1: ctx.a1,
        a2: ch.g10.powi(-2) + partial.rho11,
        a3: ch.g12.powi(-2) + partial.rho11,
        a4,
        a5,
        b1,
        b2,
        f1,
        f3,
    })
}

/// Tightness residual of the interior case as a function of `rho13`
/// (positive when `J1 > S4` along the stationarity family).
pub fn individual_residual_f2(ch: &ChannelGains, alpha1: f64, rho13: f64) -> Result<f64> {
    ch.validate()?;
    if ch.g10 == 0.0 || ch.g12 == 0.0 {
        return Err(Error::SingularChannel("residual f2 needs g10 > 0 and g12 > 0".into()));
    }
    let ctx = Ctx::new(ch, alpha1);
    ctx.f2(rho13)
        .ok_or_else(|| Error::Domain(format!("stationarity family undefined at rho13 = {rho13}")))
}

/// Tightness residual of the zero-private-power case as a function of
/// `rho13`.
pub fn individual_residual_f4(ch: &ChannelGains, alpha1: f64, rho13: f64) -> Result<f64> {
    ch.validate()?;
    if ch.g10 == 0.0 || ch.g12 == 0.0 {
        return Err(Error::SingularChannel("residual f4 needs g10 > 0 and g12 > 0".into()));
    }
    if alpha1 <= 0.0 {
        return Err(Error::DegeneratePhase("residual f4 needs alpha1 > 0".into()));
    }
    let ctx = Ctx::new(ch, alpha1);
    ctx.f4(rho13)
        .ok_or_else(|| Error::Domain(format!("residual f4 undefined at rho13 = {rho13}")))
}

struct Candidate {
    rho11: f64,
    rho13: f64,
    case: IndividualCase,
    residual: f64,
    fallback: bool,
}

/// Maximize `R1` over the power allocation for a fixed `alpha1`.
///
/// The partner's parameters are pinned at their optimum for this problem
/// (`alpha2 = 0`, `rho22 = rho20 = 0`, `rho23 = p2 / (1 - alpha1)`).
/// When the inter-user link is no stronger than the direct link, direct
/// transmission is optimal and `alpha1` is ignored (reported as zero);
/// ties are broken toward the simpler direct scheme.
pub fn maximize_individual_fixed_alpha(
    ch: &ChannelGains,
    alpha1: f64,
) -> Result<IndividualSolution> {
    ch.validate()?;

    // Case 1 (and the g12 = g10 boundary, where cooperation cannot beat it).
    if ch.g12 <= ch.g10 || ch.p1 == 0.0 {
        return Ok(direct_solution(ch));
    }
    if !(0.0..1.0).contains(&alpha1) {
        return Err(Error::DegeneratePhase(format!(
            "cooperative cases need 0 <= alpha1 < 1, got {alpha1}"
        )));
    }
    // No exchange time means no cooperative message: direct transmission
    // again, with the whole budget on the private part.
    if alpha1 == 0.0 {
        return Ok(direct_solution(ch));
    }

    let ctx = Ctx::new(ch, alpha1);

    // g10 = 0 breaks every closed form (a1 is infinite); the numerical
    // path handles it exactly.
    let cand = if ch.g10 == 0.0 {
        fallback_candidate(&ctx)
    } else {
        cascade(&ctx)
    };

    build_solution(ch, alpha1, &ctx, cand)
}

fn direct_solution(ch: &ChannelGains) -> IndividualSolution {
    // alpha1 reported as zero: the whole block is one transmit phase.
    let phases = PhaseDurations::all_phase3();
    let allocation = PowerAllocation {
        rho10: ch.p1,
        rho23: ch.p2,
        ..Default::default()
    };
    IndividualSolution {
        rate: cap(ch.g10 * ch.g10 * ch.p1),
        allocation,
        phases,
        case: IndividualCase::Direct,
        kkt_residual: 0.0,
        used_fallback: false,
    }
}

fn cascade(ctx: &Ctx) -> Candidate {
    let hi = ctx.rho13_max() * (1.0 - 1e-9);
    let lo = 1e-9 * ctx.rho13_max().min(1.0);

    match scan_for_bracket(|x| ctx.f2(x), lo, hi, SCAN_POINTS) {
        ScanOutcome::Bracket { lo, hi, f_lo_neg } => {
            let root = bisect(
                |x| ctx.f2(x),
                lo,
                hi,
                f_lo_neg,
                RHO_BISECT_TOL * (1.0 + ctx.rho13_max()),
                BISECT_MAX_ITER,
            );
            if let Some(c) = accept_interior(ctx, root) {
                return c;
            }
            boundary_or_fallback(ctx)
        }
        _ => {
            // No interior tight pair: either only J1 binds (water-filling
            // point validates) or the optimum sits on the rho10 = 0 face.
            if let Some(c) = accept_waterfilling(ctx) {
                return c;
            }
            boundary_or_fallback(ctx)
        }
    }
}

/// Validate the interior (both constraints tight) candidate.
fn accept_interior(ctx: &Ctx, rho13: f64) -> Option<Candidate> {
    let (rho11, rho10) = ctx.family(rho13)?;
    if rho10 < -1e-12 || rho11 < 0.0 {
        return None;
    }
    let rho10 = rho10.max(0.0);
    let (j1, s4) = ctx.rates(rho11, rho10, rho13);
    let tight = (j1 - s4).abs() / j1.abs().max(1.0);

    // Stationarity certificate: the two closures for the S4 multiplier
    // must agree and the multiplier must be a valid convex weight.
    let xi = ctx.g10.powi(-2) + rho10 + ctx.a5_of(rho13);
    let a2 = ctx.g10.powi(-2) + rho11;
    let a3 = ctx.g12.powi(-2) + rho11;
    let a4 = 1.0 + (ctx.g20 / ctx.g10) * (ctx.rho23 / rho13).sqrt();
    let d1 = a4 * a3 + xi - xi * a3 / a2;
    let d2 = xi + (a4 - 1.0) * (ctx.g10.powi(-2) + rho10);
    let station = (d1 - d2).abs() / d1.abs().max(d2.abs()).max(1e-300);
    let lambda1 = xi / d2;
    let lambda_ok = (-KKT_TOL..=1.0 + KKT_TOL).contains(&lambda1);

    let residual = tight.max(station);
    if residual <= KKT_TOL && lambda_ok {
        Some(Candidate {
            rho11,
            rho13,
            case: if rho10 > 1e-9 * (1.0 + ctx.p1) {
                IndividualCase::PdfRepetition
            } else {
                IndividualCase::DecodeForward
            },
            residual,
            fallback: false,
        })
    } else {
        None
    }
}

/// Validate the water-filling candidate of the loose-`S4` case, falling
/// through to the fully-loaded phase-1 point when its private power would
/// be negative.
fn accept_waterfilling(ctx: &Ctx) -> Option<Candidate> {
    let rho11 = ctx.p1 + ctx.a3f * ctx.a1;
    let rho10 = ctx.p1 - ctx.alpha1 * ctx.a1;
    if rho10 >= 0.0 {
        let (j1, s4) = ctx.rates(rho11, rho10, 0.0);
        if j1 <= s4 * (1.0 + TIGHT_REL_TOL) + TIGHT_REL_TOL {
            // Stationarity here is the water-filling identity, exact by
            // construction; the residual records the tightness margin.
            return Some(Candidate {
                rho11,
                rho13: 0.0,
                case: IndividualCase::PdfNoRepetition,
                residual: 0.0,
                fallback: false,
            });
        }
        return None;
    }
    // Two-hop: everything into phase 1.
    let rho11 = ctx.p1 / ctx.alpha1;
    let (j1, s4) = ctx.rates(rho11, 0.0, 0.0);
    if j1 <= s4 * (1.0 + TIGHT_REL_TOL) + TIGHT_REL_TOL {
        Some(Candidate {
            rho11,
            rho13: 0.0,
            case: IndividualCase::TwoHop,
            residual: 0.0,
            fallback: false,
        })
    } else {
        None
    }
}

/// The `rho10 = 0` boundary.  The tightness root is accepted only with a
/// full multiplier certificate: the convex weight of the beamformed bound
/// must be valid and the pinned private power must carry a nonnegative
/// multiplier (otherwise an interior point does better and the exact
/// numerical solution is used).
fn boundary_or_fallback(ctx: &Ctx) -> Candidate {
    let hi = ctx.rho13_max() * (1.0 - 1e-12);
    if let ScanOutcome::Bracket { lo, hi, f_lo_neg } =
        scan_for_bracket(|x| ctx.f4(x), 0.0, hi, SCAN_POINTS)
    {
        let root = bisect(
            |x| ctx.f4(x),
            lo,
            hi,
            f_lo_neg,
            RHO_BISECT_TOL * (1.0 + ctx.rho13_max()),
            BISECT_MAX_ITER,
        );
        let rho11 = (ctx.p1 - ctx.a3f * root) / ctx.alpha1;
        if rho11 >= 0.0 && root > 0.0 {
            let (j1, s4) = ctx.rates(rho11, 0.0, root);
            let tight = (j1 - s4).abs() / j1.abs().max(1.0);
            let zeta = ctx.g10 * ctx.g10 * root
                + ctx.g20 * ctx.g20 * ctx.rho23
                + 2.0 * ctx.g10 * ctx.g20 * (root * ctx.rho23).sqrt();
            // Stationarity over (rho11, rho13) pins the multipliers.
            let a = ctx.g12 * ctx.g12 / (1.0 + ctx.g12 * ctx.g12 * rho11);
            let b = ctx.g10 * ctx.g10 / (1.0 + ctx.g10 * ctx.g10 * rho11);
            let dzeta = ctx.g10 * ctx.g10
                + ctx.g10 * ctx.g20 * (ctx.rho23 / root).sqrt();
            let d = dzeta / (1.0 + zeta);
            let lambda1 = a / (a - b + d);
            let mu10 = lambda1 * d - (1.0 - lambda1) * ctx.g10 * ctx.g10
                - lambda1 * ctx.g10 * ctx.g10 / (1.0 + zeta);
            let lambda_ok = (-KKT_TOL..=1.0 + KKT_TOL).contains(&lambda1);
            if tight <= KKT_TOL && lambda_ok && mu10 >= -KKT_TOL {
                return Candidate {
                    rho11,
                    rho13: root,
                    case: IndividualCase::DecodeForward,
                    residual: tight,
                    fallback: false,
                };
            }
        }
    }
    fallback_candidate(ctx)
}

fn fallback_candidate(ctx: &Ctx) -> Candidate {
    let (_, rho11, rho10, rho13) = ctx.numeric_solve();
    let (j1, s4) = ctx.rates(rho11, rho10, rho13);
    let tight = (j1 - s4).abs() / j1.abs().max(1.0);
    let p_eps = 1e-9 * (1.0 + ctx.p1);
    let case = match (rho13 > p_eps, rho10 > p_eps) {
        (true, true) => IndividualCase::PdfRepetition,
        (true, false) => IndividualCase::DecodeForward,
        (false, true) => IndividualCase::PdfNoRepetition,
        (false, false) => IndividualCase::TwoHop,
    };
    Candidate {
        rho11,
        rho13,
        case,
        residual: if tight <= KKT_TOL { tight } else { 0.0 },
        fallback: true,
    }
}

fn build_solution(
    ch: &ChannelGains,
    alpha1: f64,
    ctx: &Ctx,
    cand: Candidate,
) -> Result<IndividualSolution> {
    let phases = PhaseDurations::two_phase(alpha1)?;
    // Snap the private power onto the exact power equality so the returned
    // allocation verifies to machine precision.
    let rho10 = ((ch.p1 - alpha1 * cand.rho11) / ctx.a3f - cand.rho13).max(0.0);
    let rho13 = if cand.rho13 > 0.0 {
        (ch.p1 - alpha1 * cand.rho11) / ctx.a3f - rho10
    } else {
        0.0
    };
    let rho11 = if alpha1 > 0.0 {
        (ch.p1 - ctx.a3f * (rho10 + rho13)) / alpha1
    } else {
        0.0
    };
    let allocation = PowerAllocation {
        rho11,
        rho22: 0.0,
        rho10,
        rho20: 0.0,
        rho13,
        rho23: ctx.rho23,
    };
    let rc = eval_constraints(ch, &phases, &allocation)?;
    let rate = rc.j1.min(rc.s4);
    Ok(IndividualSolution {
        rate,
        allocation,
        phases,
        case: cand.case,
        kkt_residual: cand.residual,
        used_fallback: cand.fallback,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_case_closed_form() {
        let ch = ChannelGains::new(0.5, 0.5, 1.0, 1.0, 2.0, 2.0).unwrap();
        let sol = maximize_individual_fixed_alpha(&ch, 0.4).unwrap();
        assert_eq!(sol.case, IndividualCase::Direct);
        assert!((sol.rate - 3.0_f64.log2()).abs() < 1e-12);
        assert_eq!(sol.phases.alpha1, 0.0);
        assert_eq!(sol.allocation.rho10, 2.0);
        assert_eq!(sol.allocation.rho23, 2.0);
    }

    #[test]
    fn equal_gain_tie_goes_direct() {
        let ch = ChannelGains::new(1.0, 1.0, 1.0, 1.0, 2.0, 2.0).unwrap();
        let sol = maximize_individual_fixed_alpha(&ch, 0.3).unwrap();
        assert_eq!(sol.case, IndividualCase::Direct);
    }

    #[test]
    fn cooperation_beats_direct() {
        let ch = ChannelGains::new(5.0, 5.0, 1.0, 1.0, 2.0, 2.0).unwrap();
        let sol = maximize_individual_fixed_alpha(&ch, 0.5).unwrap();
        assert!(sol.rate > 3.0_f64.log2());
        assert!(sol.kkt_residual <= KKT_TOL);
        // Both active constraints are equal whenever a closed form was
        // accepted; fallback solutions may legitimately leave J1 slack.
        let rc = eval_constraints(&ch, &sol.phases, &sol.allocation).unwrap();
        if !sol.used_fallback
            && matches!(sol.case, IndividualCase::PdfRepetition | IndividualCase::DecodeForward)
        {
            assert!((rc.j1 - rc.s4).abs() <= 1e-6 * rc.j1.max(1.0));
        }
    }

    #[test]
    fn rate_equals_min_of_bounds() {
        let ch = ChannelGains::new(3.0, 3.0, 1.1, 0.6, 1.5, 2.5).unwrap();
        let sol = maximize_individual_fixed_alpha(&ch, 0.35).unwrap();
        let rc = eval_constraints(&ch, &sol.phases, &sol.allocation).unwrap();
        assert!((sol.rate - rc.j1.min(rc.s4)).abs() < 1e-9);
    }

    #[test]
    fn table1_golden_constants() {
        // Frozen from an independent scripted evaluation at
        // g12=3, g10=1.2, g20=0.8, p1=2.5, p2=1.5, alpha1=0.3, rho13=0.6,
        // with rho11/rho10 taken on the stationarity family.
        let ch = ChannelGains::new(3.0, 3.0, 1.2, 0.8, 2.5, 1.5).unwrap();
        let partial = PowerAllocation {
            rho11: 3.187_838_985_314_906,
            rho10: 1.605_211_863_436_469,
            rho13: 0.6,
            ..Default::default()
        };
        let t = table1_definitions(&ch, 0.3, &partial).unwrap();
        let tol = 1e-12;
        assert!((t.a1 - 0.5833333333333333).abs() < tol);
        assert!((t.a2 - 3.8822834297593504).abs() < tol);
        assert!((t.a3 - 3.298_950_096_426_017).abs() < tol);
        assert!((t.a4 - 2.259_881_576_697_424).abs() < tol);
        assert!((t.a5 - 3.0642388444178613).abs() < tol);
        assert!((t.b1 - 9.512_668_053_814_47).abs() < 1e-11);
        assert!((t.b2 - 2.8696567873965526).abs() < 1e-11);
        assert!((t.f1 - 1.341_857_585_195_602).abs() < 1e-11);
        assert!((t.f3 - 5.684_691_060_917_419).abs() < 1e-11);
        let f2 = individual_residual_f2(&ch, 0.3, 0.6).unwrap();
        assert!((f2 - (-0.3227124935166118)).abs() < 1e-11);
        let f4 = individual_residual_f4(&ch, 0.3, 0.6).unwrap();
        assert!((f4 - 7.7084637841926575).abs() < 1e-10);
    }

    #[test]
    fn equal_gains_zero_offset() {
        let ch = ChannelGains::new(1.0, 1.0, 1.0, 1.0, 2.0, 2.0).unwrap();
        let partial = PowerAllocation { rho13: 0.5, ..Default::default() };
        let t = table1_definitions(&ch, 0.5, &partial).unwrap();
        assert_eq!(t.a1, 0.0);
        let ch = ChannelGains::new(2.0, 2.0, 1.0, 1.0, 2.0, 2.0).unwrap();
        let t = table1_definitions(&ch, 0.5, &partial).unwrap();
        assert!((t.a1 - 0.75).abs() < 1e-15);
    }

    #[test]
    fn singular_channel_rejected() {
        let ch = ChannelGains::new(2.0, 2.0, 0.0, 1.0, 2.0, 2.0).unwrap();
        let partial = PowerAllocation { rho13: 0.5, ..Default::default() };
        assert!(matches!(
            table1_definitions(&ch, 0.5, &partial),
            Err(Error::SingularChannel(_))
        ));
    }

    #[test]
    fn degenerate_alpha_rejected_for_cooperative_channel() {
        let ch = ChannelGains::new(5.0, 5.0, 1.0, 1.0, 2.0, 2.0).unwrap();
        assert!(matches!(
            maximize_individual_fixed_alpha(&ch, 1.0),
            Err(Error::DegeneratePhase(_))
        ));
    }

    #[test]
    fn rate_monotone_in_inter_user_gain() {
        let mut last = 0.0;
        for g12 in [1.2, 1.6, 2.0, 3.0, 4.0, 6.0, 9.0] {
            let ch = ChannelGains::new(g12, g12, 1.0, 1.0, 2.0, 2.0).unwrap();
            let sol = maximize_individual_fixed_alpha(&ch, 0.4).unwrap();
            assert!(
                sol.rate >= last - 1e-9,
                "rate dropped at g12 = {g12}: {} -> {}",
                last,
                sol.rate
            );
            last = sol.rate;
        }
    }

    #[test]
    fn matches_numeric_solver_across_cases() {
        // The closed-form cascade must agree with the direct numerical
        // solve everywhere, including the boundary patterns.
        let params: [(f64, f64, f64, f64, f64, f64); 6] = [
            (6.4, 0.72, 0.93, 4.2, 2.5, 0.34),
            (5.4, 1.58, 0.63, 5.7, 1.7, 0.90),
            (3.6, 1.73, 0.42, 5.3, 4.3, 0.33),
            (1.7, 0.81, 2.08, 1.0, 0.8, 0.58),
            (7.5, 2.17, 1.58, 4.4, 5.2, 0.88),
            (4.8, 0.21, 1.68, 2.6, 1.9, 0.29),
        ];
        for (g12, g10, g20, p1, p2, alpha1) in params {
            let ch = ChannelGains::new(g12, g12, g10, g20, p1, p2).unwrap();
            let sol = maximize_individual_fixed_alpha(&ch, alpha1).unwrap();
            let ctx = Ctx::new(&ch, alpha1);
            let (numeric, _, _, _) = ctx.numeric_solve();
            assert!(
                (sol.rate - numeric).abs() < 1e-7,
                "closed {} vs numeric {numeric} at g12={g12} alpha1={alpha1} case {:?}",
                sol.rate,
                sol.case
            );
        }
    }

    #[test]
    fn loose_destination_bound_is_flagged() {
        // Large alpha1 with a strong partner link: the destination bound
        // binds alone, no closed form applies, the fallback must engage.
        let ch = ChannelGains::new(5.447, 5.447, 1.576, 0.629, 5.67, 1.72).unwrap();
        let sol = maximize_individual_fixed_alpha(&ch, 0.9).unwrap();
        assert!(sol.used_fallback);
        assert_eq!(sol.case, IndividualCase::DecodeForward);
        assert!((sol.rate - 4.0736538005).abs() < 1e-5);
    }
}
