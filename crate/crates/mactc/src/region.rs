//! Achievable rate regions: the polygon of a single parameter set, the
//! classical MAC baseline, grid envelopes over all parameters, and the
//! strengthened-gains outer bound.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{cap, eval_constraints, ChannelGains, PhaseDurations, PowerAllocation};
use crate::error::{Error, Result};
use crate::individual::maximize_individual_fixed_alpha;
use crate::sum::maximize_sum_fixed_alphas;

/// Rate polygon `{R1 <= j1, R2 <= j2, R1 + R2 <= smin, R >= 0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    pub j1: f64,
    pub j2: f64,
    pub smin: f64,
    /// Vertices in counterclockwise order starting at the origin.
    pub corners: Vec<(f64, f64)>,
}

impl RateRegion {
    /// Build the polygon from its three bounds.
    pub fn from_bounds(j1: f64, j2: f64, smin: f64) -> Self {
        let mut corners: Vec<(f64, f64)> = Vec::with_capacity(5);
        let r1_max = j1.min(smin);
        corners.push((0.0, 0.0));
        corners.push((r1_max, 0.0));
        if smin < j1 + j2 {
            // The sum bound cuts the rectangle.
            if smin > j1 {
                corners.push((j1, smin - j1));
            }
            if smin > j2 {
                corners.push((smin - j2, j2));
            }
        } else {
            corners.push((j1, j2));
        }
        corners.push((0.0, j2.min(smin)));
        corners.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-15 && (a.1 - b.1).abs() < 1e-15);
        if corners.len() > 1 && corners[0] == *corners.last().unwrap() {
            corners.pop();
        }
        Self { j1, j2, smin, corners }
    }

    /// True when `(r1, r2)` satisfies every bound up to `tol`.
    pub fn contains(&self, r1: f64, r2: f64, tol: f64) -> bool {
        r1 >= -tol
            && r2 >= -tol
            && r1 <= self.j1 + tol
            && r2 <= self.j2 + tol
            && r1 + r2 <= self.smin + tol
    }
}

/// Region achieved by one explicit parameter set.
pub fn region_for_allocation(
    ch: &ChannelGains,
    pd: &PhaseDurations,
    pa: &PowerAllocation,
) -> Result<RateRegion> {
    let rc = eval_constraints(ch, pd, pa)?;
    Ok(RateRegion::from_bounds(rc.j1, rc.j2, rc.smin()))
}

/// Non-cooperative baseline: both users transmit to the destination for
/// the whole block.
pub fn classical_mac_region(ch: &ChannelGains) -> RateRegion {
    let s1 = ch.g10 * ch.g10 * ch.p1;
    let s2 = ch.g20 * ch.g20 * ch.p2;
    RateRegion::from_bounds(cap(s1), cap(s2), cap(s1 + s2))
}

/// Keep only Pareto-maximal points; the result is sorted by increasing
/// `r1` and strictly decreasing `r2`.
pub fn pareto_filter(mut points: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    points.retain(|p| p.0.is_finite() && p.1.is_finite());
    // Descending in r1, then descending in r2: sweeping left, a point
    // survives iff its r2 beats everything with r1 at least as large.
    points.sort_by(|a, b| {
        b.0.partial_cmp(&a.0).unwrap().then(b.1.partial_cmp(&a.1).unwrap())
    });
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut best_r2 = f64::NEG_INFINITY;
    for &(r1, r2) in &points {
        if r2 > best_r2 + 1e-15 {
            out.push((r1, r2));
            best_r2 = r2;
        }
    }
    out.reverse();
    out
}

/// Upper concave hull of a frontier point set, sorted by increasing `r1`.
///
/// Time sharing makes every achievable region convex, so the chord
/// between two achievable points is achievable; containment checks run
/// against this hull rather than the raw point staircase.
pub fn upper_concave_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = pareto_filter(points.to_vec());
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for p in pts.drain(..) {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) >= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// True when `(r1, r2)` lies under the upper concave hull of `frontier`
/// (extended horizontally to the axis on the left), within `tol`.
pub fn frontier_covers(frontier: &[(f64, f64)], r1: f64, r2: f64, tol: f64) -> bool {
    let hull = upper_concave_hull(frontier);
    if hull.is_empty() {
        return r1 <= tol && r2 <= tol;
    }
    if r1 > hull.last().unwrap().0 + tol {
        return r2 <= tol;
    }
    if r1 <= hull[0].0 {
        return r2 <= hull[0].1 + tol;
    }
    for w in hull.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        if r1 <= x1 {
            let y = y0 + (y1 - y0) * (r1 - x0) / (x1 - x0);
            return r2 <= y + tol;
        }
    }
    r2 <= hull.last().unwrap().1 + tol
}

/// Corner points of every sampled polygon.  Rate bounds are evaluated on
/// `eval_ch`; optimizer anchors are solved on each channel of
/// `anchor_chs` and their allocations re-evaluated on `eval_ch`
/// (allocations depend only on budgets and durations, not on gains).
fn corner_union(
    eval_ch: &ChannelGains,
    anchor_chs: &[&ChannelGains],
    alpha_grid_step: f64,
    power_grid_points: usize,
) -> Result<Vec<(f64, f64)>> {
    if !(alpha_grid_step > 0.0 && alpha_grid_step < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha grid step must lie in (0, 1), got {alpha_grid_step}"
        )));
    }
    if power_grid_points < 2 {
        return Err(Error::InvalidParameter(format!(
            "power grid needs at least 2 points, got {power_grid_points}"
        )));
    }
    const EPS: f64 = 1e-6;
    let mut alphas: Vec<(f64, f64)> = Vec::new();
    let mut a1 = 0.0;
    while a1 < 1.0 - EPS {
        let mut a2 = 0.0;
        while a1 + a2 < 1.0 - EPS {
            alphas.push((a1, a2));
            a2 += alpha_grid_step;
        }
        a1 += alpha_grid_step;
    }

    let n = power_grid_points;
    let all_corners: Vec<Vec<(f64, f64)>> = alphas
        .par_iter()
        .map(|&(a1, a2)| {
            let mut pts: Vec<(f64, f64)> = Vec::new();
            let a3f = 1.0 - a1 - a2;
            let grid = |hi: f64| -> Vec<f64> {
                if hi <= 0.0 {
                    vec![0.0]
                } else {
                    (0..n).map(|i| hi.sqrt() * i as f64 / (n - 1) as f64).collect()
                }
            };
            let u1s = grid(if a1 > 0.0 { eval_ch.p1 / a1 } else { 0.0 });
            let u2s = grid(if a2 > 0.0 { eval_ch.p2 / a2 } else { 0.0 });
            let pd = PhaseDurations { alpha1: a1, alpha2: a2, alpha3: a3f };
            for &u1 in &u1s {
                let rho11 = u1 * u1;
                let q1 = (eval_ch.p1 - a1 * rho11) / a3f;
                if q1 < 0.0 {
                    continue;
                }
                for &u2 in &u2s {
                    let rho22 = u2 * u2;
                    let q2 = (eval_ch.p2 - a2 * rho22) / a3f;
                    if q2 < 0.0 {
                        continue;
                    }
                    for i3 in 0..n {
                        let rho13 = q1 * (i3 as f64 / (n - 1) as f64).powi(2);
                        for i4 in 0..n {
                            let rho23 = q2 * (i4 as f64 / (n - 1) as f64).powi(2);
                            let pa = PowerAllocation {
                                rho11,
                                rho22,
                                rho10: q1 - rho13,
                                rho20: q2 - rho23,
                                rho13,
                                rho23,
                            };
                            if let Ok(rc) = eval_constraints(eval_ch, &pd, &pa) {
                                let region =
                                    RateRegion::from_bounds(rc.j1, rc.j2, rc.smin());
                                pts.extend(region.corners);
                            }
                        }
                    }
                }
            }
            // Optimizer anchors sharpen the envelope beyond grid accuracy.
            for &anchor_ch in anchor_chs {
                if let Ok(sol) = maximize_sum_fixed_alphas(anchor_ch, a1, a2) {
                    if let Ok(region) =
                        region_for_allocation(eval_ch, &sol.phases, &sol.allocation)
                    {
                        pts.extend(region.corners);
                    }
                }
                if a2 == 0.0 {
                    if let Ok(sol) = maximize_individual_fixed_alpha(anchor_ch, a1) {
                        let pd = sol.phases;
                        if let Ok(rc) = eval_constraints(eval_ch, &pd, &sol.allocation) {
                            pts.push((rc.j1.min(rc.s4), 0.0));
                        }
                    }
                }
                if a1 == 0.0 {
                    let mirrored = ChannelGains {
                        g12: anchor_ch.g21,
                        g21: anchor_ch.g12,
                        g10: anchor_ch.g20,
                        g20: anchor_ch.g10,
                        p1: anchor_ch.p2,
                        p2: anchor_ch.p1,
                    };
                    if let Ok(sol) = maximize_individual_fixed_alpha(&mirrored, a2) {
                        let back = PowerAllocation {
                            rho11: sol.allocation.rho22,
                            rho22: sol.allocation.rho11,
                            rho10: sol.allocation.rho20,
                            rho20: sol.allocation.rho10,
                            rho13: sol.allocation.rho23,
                            rho23: sol.allocation.rho13,
                        };
                        let pd = PhaseDurations {
                            alpha1: 0.0,
                            alpha2: sol.phases.alpha1,
                            alpha3: sol.phases.alpha3,
                        };
                        if let Ok(rc) = eval_constraints(eval_ch, &pd, &back) {
                            pts.push((0.0, rc.j2.min(rc.s4)));
                        }
                    }
                }
            }
            pts
        })
        .collect();

    Ok(all_corners.into_iter().flatten().collect())
}

/// Pareto frontier of the regions achievable over a grid of phase
/// durations and power splits.
///
/// The union is a grid approximation: each `(alpha1, alpha2)` cell
/// contributes the corner points of its sampled power allocations plus
/// the polygon of the exact sum-rate optimizer, and the per-user
/// optimizer anchors the two axis extremes.
pub fn envelope_region(
    ch: &ChannelGains,
    alpha_grid_step: f64,
    power_grid_points: usize,
) -> Result<Vec<(f64, f64)>> {
    ch.validate()?;
    Ok(pareto_filter(corner_union(ch, &[ch], alpha_grid_step, power_grid_points)?))
}

/// Envelope of the outer bound: the same construction with each
/// inter-user power gain strengthened by the corresponding direct gain.
pub fn outer_bound_region(
    ch: &ChannelGains,
    alpha_grid_step: f64,
    power_grid_points: usize,
) -> Result<Vec<(f64, f64)>> {
    ch.validate()?;
    let boosted = ch.outer_bound_gains();
    // Anchors from both gain sets: everything achievable on the true
    // channel is sampled under the boosted gains too, so the returned
    // frontier covers the achievable envelope by construction.
    Ok(pareto_filter(corner_union(&boosted, &[&boosted, ch], alpha_grid_step, power_grid_points)?))
}

/// True when every point of `inner` lies inside the (convex) region
/// spanned by `outer`, within `tol`.
pub fn frontier_dominates(outer: &[(f64, f64)], inner: &[(f64, f64)], tol: f64) -> bool {
    inner.iter().all(|&(r1, r2)| frontier_covers(outer, r1, r2, tol))
}

/// Largest `r1 + r2` over a point set.
pub fn frontier_sum_apex(points: &[(f64, f64)]) -> f64 {
    points.iter().map(|p| p.0 + p.1).fold(f64::NEG_INFINITY, f64::max)
}

/// Write frontier points as CSV with header `r1,r2`.
pub fn write_frontier_csv<W: std::io::Write>(mut w: W, points: &[(f64, f64)]) -> Result<()> {
    writeln!(w, "r1,r2")?;
    for &(r1, r2) in points {
        writeln!(w, "{r1:.6},{r2:.6}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagon_corners() {
        let region = RateRegion::from_bounds(1.0, 1.0, 1.5);
        assert_eq!(
            region.corners,
            vec![(0.0, 0.0), (1.0, 0.0), (1.0, 0.5), (0.5, 1.0), (0.0, 1.0)]
        );
    }

    #[test]
    fn rectangle_when_sum_bound_is_slack() {
        let region = RateRegion::from_bounds(1.0, 1.0, 2.5);
        assert_eq!(region.corners, vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
    }

    #[test]
    fn triangle_when_sum_bound_dominates() {
        let region = RateRegion::from_bounds(2.0, 2.0, 1.0);
        assert_eq!(region.corners, vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
    }

    #[test]
    fn degenerate_user_gives_segment() {
        let ch = ChannelGains::new(1.0, 1.0, 1.0, 1.0, 0.0, 2.0).unwrap();
        let region = classical_mac_region(&ch);
        assert_eq!(region.j1, 0.0);
        assert_eq!(region.corners, vec![(0.0, 0.0), (0.0, region.j2)]);
    }

    #[test]
    fn classical_mac_values() {
        let ch = ChannelGains::new(1.0, 1.0, 1.0, 2.0, 2.0, 1.0).unwrap();
        let region = classical_mac_region(&ch);
        assert!((region.j1 - 3.0_f64.log2()).abs() < 1e-12);
        assert!((region.j2 - 5.0_f64.log2()).abs() < 1e-12);
        assert!((region.smin - 7.0_f64.log2()).abs() < 1e-12);
        // Symmetric unit case.
        let ch = ChannelGains::new(1.0, 1.0, 1.0, 1.0, 2.0, 2.0).unwrap();
        assert!((classical_mac_region(&ch).smin - 5.0_f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn region_from_golden_allocation() {
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
        let region = region_for_allocation(&ch, &pd, &pa).unwrap();
        let j = 1.8679205211961679;
        let smin = 2.535_940_001_153_85;
        assert!((region.j1 - j).abs() < 1e-12);
        assert!((region.smin - smin).abs() < 1e-12);
        assert_eq!(region.corners.len(), 5);
        assert!((region.corners[2].0 - j).abs() < 1e-12);
        assert!((region.corners[2].1 - (smin - j)).abs() < 1e-12);
    }

    #[test]
    fn corners_satisfy_bounds_with_two_active() {
        for (j1, j2, smin) in [
            (1.0, 1.0, 1.5),
            (2.0, 1.0, 2.5),
            (0.5, 2.0, 2.1),
            (1.0, 1.0, 3.0),
            (2.0, 2.0, 1.0),
        ] {
            let region = RateRegion::from_bounds(j1, j2, smin);
            for &(r1, r2) in &region.corners {
                assert!(region.contains(r1, r2, 1e-12));
                let active = [
                    r1.abs() < 1e-12,
                    r2.abs() < 1e-12,
                    (r1 - j1).abs() < 1e-12,
                    (r2 - j2).abs() < 1e-12,
                    (r1 + r2 - smin).abs() < 1e-12,
                ]
                .iter()
                .filter(|&&b| b)
                .count();
                assert!(active >= 2, "corner ({r1}, {r2}) has {active} active constraints");
            }
        }
    }

    #[test]
    fn pareto_filter_drops_dominated_points() {
        let pts = vec![(0.5, 0.5), (1.0, 0.2), (0.4, 0.9), (0.9, 0.25), (1.0, 0.1)];
        let front = pareto_filter(pts);
        assert_eq!(front, vec![(0.4, 0.9), (0.5, 0.5), (0.9, 0.25), (1.0, 0.2)]);
        for (i, a) in front.iter().enumerate() {
            for (j, b) in front.iter().enumerate() {
                if i != j {
                    assert!(!(b.0 >= a.0 && b.1 >= a.1), "{a:?} dominated by {b:?}");
                }
            }
        }
    }

    #[test]
    fn dead_cooperation_links_reduce_to_classical_mac() {
        let ch = ChannelGains::new(0.0, 0.0, 1.0, 1.0, 2.0, 2.0).unwrap();
        let front = envelope_region(&ch, 0.25, 9).unwrap();
        let mac = classical_mac_region(&ch);
        // The frontier must dominate the MAC corners and nothing more.
        assert!(frontier_dominates(&front, &mac.corners, 1e-9));
        for &(r1, r2) in &front {
            assert!(mac.contains(r1, r2, 1e-9), "({r1}, {r2}) outside MAC region");
        }
    }

    #[test]
    fn envelope_dominates_mac_and_outer_dominates_envelope() {
        let ch = ChannelGains::new(5.0, 5.0, 1.0, 1.0, 2.0, 2.0).unwrap();
        let front = envelope_region(&ch, 0.2, 9).unwrap();
        let outer = outer_bound_region(&ch, 0.2, 9).unwrap();
        let mac = classical_mac_region(&ch);
        assert!(frontier_dominates(&front, &mac.corners, 1e-6));
        assert!(frontier_dominates(&outer, &front, 1e-6));
        // Cooperation strictly enlarges the sum apex on this channel.
        assert!(frontier_sum_apex(&front) > mac.smin + 0.1);
    }
}
