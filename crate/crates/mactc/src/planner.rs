//! Geometric network planning on a 2-D plane.
//!
//! Node positions map to channel gains through a pathloss-only model
//! `g = d^(-gamma/2)`; the planner classifies the optimal scheme for every
//! destination position and emits scheme-region maps and rate profiles.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{cap, ChannelGains};
use crate::error::{Error, Result};
use crate::individual::{maximize_individual_fixed_alpha, IndividualCase};
use crate::phase::{grid_search_individual, grid_search_sum, interpolate_individual, interpolate_sum};
use crate::sum::{maximize_sum_fixed_alphas, SumCase};

/// Cells closer than this to a user are masked as singular.
pub const SINGULAR_DISTANCE: f64 = 1e-3;

/// Two users and a destination on the plane, plus the pathloss exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub user1_pos: (f64, f64),
    pub user2_pos: (f64, f64),
    pub dest_pos: (f64, f64),
    pub gamma: f64,
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

impl Topology {
    pub fn new(
        user1_pos: (f64, f64),
        user2_pos: (f64, f64),
        dest_pos: (f64, f64),
        gamma: f64,
    ) -> Result<Self> {
        let t = Self { user1_pos, user2_pos, dest_pos, gamma };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gamma.is_finite() || self.gamma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "pathloss exponent must be positive, got {}",
                self.gamma
            )));
        }
        for (a, b, what) in [
            (self.user1_pos, self.user2_pos, "users"),
            (self.user1_pos, self.dest_pos, "user 1 and destination"),
            (self.user2_pos, self.dest_pos, "user 2 and destination"),
        ] {
            if dist(a, b) <= 0.0 {
                return Err(Error::SingularTopology(format!("{what} coincide at {a:?}")));
            }
        }
        Ok(())
    }

    pub fn with_destination(&self, dest: (f64, f64)) -> Self {
        Self { dest_pos: dest, ..*self }
    }

    pub fn d12(&self) -> f64 {
        dist(self.user1_pos, self.user2_pos)
    }

    pub fn d10(&self) -> f64 {
        dist(self.user1_pos, self.dest_pos)
    }

    pub fn d20(&self) -> f64 {
        dist(self.user2_pos, self.dest_pos)
    }
}

/// Channel gains of a topology under the pathloss model
/// `g_ij = d_ij^(-gamma/2)`; the inter-user link is reciprocal.
pub fn gains_from_topology(t: &Topology, p1: f64, p2: f64) -> Result<ChannelGains> {
    t.validate()?;
    let g = |d: f64| d.powf(-t.gamma / 2.0);
    ChannelGains::new(g(t.d12()), g(t.d12()), g(t.d10()), g(t.d20()), p1, p2)
}

/// Phase configuration for a map or profile run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhaseConfig {
    /// Solve each cell at these fixed durations (`alpha2` is ignored for
    /// the individual objective).
    Fixed { alpha1: f64, alpha2: f64 },
    /// Optimize the durations per cell by quadratic interpolation with
    /// this many coarse points per axis.
    Interpolated { coarse_points: usize },
}

/// Scheme found at one destination cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CellScheme {
    Individual(IndividualCase),
    Sum(SumCase),
    /// Destination coincides (numerically) with one of the users.
    Singular,
}

impl CellScheme {
    pub fn name(&self) -> String {
        match self {
            CellScheme::Individual(c) => c.to_string(),
            CellScheme::Sum(c) => c.to_string(),
            CellScheme::Singular => "Singular".to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MapCell {
    pub x: f64,
    pub y: f64,
    pub scheme: CellScheme,
    /// Optimal rate at the cell; absent for singular cells.
    pub rate: Option<f64>,
}

/// Rectangular destination sweep with per-cell scheme classification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemeMap {
    /// `(x_min, x_max, y_min, y_max)`.
    pub bounds: (f64, f64, f64, f64),
    /// Cells per axis.
    pub resolution: usize,
    /// Row-major, `y` outer, `x` inner.
    pub cells: Vec<MapCell>,
}

impl SchemeMap {
    /// Count of cells per scheme name, deterministic order.
    pub fn histogram(&self) -> BTreeMap<String, usize> {
        let mut h = BTreeMap::new();
        for cell in &self.cells {
            *h.entry(cell.scheme.name()).or_insert(0) += 1;
        }
        h
    }

    /// The cell whose center is nearest to `(x, y)`.
    pub fn cell_at(&self, x: f64, y: f64) -> Option<&MapCell> {
        self.cells.iter().min_by(|a, b| {
            let da = (a.x - x).powi(2) + (a.y - y).powi(2);
            let db = (b.x - x).powi(2) + (b.y - y).powi(2);
            da.partial_cmp(&db).unwrap()
        })
    }

    /// CSV rows `x,y,case,rate`, row-major.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,y,case,rate")?;
        for c in &self.cells {
            match c.rate {
                Some(r) => writeln!(w, "{:.6},{:.6},{},{r:.6}", c.x, c.y, c.scheme.name())?,
                None => writeln!(w, "{:.6},{:.6},{},", c.x, c.y, c.scheme.name())?,
            }
        }
        Ok(())
    }
}

fn grid_axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn check_map_args(bounds: (f64, f64, f64, f64), resolution: usize) -> Result<()> {
    if resolution < 2 {
        return Err(Error::InvalidParameter(format!(
            "map resolution must be at least 2, got {resolution}"
        )));
    }
    if !(bounds.0 < bounds.1 && bounds.2 < bounds.3) {
        return Err(Error::InvalidParameter(format!("empty map bounds {bounds:?}")));
    }
    Ok(())
}

fn build_map<F>(
    t_template: &Topology,
    bounds: (f64, f64, f64, f64),
    resolution: usize,
    solve: F,
) -> Result<SchemeMap>
where
    F: Fn(&Topology) -> Result<(CellScheme, f64)> + Sync,
{
    check_map_args(bounds, resolution)?;
    let xs = grid_axis(bounds.0, bounds.1, resolution);
    let ys = grid_axis(bounds.2, bounds.3, resolution);
    let coords: Vec<(f64, f64)> =
        ys.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).collect();
    let cells: Vec<MapCell> = coords
        .par_iter()
        .map(|&(x, y)| {
            let t = t_template.with_destination((x, y));
            if t.d10() < SINGULAR_DISTANCE || t.d20() < SINGULAR_DISTANCE {
                return Ok(MapCell { x, y, scheme: CellScheme::Singular, rate: None });
            }
            let (scheme, rate) = solve(&t)?;
            Ok(MapCell { x, y, scheme, rate: Some(rate) })
        })
        .collect::<Result<_>>()?;
    Ok(SchemeMap { bounds, resolution, cells })
}

/// Scheme map for the individual rate: one solve per destination cell.
pub fn individual_scheme_map(
    t_template: &Topology,
    phases: PhaseConfig,
    bounds: (f64, f64, f64, f64),
    resolution: usize,
    p1: f64,
    p2: f64,
) -> Result<SchemeMap> {
    build_map(t_template, bounds, resolution, |t| {
        let ch = gains_from_topology(t, p1, p2)?;
        let sol = match phases {
            PhaseConfig::Fixed { alpha1, .. } => maximize_individual_fixed_alpha(&ch, alpha1)?,
            PhaseConfig::Interpolated { coarse_points } => {
                let best = interpolate_individual(&ch, coarse_points)?;
                maximize_individual_fixed_alpha(&ch, best.best_alphas.alpha1)?
            }
        };
        Ok((CellScheme::Individual(sol.case), sol.rate))
    })
}

/// Scheme map for the sum rate.
pub fn sum_scheme_map(
    t_template: &Topology,
    phases: PhaseConfig,
    bounds: (f64, f64, f64, f64),
    resolution: usize,
    p1: f64,
    p2: f64,
) -> Result<SchemeMap> {
    build_map(t_template, bounds, resolution, |t| {
        let ch = gains_from_topology(t, p1, p2)?;
        let sol = match phases {
            PhaseConfig::Fixed { alpha1, alpha2 } => maximize_sum_fixed_alphas(&ch, alpha1, alpha2)?,
            PhaseConfig::Interpolated { coarse_points } => {
                let best = interpolate_sum(&ch, coarse_points, coarse_points)?;
                maximize_sum_fixed_alphas(&ch, best.best_alphas.alpha1, best.best_alphas.alpha2)?
            }
        };
        Ok((CellScheme::Sum(sol.case), sol.sum_rate))
    })
}

/// Objective of a rate profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProfileObjective {
    /// `R1` at fixed `alpha1`, or grid-optimized when `alpha1` is `None`.
    Individual { alpha1: Option<f64> },
    /// Sum rate at fixed durations, or grid-optimized when `None`.
    Sum { alphas: Option<(f64, f64)> },
}

/// One sample of a rate profile along a line of destination positions.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub position: (f64, f64),
    pub rate: f64,
    /// Classical-MAC value of the same objective at this position.
    pub baseline_rate: f64,
    /// Same optimization with the outer-bound gains.
    pub outer_bound_rate: f64,
}

const PROFILE_ALPHA_STEP: f64 = 0.02;

fn profile_rate(ch: &ChannelGains, objective: ProfileObjective) -> Result<f64> {
    Ok(match objective {
        ProfileObjective::Individual { alpha1: Some(a1) } => {
            maximize_individual_fixed_alpha(ch, a1)?.rate
        }
        ProfileObjective::Individual { alpha1: None } => {
            grid_search_individual(ch, PROFILE_ALPHA_STEP)?.best_rate
        }
        ProfileObjective::Sum { alphas: Some((a1, a2)) } => {
            maximize_sum_fixed_alphas(ch, a1, a2)?.sum_rate
        }
        ProfileObjective::Sum { alphas: None } => grid_search_sum(ch, PROFILE_ALPHA_STEP)?.best_rate,
    })
}

/// Optimal rate, classical-MAC baseline and outer-bound value for
/// destinations sampled along the segment from `line.0` to `line.1`.
/// Samples landing on a user position are skipped.
pub fn rate_profile_on_line(
    t_template: &Topology,
    line: ((f64, f64), (f64, f64)),
    samples: usize,
    objective: ProfileObjective,
    p1: f64,
    p2: f64,
) -> Result<Vec<ProfilePoint>> {
    if samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "profile needs at least 2 samples, got {samples}"
        )));
    }
    let positions: Vec<(f64, f64)> = (0..samples)
        .map(|i| {
            let s = i as f64 / (samples - 1) as f64;
            (line.0 .0 + (line.1 .0 - line.0 .0) * s, line.0 .1 + (line.1 .1 - line.0 .1) * s)
        })
        .collect();
    let points: Vec<Option<ProfilePoint>> = positions
        .par_iter()
        .map(|&pos| {
            let t = t_template.with_destination(pos);
            if t.d10() < SINGULAR_DISTANCE || t.d20() < SINGULAR_DISTANCE {
                return Ok(None);
            }
            let ch = gains_from_topology(&t, p1, p2)?;
            let rate = profile_rate(&ch, objective)?;
            let boosted = ch.outer_bound_gains();
            let outer = profile_rate(&boosted, objective)?;
            let baseline = match objective {
                ProfileObjective::Individual { .. } => cap(ch.g10 * ch.g10 * ch.p1),
                ProfileObjective::Sum { .. } => {
                    cap(ch.g10 * ch.g10 * ch.p1 + ch.g20 * ch.g20 * ch.p2)
                }
            };
            Ok(Some(ProfilePoint {
                position: pos,
                rate,
                baseline_rate: baseline,
                outer_bound_rate: outer,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(points.into_iter().flatten().collect())
}

/// Write a profile as CSV `x,y,rate,baseline,outer_bound`.
pub fn write_profile_csv<W: std::io::Write>(mut w: W, points: &[ProfilePoint]) -> Result<()> {
    writeln!(w, "x,y,rate,baseline,outer_bound")?;
    for p in points {
        writeln!(
            w,
            "{:.6},{:.6},{:.6},{:.6},{:.6}",
            p.position.0, p.position.1, p.rate, p.baseline_rate, p.outer_bound_rate
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bench_layout() -> Topology {
        Topology::new((-0.5, 0.0), (0.5, 0.0), (0.0, 1.0), 2.4).unwrap()
    }

    #[test]
    fn pathloss_values() {
        // Unit distance gives unit gain; d = 0.5 at gamma = 2.4 gives
        // 0.5^-1.2.
        let t = bench_layout();
        assert_eq!(t.d12(), 1.0);
        let ch = gains_from_topology(&t, 2.0, 2.0).unwrap();
        assert_eq!(ch.g12, 1.0);
        let t2 = Topology::new((0.0, 0.0), (0.5, 0.0), (1.0, 0.0), 2.4).unwrap();
        let ch2 = gains_from_topology(&t2, 2.0, 2.0).unwrap();
        assert!((ch2.g12 - 2.297_396_709_994_07).abs() < 1e-12);
    }

    #[test]
    fn coincident_nodes_rejected() {
        assert!(Topology::new((0.0, 0.0), (0.0, 0.0), (1.0, 0.0), 2.4).is_err());
        assert!(Topology::new((0.0, 0.0), (1.0, 0.0), (1.0, 0.0), 2.4).is_err());
        assert!(Topology::new((-0.5, 0.0), (0.5, 0.0), (0.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn near_destination_is_direct() {
        // d10 < d12 means the direct link beats the inter-user link.
        let t = bench_layout().with_destination((-0.5, 0.1));
        let ch = gains_from_topology(&t, 2.0, 2.0).unwrap();
        let sol = maximize_individual_fixed_alpha(&ch, 0.5).unwrap();
        assert_eq!(sol.case, IndividualCase::Direct);
    }

    #[test]
    fn small_individual_map_has_direct_region() {
        let t = bench_layout();
        let map = individual_scheme_map(
            &t,
            PhaseConfig::Fixed { alpha1: 0.5, alpha2: 0.0 },
            (-1.0, 1.0, -1.0, 1.0),
            11,
            2.0,
            2.0,
        )
        .unwrap();
        assert_eq!(map.cells.len(), 121);
        let hist = map.histogram();
        assert!(hist.get("Direct").copied().unwrap_or(0) > 0);
        // Cells close to user 1 must be direct.
        let cell = map.cell_at(-0.4, 0.0).unwrap();
        assert_eq!(cell.scheme, CellScheme::Individual(IndividualCase::Direct));
    }

    #[test]
    fn minimal_resolution_map() {
        let t = bench_layout();
        let map = sum_scheme_map(
            &t,
            PhaseConfig::Fixed { alpha1: 0.2, alpha2: 0.2 },
            (-2.0, 2.0, -2.0, 2.0),
            2,
            2.0,
            2.0,
        )
        .unwrap();
        assert_eq!(map.cells.len(), 4);
    }

    #[test]
    fn sum_map_case_predicates_are_consistent() {
        let t = bench_layout();
        let map = sum_scheme_map(
            &t,
            PhaseConfig::Fixed { alpha1: 0.2, alpha2: 0.2 },
            (-2.0, 2.0, -2.0, 2.0),
            9,
            2.0,
            2.0,
        )
        .unwrap();
        for cell in &map.cells {
            let CellScheme::Sum(case) = cell.scheme else { continue };
            let t = t.with_destination((cell.x, cell.y));
            let ch = gains_from_topology(&t, 2.0, 2.0).unwrap();
            let coop1 = ch.g12 > ch.g10;
            let coop2 = ch.g21 > ch.g20;
            let ok = match case {
                SumCase::ClassicalMac => !coop1 && !coop2,
                SumCase::BothPdf | SumCase::BothDf => coop1 && coop2,
                SumCase::User1PdfUser2Direct | SumCase::User1DfUser2Direct => coop1 && !coop2,
                SumCase::Mirror => !coop1 && coop2,
            };
            assert!(ok, "case {case:?} inconsistent at ({}, {})", cell.x, cell.y);
        }
    }

    #[test]
    fn sum_map_mirror_symmetry() {
        // Equal budgets: swapping users mirrors the map about the
        // perpendicular bisector of the user segment.
        let t = bench_layout();
        let map = sum_scheme_map(
            &t,
            PhaseConfig::Fixed { alpha1: 0.2, alpha2: 0.2 },
            (-2.0, 2.0, -2.0, 2.0),
            9,
            2.0,
            2.0,
        )
        .unwrap();
        for cell in &map.cells {
            let mirrored = map.cell_at(-cell.x, cell.y).unwrap();
            let expected = match cell.scheme {
                CellScheme::Sum(SumCase::User1PdfUser2Direct)
                | CellScheme::Sum(SumCase::User1DfUser2Direct) => {
                    matches!(mirrored.scheme, CellScheme::Sum(SumCase::Mirror))
                }
                CellScheme::Sum(SumCase::Mirror) => matches!(
                    mirrored.scheme,
                    CellScheme::Sum(SumCase::User1PdfUser2Direct)
                        | CellScheme::Sum(SumCase::User1DfUser2Direct)
                ),
                CellScheme::Sum(SumCase::ClassicalMac) => {
                    matches!(mirrored.scheme, CellScheme::Sum(SumCase::ClassicalMac))
                }
                _ => true,
            };
            assert!(expected, "asymmetry at ({}, {})", cell.x, cell.y);
        }
    }

    #[test]
    fn profile_respects_outer_bound() {
        let t = bench_layout();
        let profile = rate_profile_on_line(
            &t,
            ((-1.5, 0.0), (1.5, 0.0)),
            13,
            ProfileObjective::Individual { alpha1: Some(0.5) },
            2.0,
            2.0,
        )
        .unwrap();
        assert!(!profile.is_empty());
        for p in &profile {
            assert!(p.rate <= p.outer_bound_rate + 1e-9);
            assert!(p.baseline_rate <= p.rate + 1e-9);
        }
    }
}
