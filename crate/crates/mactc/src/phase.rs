//! Search over phase durations, wrapping the fixed-phase optimizers.
//!
//! The rate as a function of the phase split is not concave, but it shows
//! a single hump in practice, so two strategies are offered: exhaustive
//! grid search (the reference) and a cheap quadratic-interpolation step
//! that fits the hump around the best coarse sample.  Interpolated rates
//! are always re-solved at the fitted durations, never read off the fit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelGains, PhaseDurations};
use crate::error::{Error, Result};
use crate::individual::maximize_individual_fixed_alpha;
use crate::numerics::solve_linear;
use crate::sum::maximize_sum_fixed_alphas;

/// Keeps `alpha3` strictly positive where the closed forms divide by it.
pub const ALPHA_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchMethod {
    Grid,
    Interpolated,
}

/// Outcome of a phase-duration search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseSearchResult {
    pub best_alphas: PhaseDurations,
    /// Rate of a fixed-phase solve at `best_alphas`.
    pub best_rate: f64,
    pub method: SearchMethod,
    /// Every evaluated sample as `(alphas, rate)`.
    pub samples: Vec<(PhaseDurations, f64)>,
    /// `|interpolated - grid|` in the duration, when both were run.
    pub approx_error_bound: Option<f64>,
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::InvalidParameter(format!("grid step must lie in (0, 1), got {step}")));
    }
    Ok(())
}

fn alpha_axis(step: f64) -> Vec<f64> {
    let mut axis: Vec<f64> = Vec::new();
    let mut a = 0.0;
    while a < 1.0 - ALPHA_EPS {
        axis.push(a);
        a += step;
    }
    axis.push(1.0 - ALPHA_EPS);
    axis
}

/// Exhaustive search over `alpha1` for the individual rate.
pub fn grid_search_individual(ch: &ChannelGains, step: f64) -> Result<PhaseSearchResult> {
    ch.validate()?;
    check_step(step)?;
    let axis = alpha_axis(step);
    let samples: Vec<(PhaseDurations, f64)> = axis
        .par_iter()
        .map(|&a1| {
            let sol = maximize_individual_fixed_alpha(ch, a1)?;
            Ok((PhaseDurations::two_phase(a1)?, sol.rate))
        })
        .collect::<Result<_>>()?;
    let best = samples
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| a.1.partial_cmp(&b.1).unwrap().then(ib.cmp(ia)))
        .map(|(_, s)| *s)
        .expect("axis is never empty");
    Ok(PhaseSearchResult {
        best_alphas: best.0,
        best_rate: best.1,
        method: SearchMethod::Grid,
        samples,
        approx_error_bound: None,
    })
}

/// Exhaustive search over the `(alpha1, alpha2)` simplex for the sum rate.
///
/// Grid cells rejected by the fixed-phase solver (an exchange phase of
/// zero duration in a regime that needs it) are skipped; the origin cell
/// is the classical MAC and always evaluates.
pub fn grid_search_sum(ch: &ChannelGains, step: f64) -> Result<PhaseSearchResult> {
    ch.validate()?;
    check_step(step)?;
    let a1_axis = alpha_axis(step);
    let cells: Vec<(f64, f64)> = a1_axis
        .iter()
        .flat_map(|&a1| {
            alpha_axis(step)
                .into_iter()
                .filter(move |&a2| a1 + a2 < 1.0 - 0.5 * ALPHA_EPS)
                .map(move |a2| (a1, a2))
        })
        .collect();
    let samples: Vec<(PhaseDurations, f64)> = cells
        .par_iter()
        .filter_map(|&(a1, a2)| match maximize_sum_fixed_alphas(ch, a1, a2) {
            Ok(sol) => Some(Ok((PhaseDurations { alpha1: a1, alpha2: a2, alpha3: 1.0 - a1 - a2 }, sol.sum_rate))),
            Err(Error::DegeneratePhase(_)) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_>>()?;
    if samples.is_empty() {
        return Err(Error::NumericalFailure("no feasible phase grid cell".into()));
    }
    let best = samples
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| a.1.partial_cmp(&b.1).unwrap().then(ib.cmp(ia)))
        .map(|(_, s)| *s)
        .unwrap();
    Ok(PhaseSearchResult {
        best_alphas: best.0,
        best_rate: best.1,
        method: SearchMethod::Grid,
        samples,
        approx_error_bound: None,
    })
}

/// Vertex of the parabola through three samples; `None` when the fit is
/// degenerate or not strictly concave.
fn parabola_vertex(pts: &[(f64, f64); 3]) -> Option<f64> {
    let [(x0, y0), (x1, y1), (x2, y2)] = *pts;
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curvature = (d12 - d01) / (x2 - x0);
    if !curvature.is_finite() || curvature >= -1e-12 {
        return None;
    }
    // Newton form: vertex of a x^2 + ... through the three points.
    Some(0.5 * (x0 + x1 - d01 / curvature))
}

/// Quadratic interpolation of the individual rate over `alpha1`.
///
/// Quantizes `[0, 1)` into `coarse_points >= 3` samples, fits a parabola
/// through the best sample and its neighbors and re-solves at the vertex.
pub fn interpolate_individual(ch: &ChannelGains, coarse_points: usize) -> Result<PhaseSearchResult> {
    ch.validate()?;
    if coarse_points < 3 {
        return Err(Error::InvalidParameter(format!(
            "interpolation needs at least 3 coarse points, got {coarse_points}"
        )));
    }
    let hi = 1.0 - ALPHA_EPS;
    let axis: Vec<f64> =
        (0..coarse_points).map(|i| hi * i as f64 / (coarse_points - 1) as f64).collect();
    let samples: Vec<(PhaseDurations, f64)> = axis
        .par_iter()
        .map(|&a1| {
            let sol = maximize_individual_fixed_alpha(ch, a1)?;
            Ok((PhaseDurations::two_phase(a1)?, sol.rate))
        })
        .collect::<Result<_>>()?;
    let best_idx = argmax(&samples);
    let window = stencil_1d(best_idx, samples.len());
    let pts = [
        (samples[window[0]].0.alpha1, samples[window[0]].1),
        (samples[window[1]].0.alpha1, samples[window[1]].1),
        (samples[window[2]].0.alpha1, samples[window[2]].1),
    ];
    match parabola_vertex(&pts) {
        Some(vertex) => {
            let alpha = vertex.clamp(0.0, hi);
            let rate = maximize_individual_fixed_alpha(ch, alpha)?.rate;
            Ok(PhaseSearchResult {
                best_alphas: PhaseDurations::two_phase(alpha)?,
                best_rate: rate,
                method: SearchMethod::Interpolated,
                samples,
                approx_error_bound: None,
            })
        }
        None => Ok(PhaseSearchResult {
            best_alphas: samples[best_idx].0,
            best_rate: samples[best_idx].1,
            method: SearchMethod::Grid,
            samples,
            approx_error_bound: None,
        }),
    }
}

/// Bivariate quadratic interpolation of the sum rate over the phase
/// simplex.
///
/// A five-coefficient surface (no cross term, so five stencil points
/// determine it) is fitted around the best coarse sample; its stationary
/// point is clamped to the simplex and re-solved.
pub fn interpolate_sum(ch: &ChannelGains, l: usize, t: usize) -> Result<PhaseSearchResult> {
    ch.validate()?;
    if l < 3 || t < 3 {
        return Err(Error::InvalidParameter(format!(
            "interpolation needs at least 3 points per axis, got ({l}, {t})"
        )));
    }
    let hi = 1.0 - ALPHA_EPS;
    let a1_axis: Vec<f64> = (0..l).map(|i| hi * i as f64 / (l - 1) as f64).collect();
    // Row-dependent second axis covering [0, 1 - alpha1).
    let rows: Vec<Vec<f64>> = a1_axis
        .iter()
        .map(|&a1| {
            let top = (1.0 - a1 - ALPHA_EPS).max(0.0);
            (0..t).map(|j| top * j as f64 / (t - 1) as f64).collect()
        })
        .collect();
    let mut samples: Vec<(PhaseDurations, f64)> = Vec::new();
    let mut value = vec![vec![f64::NEG_INFINITY; t]; l];
    let evals: Vec<Vec<Option<f64>>> = a1_axis
        .par_iter()
        .enumerate()
        .map(|(i, &a1)| {
            rows[i]
                .iter()
                .map(|&a2| match maximize_sum_fixed_alphas(ch, a1, a2) {
                    Ok(sol) => Some(sol.sum_rate),
                    Err(_) => None,
                })
                .collect()
        })
        .collect();
    for i in 0..l {
        for j in 0..t {
            if let Some(rate) = evals[i][j] {
                value[i][j] = rate;
                samples.push((
                    PhaseDurations {
                        alpha1: a1_axis[i],
                        alpha2: rows[i][j],
                        alpha3: 1.0 - a1_axis[i] - rows[i][j],
                    },
                    rate,
                ));
            }
        }
    }
    if samples.is_empty() {
        return Err(Error::NumericalFailure("no feasible coarse sample".into()));
    }
    let (mut bi, mut bj) = (0, 0);
    for i in 0..l {
        for j in 0..t {
            if value[i][j] > value[bi][bj] {
                (bi, bj) = (i, j);
            }
        }
    }
    let grid_best = PhaseSearchResult {
        best_alphas: PhaseDurations {
            alpha1: a1_axis[bi],
            alpha2: rows[bi][bj],
            alpha3: 1.0 - a1_axis[bi] - rows[bi][bj],
        },
        best_rate: value[bi][bj],
        method: SearchMethod::Grid,
        samples: samples.clone(),
        approx_error_bound: None,
    };

    // Five-point stencil: center plus one neighbor along each direction.
    let i_win = stencil_1d(bi, l);
    let j_win = stencil_1d(bj, t);
    let mut stencil: Vec<(f64, f64, f64)> = vec![];
    let mut push = |i: usize, j: usize| {
        if value[i][j] > f64::NEG_INFINITY {
            let p = (a1_axis[i], rows[i][j], value[i][j]);
            if !stencil.iter().any(|q| (q.0 - p.0).abs() < 1e-15 && (q.1 - p.1).abs() < 1e-15) {
                stencil.push(p);
            }
        }
    };
    push(bi, bj);
    push(i_win[0], bj);
    push(i_win[2], bj);
    push(bi, j_win[0]);
    push(bi, j_win[2]);
    if stencil.len() < 5 {
        return Ok(grid_best);
    }
    // Fit s(x, y) = c0 + c1 x + c2 y + c3 x^2 + c4 y^2.
    let mut a: Vec<Vec<f64>> = stencil
        .iter()
        .map(|&(x, y, _)| vec![1.0, x, y, x * x, y * y])
        .collect();
    let mut b: Vec<f64> = stencil.iter().map(|&(_, _, v)| v).collect();
    let Some(c) = solve_linear(&mut a, &mut b) else {
        return Ok(grid_best);
    };
    if c[3] >= -1e-12 || c[4] >= -1e-12 {
        return Ok(grid_best);
    }
    let x = (-c[1] / (2.0 * c[3])).clamp(0.0, hi);
    let y = (-c[2] / (2.0 * c[4])).clamp(0.0, (1.0 - x - ALPHA_EPS).max(0.0));
    match maximize_sum_fixed_alphas(ch, x, y) {
        Ok(sol) => Ok(PhaseSearchResult {
            best_alphas: PhaseDurations { alpha1: x, alpha2: y, alpha3: 1.0 - x - y },
            best_rate: sol.sum_rate,
            method: SearchMethod::Interpolated,
            samples,
            approx_error_bound: None,
        }),
        Err(_) => Ok(grid_best),
    }
}

/// Interpolate and grid-search together; returns the interpolated result
/// with `approx_error_bound` set to the largest per-duration gap between
/// the two optima.
pub fn interpolate_individual_vs_grid(
    ch: &ChannelGains,
    coarse_points: usize,
    grid_step: f64,
) -> Result<PhaseSearchResult> {
    let mut interp = interpolate_individual(ch, coarse_points)?;
    let grid = grid_search_individual(ch, grid_step)?;
    interp.approx_error_bound =
        Some((interp.best_alphas.alpha1 - grid.best_alphas.alpha1).abs());
    Ok(interp)
}

/// Two-dimensional analogue of [`interpolate_individual_vs_grid`].
pub fn interpolate_sum_vs_grid(
    ch: &ChannelGains,
    l: usize,
    t: usize,
    grid_step: f64,
) -> Result<PhaseSearchResult> {
    let mut interp = interpolate_sum(ch, l, t)?;
    let grid = grid_search_sum(ch, grid_step)?;
    interp.approx_error_bound = Some(
        (interp.best_alphas.alpha1 - grid.best_alphas.alpha1)
            .abs()
            .max((interp.best_alphas.alpha2 - grid.best_alphas.alpha2).abs()),
    );
    Ok(interp)
}

fn argmax(samples: &[(PhaseDurations, f64)]) -> usize {
    let mut best = 0;
    for (i, s) in samples.iter().enumerate() {
        if s.1 > samples[best].1 {
            best = i;
        }
    }
    best
}

fn stencil_1d(center: usize, len: usize) -> [usize; 3] {
    if center == 0 {
        [0, 1, 2]
    } else if center == len - 1 {
        [len - 3, len - 2, len - 1]
    } else {
        [center - 1, center, center + 1]
    }
}

// ---------------------------------------------------------------------------
// Lookup table
// ---------------------------------------------------------------------------

/// One precomputed optimum; the serialized file is a JSON array of these.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LookupEntry {
    pub g12: f64,
    pub g21: f64,
    pub g10: f64,
    pub g20: f64,
    pub p1: f64,
    pub p2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub rate: f64,
}

/// Objective stored in a lookup table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LookupObjective {
    Individual,
    Sum,
}

/// Precomputed map from channel gains to optimal phase durations, with
/// local refinement between stored values at query time.
#[derive(Debug, Clone)]
pub struct LookupTable {
    pub objective: LookupObjective,
    pub entries: Vec<LookupEntry>,
}

impl LookupTable {
    /// Run the grid search for every channel of the lattice.
    pub fn build(channels: &[ChannelGains], objective: LookupObjective, step: f64) -> Result<Self> {
        let entries = channels
            .iter()
            .map(|ch| {
                let res = match objective {
                    LookupObjective::Individual => grid_search_individual(ch, step)?,
                    LookupObjective::Sum => grid_search_sum(ch, step)?,
                };
                Ok(LookupEntry {
                    g12: ch.g12,
                    g21: ch.g21,
                    g10: ch.g10,
                    g20: ch.g20,
                    p1: ch.p1,
                    p2: ch.p2,
                    alpha1: res.best_alphas.alpha1,
                    alpha2: res.best_alphas.alpha2,
                    rate: res.best_rate,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { objective, entries })
    }

    pub fn save<W: std::io::Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, &self.entries)?;
        Ok(())
    }

    pub fn load<R: std::io::Read>(r: R, objective: LookupObjective) -> Result<Self> {
        let entries: Vec<LookupEntry> = serde_json::from_reader(r)?;
        Ok(Self { objective, entries })
    }

    fn nearest(&self, ch: &ChannelGains) -> Result<&LookupEntry> {
        self.entries
            .iter()
            .min_by(|a, b| {
                let da = Self::dist(a, ch);
                let db = Self::dist(b, ch);
                da.partial_cmp(&db).unwrap()
            })
            .ok_or_else(|| Error::InvalidParameter("lookup table is empty".into()))
    }

    fn dist(e: &LookupEntry, ch: &ChannelGains) -> f64 {
        (e.g12 - ch.g12).powi(2)
            + (e.g21 - ch.g21).powi(2)
            + (e.g10 - ch.g10).powi(2)
            + (e.g20 - ch.g20).powi(2)
            + (e.p1 - ch.p1).powi(2)
            + (e.p2 - ch.p2).powi(2)
    }

    /// Look up the nearest lattice channel and refine its stored phase
    /// durations on a local window for the queried channel.
    pub fn lookup_refined(
        &self,
        ch: &ChannelGains,
        window: f64,
        fine_step: f64,
    ) -> Result<PhaseSearchResult> {
        ch.validate()?;
        check_step(fine_step)?;
        let entry = self.nearest(ch)?;
        let hi = 1.0 - ALPHA_EPS;
        let axis = |center: f64| -> Vec<f64> {
            let lo = (center - window).max(0.0);
            let top = (center + window).min(hi);
            let n = ((top - lo) / fine_step).ceil() as usize + 1;
            (0..n).map(|i| (lo + i as f64 * fine_step).min(top)).collect()
        };
        match self.objective {
            LookupObjective::Individual => {
                let mut samples = Vec::new();
                for a1 in axis(entry.alpha1) {
                    let sol = maximize_individual_fixed_alpha(ch, a1)?;
                    samples.push((PhaseDurations::two_phase(a1)?, sol.rate));
                }
                let best = samples[argmax(&samples)];
                Ok(PhaseSearchResult {
                    best_alphas: best.0,
                    best_rate: best.1,
                    method: SearchMethod::Grid,
                    samples,
                    approx_error_bound: None,
                })
            }
            LookupObjective::Sum => {
                let mut samples = Vec::new();
                for a1 in axis(entry.alpha1) {
                    for a2 in axis(entry.alpha2) {
                        if a1 + a2 >= 1.0 - 0.5 * ALPHA_EPS {
                            continue;
                        }
                        if let Ok(sol) = maximize_sum_fixed_alphas(ch, a1, a2) {
                            samples.push((
                                PhaseDurations { alpha1: a1, alpha2: a2, alpha3: 1.0 - a1 - a2 },
                                sol.sum_rate,
                            ));
                        }
                    }
                }
                if samples.is_empty() {
                    return Err(Error::NumericalFailure("empty refinement window".into()));
                }
                let best = samples[argmax(&samples)];
                Ok(PhaseSearchResult {
                    best_alphas: best.0,
                    best_rate: best.1,
                    method: SearchMethod::Grid,
                    samples,
                    approx_error_bound: None,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_channel_reports_alpha_zero() {
        let ch = ChannelGains::new(0.5, 0.5, 1.0, 1.0, 2.0, 2.0).unwrap();
        let res = grid_search_individual(&ch, 0.1).unwrap();
        assert_eq!(res.best_alphas.alpha1, 0.0);
        assert!((res.best_rate - 3.0_f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn coarse_grid_never_beats_fine_grid() {
        let ch = ChannelGains::symmetric(5.0, 1.0, 2.0).unwrap();
        let coarse = grid_search_individual(&ch, 0.5).unwrap();
        let fine = grid_search_individual(&ch, 0.01).unwrap();
        assert!(coarse.best_rate <= fine.best_rate + 1e-12);
    }

    #[test]
    fn sum_grid_on_mac_channel_stays_at_origin() {
        let ch = ChannelGains::new(0.5, 0.6, 1.0, 1.0, 2.0, 2.0).unwrap();
        let res = grid_search_sum(&ch, 0.25).unwrap();
        assert_eq!(res.best_alphas.alpha1, 0.0);
        assert_eq!(res.best_alphas.alpha2, 0.0);
        assert!((res.best_rate - 5.0_f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn sum_grid_symmetric_channel_balanced_phases() {
        let ch = ChannelGains::symmetric(5.0, 1.0, 2.0).unwrap();
        let res = grid_search_sum(&ch, 0.05).unwrap();
        assert!((res.best_alphas.alpha1 - res.best_alphas.alpha2).abs() <= 0.05 + 1e-12);
    }

    #[test]
    fn parabola_vertex_symmetric_samples() {
        let v = parabola_vertex(&[(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)]).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn vertex_stays_in_hull_when_middle_sample_wins() {
        // Randomized concave triples with an interior maximum.
        let mut seed = 0x243f6a88u64;
        let mut rnd = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let x0 = rnd();
            let dx1 = 0.05 + rnd();
            let dx2 = 0.05 + rnd();
            let y1 = 1.0 + rnd();
            let y0 = y1 - 0.01 - rnd();
            let y2 = y1 - 0.01 - rnd();
            let pts = [(x0, y0), (x0 + dx1, y1), (x0 + dx1 + dx2, y2)];
            let v = parabola_vertex(&pts).expect("concave triple must fit");
            assert!(v >= pts[0].0 - 1e-12 && v <= pts[2].0 + 1e-12, "vertex {v} outside {pts:?}");
        }
    }

    #[test]
    fn interpolation_recovers_synthetic_quadratic() {
        // The sum surface fit is exact on a separable quadratic.
        let stencil = [
            (0.3, 0.2, 0.0),
            (0.2, 0.2, -0.01),
            (0.4, 0.2, -0.01),
            (0.3, 0.1, -0.01),
            (0.3, 0.3, -0.01),
        ];
        let mut a: Vec<Vec<f64>> =
            stencil.iter().map(|&(x, y, _)| vec![1.0, x, y, x * x, y * y]).collect();
        let mut b: Vec<f64> = stencil.iter().map(|&(_, _, v)| v).collect();
        let c = solve_linear(&mut a, &mut b).unwrap();
        let x = -c[1] / (2.0 * c[3]);
        let y = -c[2] / (2.0 * c[4]);
        assert!((x - 0.3).abs() < 1e-9);
        assert!((y - 0.2).abs() < 1e-9);
    }

    #[test]
    fn interpolate_individual_close_to_fine_grid() {
        let ch = ChannelGains::symmetric(5.0, 1.0, 2.0).unwrap();
        let interp = interpolate_individual(&ch, 8).unwrap();
        let fine = grid_search_individual(&ch, 0.005).unwrap();
        assert!(interp.method == SearchMethod::Interpolated);
        assert!((interp.best_alphas.alpha1 - fine.best_alphas.alpha1).abs() < 0.1);
        assert!(interp.best_rate <= fine.best_rate + 1e-9);
    }

    #[test]
    fn interpolate_sum_on_mac_channel_returns_origin() {
        let ch = ChannelGains::new(0.5, 0.6, 1.0, 1.0, 2.0, 2.0).unwrap();
        let res = interpolate_sum(&ch, 4, 4).unwrap();
        assert_eq!(res.best_alphas.alpha1, 0.0);
        assert_eq!(res.best_alphas.alpha2, 0.0);
    }

    #[test]
    fn comparison_wrappers_fill_the_error_bound() {
        let ch = ChannelGains::symmetric(5.0, 1.0, 2.0).unwrap();
        let res = interpolate_individual_vs_grid(&ch, 8, 0.02).unwrap();
        let err = res.approx_error_bound.expect("bound must be set");
        assert!(err < 0.1, "interpolation far off the grid optimum: {err}");
        let res = interpolate_sum_vs_grid(&ch, 6, 6, 0.05).unwrap();
        assert!(res.approx_error_bound.is_some());
    }

    #[test]
    fn lookup_table_roundtrip_and_refinement() {
        let lattice: Vec<ChannelGains> = [2.0, 4.0, 6.0]
            .iter()
            .map(|&g| ChannelGains::symmetric(g, 1.0, 2.0).unwrap())
            .collect();
        let table = LookupTable::build(&lattice, LookupObjective::Individual, 0.05).unwrap();
        let mut buf = Vec::new();
        table.save(&mut buf).unwrap();
        let table = LookupTable::load(&buf[..], LookupObjective::Individual).unwrap();
        assert_eq!(table.entries.len(), 3);
        // Query between lattice points; refinement must not be worse than
        // the stored neighbor by more than local-window slack.
        let query = ChannelGains::symmetric(5.0, 1.0, 2.0).unwrap();
        let refined = table.lookup_refined(&query, 0.15, 0.01).unwrap();
        let reference = grid_search_individual(&query, 0.01).unwrap();
        assert!((refined.best_rate - reference.best_rate).abs() < 5e-3);
    }
}
