//! Small deterministic 1-D search primitives used by the solvers.
//!
//! Everything here works on plain closures and returns plain floats so the
//! solvers stay free of allocation in their inner loops.

/// Outcome of scanning a residual over an interval.
pub(crate) enum ScanOutcome {
    /// A sign change was found; the bracket `(lo, hi)` contains a root and
    /// `f(lo)` has the recorded sign.
    Bracket { lo: f64, hi: f64, f_lo_neg: bool },
    /// No sign change among the defined probes (or no defined probe).
    NoBracket,
}

/// Probe `f` on `n` evenly spaced points of `[lo, hi]` and report the first
/// sign change among consecutive *defined* values.
pub(crate) fn scan_for_bracket<F>(f: F, lo: f64, hi: f64, n: usize) -> ScanOutcome
where
    F: Fn(f64) -> Option<f64>,
{
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..n {
        let x = lo + (hi - lo) * (i as f64) / ((n - 1) as f64);
        let Some(v) = f(x) else {
            prev = None;
            continue;
        };
        if !v.is_finite() {
            prev = None;
            continue;
        }
        if let Some((px, pv)) = prev {
            if (pv < 0.0) != (v < 0.0) {
                return ScanOutcome::Bracket { lo: px, hi: x, f_lo_neg: pv < 0.0 };
            }
        }
        prev = Some((x, v));
    }
    ScanOutcome::NoBracket
}

/// Bisection on a bracket known to contain a sign change.
///
/// `f` may return `None` inside the bracket (the stationarity families have
/// small undefined pockets); the midpoint is then nudged toward the endpoint
/// whose sign is known.  Stops when the bracket is narrower than `tol`.
pub(crate) fn bisect<F>(f: F, mut lo: f64, mut hi: f64, lo_neg: bool, tol: f64, max_iter: usize) -> f64
where
    F: Fn(f64) -> Option<f64>,
{
    for _ in 0..max_iter {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match f(mid) {
            Some(v) if v.is_finite() => {
                if (v < 0.0) == lo_neg {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            _ => {
                // Undefined midpoint: shrink from the low side.
                let probe = lo + 0.25 * (hi - lo);
                match f(probe) {
                    Some(v) if v.is_finite() => {
                        if (v < 0.0) == lo_neg {
                            lo = probe;
                        } else {
                            hi = probe;
                        }
                    }
                    _ => break,
                }
            }
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
/// Returns the abscissa of the maximum.
pub(crate) fn golden_max<F>(f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    if hi <= lo {
        return lo;
    }
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (hi - lo).abs() <= tol * (1.0 + lo.abs() + hi.abs()) {
            break;
        }
        if fc < fd {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        } else {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        }
    }
    0.5 * (lo + hi)
}

/// Solve a small dense linear system `a x = b` by Gaussian elimination with
/// partial pivoting.  Returns `None` when the system is (near) singular.
#[allow(clippy::needless_range_loop)]
pub(crate) fn solve_linear(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in col + 1..n {
            s -= a[col][k] * x[k];
        }
        x[col] = s / a[col][col];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let f = |x: f64| Some(x * x - 2.0);
        match scan_for_bracket(f, 0.0, 2.0, 9) {
            ScanOutcome::Bracket { lo, hi, f_lo_neg } => {
                let r = bisect(f, lo, hi, f_lo_neg, 1e-12, 200);
                assert!((r - std::f64::consts::SQRT_2).abs() < 1e-10);
            }
            _ => panic!("expected a bracket"),
        }
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let x = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-12, 200);
        assert!((x - 0.3).abs() < 1e-6);
    }

    #[test]
    fn linear_solver_roundtrip() {
        let mut a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let mut b = vec![5.0, 10.0];
        let x = solve_linear(&mut a, &mut b).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }
}
