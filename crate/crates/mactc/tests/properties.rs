//! Property tests over randomized inputs: structural invariants of the
//! constraint set, the region geometry and the Pareto machinery.

use proptest::prelude::*;

use mactc::channel::{eval_constraints, eval_zeta, ChannelGains, PhaseDurations, PowerAllocation};
use mactc::region::{pareto_filter, upper_concave_hull, RateRegion};

fn arb_channel() -> impl Strategy<Value = ChannelGains> {
    (
        0.0f64..6.0,
        0.0f64..6.0,
        0.05f64..3.0,
        0.05f64..3.0,
        0.1f64..5.0,
        0.1f64..5.0,
    )
        .prop_map(|(g12, g21, g10, g20, p1, p2)| {
            ChannelGains::new(g12, g21, g10, g20, p1, p2).unwrap()
        })
}

/// Feasible allocation built from unit-interval knobs: a share of each
/// budget goes to the exchange phase, the rest splits between private and
/// cooperative power.
fn alloc_from_knobs(
    ch: &ChannelGains,
    pd: &PhaseDurations,
    e1: f64,
    e2: f64,
    c1: f64,
    c2: f64,
) -> PowerAllocation {
    let rho11 = if pd.alpha1 > 0.0 { e1 * ch.p1 / pd.alpha1 } else { 0.0 };
    let rho22 = if pd.alpha2 > 0.0 { e2 * ch.p2 / pd.alpha2 } else { 0.0 };
    let q1 = (ch.p1 - pd.alpha1 * rho11) / pd.alpha3;
    let q2 = (ch.p2 - pd.alpha2 * rho22) / pd.alpha3;
    PowerAllocation {
        rho11,
        rho22,
        rho10: (1.0 - c1) * q1,
        rho20: (1.0 - c2) * q2,
        rho13: c1 * q1,
        rho23: c2 * q2,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// The per-user bounds J1, J2 dominate their phase-3 parts, and the
    /// individual bounds are jointly more generous than the joint private
    /// bound: J1 + J2 > S1 whenever some private power flows.
    #[test]
    fn per_user_bounds_dominate_and_sum_is_redundant(
        ch in arb_channel(),
        a1 in 0.0f64..0.45,
        a2 in 0.0f64..0.45,
        e1 in 0.05f64..0.95,
        e2 in 0.05f64..0.95,
        c1 in 0.0f64..0.9,
        c2 in 0.0f64..0.9,
    ) {
        let pd = PhaseDurations::new(a1, a2).unwrap();
        let pa = alloc_from_knobs(&ch, &pd, e1, e2, c1, c2);
        let rc = eval_constraints(&ch, &pd, &pa).unwrap();
        prop_assert!(rc.j1 >= rc.i3 - 1e-12);
        prop_assert!(rc.j2 >= rc.i4 - 1e-12);
        prop_assert!(rc.s1 >= rc.i5 - 1e-12);
        if pa.rho10 + pa.rho20 > 1e-9 {
            prop_assert!(
                rc.j1 + rc.j2 > rc.s1,
                "J1 + J2 = {} must exceed S1 = {}",
                rc.j1 + rc.j2,
                rc.s1
            );
        }
    }

    /// The beamformed SNR never decreases when any phase-3 power grows.
    #[test]
    fn zeta_monotone(
        ch in arb_channel(),
        base in (0.0f64..2.0, 0.0f64..2.0, 0.0f64..2.0, 0.0f64..2.0),
        bump in 0.0f64..1.0,
        which in 0usize..4,
    ) {
        let mut pa = PowerAllocation {
            rho10: base.0,
            rho20: base.1,
            rho13: base.2,
            rho23: base.3,
            ..Default::default()
        };
        let z0 = eval_zeta(&ch, &pa);
        match which {
            0 => pa.rho10 += bump,
            1 => pa.rho20 += bump,
            2 => pa.rho13 += bump,
            _ => pa.rho23 += bump,
        }
        prop_assert!(eval_zeta(&ch, &pa) >= z0 - 1e-12);
    }

    /// Region corners are counterclockwise from the origin, satisfy every
    /// bound, and activate at least two boundary lines each.
    #[test]
    fn region_corner_geometry(
        j1 in 0.0f64..4.0,
        j2 in 0.0f64..4.0,
        smin_frac in 0.1f64..1.5,
    ) {
        let smin = smin_frac * (j1 + j2).max(1e-6);
        let region = RateRegion::from_bounds(j1, j2, smin);
        prop_assert_eq!(region.corners[0], (0.0, 0.0));
        for w in region.corners.windows(2) {
            // Counterclockwise: each consecutive corner turns left around
            // the polygon (non-strictly, to allow degenerate segments).
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            prop_assert!(
                x1 < x0 + 1e-12 || y1 >= y0 - 1e-12,
                "corner order broken: ({x0},{y0}) -> ({x1},{y1})"
            );
        }
        for &(r1, r2) in &region.corners {
            prop_assert!(region.contains(r1, r2, 1e-9));
            let active = [
                r1.abs() < 1e-9,
                r2.abs() < 1e-9,
                (r1 - j1).abs() < 1e-9,
                (r2 - j2).abs() < 1e-9,
                (r1 + r2 - smin).abs() < 1e-9,
            ]
            .iter()
            .filter(|&&b| b)
            .count();
            prop_assert!(active >= 2);
        }
    }

    /// No Pareto-filtered point dominates another, every input point is
    /// covered by the hull, and the hull is sorted.
    #[test]
    fn pareto_and_hull_consistency(
        points in prop::collection::vec((0.0f64..5.0, 0.0f64..5.0), 1..60),
    ) {
        let front = pareto_filter(points.clone());
        for (i, a) in front.iter().enumerate() {
            for (j, b) in front.iter().enumerate() {
                if i != j {
                    prop_assert!(
                        !(b.0 >= a.0 && b.1 >= a.1),
                        "{a:?} dominated by {b:?}"
                    );
                }
            }
        }
        let hull = upper_concave_hull(&points);
        for w in hull.windows(2) {
            prop_assert!(w[0].0 < w[1].0 + 1e-15);
        }
        for &(x, y) in &points {
            prop_assert!(
                mactc::region::frontier_covers(&hull, x, y, 1e-9),
                "({x}, {y}) escapes its own hull"
            );
        }
    }
}
