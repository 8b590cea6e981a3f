//! Frozen regression values for the planner: the x-axis rate profile and
//! the full-resolution scheme-map histograms.

use mactc::planner::{
    individual_scheme_map, rate_profile_on_line, sum_scheme_map, PhaseConfig, ProfileObjective,
    Topology,
};

fn bench_layout() -> Topology {
    Topology::new((-0.5, 0.0), (0.5, 0.0), (0.0, 1.0), 2.4).unwrap()
}

#[test]
fn x_axis_profile_regression() {
    let profile = rate_profile_on_line(
        &bench_layout(),
        ((-2.0, 0.0), (2.0, 0.0)),
        41,
        ProfileObjective::Individual { alpha1: Some(0.5) },
        2.0,
        2.0,
    )
    .unwrap();
    // Two of the 41 samples land on the user positions and are skipped.
    assert_eq!(profile.len(), 39);

    let at = |x: f64| {
        profile
            .iter()
            .find(|p| (p.position.0 - x).abs() < 1e-9)
            .unwrap_or_else(|| panic!("no sample at x = {x}"))
    };
    let frozen = [
        (-2.0, 1.155172373045, 0.812134362759, 1.226506405729),
        (-1.0, 3.530578104769, 3.530578104769, 3.643804918489),
        (0.1, 2.966249159920, 2.966249159920, 3.130776548176),
        (1.2, 1.181219914260, 0.641265315568, 1.321934071636),
        (2.0, 1.071295629418, 0.289015643333, 1.089093451608),
    ];
    for (x, rate, base, outer) in frozen {
        let p = at(x);
        assert!((p.rate - rate).abs() < 1e-9, "rate at {x}: {} vs {rate}", p.rate);
        assert!((p.baseline_rate - base).abs() < 1e-9);
        assert!((p.outer_bound_rate - outer).abs() < 1e-9);
    }

    // Every sample honors the bound ordering.
    for p in &profile {
        assert!(p.baseline_rate <= p.rate + 1e-9);
        assert!(p.rate <= p.outer_bound_rate + 1e-9);
    }

    // Moving away from user 1 raises d10/d12 and closes the gap to the
    // outer bound (diagnostic claim checked at the profile ends).
    let right: Vec<_> = profile.iter().filter(|p| p.position.0 > 0.6).collect();
    let first_gap = right.first().map(|p| p.outer_bound_rate - p.rate).unwrap();
    let last_gap = right.last().map(|p| p.outer_bound_rate - p.rate).unwrap();
    assert!(
        last_gap < first_gap,
        "gap must shrink outward: {first_gap} -> {last_gap}"
    );
}

#[test]
fn rate_grows_unbounded_toward_a_user() {
    // As the destination approaches user 2, its direct gain explodes and
    // so does the sum rate.
    let topo = bench_layout();
    let profile = rate_profile_on_line(
        &topo,
        ((0.502, 0.0), (0.6, 0.0)),
        5,
        ProfileObjective::Sum { alphas: Some((0.2, 0.2)) },
        2.0,
        2.0,
    )
    .unwrap();
    assert!(profile[0].rate > 10.0, "rate near a user must exceed 10 bits/s/Hz, got {}", profile[0].rate);
    assert!(profile[0].rate > profile.last().unwrap().rate);
}

#[test]
fn full_resolution_histograms_regression() {
    let topo = bench_layout();
    let ind = individual_scheme_map(
        &topo,
        PhaseConfig::Fixed { alpha1: 0.5, alpha2: 0.0 },
        (-2.0, 2.0, -2.0, 2.0),
        101,
        2.0,
        2.0,
    )
    .unwrap();
    let h = ind.histogram();
    assert_eq!(h.get("Direct"), Some(&1954));
    assert_eq!(h.get("PdfRepetition"), Some(&1655));
    assert_eq!(h.get("DecodeForward"), Some(&3418));
    assert_eq!(h.get("PdfNoRepetition"), Some(&2768));
    assert_eq!(h.get("TwoHop"), Some(&406));
    assert_eq!(h.values().sum::<usize>(), 101 * 101);

    let sum = sum_scheme_map(
        &topo,
        PhaseConfig::Fixed { alpha1: 0.2, alpha2: 0.2 },
        (-2.0, 2.0, -2.0, 2.0),
        101,
        2.0,
        2.0,
    )
    .unwrap();
    let h = sum.histogram();
    assert_eq!(h.get("ClassicalMac"), Some(&763));
    assert_eq!(h.get("BothPdf"), Some(&5598));
    assert_eq!(h.get("BothDf"), Some(&1458));
    assert_eq!(h.get("User1PdfUser2Direct"), Some(&170));
    assert_eq!(h.get("User1DfUser2Direct"), Some(&1021));
    assert_eq!(h.get("Mirror"), Some(&1191));
}
