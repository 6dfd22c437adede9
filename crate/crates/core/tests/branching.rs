use proptest::prelude::*;
use swcp_core::branching::{
    eta, explore_self_winning_subgraph, extinction_probability, favoured, min_sufficient_degree,
    min_sufficient_degree_closed_form, simulate_branching, threshold_check, BranchingSpec, THRESHOLD_SCAN,
};
use swcp_core::{generate, GenConfig};

/// Root of `f` on `[lo, hi]` given a sign change.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn critical_and_degenerate_cases() {
    assert!((eta(2, 0.5) - 1.0).abs() < 1e-9);
    assert_eq!(eta(5, 0.0), 1.0);
    assert_eq!(eta(1, 0.25), 1.0);
    assert_eq!(eta(3, 1.0), 0.0);
}

#[test]
fn matches_bisection_root() {
    // (1 + eta)^3 = 8 eta, smallest root in (0, 1)
    let root = bisect(|x| (1.0 + x).powi(3) - 8.0 * x, 0.0, 0.5);
    assert!((root - (5f64.sqrt() - 2.0)).abs() < 1e-12);
    let got = extinction_probability(&BranchingSpec::new(3, 0.5).unwrap());
    assert!(got.converged);
    assert!((got.eta - root).abs() < 1e-6, "{} vs {root}", got.eta);
}

#[test]
fn pinned_values() {
    assert!((eta(3, 0.5) - 0.236_068_0).abs() < 1e-6);
    assert!((eta(7, 0.25) - 0.218_215_8).abs() < 1e-6);
}

#[test]
fn monte_carlo_matches_fixed_point() {
    for (d, q, seed) in [(3, 0.5, 11u64), (7, 0.25, 12)] {
        let spec = BranchingSpec::new(d, q).unwrap();
        let est = simulate_branching(&spec, 200, 100_000, seed);
        let exact = eta(d, q);
        assert!(
            (est.extinct_fraction - exact).abs() <= 3.0 * est.stderr,
            "({d}, {q}): {} +- {} vs {exact}",
            est.extinct_fraction,
            est.stderr
        );
        assert!((est.extinct_fraction - exact).abs() < 0.01);
    }
}

#[test]
fn critical_process_dies_slowly() {
    let est = simulate_branching(&BranchingSpec::new(2, 0.5).unwrap(), 1000, 100_000, 3);
    assert!((0.95..=1.0).contains(&est.extinct_fraction), "{}", est.extinct_fraction);
}

#[test]
fn one_sure_child_never_dies() {
    let est = simulate_branching(&BranchingSpec::new(1, 1.0).unwrap(), 500, 1000, 0);
    assert_eq!(est.extinct_fraction, 0.0);
}

#[test]
fn threshold_scan() {
    assert!(!threshold_check(2).condition_holds);
    assert_eq!(threshold_check(2).lhs_fixed_point, 2.0);
    assert!(threshold_check(50).condition_holds);
    for d in THRESHOLD_SCAN {
        assert!(threshold_check(d).forms_agree(), "forms disagree at d = {d}");
    }
    let min = min_sufficient_degree();
    assert_eq!(min, Some(11));
    assert_eq!(min_sufficient_degree_closed_form(), min);
    assert!((2..11).all(|d| !threshold_check(d).condition_holds));
}

proptest! {
    #[test]
    fn fixed_point_properties(d in 1u64..40, q in 0.0f64..1.0) {
        let spec = BranchingSpec::new(d, q).unwrap();
        let r = extinction_probability(&spec);
        prop_assert!(r.converged);
        prop_assert!((0.0..=1.0).contains(&r.eta));
        if r.eta < 1.0 {
            prop_assert!((spec.pgf(r.eta) - r.eta).abs() < 1e-9);
        }
        prop_assert_eq!(r.eta == 1.0, d as f64 * q <= 1.0);
    }

    #[test]
    fn monotone_in_q_and_d(d in 2u64..30, q in 0.05f64..0.95) {
        prop_assert!(eta(d, q) >= eta(d, q + 0.04) - 1e-9);
        prop_assert!(eta(d, q) >= eta(d + 1, q) - 1e-9);
    }
}

#[test]
fn exploration_small_cases() {
    use swcp_core::{ParityGame, Player};
    // node 0 is favoured but its only successor is not
    let g = ParityGame::new(vec![Player::Odd, Player::Odd], vec![1, 2], vec![vec![1], vec![0]]).unwrap();
    let r = explore_self_winning_subgraph(&g, &[0], 10);
    assert_eq!((r.explored, r.first_cycle_step), (1, None));
    let g = ParityGame::new(vec![Player::Odd, Player::Odd], vec![1, 3], vec![vec![1], vec![0]]).unwrap();
    assert_eq!(explore_self_winning_subgraph(&g, &[0], 10).first_cycle_step, Some(2));
}

#[test]
fn exploration_finds_cycles_on_random_games() {
    let (n, d) = (10_000, 8);
    let epsilon = 0.5;
    let budget = (epsilon * n as f64 / d as f64) as usize;
    let runs = 200;
    let mut found = 0;
    for seed in 0..runs {
        let game = generate(&GenConfig::new(n, d, 1000 + seed)).unwrap();
        let start = game.nodes().find(|&v| favoured(&game, v)).unwrap();
        if explore_self_winning_subgraph(&game, &[start], budget).first_cycle_step.is_some() {
            found += 1;
        }
    }
    let fraction = found as f64 / runs as f64;
    let bound = 1.0 - (eta(7, 0.25) + 0.05);
    assert!(fraction >= bound, "{fraction} < {bound}");
}
