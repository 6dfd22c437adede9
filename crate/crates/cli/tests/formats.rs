use proptest::prelude::*;
use swcp_cli::pgsolver::{parse_game, write_game};
use swcp_cli::solution::{parse_solution, write_solution};
use swcp_cli::sweep::{run_sweep, to_csv, SweepKind, SweepSpec};
use swcp_core::{generate, swcp_solve, zielonka_solve, DegreeSpec, GenConfig, ParityGame, Player};

fn arb_game() -> impl Strategy<Value = ParityGame> {
    (1usize..12).prop_flat_map(|n| {
        let node = (any::<bool>(), 0u64..1000, proptest::collection::btree_set(0..n, 1..=n.min(4)));
        proptest::collection::vec(node, n).prop_map(|nodes| {
            let owner = nodes.iter().map(|(o, _, _)| if *o { Player::Odd } else { Player::Even }).collect();
            let priority = nodes.iter().map(|(_, p, _)| *p).collect();
            let succ = nodes.into_iter().map(|(_, _, s)| s.into_iter().collect()).collect();
            ParityGame::new(owner, priority, succ).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn pgsolver_round_trip(game in arb_game()) {
        let text = write_game(&game);
        prop_assert_eq!(parse_game(&text).unwrap(), game.clone());
        prop_assert!(text.ends_with(";\n") && !text.contains(" \n") && !text.contains('\r'));
        prop_assert_eq!(text.lines().count(), game.node_count() + 1);
    }

    #[test]
    fn reformatted_input_parses_the_same(game in arb_game()) {
        // same game with extra whitespace, names and reversed node order
        let text = write_game(&game);
        let mut lines: Vec<String> = text.lines().skip(1).map(|l| {
            let body = l.trim_end_matches(';').replace(',', " ,\t");
            format!("  {body}  \"n{}\"\n;", l.len())
        }).collect();
        lines.reverse();
        let messy = format!("parity\n{} ;\n{}", game.node_count() - 1, lines.join("\n"));
        prop_assert_eq!(parse_game(&messy).unwrap(), game);
    }

    #[test]
    fn solution_round_trip(game in arb_game()) {
        let partial = swcp_solve(&game);
        prop_assert_eq!(parse_solution(&write_solution(&partial)).unwrap(), partial);
        let full = zielonka_solve(&game).unwrap().to_partial();
        prop_assert_eq!(parse_solution(&write_solution(&full)).unwrap(), full);
    }
}

#[test]
fn generated_games_round_trip() {
    for seed in 0..100 {
        let cfg = GenConfig::new(10 + seed as usize * 3, 1 + seed as usize % 6, seed).with_priorities(2 + 2 * (seed % 4));
        let game = generate(&cfg).unwrap();
        assert_eq!(parse_game(&write_game(&game)).unwrap(), game);
    }
}

#[test]
fn sweep_csv_ignores_worker_count() {
    for kind in [SweepKind::SuccessProb, SweepKind::SelfWinningFrac, SweepKind::NonsparseLoss] {
        let d = if kind == SweepKind::NonsparseLoss { vec![DegreeSpec::Frac(0.5), DegreeSpec::LnN] } else { vec![DegreeSpec::Const(2), DegreeSpec::Const(4)] };
        let spec = SweepSpec::new(kind, vec![30, 60], d, 12, 99);
        let a = to_csv(&spec, &run_sweep(&spec, 1).unwrap());
        let b = to_csv(&spec, &run_sweep(&spec, 3).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 5);
    }
}

#[test]
fn nonsparse_upper_bound_beyond_budget() {
    let mut spec = SweepSpec::new(SweepKind::NonsparseLoss, vec![40], vec![DegreeSpec::Frac(0.5)], 4, 1);
    spec.oracle_edge_budget = 10;
    let csv = to_csv(&spec, &run_sweep(&spec, 1).unwrap());
    assert!(csv.lines().nth(1).unwrap().contains(",upper_bound,"));
    spec.oracle_edge_budget = usize::MAX;
    let exact = run_sweep(&spec, 1).unwrap();
    spec.oracle_edge_budget = 10;
    let bound = run_sweep(&spec, 1).unwrap();
    assert!(exact[0].metric <= bound[0].metric + 1e-12);
}

#[test]
fn complete_digraph_loss_matches_oracle() {
    let spec = SweepSpec::new(SweepKind::NonsparseLoss, vec![20], vec![DegreeSpec::Const(19)], 10, 3);
    let cell = &run_sweep(&spec, 1).unwrap()[0];
    let mut total = 0.0;
    for t in 0..10 {
        let game = generate(&GenConfig::new(20, 19, spec.trial_seed(20, 19, t))).unwrap();
        let truth = zielonka_solve(&game).unwrap();
        total += game.nodes().filter(|&v| truth.winner(v) != game.owner(v)).count() as f64 / 20.0;
    }
    assert!((cell.metric - total / 10.0).abs() < 1e-12);
}
