#![allow(dead_code)]

use proptest::prelude::*;
use swcp_core::{NodeId, ParityGame, Player};

/// Arbitrary small game: any out-degree in `1..=max_degree`, self-loops
/// allowed, priorities in `0..priorities`.
pub fn arb_game(max_nodes: usize, max_degree: usize, priorities: u64) -> impl Strategy<Value = ParityGame> {
    (1..=max_nodes).prop_flat_map(move |n| {
        let node = (
            any::<bool>(),
            0..priorities,
            proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=max_degree.min(n)),
        );
        proptest::collection::vec(node, n).prop_map(|nodes| {
            let owner = nodes.iter().map(|(o, _, _)| if *o { Player::Odd } else { Player::Even }).collect();
            let priority = nodes.iter().map(|(_, p, _)| *p).collect();
            let succ = nodes.into_iter().map(|(_, _, s)| s).collect();
            ParityGame::new(owner, priority, succ).unwrap()
        })
    })
}

/// Winner of the play fixed by `next` from every node.
pub fn play_winners(game: &ParityGame, next: &[NodeId]) -> Vec<Player> {
    game.nodes()
        .map(|start| {
            let mut order = vec![usize::MAX; game.node_count()];
            let mut path = Vec::new();
            let mut v = start;
            while order[v] == usize::MAX {
                order[v] = path.len();
                path.push(v);
                v = next[v];
            }
            let top = path[order[v]..].iter().map(|&u| game.priority(u)).max().unwrap();
            swcp_core::par(top)
        })
        .collect()
}

/// Calls `f` with every memoryless strategy of `player`, written into the
/// `player`-owned entries of `next`.
pub fn for_each_strategy(game: &ParityGame, player: Player, next: &mut Vec<NodeId>, f: &mut dyn FnMut(&[NodeId])) {
    let nodes: Vec<NodeId> = game.nodes().filter(|&v| game.owner(v) == player).collect();
    fn rec(game: &ParityGame, nodes: &[NodeId], next: &mut Vec<NodeId>, f: &mut dyn FnMut(&[NodeId])) {
        match nodes.split_first() {
            None => f(next),
            Some((&v, rest)) => {
                for &w in game.successors(v) {
                    next[v] = w;
                    rec(game, rest, next, f);
                }
            }
        }
    }
    rec(game, &nodes, next, f);
}

/// Checks that playing `strategy` for the winner at every node of its region
/// wins against every memoryless counter-strategy.
pub fn strategies_win(game: &ParityGame, winners: &[Player], strategy: &[Option<NodeId>]) -> bool {
    Player::BOTH.iter().all(|&me| {
        let mut next: Vec<NodeId> = game.nodes().map(|v| strategy[v].unwrap_or(game.successors(v)[0])).collect();
        let mut ok = true;
        for_each_strategy(game, me.opponent(), &mut next, &mut |next| {
            let play = play_winners(game, next);
            ok &= game.nodes().all(|v| winners[v] != me || play[v] == me);
        });
        ok
    })
}

/// The nine-node example with two easy cycles, nodes renumbered from zero:
/// Odd cycle 3 -> 2 -> 8 -> 3 and Even cycle 4 -> 5 -> 6 -> 4.
pub fn nine_node_game() -> ParityGame {
    use Player::{Even, Odd};
    // comments use the original labels 1..=9
    let owner = vec![Odd, Odd, Odd, Odd, Even, Even, Even, Even, Odd];
    let priority = vec![0, 1, 1, 3, 2, 0, 1, 1, 2];
    let succ = vec![
        vec![1, 4],    // 1 -> 2, 1 -> 5
        vec![3, 7],    // 2 -> 4, 2 -> 8
        vec![8],       // 3 -> 9
        vec![2],       // 4 -> 3
        vec![5],       // 5 -> 6
        vec![6],       // 6 -> 7
        vec![2, 4],    // 7 -> 3, 7 -> 5
        vec![0, 4],    // 8 -> 1, 8 -> 5
        vec![3],       // 9 -> 4
    ];
    ParityGame::new(owner, priority, succ).unwrap()
}
