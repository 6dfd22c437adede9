//! Exact solvers used as ground truth.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::game::{par, Adjacency, NodeId, NodeSet, ParityGame, Player, Priority, Violation};
use crate::swcp::{find_self_winning_pruned, PartialSolution};

/// Maximum number of joint memoryless strategy pairs the brute-force solver
/// will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    InvalidGame(#[from] Violation),
    #[error("strategy space of {pairs} pairs exceeds the brute-force limit of {limit}")]
    TooManyStrategies { pairs: u128, limit: u128 },
    #[error("node {node} has out-degree {degree}, expected 1")]
    NotDegreeOne { node: NodeId, degree: usize },
}

/// A complete solution: the winner of every node, and for each node won by
/// its owner a successor to play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    winner: Vec<Player>,
    strategy: Vec<Option<NodeId>>,
}

impl Solution {
    pub fn from_parts(winner: Vec<Player>, strategy: Vec<Option<NodeId>>) -> Self {
        assert_eq!(winner.len(), strategy.len());
        Solution { winner, strategy }
    }

    pub fn winner(&self, v: NodeId) -> Player {
        self.winner[v]
    }

    pub fn winners(&self) -> &[Player] {
        &self.winner
    }

    pub fn strategy(&self, v: NodeId) -> Option<NodeId> {
        self.strategy[v]
    }

    pub fn region(&self, player: Player) -> NodeSet {
        NodeSet::from_mask(self.winner.iter().map(|&w| w == player).collect())
    }

    pub fn to_partial(&self) -> PartialSolution {
        PartialSolution::from_parts(self.winner.iter().map(|&w| Some(w)).collect(), self.strategy.clone())
    }

    /// Strategy moves are edges, are present exactly at nodes won by their
    /// owner, and stay inside the owner's winning region.
    pub fn is_consistent(&self, game: &ParityGame) -> bool {
        game.nodes().all(|v| {
            let own = self.winner[v] == game.owner(v);
            match self.strategy[v] {
                None => !own,
                Some(w) => own && game.has_edge(v, w) && self.winner[w] == self.winner[v],
            }
        })
    }
}

/// Computes attractors inside a sub-game given as a node mask.
struct Attractor<'a> {
    game: &'a ParityGame,
    preds: &'a Adjacency,
    // successors inside the domain not yet attracted; usize::MAX = unset
    remaining: Vec<usize>,
    queue: VecDeque<NodeId>,
}

impl<'a> Attractor<'a> {
    fn new(game: &'a ParityGame, preds: &'a Adjacency) -> Self {
        Attractor { game, preds, remaining: vec![usize::MAX; game.node_count()], queue: VecDeque::new() }
    }

    /// Least superset of `target` inside `domain` into which `player` can
    /// force the token. Attracted nodes of `player` get their forcing move
    /// written to `strategy`.
    fn attract(
        &mut self,
        domain: &NodeSet,
        player: Player,
        target: &NodeSet,
        strategy: &mut [Option<NodeId>],
    ) -> NodeSet {
        let mut attr = target.clone();
        let mut touched = Vec::new();
        self.queue.clear();
        self.queue.extend(target.iter());
        while let Some(x) = self.queue.pop_front() {
            for &u in self.preds.neighbors(x) {
                if !domain.contains(u) || attr.contains(u) {
                    continue;
                }
                if self.game.owner(u) == player {
                    attr.insert(u);
                    strategy[u] = Some(x);
                    self.queue.push_back(u);
                } else {
                    if self.remaining[u] == usize::MAX {
                        self.remaining[u] = self.game.successors(u).iter().filter(|&&w| domain.contains(w)).count();
                        touched.push(u);
                    }
                    self.remaining[u] -= 1;
                    if self.remaining[u] == 0 {
                        attr.insert(u);
                        self.queue.push_back(u);
                    }
                }
            }
        }
        for u in touched {
            self.remaining[u] = usize::MAX;
        }
        attr
    }
}

/// `player`'s attractor of `target` in the whole game.
pub fn attractor(game: &ParityGame, player: Player, target: &NodeSet) -> NodeSet {
    let preds = game.transpose();
    let mut scratch = vec![None; game.node_count()];
    Attractor::new(game, &preds).attract(&NodeSet::full(game.node_count()), player, target, &mut scratch)
}

/// Zielonka's recursive algorithm.
///
/// Sub-games are node masks over the original game. The recursion depth is
/// bounded by the number of distinct priorities; the second recursive call
/// of the textbook formulation is unrolled into a loop.
pub fn zielonka_solve(game: &ParityGame) -> Result<Solution, OracleError> {
    game.validate()?;
    let n = game.node_count();
    let preds = game.transpose();
    let mut solver = Zielonka { game, attractor: Attractor::new(game, &preds), strategy: vec![None; n] };
    let [even, _] = solver.solve(NodeSet::full(n));
    let winner: Vec<Player> = game.nodes().map(|v| if even.contains(v) { Player::Even } else { Player::Odd }).collect();
    let mut strategy = solver.strategy;
    for v in game.nodes() {
        if winner[v] != game.owner(v) {
            strategy[v] = None;
        }
    }
    Ok(Solution { winner, strategy })
}

struct Zielonka<'a> {
    game: &'a ParityGame,
    attractor: Attractor<'a>,
    strategy: Vec<Option<NodeId>>,
}

impl Zielonka<'_> {
    /// Returns the winning regions `[even, odd]` of the sub-game `domain`.
    fn solve(&mut self, mut domain: NodeSet) -> [NodeSet; 2] {
        let n = self.game.node_count();
        let mut won = [NodeSet::empty(n), NodeSet::empty(n)];
        while !domain.is_empty() {
            let top = domain.iter().map(|v| self.game.priority(v)).max().expect("domain is non-empty");
            let me = par(top);
            let them = me.opponent();
            let heads = NodeSet::from_nodes(n, domain.iter().filter(|&v| self.game.priority(v) == top));
            let attr = self.attractor.attract(&domain, me, &heads, &mut self.strategy);
            let sub = self.solve(domain.difference(&attr));
            if sub[them.index()].is_empty() {
                // `me` wins all of domain; heads may move anywhere inside it
                for v in heads.iter() {
                    if self.game.owner(v) == me {
                        self.strategy[v] = self.game.successors(v).iter().copied().find(|&w| domain.contains(w));
                    }
                }
                won[me.index()].union_with(&domain);
                return won;
            }
            let lost = self.attractor.attract(&domain, them, &sub[them.index()], &mut self.strategy);
            won[them.index()].union_with(&lost);
            domain = domain.difference(&lost);
        }
        won
    }
}

/// Mixed-radix enumeration of one player's memoryless strategies.
struct StrategyCounter {
    nodes: Vec<NodeId>,
    choice: Vec<usize>,
}

impl StrategyCounter {
    fn new(game: &ParityGame, player: Player) -> Self {
        let nodes: Vec<NodeId> = game.nodes().filter(|&v| game.owner(v) == player).collect();
        let choice = vec![0; nodes.len()];
        StrategyCounter { nodes, choice }
    }

    fn size(game: &ParityGame, player: Player) -> u128 {
        game.nodes()
            .filter(|&v| game.owner(v) == player)
            .fold(1u128, |acc, v| acc.saturating_mul(game.out_degree(v) as u128))
    }

    fn reset(&mut self) {
        self.choice.iter_mut().for_each(|c| *c = 0);
    }

    fn apply(&self, game: &ParityGame, next: &mut [NodeId]) {
        for (&v, &c) in self.nodes.iter().zip(&self.choice) {
            next[v] = game.successors(v)[c];
        }
    }

    /// Advances to the next strategy; `false` once all have been visited.
    fn advance(&mut self, game: &ParityGame) -> bool {
        for (c, &v) in self.choice.iter_mut().zip(&self.nodes) {
            *c += 1;
            if *c < game.out_degree(v) {
                return true;
            }
            *c = 0;
        }
        false
    }
}

/// Winner of the unique play from each node of a functional graph: the
/// parity of the largest priority on the cycle the play ends in.
pub(crate) fn functional_winners(next: &[NodeId], priority: &[Priority]) -> Vec<Player> {
    const NEW: u8 = 0;
    const ON_PATH: u8 = 1;
    const DONE: u8 = 2;
    let n = next.len();
    let mut state = vec![NEW; n];
    let mut result = vec![Player::Even; n];
    let mut path = Vec::new();
    for start in 0..n {
        if state[start] == DONE {
            continue;
        }
        path.clear();
        let mut v = start;
        while state[v] == NEW {
            state[v] = ON_PATH;
            path.push(v);
            v = next[v];
        }
        let outcome = if state[v] == ON_PATH {
            let from = path.iter().position(|&u| u == v).expect("v is on the path");
            par(path[from..].iter().map(|&u| priority[u]).max().expect("cycle is non-empty"))
        } else {
            result[v]
        };
        for &u in &path {
            state[u] = DONE;
            result[u] = outcome;
        }
    }
    result
}

/// Exhaustive solver over memoryless strategy pairs.
///
/// `Odd` wins at `v` iff some `Odd` strategy beats every `Even` strategy
/// from `v`. The reported strategies are uniform: one `Odd` strategy that
/// wins from all of `Odd`'s region, likewise for `Even`.
pub fn brute_force_solve(game: &ParityGame) -> Result<Solution, OracleError> {
    game.validate()?;
    let pairs = StrategyCounter::size(game, Player::Odd).saturating_mul(StrategyCounter::size(game, Player::Even));
    if pairs > BRUTE_FORCE_LIMIT {
        return Err(OracleError::TooManyStrategies { pairs, limit: BRUTE_FORCE_LIMIT });
    }
    let n = game.node_count();
    let mut next: Vec<NodeId> = vec![0; n];
    let mut odd = StrategyCounter::new(game, Player::Odd);
    let mut even = StrategyCounter::new(game, Player::Even);

    let mut odd_region = vec![false; n];
    loop {
        let sure = guaranteed(game, &odd, &mut even, Player::Odd, &mut next);
        for v in 0..n {
            odd_region[v] |= sure[v];
        }
        if !odd.advance(game) {
            break;
        }
    }

    let winner: Vec<Player> = odd_region.iter().map(|&o| if o { Player::Odd } else { Player::Even }).collect();
    let mut strategy = vec![None; n];
    uniform_strategy(game, &winner, Player::Odd, &mut odd, &mut even, &mut next, &mut strategy);
    uniform_strategy(game, &winner, Player::Even, &mut even, &mut odd, &mut next, &mut strategy);
    Ok(Solution { winner, strategy })
}

/// Nodes from which `outer`'s current strategy wins for `who` against every
/// strategy of `inner`.
fn guaranteed(
    game: &ParityGame,
    outer: &StrategyCounter,
    inner: &mut StrategyCounter,
    who: Player,
    next: &mut [NodeId],
) -> Vec<bool> {
    let mut sure = vec![true; game.node_count()];
    inner.reset();
    outer.apply(game, next);
    loop {
        inner.apply(game, next);
        let play = functional_winners(next, game.priorities());
        for (s, p) in sure.iter_mut().zip(play) {
            *s &= p == who;
        }
        if !inner.advance(game) {
            return sure;
        }
    }
}

/// Finds one strategy of `who` winning from all of `who`'s region and
/// records its moves there.
fn uniform_strategy(
    game: &ParityGame,
    winner: &[Player],
    who: Player,
    outer: &mut StrategyCounter,
    inner: &mut StrategyCounter,
    next: &mut [NodeId],
    strategy: &mut [Option<NodeId>],
) {
    outer.reset();
    loop {
        let sure = guaranteed(game, outer, inner, who, next);
        if game.nodes().all(|v| winner[v] != who || sure[v]) {
            outer.apply(game, next);
            for &v in &outer.nodes {
                if winner[v] == who {
                    strategy[v] = Some(next[v]);
                }
            }
            return;
        }
        // memoryless determinacy guarantees a uniform winning strategy
        assert!(outer.advance(game), "no uniform winning strategy for {who}");
    }
}

fn check_degree_one(game: &ParityGame) -> Result<(), OracleError> {
    game.validate()?;
    match game.nodes().find(|&v| game.out_degree(v) != 1) {
        Some(node) => Err(OracleError::NotDegreeOne { node, degree: game.out_degree(node) }),
        None => Ok(()),
    }
}

/// Solver for games where every node has exactly one successor: from each
/// node, walk until a node repeats and read off the cycle maximum.
/// Quadratic in the node count.
pub fn solve_d1(game: &ParityGame) -> Result<Solution, OracleError> {
    check_degree_one(game)?;
    let n = game.node_count();
    let mut seen_at = vec![usize::MAX; n];
    let mut epoch_of = vec![usize::MAX; n];
    let mut path = Vec::with_capacity(n);
    let winner: Vec<Player> = game
        .nodes()
        .map(|start| {
            path.clear();
            let mut v = start;
            while epoch_of[v] != start {
                epoch_of[v] = start;
                seen_at[v] = path.len();
                path.push(v);
                v = game.successors(v)[0];
            }
            par(path[seen_at[v]..].iter().map(|&u| game.priority(u)).max().expect("cycle is non-empty"))
        })
        .collect();
    Ok(d1_solution(game, winner))
}

/// Linear-time variant of [`solve_d1`] sharing cycle results between starts.
pub fn solve_d1_linear(game: &ParityGame) -> Result<Solution, OracleError> {
    check_degree_one(game)?;
    let next: Vec<NodeId> = game.nodes().map(|v| game.successors(v)[0]).collect();
    Ok(d1_solution(game, functional_winners(&next, game.priorities())))
}

fn d1_solution(game: &ParityGame, winner: Vec<Player>) -> Solution {
    let strategy = game.nodes().map(|v| (winner[v] == game.owner(v)).then(|| game.successors(v)[0])).collect();
    Solution { winner, strategy }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReachLabel {
    /// The owner can walk, through its own nodes only, to a self-winning node.
    OwnerCertified,
    Unknown,
}

/// Labels nodes from which the owner reaches a self-winning node without
/// ever handing the move to the opponent. Certified nodes are won by their
/// owner.
pub fn self_reach_labels(game: &ParityGame) -> Vec<ReachLabel> {
    let report = find_self_winning_pruned(game);
    let preds = game.transpose();
    let mut certified = report.self_winning();
    let mut queue: VecDeque<NodeId> = certified.iter().collect();
    while let Some(x) = queue.pop_front() {
        for &u in preds.neighbors(x) {
            if game.owner(u) == game.owner(x) && certified.insert(u) {
                queue.push_back(u);
            }
        }
    }
    game.nodes()
        .map(|v| if certified.contains(v) { ReachLabel::OwnerCertified } else { ReachLabel::Unknown })
        .collect()
}
