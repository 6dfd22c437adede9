//! Self-winning cycle propagation.
//!
//! Phase one marks every node lying on a cycle that stays inside its owner's
//! nodes and whose largest priority has the owner's parity. Such a node is
//! won by its owner, who just keeps the token on the cycle. Phase two spreads
//! decided values backwards: a node is won by its owner as soon as one
//! successor is, and lost as soon as all successors are lost.
//!
//! Phase one costs `O(|V| (|V| + |E|))`, phase two `O(|V| + |E|)`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::game::{par, Adjacency, NodeId, NodeSet, ParityGame, Player};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Nodes reachable from `start` along paths inside `filter`, following
/// edges forwards or backwards. `start` itself is always included.
pub fn dfs_reachable<F>(game: &ParityGame, filter: F, start: NodeId, direction: Direction) -> NodeSet
where
    F: Fn(NodeId) -> bool,
{
    let transposed;
    let adj = match direction {
        Direction::Forward => game.adjacency(),
        Direction::Backward => {
            transposed = game.transpose();
            &transposed
        }
    };
    let mut search = Search::new(game.node_count());
    search.run(adj, &filter, start);
    NodeSet::from_nodes(game.node_count(), search.found.iter().copied())
}

/// Reusable DFS state. Visited marks are epoch stamps, so a new search does
/// not pay for clearing the previous one.
struct Search {
    stamp: Vec<u32>,
    epoch: u32,
    stack: Vec<NodeId>,
    found: Vec<NodeId>,
}

impl Search {
    fn new(n: usize) -> Self {
        Search { stamp: vec![0; n], epoch: 0, stack: Vec::new(), found: Vec::new() }
    }

    fn run<F: Fn(NodeId) -> bool>(&mut self, adj: &Adjacency, filter: &F, start: NodeId) {
        self.epoch += 1;
        self.found.clear();
        self.stack.clear();
        self.stamp[start] = self.epoch;
        self.stack.push(start);
        while let Some(v) = self.stack.pop() {
            self.found.push(v);
            for &w in adj.neighbors(v) {
                if self.stamp[w] != self.epoch && filter(w) {
                    self.stamp[w] = self.epoch;
                    self.stack.push(w);
                }
            }
        }
    }

    #[inline]
    fn seen(&self, v: NodeId) -> bool {
        self.stamp[v] == self.epoch
    }
}

/// Result of phase one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfWinningReport {
    winner: Vec<Option<Player>>,
    cycle_successor: Vec<Option<NodeId>>,
}

impl SelfWinningReport {
    pub fn is_self_winning(&self, v: NodeId) -> bool {
        self.winner[v].is_some()
    }

    /// The owner of `v` when `v` is self-winning.
    pub fn winner_if_self_winning(&self, v: NodeId) -> Option<Player> {
        self.winner[v]
    }

    /// A successor of `v` on one of its self-winning cycles.
    pub fn cycle_successor(&self, v: NodeId) -> Option<NodeId> {
        self.cycle_successor[v]
    }

    pub fn self_winning(&self) -> NodeSet {
        NodeSet::from_mask(self.winner.iter().map(Option::is_some).collect())
    }

    pub fn count(&self) -> usize {
        self.winner.iter().filter(|w| w.is_some()).count()
    }

    pub fn fraction(&self) -> f64 {
        self.count() as f64 / self.winner.len() as f64
    }

    /// Seeds for propagation: self-winning nodes decided for their owner,
    /// with their cycle successor as witness.
    pub fn seeds(&self) -> PartialSolution {
        PartialSolution { value: self.winner.clone(), witness: self.cycle_successor.clone() }
    }
}

/// Phase one: all self-winning nodes.
///
/// Every self-winning cycle has a top node `a` whose priority is the cycle
/// maximum and favours its owner. Taking each such candidate `a` in turn,
/// the cycle lives among the nodes of the same owner with priority at most
/// `p(a)`; within that set, the nodes both reachable from `a` and reaching
/// `a` are exactly those on a cycle through `a`. A lone `a` only counts when
/// it has a self-loop.
///
/// Both searches run from every candidate, in id order, so the cost grows
/// with the edges reachable from each candidate.
pub fn find_self_winning(game: &ParityGame) -> SelfWinningReport {
    let anchors: Vec<NodeId> = game.nodes().filter(|&v| par(game.priority(v)) == game.owner(v)).collect();
    scan_anchors(game, &anchors, false)
}

/// Same marking as [`find_self_winning`], usually much faster on dense
/// games. Candidates are visited by decreasing priority and a candidate
/// already marked is skipped: its cycle set is contained in that of the
/// candidate that marked it.
pub fn find_self_winning_pruned(game: &ParityGame) -> SelfWinningReport {
    let mut anchors: Vec<NodeId> = game.nodes().filter(|&v| par(game.priority(v)) == game.owner(v)).collect();
    anchors.sort_by_key(|&v| core::cmp::Reverse(game.priority(v)));
    scan_anchors(game, &anchors, true)
}

fn scan_anchors(game: &ParityGame, anchors: &[NodeId], skip_marked: bool) -> SelfWinningReport {
    let n = game.node_count();
    let preds = game.transpose();
    let mut forward = Search::new(n);
    let mut backward = Search::new(n);
    let mut winner = vec![None; n];
    let mut cycle_successor = vec![None; n];

    for &anchor in anchors {
        if skip_marked && winner[anchor].is_some() {
            continue;
        }
        let who = game.owner(anchor);
        let cap = game.priority(anchor);
        let inside = |v: NodeId| game.owner(v) == who && game.priority(v) <= cap;
        forward.run(game.adjacency(), &inside, anchor);
        // nothing reachable inside: no cycle through the anchor
        if forward.found.len() == 1 && !game.has_edge(anchor, anchor) {
            continue;
        }
        // a path back to the anchor only uses nodes reachable from it
        backward.run(&preds, &|v| forward.seen(v), anchor);
        if backward.found.len() < 2 && !game.has_edge(anchor, anchor) {
            continue;
        }
        for &v in &backward.found {
            if winner[v].is_some() {
                continue;
            }
            winner[v] = Some(who);
            cycle_successor[v] = game.successors(v).iter().copied().find(|&w| backward.seen(w));
            debug_assert!(cycle_successor[v].is_some());
        }
    }
    SelfWinningReport { winner, cycle_successor }
}

/// Per-node game values, some possibly undecided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSolution {
    value: Vec<Option<Player>>,
    witness: Vec<Option<NodeId>>,
}

impl PartialSolution {
    pub fn undecided(node_count: usize) -> Self {
        PartialSolution { value: vec![None; node_count], witness: vec![None; node_count] }
    }

    pub fn from_parts(value: Vec<Option<Player>>, witness: Vec<Option<NodeId>>) -> Self {
        assert_eq!(value.len(), witness.len());
        PartialSolution { value, witness }
    }

    pub fn node_count(&self) -> usize {
        self.value.len()
    }

    pub fn value(&self, v: NodeId) -> Option<Player> {
        self.value[v]
    }

    pub fn values(&self) -> &[Option<Player>] {
        &self.value
    }

    /// For a node won by its owner, a successor that keeps the win.
    pub fn witness(&self, v: NodeId) -> Option<NodeId> {
        self.witness[v]
    }

    pub fn decide(&mut self, v: NodeId, winner: Player, witness: Option<NodeId>) {
        self.value[v] = Some(winner);
        self.witness[v] = witness;
    }

    pub fn decided_count(&self) -> usize {
        self.value.iter().filter(|v| v.is_some()).count()
    }

    pub fn decided_fraction(&self) -> f64 {
        self.decided_count() as f64 / self.value.len() as f64
    }

    pub fn is_fully_solved(&self) -> bool {
        self.value.iter().all(Option::is_some)
    }

    /// Nodes decided for `player`.
    pub fn region(&self, player: Player) -> NodeSet {
        NodeSet::from_mask(self.value.iter().map(|&v| v == Some(player)).collect())
    }

    /// Every witness is an edge of `game` and belongs to a node decided for
    /// its owner.
    pub fn witnesses_are_edges(&self, game: &ParityGame) -> bool {
        game.nodes().all(|v| match self.witness[v] {
            None => true,
            Some(w) => self.value[v] == Some(game.owner(v)) && game.has_edge(v, w),
        })
    }
}

/// Phase two: backwards induction from `seeds` to a fixpoint.
///
/// Decided nodes are never changed. The result is the attractor closure of
/// the seeds: an undecided node joins its owner's side when some successor
/// is decided for the owner (that successor becomes the witness), and the
/// opponent's side when every successor is decided for the opponent.
pub fn propagate(game: &ParityGame, seeds: &PartialSolution) -> PartialSolution {
    let preds = game.transpose();
    let mut sol = seeds.clone();
    // successors not yet known to be lost for the node's owner
    let mut open: Vec<usize> = game.nodes().map(|v| game.out_degree(v)).collect();
    let mut queue: VecDeque<NodeId> = game.nodes().filter(|&v| sol.value[v].is_some()).collect();

    while let Some(x) = queue.pop_front() {
        let won_by = sol.value[x].expect("queued nodes are decided");
        for &u in preds.neighbors(x) {
            if sol.value[u].is_some() {
                continue;
            }
            if game.owner(u) == won_by {
                sol.decide(u, won_by, Some(x));
                queue.push_back(u);
            } else {
                open[u] -= 1;
                if open[u] == 0 {
                    sol.decide(u, won_by, None);
                    queue.push_back(u);
                }
            }
        }
    }
    sol
}

/// Round-robin reference for [`propagate`]: at most `|V|` sweeps over all
/// nodes in id order, updating in place, stopping at the first sweep that
/// changes nothing. Returns the solution and the number of sweeps run.
pub fn propagate_round_robin(game: &ParityGame, seeds: &PartialSolution) -> (PartialSolution, usize) {
    let mut sol = seeds.clone();
    let mut sweeps = 0;
    for _ in 0..game.node_count() {
        sweeps += 1;
        let mut changed = false;
        for v in game.nodes() {
            if sol.value[v].is_some() {
                continue;
            }
            let me = game.owner(v);
            let succ = game.successors(v);
            if let Some(&w) = succ.iter().find(|&&w| sol.value[w] == Some(me)) {
                sol.decide(v, me, Some(w));
                changed = true;
            } else if succ.iter().all(|&w| sol.value[w] == Some(me.opponent())) {
                sol.decide(v, me.opponent(), None);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (sol, sweeps)
}

/// Phase one followed by phase two. Every decided value is the true winner;
/// nodes the two phases cannot reach stay undecided.
pub fn swcp_solve(game: &ParityGame) -> PartialSolution {
    propagate(game, &find_self_winning(game).seeds())
}
