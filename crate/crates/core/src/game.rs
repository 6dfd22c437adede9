//! Game graph representation.
//!
//! Node ids are dense integers `0..n`. Edges are stored once, in compressed
//! adjacency form; successor lists are ascending and duplicate free.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use thiserror::Error;

pub type NodeId = usize;
pub type Priority = u64;

/// One of the two players. `Even` is embedded as `-1`, `Odd` as `+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::Even, Player::Odd];

    /// Integer embedding: `Even -> -1`, `Odd -> +1`.
    pub const fn embed(self) -> i8 {
        match self {
            Player::Even => -1,
            Player::Odd => 1,
        }
    }

    pub const fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    /// `0` for `Even`, `1` for `Odd`, as used by the PGSolver format.
    pub const fn index(self) -> usize {
        match self {
            Player::Even => 0,
            Player::Odd => 1,
        }
    }

    pub const fn from_index(index: usize) -> Option<Player> {
        match index {
            0 => Some(Player::Even),
            1 => Some(Player::Odd),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Even => f.write_str("even"),
            Player::Odd => f.write_str("odd"),
        }
    }
}

/// The player favoured by a priority: odd priorities win for `Odd`.
pub const fn par(priority: Priority) -> Player {
    if priority % 2 == 1 {
        Player::Odd
    } else {
        Player::Even
    }
}

/// Compressed adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Adjacency {
    pub fn from_lists<L: AsRef<[NodeId]>>(lists: &[L]) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut targets = Vec::with_capacity(lists.iter().map(|l| l.as_ref().len()).sum());
        offsets.push(0);
        for list in lists {
            targets.extend_from_slice(list.as_ref());
            offsets.push(targets.len());
        }
        Adjacency { offsets, targets }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count()).flat_map(move |u| self.neighbors(u).iter().map(move |&v| (u, v)))
    }

    pub fn to_lists(&self) -> Vec<Vec<NodeId>> {
        (0..self.node_count()).map(|v| self.neighbors(v).to_vec()).collect()
    }

    /// Reverses every edge. Lists of the result are ascending whenever all
    /// targets are in range.
    pub fn transpose(&self) -> Adjacency {
        let n = self.node_count();
        let mut counts = vec![0usize; n + 1];
        for &t in &self.targets {
            counts[t + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut cursor = counts;
        let mut targets = vec![0; self.targets.len()];
        for (u, v) in self.edges() {
            targets[cursor[v]] = u;
            cursor[v] += 1;
        }
        Adjacency { offsets, targets }
    }
}

/// A set of nodes of a game, stored as a membership mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeSet {
    members: Vec<bool>,
    len: usize,
}

impl NodeSet {
    pub fn empty(node_count: usize) -> Self {
        NodeSet { members: vec![false; node_count], len: 0 }
    }

    pub fn full(node_count: usize) -> Self {
        NodeSet { members: vec![true; node_count], len: node_count }
    }

    pub fn from_nodes<I: IntoIterator<Item = NodeId>>(node_count: usize, nodes: I) -> Self {
        let mut set = NodeSet::empty(node_count);
        for v in nodes {
            set.insert(v);
        }
        set
    }

    pub fn from_mask(members: Vec<bool>) -> Self {
        let len = members.iter().filter(|&&m| m).count();
        NodeSet { members, len }
    }

    /// Size of the universe the set is drawn from.
    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: NodeId) -> bool {
        self.members[v]
    }

    /// Returns `true` if `v` was not yet a member.
    pub fn insert(&mut self, v: NodeId) -> bool {
        let fresh = !self.members[v];
        if fresh {
            self.members[v] = true;
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, v: NodeId) -> bool {
        let present = self.members[v];
        if present {
            self.members[v] = false;
            self.len -= 1;
        }
        present
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.members.iter().enumerate().filter_map(|(v, &m)| m.then_some(v))
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        NodeSet::from_mask(
            self.members.iter().zip(&other.members).map(|(&a, &b)| a && !b).collect(),
        )
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        for v in other.iter() {
            self.insert(v);
        }
    }

    pub fn as_mask(&self) -> &[bool] {
        &self.members
    }
}

/// An invariant breach found by [`ParityGame::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("game has no nodes")]
    NoNodes,
    #[error("sink node {node}: empty successor list")]
    SinkNode { node: NodeId },
    #[error("node {node}: successor {successor} out of range (node count {node_count})")]
    SuccessorOutOfRange { node: NodeId, successor: NodeId, node_count: usize },
    #[error("node {node}: duplicate successor {successor}")]
    DuplicateSuccessor { node: NodeId, successor: NodeId },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("length mismatch: {owners} owners, {priorities} priorities, {lists} successor lists")]
    LengthMismatch { owners: usize, priorities: usize, lists: usize },
    #[error("invalid game: {0}")]
    Invalid(#[from] Violation),
}

/// A parity game: a directed graph with an owner and a priority per node.
///
/// Plays move a token along edges; the player owning the current node picks
/// the next one. `Odd` wins a play iff the largest priority seen infinitely
/// often is odd.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParityGame {
    owner: Vec<Player>,
    priority: Vec<Priority>,
    successors: Adjacency,
}

impl ParityGame {
    /// Builds and validates a game. Successor lists are sorted; duplicates
    /// are rejected rather than merged.
    pub fn new(
        owner: Vec<Player>,
        priority: Vec<Priority>,
        successors: Vec<Vec<NodeId>>,
    ) -> Result<Self, GameError> {
        let game = Self::from_raw(owner, priority, successors)?;
        game.validate()?;
        Ok(game)
    }

    /// Builds a game without checking the graph invariants. Successor lists
    /// are sorted but otherwise kept as given, so [`validate`](Self::validate)
    /// can report what is wrong with them.
    pub fn from_raw(
        owner: Vec<Player>,
        priority: Vec<Priority>,
        mut successors: Vec<Vec<NodeId>>,
    ) -> Result<Self, GameError> {
        if owner.len() != priority.len() || owner.len() != successors.len() {
            return Err(GameError::LengthMismatch {
                owners: owner.len(),
                priorities: priority.len(),
                lists: successors.len(),
            });
        }
        for list in &mut successors {
            list.sort_unstable();
        }
        Ok(ParityGame { owner, priority, successors: Adjacency::from_lists(&successors) })
    }

    /// Checks every structural invariant and reports the first breach.
    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.node_count();
        if n == 0 {
            return Err(Violation::NoNodes);
        }
        for v in self.nodes() {
            let succ = self.successors(v);
            if succ.is_empty() {
                return Err(Violation::SinkNode { node: v });
            }
            for (i, &s) in succ.iter().enumerate() {
                if s >= n {
                    return Err(Violation::SuccessorOutOfRange { node: v, successor: s, node_count: n });
                }
                // lists are sorted, so duplicates are adjacent
                if i > 0 && succ[i - 1] == s {
                    return Err(Violation::DuplicateSuccessor { node: v, successor: s });
                }
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.owner.len()
    }

    pub fn edge_count(&self) -> usize {
        self.successors.edge_count()
    }

    pub fn nodes(&self) -> Range<NodeId> {
        0..self.node_count()
    }

    #[inline]
    pub fn owner(&self, v: NodeId) -> Player {
        self.owner[v]
    }

    #[inline]
    pub fn priority(&self, v: NodeId) -> Priority {
        self.priority[v]
    }

    #[inline]
    pub fn successors(&self, v: NodeId) -> &[NodeId] {
        self.successors.neighbors(v)
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.successors(v).len()
    }

    pub fn owners(&self) -> &[Player] {
        &self.owner
    }

    pub fn priorities(&self) -> &[Priority] {
        &self.priority
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.successors
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.successors.edges()
    }

    pub fn max_priority(&self) -> Option<Priority> {
        self.priority.iter().copied().max()
    }

    /// The common out-degree, if every node has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.out_degree(0);
        self.nodes().all(|v| self.out_degree(v) == d).then_some(d)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.successors(u).binary_search(&v).is_ok()
    }

    /// Predecessor lists.
    pub fn transpose(&self) -> Adjacency {
        self.successors.transpose()
    }

    /// Converts to a game where every edge joins nodes of different owners.
    ///
    /// Each edge `v -> v'` between nodes of the same owner is split by a fresh
    /// node `w` owned by the opponent, with the single successor `v'`.
    /// `w` gets priority `0`, which is at most `min(p(v), p(v'))`, so no
    /// cycle changes its maximum. Fresh nodes are numbered after the original ones,
    /// in edge order.
    pub fn to_bipartite(&self) -> ParityGame {
        let n = self.node_count();
        let mut owner = self.owner.clone();
        let mut priority = self.priority.clone();
        let mut lists: Vec<Vec<NodeId>> = Vec::with_capacity(n);
        let mut fresh: Vec<Vec<NodeId>> = Vec::new();
        for v in self.nodes() {
            let mut list = Vec::with_capacity(self.out_degree(v));
            for &t in self.successors(v) {
                if self.owner[t] == self.owner[v] {
                    let w = n + fresh.len();
                    owner.push(self.owner[v].opponent());
                    priority.push(0);
                    fresh.push(vec![t]);
                    list.push(w);
                } else {
                    list.push(t);
                }
            }
            lists.push(list);
        }
        lists.extend(fresh);
        ParityGame::from_raw(owner, priority, lists).expect("lengths agree by construction")
    }
}
