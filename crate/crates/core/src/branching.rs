//! Branching-process numerics behind the degree threshold.
//!
//! With offspring `Binomial(d, q)` the extinction probability `eta(d, q)` is
//! the smallest root of `(1 - q + q * eta)^d = eta`. SWCP decides a node with
//! high probability when `d * eta(d - 1, 1/4) < 1`: inside one player's nodes
//! restricted to that player's winning parity, a node keeps each of its
//! other `d - 1` edges with probability `1/4`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand_distr::{Binomial, Distribution};
use thiserror::Error;

use crate::game::{par, NodeId, ParityGame};
use crate::rng;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 1_000_000;

/// Offspring law `Binomial(trials_d, q)` and the fixed-point stopping
/// threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchingSpec {
    pub trials_d: u64,
    pub q: f64,
    pub tolerance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum BranchingError {
    #[error("offspring probability must lie in [0, 1]")]
    BadProbability,
    #[error("tolerance must be positive")]
    BadTolerance,
}

impl BranchingSpec {
    pub fn new(trials_d: u64, q: f64) -> Result<Self, BranchingError> {
        Self::with_tolerance(trials_d, q, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(trials_d: u64, q: f64, tolerance: f64) -> Result<Self, BranchingError> {
        if !(0.0..=1.0).contains(&q) {
            return Err(BranchingError::BadProbability);
        }
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(BranchingError::BadTolerance);
        }
        Ok(BranchingSpec { trials_d, q, tolerance })
    }

    pub fn mean_offspring(&self) -> f64 {
        self.trials_d as f64 * self.q
    }

    /// Probability generating function of the offspring law.
    pub fn pgf(&self, s: f64) -> f64 {
        libm::pow(1.0 - self.q + self.q * s, self.trials_d as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtinctionResult {
    pub eta: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Smallest fixed point of the offspring generating function.
///
/// Iterates `eta <- pgf(eta)` from `0`; the iterates increase to the smallest
/// root. When the mean offspring is at most one (and `q < 1`) the answer is
/// exactly `1` and is returned without iterating, since at criticality the
/// iteration only approaches `1` like `1/k`.
pub fn extinction_probability(spec: &BranchingSpec) -> ExtinctionResult {
    if spec.q < 1.0 && spec.mean_offspring() <= 1.0 {
        return ExtinctionResult { eta: 1.0, iterations: 0, converged: true };
    }
    let mut eta = 0.0;
    for k in 1..=MAX_ITERATIONS {
        let next = spec.pgf(eta).clamp(0.0, 1.0);
        if (next - eta).abs() < spec.tolerance {
            return ExtinctionResult { eta: next, iterations: k, converged: true };
        }
        eta = next;
    }
    ExtinctionResult { eta, iterations: MAX_ITERATIONS, converged: false }
}

pub fn eta(d: u64, q: f64) -> f64 {
    extinction_probability(&BranchingSpec { trials_d: d, q, tolerance: DEFAULT_TOLERANCE }).eta
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdCheck {
    pub degree: u64,
    /// `eta(d - 1, 1/4)`.
    pub eta: f64,
    /// `d * eta(d - 1, 1/4)`; the condition is this being below one.
    pub lhs_fixed_point: f64,
    /// `d * (3/4 + 1/(4d))^(d - 1)`; the closed form is compared against one.
    pub lhs_closed_form: f64,
    pub condition_holds: bool,
}

impl ThresholdCheck {
    pub fn closed_form_holds(&self) -> bool {
        self.lhs_closed_form <= 1.0
    }

    pub fn forms_agree(&self) -> bool {
        self.condition_holds == self.closed_form_holds()
    }
}

/// Evaluates the sufficient degree condition both ways. The verdict follows
/// the fixed-point form. `d` must be at least 2.
pub fn threshold_check(d: u64) -> ThresholdCheck {
    assert!(d >= 2, "threshold condition needs d >= 2");
    let eta = eta(d - 1, 0.25);
    let lhs_fixed_point = d as f64 * eta;
    let df = d as f64;
    let lhs_closed_form = df * libm::pow(0.75 + 0.25 / df, df - 1.0);
    ThresholdCheck { degree: d, eta, lhs_fixed_point, lhs_closed_form, condition_holds: lhs_fixed_point < 1.0 }
}

/// Degrees scanned by [`min_sufficient_degree`].
pub const THRESHOLD_SCAN: core::ops::RangeInclusive<u64> = 2..=64;

/// Smallest `d` in the scan range satisfying the fixed-point condition.
pub fn min_sufficient_degree() -> Option<u64> {
    THRESHOLD_SCAN.into_iter().find(|&d| threshold_check(d).condition_holds)
}

/// Smallest `d` in the scan range satisfying the closed form.
pub fn min_sufficient_degree_closed_form() -> Option<u64> {
    THRESHOLD_SCAN.into_iter().find(|&d| threshold_check(d).closed_form_holds())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtinctionEstimate {
    pub extinct_fraction: f64,
    pub stderr: f64,
    pub trials: u64,
}

/// Populations beyond this are counted as surviving.
const SURVIVAL_POPULATION: u64 = 1 << 40;

/// Monte-Carlo extinction frequency by generation `generations`, starting
/// from one individual. Trial `t` uses stream `(seed, t)`.
pub fn simulate_branching(spec: &BranchingSpec, generations: u64, trials: u64, seed: u64) -> ExtinctionEstimate {
    assert!(trials >= 1, "need at least one trial");
    let extinct = (0..trials).filter(|&t| branching_trial(spec, generations, seed, t)).count() as f64;
    let p = extinct / trials as f64;
    ExtinctionEstimate { extinct_fraction: p, stderr: libm::sqrt(p * (1.0 - p) / trials as f64), trials }
}

/// One trial; `true` when the population dies out within the horizon.
pub fn branching_trial(spec: &BranchingSpec, generations: u64, seed: u64, trial: u64) -> bool {
    let mut rng = rng::stream(seed, &[trial]);
    let mut population: u64 = 1;
    for _ in 0..generations {
        if population == 0 {
            return true;
        }
        if population >= SURVIVAL_POPULATION {
            return false;
        }
        // the sum of `population` Binomial(d, q) draws is Binomial(population * d, q)
        population = Binomial::new(population * spec.trials_d, spec.q).expect("q checked in [0, 1]").sample(&mut rng);
    }
    population == 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExplorationReport {
    /// Nodes explored before stopping.
    pub explored: usize,
    /// Active nodes left when the process stopped.
    pub active_at_stop: usize,
    /// Step (1-based) at which a revealed edge first closed a directed cycle.
    pub first_cycle_step: Option<usize>,
}

/// Nodes owned by the player their priority favours.
pub fn favoured(game: &ParityGame, v: NodeId) -> bool {
    par(game.priority(v)) == game.owner(v)
}

/// The active / explored / unseen exploration of the subgraph in which both
/// endpoints of every edge are favoured nodes of one owner. Any cycle of that
/// subgraph is self-winning.
///
/// Active nodes are taken first in, first out. Each step explores one active
/// node and activates its unseen successors in the subgraph. An edge into an
/// already seen node closes a cycle when that node reaches the explored one
/// through edges revealed so far. Stops after `step_budget` steps or when no
/// node is active.
pub fn explore_self_winning_subgraph(game: &ParityGame, start: &[NodeId], step_budget: usize) -> ExplorationReport {
    assert!(!start.is_empty(), "exploration needs a start node");
    let n = game.node_count();
    let mut seen = vec![false; n];
    let mut active: VecDeque<NodeId> = VecDeque::new();
    for &v in start {
        if !seen[v] {
            seen[v] = true;
            active.push_back(v);
        }
    }
    let keeps = |u: NodeId, w: NodeId| game.owner(u) == game.owner(w) && favoured(game, w);
    // revealed edges, kept per explored node
    let mut revealed: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut mark = vec![0usize; n];
    let mut epoch = 0;
    let mut first_cycle_step = None;
    let mut explored = 0;

    while explored < step_budget {
        let Some(v) = active.pop_front() else { break };
        explored += 1;
        for &w in game.successors(v) {
            if !keeps(v, w) {
                continue;
            }
            revealed[v].push(w);
            if !seen[w] {
                seen[w] = true;
                active.push_back(w);
            } else if first_cycle_step.is_none() {
                epoch += 1;
                if reaches(&revealed, w, v, &mut mark, epoch) {
                    first_cycle_step = Some(explored);
                }
            }
        }
    }
    ExplorationReport { explored, active_at_stop: active.len(), first_cycle_step }
}

fn reaches(revealed: &[Vec<NodeId>], from: NodeId, to: NodeId, mark: &mut [usize], epoch: usize) -> bool {
    let mut stack = vec![from];
    mark[from] = epoch;
    while let Some(u) = stack.pop() {
        if u == to {
            return true;
        }
        for &w in &revealed[u] {
            if mark[w] != epoch {
                mark[w] = epoch;
                stack.push(w);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Player::{Even, Odd};

    #[test]
    fn spec_validation() {
        assert_eq!(BranchingSpec::new(3, 1.5), Err(BranchingError::BadProbability));
        assert_eq!(BranchingSpec::with_tolerance(3, 0.5, 0.0), Err(BranchingError::BadTolerance));
        assert_eq!(BranchingSpec::with_tolerance(3, 0.5, f64::NAN), Err(BranchingError::BadTolerance));
    }

    #[test]
    fn critical_and_empty_processes_die() {
        assert_eq!(extinction_probability(&BranchingSpec::new(2, 0.5).unwrap()).eta, 1.0);
        for d in [1, 3, 10] {
            assert_eq!(extinction_probability(&BranchingSpec::new(d, 0.0).unwrap()).eta, 1.0);
        }
        // sure offspring never dies out
        let r = extinction_probability(&BranchingSpec::new(3, 1.0).unwrap());
        assert_eq!(r.eta, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn cubic_root_for_three_halves() {
        // (1 + eta)^3 = 8 eta factors as (eta - 1)(eta^2 + 4 eta - 1)
        let r = extinction_probability(&BranchingSpec::new(3, 0.5).unwrap());
        assert!(r.converged);
        assert!((r.eta - (libm::sqrt(5.0) - 2.0)).abs() < 1e-9);
    }

    #[test]
    fn threshold_examples() {
        let t = threshold_check(2);
        assert!(!t.condition_holds);
        assert_eq!(t.lhs_fixed_point, 2.0);
        assert!(threshold_check(50).condition_holds);
        assert_eq!(min_sufficient_degree(), Some(11));
        assert_eq!(min_sufficient_degree_closed_form(), Some(11));
    }

    #[test]
    fn sure_child_never_dies() {
        let spec = BranchingSpec::new(1, 1.0).unwrap();
        assert_eq!(simulate_branching(&spec, 1000, 200, 1).extinct_fraction, 0.0);
    }

    fn game(owner: &[crate::game::Player], priority: &[u64], succ: &[&[NodeId]]) -> ParityGame {
        ParityGame::new(owner.to_vec(), priority.to_vec(), succ.iter().map(|s| s.to_vec()).collect()).unwrap()
    }

    #[test]
    fn exploration_dies_without_favoured_successors() {
        // node 1 is Odd-owned but even priority: not favoured
        let g = game(&[Odd, Odd], &[1, 0], &[&[1], &[0]]);
        let r = explore_self_winning_subgraph(&g, &[0], 100);
        assert_eq!(r, ExplorationReport { explored: 1, active_at_stop: 0, first_cycle_step: None });
    }

    #[test]
    fn exploration_closes_two_cycle_on_second_step() {
        let g = game(&[Even, Even], &[0, 2], &[&[1], &[0]]);
        let r = explore_self_winning_subgraph(&g, &[0], 100);
        assert_eq!(r.first_cycle_step, Some(2));
        assert_eq!(r.explored, 2);
    }

    #[test]
    fn cross_edges_are_not_cycles() {
        // 0 -> 1, 0 -> 2, 1 -> 2: a diamond, no directed cycle
        let g = game(&[Odd; 3], &[1, 1, 1], &[&[1, 2], &[2], &[0]]);
        let r = explore_self_winning_subgraph(&g, &[0], 2);
        assert_eq!(r.first_cycle_step, None);
        // exploring 2 reveals 2 -> 0, closing 0 -> 2 -> 0
        let r = explore_self_winning_subgraph(&g, &[0], 3);
        assert_eq!(r.first_cycle_step, Some(3));
    }
}
