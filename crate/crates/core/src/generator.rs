//! Seeded random parity games.
//!
//! Each node's successor set is a uniform `d`-subset of the other nodes
//! (or of all nodes when self-loops are allowed). Owners are uniform on the
//! two players and priorities uniform on `0..c` with `c` even, so odd and
//! even priorities are exactly equally likely. Node `v` draws everything
//! from its own stream `rng::stream(seed, [v])`.

use alloc::vec::Vec;
use core::fmt;

use rand::seq::index;
use rand::Rng;
use thiserror::Error;

use crate::game::{NodeId, ParityGame, Player, Priority};
use crate::rng;

/// Out-degree, either fixed or a function of the node count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DegreeSpec {
    Const(usize),
    /// `floor(ln n)`, at least 1.
    LnN,
    /// `floor(sqrt n)`.
    SqrtN,
    /// `floor(alpha * n)`, clamped to `[1, n - 1]`.
    Frac(f64),
}

impl fmt::Display for DegreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeSpec::Const(d) => write!(f, "{d}"),
            DegreeSpec::LnN => f.write_str("ln"),
            DegreeSpec::SqrtN => f.write_str("sqrt"),
            DegreeSpec::Frac(a) => write!(f, "{a}n"),
        }
    }
}

impl core::str::FromStr for DegreeSpec {
    type Err = GenError;

    /// Accepts `4`, `ln`, `sqrt`, `0.5n` / `frac:0.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || GenError::BadDegreeSpec;
        match s {
            "ln" | "ln_n" => Ok(DegreeSpec::LnN),
            "sqrt" | "sqrt_n" => Ok(DegreeSpec::SqrtN),
            _ => {
                let frac = s.strip_suffix('n').or_else(|| s.strip_prefix("frac:"));
                if let Some(a) = frac {
                    let a: f64 = a.parse().map_err(|_| bad())?;
                    if a > 0.0 && a < 1.0 {
                        Ok(DegreeSpec::Frac(a))
                    } else {
                        Err(bad())
                    }
                } else {
                    s.parse().map(DegreeSpec::Const).map_err(|_| bad())
                }
            }
        }
    }
}

/// Evaluates a degree specification at `n` nodes.
pub fn degree_of(spec: DegreeSpec, n: usize) -> usize {
    match spec {
        DegreeSpec::Const(d) => d,
        DegreeSpec::LnN => (libm::floor(libm::log(n as f64)) as usize).max(1),
        DegreeSpec::SqrtN => n.isqrt(),
        DegreeSpec::Frac(alpha) => {
            (libm::floor(alpha * n as f64) as usize).clamp(1, n.saturating_sub(1).max(1))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("node count must be positive")]
    NoNodes,
    #[error("degree {degree} outside [1, {max}]")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("priority count {0} must be positive and even")]
    BadPriorityCount(Priority),
    #[error("unrecognised degree specification")]
    BadDegreeSpec,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub node_count: usize,
    pub degree: DegreeSpec,
    /// Number of distinct priorities; must be even.
    pub priority_count: Priority,
    pub allow_self_loops: bool,
    pub seed: u64,
}

impl GenConfig {
    pub fn new(node_count: usize, degree: usize, seed: u64) -> Self {
        GenConfig {
            node_count,
            degree: DegreeSpec::Const(degree),
            priority_count: 2,
            allow_self_loops: false,
            seed,
        }
    }

    pub fn with_priorities(mut self, c: Priority) -> Self {
        self.priority_count = c;
        self
    }

    pub fn with_degree(mut self, degree: DegreeSpec) -> Self {
        self.degree = degree;
        self
    }

    pub fn with_self_loops(mut self, allow: bool) -> Self {
        self.allow_self_loops = allow;
        self
    }

    pub fn effective_degree(&self) -> usize {
        degree_of(self.degree, self.node_count)
    }

    pub fn check(&self) -> Result<usize, GenError> {
        if self.node_count == 0 {
            return Err(GenError::NoNodes);
        }
        if self.priority_count == 0 || !self.priority_count.is_multiple_of(2) {
            return Err(GenError::BadPriorityCount(self.priority_count));
        }
        let degree = self.effective_degree();
        let max = self.candidate_count();
        if degree == 0 || degree > max {
            return Err(GenError::DegreeOutOfRange { degree, max });
        }
        Ok(degree)
    }

    fn candidate_count(&self) -> usize {
        if self.allow_self_loops {
            self.node_count
        } else {
            self.node_count - 1
        }
    }
}

/// Draws a game. Output depends only on `config`.
pub fn generate(config: &GenConfig) -> Result<ParityGame, GenError> {
    let degree = config.check()?;
    let n = config.node_count;
    let mut owner = Vec::with_capacity(n);
    let mut priority = Vec::with_capacity(n);
    let mut successors = Vec::with_capacity(n);
    for v in 0..n {
        let (o, p, s) = draw_node(config, degree, v);
        owner.push(o);
        priority.push(p);
        successors.push(s);
    }
    Ok(ParityGame::new(owner, priority, successors).expect("generator output satisfies game invariants"))
}

fn draw_node(config: &GenConfig, degree: usize, v: NodeId) -> (Player, Priority, Vec<NodeId>) {
    let mut rng = rng::stream(config.seed, &[v as u64]);
    let owner = if rng.random_bool(0.5) { Player::Odd } else { Player::Even };
    let priority = rng.random_range(0..config.priority_count);
    let mut succ: Vec<NodeId> = index::sample(&mut rng, config.candidate_count(), degree)
        .into_iter()
        .map(|i| if !config.allow_self_loops && i >= v { i + 1 } else { i })
        .collect();
    succ.sort_unstable();
    (owner, priority, succ)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_functions() {
        assert_eq!(degree_of(DegreeSpec::SqrtN, 100), 10);
        assert_eq!(degree_of(DegreeSpec::Frac(0.5), 100), 50);
        assert_eq!(degree_of(DegreeSpec::LnN, 100), 4);
        assert_eq!(degree_of(DegreeSpec::Const(7), 100), 7);
        assert_eq!(degree_of(DegreeSpec::LnN, 2), 1);
        assert_eq!(degree_of(DegreeSpec::Frac(0.9), 400), 360);
        assert_eq!(degree_of(DegreeSpec::Frac(0.01), 10), 1);
        assert_eq!(degree_of(DegreeSpec::Frac(0.99), 10), 9);
    }

    #[test]
    fn degree_spec_parsing() {
        assert_eq!("3".parse::<DegreeSpec>(), Ok(DegreeSpec::Const(3)));
        assert_eq!("ln".parse::<DegreeSpec>(), Ok(DegreeSpec::LnN));
        assert_eq!("sqrt".parse::<DegreeSpec>(), Ok(DegreeSpec::SqrtN));
        assert_eq!("0.5n".parse::<DegreeSpec>(), Ok(DegreeSpec::Frac(0.5)));
        assert_eq!("frac:0.9".parse::<DegreeSpec>(), Ok(DegreeSpec::Frac(0.9)));
        assert!("1.5n".parse::<DegreeSpec>().is_err());
        assert!("x".parse::<DegreeSpec>().is_err());
    }

    #[test]
    fn regular_without_self_loops() {
        let g = generate(&GenConfig::new(100, 2, 11)).unwrap();
        assert_eq!(g.regular_degree(), Some(2));
        assert!(g.nodes().all(|v| !g.has_edge(v, v)));
    }

    #[test]
    fn complete_digraph_when_degree_is_n_minus_one() {
        let g = generate(&GenConfig::new(5, 4, 3)).unwrap();
        for v in g.nodes() {
            let others: Vec<_> = g.nodes().filter(|&u| u != v).collect();
            assert_eq!(g.successors(v), others.as_slice());
        }
    }

    #[test]
    fn self_loops_allowed_reach_full_set() {
        let g = generate(&GenConfig::new(4, 4, 3).with_self_loops(true)).unwrap();
        assert!(g.nodes().all(|v| g.out_degree(v) == 4 && g.has_edge(v, v)));
    }

    #[test]
    fn rejects_bad_configs() {
        assert_eq!(
            generate(&GenConfig::new(5, 5, 0)),
            Err(GenError::DegreeOutOfRange { degree: 5, max: 4 })
        );
        assert_eq!(generate(&GenConfig::new(5, 0, 0)), Err(GenError::DegreeOutOfRange { degree: 0, max: 4 }));
        assert_eq!(generate(&GenConfig::new(5, 2, 0).with_priorities(3)), Err(GenError::BadPriorityCount(3)));
        assert_eq!(generate(&GenConfig::new(0, 1, 0)), Err(GenError::NoNodes));
        assert_eq!(generate(&GenConfig::new(1, 1, 0)), Err(GenError::DegreeOutOfRange { degree: 1, max: 0 }));
    }

    #[test]
    fn deterministic_in_seed() {
        let cfg = GenConfig::new(50, 3, 99).with_priorities(4);
        assert_eq!(generate(&cfg).unwrap(), generate(&cfg).unwrap());
        let other = GenConfig { seed: 100, ..cfg };
        assert_ne!(generate(&other).unwrap(), generate(&GenConfig::new(50, 3, 99).with_priorities(4)).unwrap());
    }

    #[test]
    fn balanced_owners_and_priorities() {
        // 4 sigma binomial half-width at n = 10000 is 0.02
        let g = generate(&GenConfig::new(10_000, 3, 2024).with_priorities(4)).unwrap();
        let n = g.node_count() as f64;
        let odd_owned = g.owners().iter().filter(|&&o| o == Player::Odd).count() as f64 / n;
        let odd_prio = g.priorities().iter().filter(|&&p| p % 2 == 1).count() as f64 / n;
        assert!((odd_owned - 0.5).abs() <= 0.02, "{odd_owned}");
        assert!((odd_prio - 0.5).abs() <= 0.02, "{odd_prio}");
        assert!(g.priorities().iter().all(|&p| p < 4));
    }
}
