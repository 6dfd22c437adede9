//! Parity-game solving over random game graphs.
//!
//! The crate is `no_std` (with `alloc`). It holds the game representation,
//! the seeded random generator, the SWCP solver (self-winning cycle detection
//! followed by backwards induction), exact reference solvers, and the
//! branching-process numerics that predict when SWCP succeeds.
//!
//! File formats, the CLI and experiment sweeps live in the `swcp-cli` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod branching;
pub mod game;
pub mod generator;
pub mod oracle;
pub mod rng;
pub mod swcp;

pub use game::{par, Adjacency, GameError, NodeId, NodeSet, ParityGame, Player, Priority, Violation};
pub use generator::{degree_of, generate, DegreeSpec, GenConfig, GenError};
pub use oracle::{
    attractor, brute_force_solve, self_reach_labels, solve_d1, zielonka_solve, OracleError,
    ReachLabel, Solution,
};
pub use swcp::{
    dfs_reachable, find_self_winning, propagate, swcp_solve, Direction, PartialSolution,
    SelfWinningReport,
};
