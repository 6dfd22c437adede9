//! File formats, experiment sweeps and the `swcp` command line on top of
//! `swcp-core`.

pub mod cli;
pub mod config;
pub mod pgsolver;
pub mod plot;
pub mod solution;
pub mod sweep;
pub mod threshold;
