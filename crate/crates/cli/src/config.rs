//! `key = value` generator configuration files.
//!
//! ```text
//! # comments and blank lines are ignored
//! nodes = 1000
//! degree = sqrt
//! priorities = 4
//! self_loops = false
//! seed = 7
//! ```

use swcp_core::{DegreeSpec, GenConfig};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    NotKeyValue { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`")]
    BadValue { line: usize, key: String },
    #[error("missing required key `nodes`")]
    MissingNodes,
}

pub fn parse_config(src: &str) -> Result<GenConfig, ConfigError> {
    let mut nodes = None;
    let mut cfg = GenConfig::new(0, 2, 0);
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let (key, value) = text.split_once('=').ok_or(ConfigError::NotKeyValue { line })?;
        let (key, value) = (key.trim(), value.trim());
        let bad = || ConfigError::BadValue { line, key: key.to_string() };
        match key {
            "nodes" | "node_count" => nodes = Some(value.parse().map_err(|_| bad())?),
            "degree" => cfg.degree = value.parse::<DegreeSpec>().map_err(|_| bad())?,
            "priorities" | "priority_count" => cfg.priority_count = value.parse().map_err(|_| bad())?,
            "self_loops" | "allow_self_loops" => cfg.allow_self_loops = value.parse().map_err(|_| bad())?,
            "seed" => cfg.seed = value.parse().map_err(|_| bad())?,
            _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
        }
    }
    cfg.node_count = nodes.ok_or(ConfigError::MissingNodes)?;
    Ok(cfg)
}

pub fn write_config(cfg: &GenConfig) -> String {
    format!(
        "nodes = {}\ndegree = {}\npriorities = {}\nself_loops = {}\nseed = {}\n",
        cfg.node_count, cfg.degree, cfg.priority_count, cfg.allow_self_loops, cfg.seed
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let cfg = parse_config("# demo\nnodes = 50\ndegree = 0.5n  # half\npriorities=4\nseed = 9\n").unwrap();
        assert_eq!(cfg, GenConfig::new(50, 2, 9).with_priorities(4).with_degree(DegreeSpec::Frac(0.5)));
        assert_eq!(parse_config(&write_config(&cfg)).unwrap(), cfg);
    }

    #[test]
    fn defaults_and_errors() {
        assert_eq!(parse_config("nodes = 3").unwrap(), GenConfig::new(3, 2, 0));
        assert_eq!(parse_config("seed = 1"), Err(ConfigError::MissingNodes));
        assert_eq!(parse_config("nodes 3"), Err(ConfigError::NotKeyValue { line: 1 }));
        assert!(matches!(parse_config("nodes = 3\ncolour = red"), Err(ConfigError::UnknownKey { line: 2, .. })));
        assert!(matches!(parse_config("nodes = -3"), Err(ConfigError::BadValue { .. })));
    }
}
