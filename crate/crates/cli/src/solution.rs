//! Solution files: `<id> <0|1|?> [witness]` per line, `?` for undecided.

use std::fmt::Write as _;

use swcp_core::{NodeId, PartialSolution, Player};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolutionParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: expected node {expected}, found {found}")]
    OutOfOrder { line: usize, expected: NodeId, found: NodeId },
}

pub fn write_solution(sol: &PartialSolution) -> String {
    let mut out = String::with_capacity(8 * sol.node_count());
    for v in 0..sol.node_count() {
        let winner = match sol.value(v) {
            Some(p) => char::from(b'0' + p.index() as u8),
            None => '?',
        };
        let _ = write!(out, "{v} {winner}");
        if let Some(w) = sol.witness(v) {
            let _ = write!(out, " {w}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_solution(src: &str) -> Result<PartialSolution, SolutionParseError> {
    let mut value = Vec::new();
    let mut witness = Vec::new();
    for (i, text) in src.lines().enumerate() {
        let line = i + 1;
        let syntax = |message: String| SolutionParseError::Syntax { line, message };
        let mut fields = text.split_whitespace();
        let Some(id) = fields.next() else { continue };
        let id: NodeId = id.parse().map_err(|_| syntax(format!("bad node id `{id}`")))?;
        if id != value.len() {
            return Err(SolutionParseError::OutOfOrder { line, expected: value.len(), found: id });
        }
        let winner = match fields.next() {
            Some("0") => Some(Player::Even),
            Some("1") => Some(Player::Odd),
            Some("?") => None,
            other => return Err(syntax(format!("bad winner {other:?}"))),
        };
        let w = match fields.next() {
            None => None,
            Some(w) => Some(w.parse::<NodeId>().map_err(|_| syntax(format!("bad witness `{w}`")))?),
        };
        if fields.next().is_some() {
            return Err(syntax("trailing fields".into()));
        }
        value.push(winner);
        witness.push(w);
    }
    Ok(PartialSolution::from_parts(value, witness))
}
