//! PGSolver text format.
//!
//! ```text
//! parity 2;
//! 0 3 1 1,2;
//! 1 0 0 0;
//! 2 2 1 2 "sink-ish";
//! ```
//!
//! Writing is canonical: one node per line in id order, successors
//! ascending, LF endings, no names. Reading accepts arbitrary whitespace,
//! optional quoted names, an optional `start <id>;` line and nodes in any
//! order, as long as every id in `0..=max` appears exactly once.

use std::fmt::Write as _;

use swcp_core::{GameError, NodeId, ParityGame, Player, Priority};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("node {0} defined twice")]
    DuplicateNode(NodeId),
    #[error("node {0} missing")]
    MissingNode(NodeId),
    #[error("node {id} exceeds declared maximum {max}")]
    NodeOutOfRange { id: NodeId, max: NodeId },
    #[error(transparent)]
    Game(#[from] GameError),
}

pub fn write_game(game: &ParityGame) -> String {
    let mut out = String::with_capacity(16 * game.node_count() + 4 * game.edge_count());
    let _ = writeln!(out, "parity {};", game.node_count() - 1);
    for v in game.nodes() {
        let owner = game.owner(v).index();
        let _ = write!(out, "{v} {} {owner} ", game.priority(v));
        for (i, w) in game.successors(v).iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{w}");
        }
        out.push_str(";\n");
    }
    out
}

#[derive(Debug, PartialEq)]
enum Token<'a> {
    Word(&'a str),
    Quoted,
    Comma,
    Semi,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0, line: 1 }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, message: message.into() }
    }

    fn next(&mut self) -> Result<Option<Token<'a>>, ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            if bytes[self.pos] == b'\n' {
                self.line += 1;
            }
            self.pos += 1;
        }
        let Some(&c) = bytes.get(self.pos) else { return Ok(None) };
        let start = self.pos;
        self.pos += 1;
        match c {
            b',' => Ok(Some(Token::Comma)),
            b';' => Ok(Some(Token::Semi)),
            b'"' => {
                while self.pos < bytes.len() && bytes[self.pos] != b'"' {
                    if bytes[self.pos] == b'\\' {
                        self.pos += 1;
                    }
                    if bytes.get(self.pos) == Some(&b'\n') {
                        self.line += 1;
                    }
                    self.pos += 1;
                }
                if self.pos >= bytes.len() {
                    return Err(self.error("unterminated name"));
                }
                self.pos += 1;
                Ok(Some(Token::Quoted))
            }
            _ => {
                while self.pos < bytes.len() && !matches!(bytes[self.pos], b',' | b';' | b'"') && !bytes[self.pos].is_ascii_whitespace() {
                    self.pos += 1;
                }
                Ok(Some(Token::Word(&self.src[start..self.pos])))
            }
        }
    }

    fn expect_next(&mut self, what: &str) -> Result<Token<'a>, ParseError> {
        self.next()?.ok_or_else(|| self.error(format!("unexpected end of input, expected {what}")))
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        match self.expect_next(what)? {
            Token::Word(w) => w.parse().map_err(|_| self.error(format!("expected {what}, found `{w}`"))),
            t => Err(self.error(format!("expected {what}, found {t:?}"))),
        }
    }

    fn semi(&mut self) -> Result<(), ParseError> {
        match self.expect_next("`;`")? {
            Token::Semi => Ok(()),
            t => Err(self.error(format!("expected `;`, found {t:?}"))),
        }
    }
}

pub fn parse_game(src: &str) -> Result<ParityGame, ParseError> {
    let mut lx = Lexer::new(src);
    match lx.expect_next("`parity`")? {
        Token::Word("parity") => {}
        t => return Err(lx.error(format!("expected `parity` header, found {t:?}"))),
    }
    let max: NodeId = lx.number("maximum node id")?;
    lx.semi()?;

    let n = max.checked_add(1).ok_or_else(|| lx.error("maximum node id too large"))?;
    let mut nodes: Vec<Option<(Player, Priority, Vec<NodeId>)>> = Vec::new();
    nodes.resize_with(n, || None);
    loop {
        let id: NodeId = match lx.next()? {
            None => break,
            Some(Token::Word("start")) => {
                let _: NodeId = lx.number("start node")?;
                lx.semi()?;
                continue;
            }
            Some(Token::Word(w)) => w.parse().map_err(|_| lx.error(format!("expected node id, found `{w}`")))?,
            Some(t) => return Err(lx.error(format!("expected node id, found {t:?}"))),
        };
        let priority: Priority = lx.number("priority")?;
        let owner = match lx.number::<usize>("owner")? {
            0 => Player::Even,
            1 => Player::Odd,
            o => return Err(lx.error(format!("owner must be 0 or 1, found {o}"))),
        };
        let mut succ = vec![lx.number("successor")?];
        loop {
            match lx.expect_next("`,`, name or `;`")? {
                Token::Comma => succ.push(lx.number("successor")?),
                Token::Semi => break,
                Token::Quoted => {
                    lx.semi()?;
                    break;
                }
                t => return Err(lx.error(format!("expected `,`, name or `;`, found {t:?}"))),
            }
        }
        let slot = nodes.get_mut(id).ok_or(ParseError::NodeOutOfRange { id, max })?;
        if slot.replace((owner, priority, succ)).is_some() {
            return Err(ParseError::DuplicateNode(id));
        }
    }

    let mut owners = Vec::with_capacity(n);
    let mut priorities = Vec::with_capacity(n);
    let mut lists = Vec::with_capacity(n);
    for (v, node) in nodes.into_iter().enumerate() {
        let (o, p, s) = node.ok_or(ParseError::MissingNode(v))?;
        owners.push(o);
        priorities.push(p);
        lists.push(s);
    }
    Ok(ParityGame::new(owners, priorities, lists)?)
}
