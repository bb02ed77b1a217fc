//! Plain-text edge lists.
//!
//! ```text
//! n q
//! u v        one line per edge, 0-based vertices
//! pin u c    optional, 1-based colors
//! ```
//!
//! Blank lines and anything after `#` are ignored.

use std::fmt::Write as _;
use std::str::FromStr;

use super::PartiallyColoredGraph;
use crate::error::{PottsError, Result};

pub fn parse_edge_list(text: &str) -> Result<PartiallyColoredGraph> {
    let mut graph: Option<PartiallyColoredGraph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let err = |message: String| PottsError::Parse { line, message };
        let num = |tok: &str| -> Result<usize> {
            tok.parse::<usize>()
                .map_err(|_| err(format!("expected a nonnegative integer, found `{tok}`")))
        };
        let Some(g) = graph.as_mut() else {
            if tokens.len() != 2 {
                return Err(err("header must be `n q`".into()));
            }
            let g = PartiallyColoredGraph::new(num(tokens[0])?, num(tokens[1])?, [])
                .map_err(|e| err(e.to_string()))?;
            graph = Some(g);
            continue;
        };
        match tokens.as_slice() {
            ["pin", u, c] => {
                let (u, c) = (num(u)?, num(c)?);
                if u < g.n() && g.pin(u).is_some() {
                    return Err(err(format!("vertex {u} pinned twice")));
                }
                g.set_pin(u, Some(c)).map_err(|e| err(e.to_string()))?;
            }
            [u, v] => {
                let (u, v) = (num(u)?, num(v)?);
                g.add_edge(u, v).map_err(|e| err(e.to_string()))?;
            }
            _ => return Err(err(format!("unrecognized line `{}`", content.trim()))),
        }
    }
    graph.ok_or(PottsError::Parse { line: 0, message: "empty input: missing `n q` header".into() })
}

/// Canonical serialization: header, edges in lexicographic order, then pins
/// in vertex order.
pub fn to_edge_list(g: &PartiallyColoredGraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.q());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    for v in 0..g.n() {
        if let Some(c) = g.pin(v) {
            writeln!(out, "pin {v} {c}").unwrap();
        }
    }
    out
}

impl FromStr for PartiallyColoredGraph {
    type Err = PottsError;

    fn from_str(s: &str) -> Result<Self> {
        parse_edge_list(s)
    }
}

impl std::fmt::Display for PartiallyColoredGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&to_edge_list(self))
    }
}
