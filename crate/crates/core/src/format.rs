//! Plain-text graph files.
//!
//! Neighborhood-list format:
//!
//! ```text
//! 3 3
//! 0 1
//! 1 2
//! 2 0
//! ```
//!
//! The first line is `m n`; line `j` of the following `n` lines lists the
//! 0-based X-indices of `N(y_j)`. Empty neighborhood lines are rejected.
//!
//! Biadjacency format: a `biadj` header line followed by `m` lines of `n`
//! characters, each `0` or `1`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, VertexSet};

/// Parses either format, choosing by the header line.
pub fn parse_graph(text: &str) -> Result<BipartiteGraph> {
    let first = text.lines().find(|l| !l.trim().is_empty());
    match first.map(str::trim) {
        Some("biadj") => parse_biadjacency(text),
        Some(_) => parse_neighborhoods(text),
        None => Err(Error::Format("empty graph file".into())),
    }
}

/// Parses the neighborhood-list format.
pub fn parse_neighborhoods(text: &str) -> Result<BipartiteGraph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| Error::Format("empty graph file".into()))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let [m, n] = dims[..] else {
        return Err(Error::Format(format!(
            "header must be \"m n\", got {header:?}"
        )));
    };
    let m = parse_count(m)?;
    let n = parse_count(n)?;
    if m == 0 || n == 0 {
        return Err(Error::Dimension(format!(
            "both parts must be nonempty (m = {m}, n = {n})"
        )));
    }

    let mut nbrs = Vec::with_capacity(n);
    for j in 0..n {
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| Error::Format(format!("expected {n} neighborhood lines, found {j}")))?;
        if line.trim().is_empty() {
            return Err(Error::Format(format!(
                "line {}: y_{j} has an empty neighborhood",
                lineno + 1
            )));
        }
        let mut t = VertexSet::empty();
        for tok in line.split_whitespace() {
            let i = parse_count(tok)?;
            if i >= m {
                return Err(Error::Format(format!(
                    "line {}: x-index {i} out of range 0..{m}",
                    lineno + 1
                )));
            }
            t.insert(i);
        }
        nbrs.push(t);
    }
    if let Some((lineno, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::Format(format!(
            "line {}: trailing content after {n} neighborhood lines",
            lineno + 1
        )));
    }
    BipartiteGraph::new(m, nbrs)
}

/// Parses a 0/1 biadjacency matrix; the `biadj` header line is optional.
pub fn parse_biadjacency(text: &str) -> Result<BipartiteGraph> {
    let mut rows = Vec::new();
    for (k, line) in text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
    {
        if k == 0 && line == "biadj" {
            continue;
        }
        let row = line
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                other => Err(Error::Format(format!(
                    "biadjacency entries must be '0' or '1', got {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    BipartiteGraph::from_biadjacency(&rows)
}

/// Writes the neighborhood-list format.
pub fn write_graph(g: &BipartiteGraph) -> String {
    let mut out = format!("{} {}\n", g.m(), g.n());
    for t in g.neighborhoods() {
        let line = t.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(out, "{line}").unwrap();
    }
    out
}

/// Writes the biadjacency format with its `biadj` header.
pub fn write_biadjacency(g: &BipartiteGraph) -> String {
    let mut out = String::from("biadj\n");
    for row in g.biadjacency() {
        out.extend(row.iter().map(|&e| if e == 1 { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

fn parse_count(tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|e| Error::Format(format!("expected a nonnegative integer, got {tok:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_connected, EnumerateOptions};
    use proptest::prelude::*;

    const C6: &str = "3 3\n0 1\n1 2\n2 0\n";

    #[test]
    fn reads_six_cycle() {
        let g = parse_graph(C6).unwrap();
        assert_eq!(g.m(), 3);
        assert_eq!(g.neighborhood(2), VertexSet::from_indices([0, 2]));
        assert_eq!(write_graph(&g), "3 3\n0 1\n1 2\n0 2\n");
    }

    #[test]
    fn reads_biadjacency() {
        let g = parse_graph("biadj\n10\n11\n").unwrap();
        assert_eq!(g.neighborhood(0), VertexSet::from_indices([0, 1]));
        assert_eq!(g.neighborhood(1), VertexSet::from_indices([1]));
        assert_eq!(parse_biadjacency("10\n11\n").unwrap(), g);
        assert_eq!(parse_graph(&write_biadjacency(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(parse_graph(""), Err(Error::Format(_))));
        assert!(matches!(parse_graph("2\n0\n"), Err(Error::Format(_))));
        assert!(matches!(parse_graph("2 2\n0 1\n\n"), Err(Error::Format(_))));
        assert!(matches!(parse_graph("2 2\n0 1\n"), Err(Error::Format(_))));
        assert!(matches!(parse_graph("2 1\n0 5\n"), Err(Error::Format(_))));
        assert!(matches!(parse_graph("2 1\n0 1\n1\n"), Err(Error::Format(_))));
        assert!(matches!(parse_graph("0 1\n0\n"), Err(Error::Dimension(_))));
        assert!(matches!(parse_graph("biadj\n12\n"), Err(Error::Format(_))));
        assert!(matches!(parse_graph("biadj\n10\n1\n"), Err(Error::Format(_))));
    }

    proptest! {
        #[test]
        fn enumerated_graphs_round_trip(m in 1usize..=4, n in 1usize..=4, pick in any::<prop::sample::Index>()) {
            let all: Vec<_> = enumerate_connected(m, n, &EnumerateOptions::default()).unwrap().collect();
            let g = &all[pick.index(all.len())];
            prop_assert_eq!(&parse_graph(&write_graph(g)).unwrap(), g);
            prop_assert_eq!(&parse_graph(&write_biadjacency(g)).unwrap(), g);
        }
    }
}
