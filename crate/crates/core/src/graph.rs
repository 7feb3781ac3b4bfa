//! Simple undirected labelled graphs on vertices `1..=n`, and the plain-text
//! edge-list format.
//!
//! The edge-list format is line oriented: a header line `n <n>`, then one
//! `u v` pair per line with `1 ≤ u < v ≤ n`, in ascending lexicographic order.
//! Blank lines and lines starting with `#` are ignored.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::symmetry::Permutation;

#[derive(Debug, Clone)]
pub struct LabelledGraph {
    n: usize,
    // sorted, 1-based neighbour labels; index is label − 1
    adj: Vec<Vec<u32>>,
    edge_set: HashSet<u64>,
}

fn edge_key(u: usize, v: usize) -> u64 {
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    ((lo as u64) << 32) | hi as u64
}

impl PartialEq for LabelledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for LabelledGraph {}

impl LabelledGraph {
    /// The empty graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![Vec::new(); n],
            edge_set: HashSet::new(),
        }
    }

    /// Builds a graph from unordered pairs; rejects loops, duplicates and
    /// out-of-range labels.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            if u == v {
                return Err(Error::Parse(format!("self-loop at vertex {u}")));
            }
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::Parse(format!("edge ({u}, {v}) outside 1..={n}")));
            }
            if !g.insert(u, v) {
                return Err(Error::Parse(format!("duplicate edge ({u}, {v})")));
            }
        }
        g.finish();
        Ok(g)
    }

    /// The base cycle `1 – 2 – … – n – 1`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        g.add_cycle();
        g.finish();
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 1..=n {
            for v in u + 1..=n {
                g.insert(u, v);
            }
        }
        g.finish();
        g
    }

    pub(crate) fn add_cycle(&mut self) {
        for u in 1..self.n {
            self.insert(u, u + 1);
        }
        if self.n > 2 {
            self.insert(1, self.n);
        }
    }

    /// Inserts without keeping adjacency lists sorted; call [`finish`] after.
    pub(crate) fn insert(&mut self, u: usize, v: usize) -> bool {
        if !self.edge_set.insert(edge_key(u, v)) {
            return false;
        }
        self.adj[u - 1].push(v as u32);
        self.adj[v - 1].push(u as u32);
        true
    }

    pub(crate) fn finish(&mut self) {
        for list in &mut self.adj {
            list.sort_unstable();
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_set.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edge_set.contains(&edge_key(u, v))
    }

    /// Sorted neighbour labels of `u`.
    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.adj[u - 1]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u - 1].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn mean_degree(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        2.0 * self.edge_count() as f64 / self.n as f64
    }

    /// Edges `(u, v)` with `u < v` in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, list)| {
            let u = i + 1;
            list.iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// The image graph `π(G)`: `(π(u), π(v))` is an edge iff `(u, v)` is.
    pub fn relabel(&self, pi: &Permutation) -> Result<Self> {
        if pi.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: pi.len(),
            });
        }
        let mut g = Self::empty(self.n);
        for (u, v) in self.edges() {
            g.insert(pi.apply(u), pi.apply(v));
        }
        g.finish();
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 + 12 * self.edge_count());
        let _ = writeln!(out, "n {}", self.n);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (lineno, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("missing `n <n>` header".into()))?;
        let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["n", count] => count
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("line {lineno}: bad vertex count: {e}")))?,
            _ => return Err(Error::Parse(format!("line {lineno}: expected `n <n>`"))),
        };
        let mut prev: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (lineno, line) in lines {
            let mut it = line.split_whitespace();
            let (u, v) = match (it.next(), it.next(), it.next()) {
                (Some(u), Some(v), None) => {
                    let parse = |s: &str| {
                        s.parse::<usize>()
                            .map_err(|e| Error::Parse(format!("line {lineno}: {e}")))
                    };
                    (parse(u)?, parse(v)?)
                }
                _ => return Err(Error::Parse(format!("line {lineno}: expected `u v`"))),
            };
            if u >= v {
                return Err(Error::Parse(format!(
                    "line {lineno}: need u < v, got {u} {v}"
                )));
            }
            if prev.is_some_and(|p| p >= (u, v)) {
                return Err(Error::Parse(format!(
                    "line {lineno}: edges not in ascending order"
                )));
            }
            prev = Some((u, v));
            edges.push((u, v));
        }
        Self::from_edges(n, edges)
    }
}
