//! The SW(a, b) small-world model and the Erdős–Rényi comparison model.
//!
//! Vertices `1..=n` sit on a circle. Every vertex is joined to its two
//! nearest neighbours, and each remaining pair at circle distance `k ≥ 2` is
//! joined independently with probability `p(k) = c·k^{−a}` where
//! `c = b(1−a)(2/n)^{1−a}`.
//!
//! Model probabilities go through `libm` so that sampling and coding tables
//! are bit-identical across platforms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::LabelledGraph;
use crate::rng::{geometric_gap, rng_from_seed, uniform};
use crate::series::CompensatedSum;

/// Validated `(n, a, b)` with the derived coupling `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    n: usize,
    a: f64,
    b: f64,
    c: f64,
}

impl ModelParams {
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        if n < 5 {
            return Err(Error::InvalidParams(format!("need n ≥ 5, got {n}")));
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidParams(format!("n = {n} is too large")));
        }
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidParams(format!("need 0 < a < 1, got {a}")));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidParams(format!("need b > 0, got {b}")));
        }
        let c = b * (1.0 - a) * libm::pow(2.0 / n as f64, 1.0 - a);
        let params = Self { n, a, b, c };
        let p2 = params.p(2);
        if p2 > 1.0 {
            return Err(Error::InvalidParams(format!(
                "p(2) = {p2:.6} > 1: n = {n} is too small for a = {a}, b = {b}"
            )));
        }
        Ok(params)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn max_distance(&self) -> usize {
        self.n / 2
    }

    fn p(&self, k: usize) -> f64 {
        self.c * libm::pow(k as f64, -self.a)
    }

    /// `1` for nearest neighbours, `c·k^{−a}` for `2 ≤ k ≤ ⌊n/2⌋`.
    pub fn edge_probability(&self, k: usize) -> Result<f64> {
        match k {
            1 => Ok(1.0),
            k if k >= 2 && k <= self.max_distance() => Ok(self.p(k)),
            _ => Err(Error::Domain(format!(
                "distance {k} outside 1..={}",
                self.max_distance()
            ))),
        }
    }

    /// `table[k] = p(k)` for `k ∈ 2..=⌊n/2⌋`; entries 0 and 1 are unused (0).
    pub fn probability_table(&self) -> Vec<f64> {
        let mut t = vec![0.0; self.max_distance() + 1];
        for (k, slot) in t.iter_mut().enumerate().skip(2) {
            *slot = self.p(k);
        }
        t
    }

    /// Number of unordered vertex pairs at circle distance `k ≥ 1`.
    pub fn pairs_at_distance(&self, k: usize) -> usize {
        if self.n.is_multiple_of(2) && k == self.n / 2 {
            self.n / 2
        } else {
            self.n
        }
    }
}

/// Circle distance `min(|u−v|, n−|u−v|)`.
pub fn circle_distance(n: usize, u: usize, v: usize) -> Result<usize> {
    if u == v {
        return Err(Error::Domain(format!(
            "circle distance needs u ≠ v, got {u}"
        )));
    }
    if u == 0 || v == 0 || u > n || v > n {
        return Err(Error::Domain(format!(
            "vertices ({u}, {v}) outside 1..={n}"
        )));
    }
    Ok(ring_distance(n, u, v))
}

#[inline]
pub(crate) fn ring_distance(n: usize, u: usize, v: usize) -> usize {
    let d = u.abs_diff(v);
    d.min(n - d)
}

/// Walks unordered pairs `(u, v)`, `u < v`, in lexicographic order, jumping
/// ahead by geometric gaps.
struct PairCursor {
    n: usize,
    u: usize,
    v: usize,
}

impl PairCursor {
    fn new(n: usize) -> Self {
        Self { n, u: 1, v: 1 }
    }

    /// Moves past `skip` pairs and onto the next one; `None` when exhausted.
    fn advance(&mut self, skip: u64) -> Option<(usize, usize)> {
        let mut remaining = skip.saturating_add(1);
        loop {
            if self.u >= self.n {
                return None;
            }
            let left_in_row = (self.n - self.v) as u64;
            if remaining <= left_in_row {
                self.v += remaining as usize;
                return Some((self.u, self.v));
            }
            remaining -= left_in_row;
            self.u += 1;
            self.v = self.u;
        }
    }
}

/// Samples `G ~ SW(a, b)` deterministically from `(params, seed)`.
///
/// Optional pairs are visited in lexicographic order. Candidates are drawn at
/// rate `p(2)` (the largest optional probability) by geometric skipping, and a
/// candidate at distance `k ≥ 2` is kept with probability `p(k)/p(2)`; each
/// optional pair is therefore an independent Bernoulli(`p(k)`).
pub fn sample_sw(params: &ModelParams, seed: u64) -> LabelledGraph {
    let n = params.n();
    let mut g = LabelledGraph::empty(n);
    g.add_cycle();
    let table = params.probability_table();
    let p_max = table[2];
    let accept: Vec<f64> = table.iter().map(|p| p / p_max).collect();
    let log_q = libm::log1p(-p_max);
    let mut rng = rng_from_seed(seed);
    let mut cursor = PairCursor::new(n);
    while let Some((u, v)) = cursor.advance(geometric_gap(&mut rng, log_q)) {
        let k = ring_distance(n, u, v);
        if k < 2 {
            continue;
        }
        if uniform(&mut rng) < accept[k] {
            g.insert(u, v);
        }
    }
    g.finish();
    g
}

/// Samples an Erdős–Rényi `G(n, p)` graph.
pub fn sample_er(n: usize, p: f64, seed: u64) -> Result<LabelledGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let mut g = LabelledGraph::empty(n);
    if p > 0.0 {
        let log_q = libm::log1p(-p);
        let mut rng = rng_from_seed(seed);
        let mut cursor = PairCursor::new(n);
        while let Some((u, v)) = cursor.advance(geometric_gap(&mut rng, log_q)) {
            g.insert(u, v);
        }
    }
    g.finish();
    Ok(g)
}

/// `log P(G)` under SW(a, b), or `−∞` if the base cycle is incomplete.
pub fn log_likelihood_sw(params: &ModelParams, g: &LabelledGraph) -> Result<f64> {
    let n = params.n();
    if g.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g.n(),
        });
    }
    if !crate::symmetry::is_admissible(g) {
        return Ok(f64::NEG_INFINITY);
    }
    let table = params.probability_table();
    let mut acc = CompensatedSum::new();
    for (k, &p) in table.iter().enumerate().skip(2) {
        acc.add(params.pairs_at_distance(k) as f64 * libm::log1p(-p));
    }
    for (u, v) in g.edges() {
        let k = ring_distance(n, u, v);
        if k >= 2 {
            let p = table[k];
            acc.add(libm::log(p) - libm::log1p(-p));
        }
    }
    Ok(acc.value())
}
