//! Permutations, vertex defects, automorphism counting, canonical forms and
//! admissible-isomorph counting.
//!
//! Two independent routes compute `|Aut(G)|`: exhaustive enumeration of all
//! `n!` relabellings (small `n` only) and an individualization–refinement
//! search ([`canonical_form`]). [`aut_size`] picks enumeration up to
//! [`ENUMERATION_CAP`] vertices and the search above it.

mod canon;
mod enumerate;

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graph::LabelledGraph;

pub use canon::{canonical_form, canonical_form_with_budget, CanonicalForm, DEFAULT_NODE_BUDGET};
pub use enumerate::for_each_permutation;

/// Largest `n` for which `n!` enumeration is attempted.
pub const ENUMERATION_CAP: usize = 9;

/// A bijection on `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    // 0-based images
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n as u32).collect(),
        }
    }

    /// From 1-based images: `images[i − 1] = π(i)`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &x in &images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::Domain(format!("not a permutation of 1..={n}")));
            }
            seen[x - 1] = true;
            out.push((x - 1) as u32);
        }
        Ok(Self { images: out })
    }

    pub(crate) fn from_zero_based(images: Vec<u32>) -> Self {
        Self { images }
    }

    /// Swaps `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::Domain(format!("({i} {j}) outside 1..={n}")));
        }
        let mut p = Self::identity(n);
        p.images.swap(i - 1, j - 1);
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, u: usize) -> usize {
        self.images[u - 1] as usize + 1
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Self { images: inv }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(
            self.len(),
            other.len(),
            "composing permutations of different size"
        );
        Self {
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize])
                .collect(),
        }
    }

    /// `d(π)`: number of points moved.
    pub fn degree(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i as u32 != x)
            .count()
    }

    pub fn is_identity(&self) -> bool {
        self.degree() == 0
    }
}

fn check_dims(g: &LabelledGraph, pi: &Permutation) -> Result<()> {
    if g.n() != pi.len() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: pi.len(),
        });
    }
    Ok(())
}

fn defect_unchecked(g: &LabelledGraph, pi: &Permutation, u: usize) -> usize {
    let pu = pi.apply(u);
    let shared = g
        .neighbors(u)
        .iter()
        .filter(|&&w| g.has_edge(pu, pi.apply(w as usize)))
        .count();
    g.degree(pu) + g.degree(u) - 2 * shared
}

/// `D_π(u) = |N(π(u)) △ π(N(u))|`.
pub fn vertex_defect(g: &LabelledGraph, pi: &Permutation, u: usize) -> Result<usize> {
    check_dims(g, pi)?;
    if u == 0 || u > g.n() {
        return Err(Error::Domain(format!("vertex {u} outside 1..={}", g.n())));
    }
    Ok(defect_unchecked(g, pi, u))
}

/// `D_π(G) = max_u D_π(u)`; zero exactly when `π` is an automorphism.
pub fn graph_defect(g: &LabelledGraph, pi: &Permutation) -> Result<usize> {
    check_dims(g, pi)?;
    Ok((1..=g.n())
        .map(|u| defect_unchecked(g, pi, u))
        .max()
        .unwrap_or(0))
}

/// `Z_π = Σ_{u : π(u) ≠ u} D_π(u)`.
pub fn z_statistic(g: &LabelledGraph, pi: &Permutation) -> Result<usize> {
    check_dims(g, pi)?;
    Ok((1..=g.n())
        .filter(|&u| pi.apply(u) != u)
        .map(|u| defect_unchecked(g, pi, u))
        .sum())
}

/// Adjacency bitmasks for exhaustive routines (`n ≤ 32`).
pub(crate) fn adjacency_masks(g: &LabelledGraph) -> Vec<u32> {
    debug_assert!(g.n() <= 32);
    (1..=g.n())
        .map(|u| g.neighbors(u).iter().fold(0u32, |m, &v| m | 1 << (v - 1)))
        .collect()
}

#[inline]
fn image_mask(mask: u32, perm: &[u32]) -> u32 {
    let mut out = 0u32;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros();
        out |= 1 << perm[i as usize];
        m &= m - 1;
    }
    out
}

fn check_cap(n: usize) -> Result<()> {
    if n > ENUMERATION_CAP {
        return Err(Error::TooLarge {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(())
}

/// `D(G) = min_{π ≠ id} D_π(G)` by enumerating all `n!` permutations.
///
/// Graphs with fewer than two vertices have no non-identity permutation; for
/// them this returns 0.
pub fn total_defect(g: &LabelledGraph) -> Result<usize> {
    let n = g.n();
    check_cap(n)?;
    let adj = adjacency_masks(g);
    let mut best = usize::MAX;
    for_each_permutation(n, |perm| {
        if perm.iter().enumerate().all(|(i, &x)| i as u32 == x) {
            return;
        }
        let mut worst = 0;
        for u in 0..n {
            let d = (adj[perm[u] as usize] ^ image_mask(adj[u], perm)).count_ones() as usize;
            worst = worst.max(d);
            if worst >= best {
                break;
            }
        }
        best = best.min(worst);
    });
    Ok(if best == usize::MAX { 0 } else { best })
}

/// `|Aut(G)|` by testing every permutation.
pub fn aut_size_enumeration(g: &LabelledGraph) -> Result<u64> {
    let n = g.n();
    check_cap(n)?;
    let adj = adjacency_masks(g);
    let mut count = 0u64;
    for_each_permutation(n, |perm| {
        if (0..n).all(|u| adj[perm[u] as usize] == image_mask(adj[u], perm)) {
            count += 1;
        }
    });
    Ok(count)
}

/// `|Aut(G)|` by enumeration for `n ≤ ENUMERATION_CAP`, otherwise by the
/// refinement search with the default node budget.
pub fn aut_size(g: &LabelledGraph) -> Result<BigUint> {
    if g.n() <= ENUMERATION_CAP {
        aut_size_enumeration(g).map(BigUint::from)
    } else {
        Ok(canonical_form(g)?.aut_size)
    }
}

/// `|Aut(G)|` always through the refinement search.
pub fn aut_size_refinement(g: &LabelledGraph) -> Result<BigUint> {
    Ok(canonical_form(g)?.aut_size)
}

pub fn is_asymmetric(g: &LabelledGraph) -> Result<bool> {
    Ok(aut_size(g)? == BigUint::from(1u32))
}

/// Contains every distance-1 pair of the base cycle.
pub fn is_admissible(g: &LabelledGraph) -> bool {
    let n = g.n();
    if n < 3 {
        return (1..n).all(|u| g.has_edge(u, u + 1));
    }
    (1..n).all(|u| g.has_edge(u, u + 1)) && g.has_edge(n, 1)
}

/// Whether `π(G)` is admissible, i.e. `G` contains the cycle
/// `π⁻¹(1) – π⁻¹(2) – … – π⁻¹(n) – π⁻¹(1)`.
pub fn is_permissible(g: &LabelledGraph, pi: &Permutation) -> Result<bool> {
    check_dims(g, pi)?;
    let n = g.n();
    let inv = pi.inverse();
    Ok((1..=n).all(|i| {
        let j = if i == n { 1 } else { i + 1 };
        i == j || g.has_edge(inv.apply(i), inv.apply(j))
    }))
}

/// `τ(G)`: number of distinct admissible graphs isomorphic to `G`, by
/// enumerating every relabelling.
#[allow(clippy::needless_range_loop)]
pub fn tau_count(g: &LabelledGraph) -> Result<u64> {
    let n = g.n();
    check_cap(n)?;
    if !is_admissible(g) {
        return Err(Error::NotAdmissible("graph lacks a base-cycle edge".into()));
    }
    // pair (i, j), i < j, 0-based → bit index
    let mut bit = vec![[0u8; 16]; n];
    let mut next = 0u8;
    for i in 0..n {
        for j in i + 1..n {
            bit[i][j] = next;
            bit[j][i] = next;
            next += 1;
        }
    }
    let mut cycle_mask = 0u64;
    for (i, row) in bit.iter().enumerate() {
        let j = (i + 1) % n;
        if i != j {
            cycle_mask |= 1 << row[j];
        }
    }
    let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (u - 1, v - 1)).collect();
    let mut seen = HashSet::new();
    for_each_permutation(n, |perm| {
        let mut mask = 0u64;
        for &(u, v) in &edges {
            mask |= 1 << bit[perm[u] as usize][perm[v] as usize];
        }
        if mask & cycle_mask == cycle_mask {
            seen.insert(mask);
        }
    });
    Ok(seen.len() as u64)
}

/// The analytic bound `n·(5b)^{n−1}` on `τ(G)`, in nats.
pub fn tau_log_upper_bound(n: usize, b: f64) -> f64 {
    (n as f64).ln() + (n as f64 - 1.0) * (5.0 * b).ln()
}
