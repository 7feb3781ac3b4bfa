//! Individualization–refinement search for canonical labelling and `|Aut(G)|`.
//!
//! The search tree is rooted at the coarsest equitable ordered partition.
//! Each node individualizes one vertex of the first non-singleton cell and
//! refines again; leaves are discrete partitions, i.e. labellings. A leaf's
//! certificate is the sorted edge list of the relabelled graph and the
//! canonical form is the smallest certificate seen. Leaves whose certificate
//! equals the first or best leaf yield automorphisms, which prune sibling
//! subtrees lying in one orbit. The group order is the product, over the
//! levels of the first path, of the orbit size of the first-path child under
//! automorphisms fixing that level's prefix.

use std::collections::VecDeque;

use num_bigint::BigUint;
use serde::Serialize;

use super::Permutation;
use crate::error::{Error, Result};
use crate::graph::LabelledGraph;

/// Search nodes visited before giving up with `ResourceLimit`.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub n: usize,
    /// Edges `(u, v)`, `u < v`, of the canonical relabelling, sorted.
    pub canonical_edge_list: Vec<(usize, usize)>,
    #[serde(serialize_with = "serialize_biguint")]
    pub aut_size: BigUint,
    /// Maps each input vertex to its canonical label.
    #[serde(skip)]
    pub labelling: Permutation,
}

fn serialize_biguint<S: serde::Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl CanonicalForm {
    pub fn to_graph(&self) -> LabelledGraph {
        LabelledGraph::from_edges(self.n, self.canonical_edge_list.iter().copied())
            .expect("canonical edges are valid")
    }
}

pub fn canonical_form(g: &LabelledGraph) -> Result<CanonicalForm> {
    canonical_form_with_budget(g, DEFAULT_NODE_BUDGET)
}

pub fn canonical_form_with_budget(g: &LabelledGraph, budget: u64) -> Result<CanonicalForm> {
    let n = g.n();
    let adj: Vec<Vec<u32>> = (1..=n)
        .map(|u| g.neighbors(u).iter().map(|&v| v - 1).collect())
        .collect();
    let mut search = Search {
        adj: &adj,
        n,
        budget,
        nodes: 0,
        first: None,
        best: None,
        generators: Vec::new(),
        orbit_sizes: Vec::new(),
    };
    let mut root = Partition::unit(n);
    if n > 0 {
        root.refine(&adj, vec![0]);
    }
    let mut prefix = Vec::new();
    search.explore(root, &mut prefix, true)?;

    let best = search.best.expect("search reaches a leaf");
    let canonical_edge_list = best
        .cert
        .iter()
        .map(|&code| ((code >> 32) as usize + 1, (code & 0xffff_ffff) as usize + 1))
        .collect();
    let aut_size = search
        .orbit_sizes
        .iter()
        .fold(BigUint::from(1u32), |acc, &k| acc * BigUint::from(k));
    Ok(CanonicalForm {
        n,
        canonical_edge_list,
        aut_size,
        labelling: Permutation::from_zero_based(best.pos),
    })
}

/// Ordered partition of `0..n`. A cell is identified by its start index.
#[derive(Clone)]
struct Partition {
    elems: Vec<u32>,
    pos: Vec<u32>,
    /// `cell_of[v]`: start index of the cell holding `v`.
    cell_of: Vec<u32>,
    /// `cell_end[s]`: one past the end of the cell starting at `s`.
    cell_end: Vec<u32>,
    cells: usize,
}

impl Partition {
    fn unit(n: usize) -> Self {
        let mut cell_end = vec![0; n];
        if n > 0 {
            cell_end[0] = n as u32;
        }
        Self {
            elems: (0..n as u32).collect(),
            pos: (0..n as u32).collect(),
            cell_of: vec![0; n],
            cell_end,
            cells: usize::from(n > 0),
        }
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.elems.len()
    }

    fn first_nonsingleton(&self) -> Option<usize> {
        let mut s = 0;
        while s < self.elems.len() {
            let e = self.cell_end[s] as usize;
            if e - s > 1 {
                return Some(s);
            }
            s = e;
        }
        None
    }

    fn swap_to(&mut self, v: u32, target: usize) {
        let from = self.pos[v as usize] as usize;
        let other = self.elems[target];
        self.elems.swap(from, target);
        self.pos[other as usize] = from as u32;
        self.pos[v as usize] = target as u32;
    }

    /// Splits `v` off the front of its cell; returns the new singleton's start.
    fn individualize(&mut self, v: u32) -> usize {
        let s = self.cell_of[v as usize] as usize;
        let e = self.cell_end[s] as usize;
        debug_assert!(e - s > 1);
        self.swap_to(v, s);
        self.cell_end[s] = s as u32 + 1;
        self.cell_end[s + 1] = e as u32;
        for i in s + 1..e {
            self.cell_of[self.elems[i] as usize] = s as u32 + 1;
        }
        self.cells += 1;
        s
    }

    /// Refines to the coarsest equitable partition finer than `self`,
    /// starting from the given splitter cells.
    fn refine(&mut self, adj: &[Vec<u32>], splitters: Vec<usize>) {
        let n = self.elems.len();
        let mut queued = vec![false; n];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for s in splitters {
            queued[s] = true;
            queue.push_back(s);
        }
        let mut count = vec![0u32; n];
        let mut touched: Vec<u32> = Vec::new();
        while let Some(w) = queue.pop_front() {
            queued[w] = false;
            if self.is_discrete() {
                break;
            }
            for i in w..self.cell_end[w] as usize {
                for &y in &adj[self.elems[i] as usize] {
                    if count[y as usize] == 0 {
                        touched.push(y);
                    }
                    count[y as usize] += 1;
                }
            }
            touched.sort_unstable_by_key(|&y| (self.cell_of[y as usize], count[y as usize]));
            let mut i = 0;
            while i < touched.len() {
                let c = self.cell_of[touched[i] as usize] as usize;
                let mut j = i;
                while j < touched.len() && self.cell_of[touched[j] as usize] as usize == c {
                    j += 1;
                }
                self.split_cell(c, &touched[i..j], &count, &mut queue, &mut queued);
                i = j;
            }
            for &y in &touched {
                count[y as usize] = 0;
            }
            touched.clear();
        }
    }

    /// Splits cell `c` by neighbour count; `group` holds the touched members
    /// sorted by ascending count. Untouched members stay first.
    fn split_cell(
        &mut self,
        c: usize,
        group: &[u32],
        count: &[u32],
        queue: &mut VecDeque<usize>,
        queued: &mut [bool],
    ) {
        let e = self.cell_end[c] as usize;
        let size = e - c;
        if size == 1 {
            return;
        }
        let lo = count[group[0] as usize];
        let hi = count[group[group.len() - 1] as usize];
        if group.len() == size && lo == hi {
            return;
        }
        let tail = e - group.len();
        for (j, &y) in group.iter().enumerate() {
            self.swap_to(y, e - 1 - j);
        }
        for (j, &y) in group.iter().enumerate() {
            self.elems[tail + j] = y;
            self.pos[y as usize] = (tail + j) as u32;
        }

        let mut pieces: Vec<(usize, usize)> = Vec::new();
        if tail > c {
            pieces.push((c, tail));
        }
        let mut s = tail;
        while s < e {
            let k = count[self.elems[s] as usize];
            let mut t = s;
            while t < e && count[self.elems[t] as usize] == k {
                t += 1;
            }
            pieces.push((s, t));
            s = t;
        }
        for &(s, t) in &pieces {
            self.cell_end[s] = t as u32;
            for i in s..t {
                self.cell_of[self.elems[i] as usize] = s as u32;
            }
        }
        self.cells += pieces.len() - 1;

        if queued[c] {
            for &(s, _) in &pieces[1..] {
                queued[s] = true;
                queue.push_back(s);
            }
        } else {
            let largest = pieces.iter().enumerate().fold(0, |best, (i, &(s, t))| {
                let (bs, bt) = pieces[best];
                if t - s > bt - bs {
                    i
                } else {
                    best
                }
            });
            for (i, &(s, _)) in pieces.iter().enumerate() {
                if i != largest {
                    queued[s] = true;
                    queue.push_back(s);
                }
            }
        }
    }
}

struct Leaf {
    /// Vertex → canonical position.
    pos: Vec<u32>,
    /// Position → vertex.
    elems: Vec<u32>,
    cert: Vec<u64>,
}

impl Leaf {
    fn new(part: &Partition, adj: &[Vec<u32>]) -> Self {
        let pos = part.pos.clone();
        let mut cert = Vec::with_capacity(adj.iter().map(Vec::len).sum::<usize>() / 2);
        for (u, nbrs) in adj.iter().enumerate() {
            let pu = pos[u] as u64;
            for &v in nbrs {
                let pv = pos[v as usize] as u64;
                if pu < pv {
                    cert.push(pu << 32 | pv);
                }
            }
        }
        cert.sort_unstable();
        Self {
            pos,
            elems: part.elems.clone(),
            cert,
        }
    }

    /// The automorphism `v ↦ self⁻¹(other(v))`, valid when certificates match.
    fn automorphism_to(&self, other: &Leaf) -> Vec<u32> {
        other.pos.iter().map(|&p| self.elems[p as usize]).collect()
    }
}

enum Found {
    Nothing,
    /// A leaf equivalent to the first leaf; unwind to the first path.
    Automorphism,
}

struct Search<'a> {
    adj: &'a [Vec<u32>],
    n: usize,
    budget: u64,
    nodes: u64,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<u32>>,
    orbit_sizes: Vec<u64>,
}

impl Search<'_> {
    fn explore(
        &mut self,
        part: Partition,
        prefix: &mut Vec<u32>,
        first_path: bool,
    ) -> Result<Found> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::ResourceLimit {
                budget: self.budget,
            });
        }
        let Some(target) = part.first_nonsingleton() else {
            return Ok(self.visit_leaf(&part));
        };
        let mut children: Vec<u32> = part.elems[target..part.cell_end[target] as usize].to_vec();
        children.sort_unstable();

        let mut explored: Vec<u32> = Vec::new();
        for (i, &w) in children.iter().enumerate() {
            if i > 0 && self.same_orbit_as_any(prefix, &explored, w) {
                continue;
            }
            let mut child = part.clone();
            let s = child.individualize(w);
            child.refine(self.adj, vec![s]);
            prefix.push(w);
            let found = self.explore(child, prefix, first_path && i == 0);
            prefix.pop();
            explored.push(w);
            if let Found::Automorphism = found? {
                if !first_path {
                    return Ok(Found::Automorphism);
                }
            }
        }
        if first_path {
            let orbit = self.orbit_size(prefix, children[0]);
            self.orbit_sizes.push(orbit);
        }
        Ok(Found::Nothing)
    }

    fn visit_leaf(&mut self, part: &Partition) -> Found {
        let leaf = Leaf::new(part, self.adj);
        let Some(first) = &self.first else {
            self.first = Some(Leaf {
                pos: leaf.pos.clone(),
                elems: leaf.elems.clone(),
                cert: leaf.cert.clone(),
            });
            self.best = Some(leaf);
            return Found::Nothing;
        };
        if leaf.cert == first.cert {
            self.generators.push(first.automorphism_to(&leaf));
            return Found::Automorphism;
        }
        let best = self.best.as_ref().expect("best set with first");
        match leaf.cert.cmp(&best.cert) {
            std::cmp::Ordering::Less => self.best = Some(leaf),
            std::cmp::Ordering::Equal => {
                self.generators.push(best.automorphism_to(&leaf));
            }
            std::cmp::Ordering::Greater => {}
        }
        Found::Nothing
    }

    fn stabilizer_orbits(&self, prefix: &[u32]) -> Option<UnionFind> {
        let mut uf: Option<UnionFind> = None;
        for gen in &self.generators {
            if prefix.iter().all(|&v| gen[v as usize] == v) {
                let uf = uf.get_or_insert_with(|| UnionFind::new(self.n));
                for (v, &x) in gen.iter().enumerate() {
                    uf.union(v as u32, x);
                }
            }
        }
        uf
    }

    fn same_orbit_as_any(&self, prefix: &[u32], explored: &[u32], w: u32) -> bool {
        let Some(mut uf) = self.stabilizer_orbits(prefix) else {
            return false;
        };
        let rw = uf.find(w);
        explored.iter().any(|&x| uf.find(x) == rw)
    }

    fn orbit_size(&self, prefix: &[u32], v: u32) -> u64 {
        let Some(mut uf) = self.stabilizer_orbits(prefix) else {
            return 1;
        };
        let r = uf.find(v);
        (0..self.n as u32).filter(|&x| uf.find(x) == r).count() as u64
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{sample_er, sample_sw, ModelParams};
    use crate::rng::{rng_from_seed, uniform};
    use crate::symmetry::{aut_size_enumeration, for_each_permutation};
    use std::collections::HashSet;

    fn random_relabel(g: &LabelledGraph, seed: u64) -> LabelledGraph {
        let n = g.n();
        let mut rng = rng_from_seed(seed);
        let mut images: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            let j = (uniform(&mut rng) * (i + 1) as f64) as usize;
            images.swap(i, j);
        }
        g.relabel(&Permutation::from_images(images).unwrap())
            .unwrap()
    }

    #[test]
    fn known_groups() {
        let cases = [
            (LabelledGraph::cycle(5), 10u64),
            (LabelledGraph::cycle(12), 24),
            (LabelledGraph::complete(4), 24),
            (LabelledGraph::complete(7), 5040),
            (LabelledGraph::empty(6), 720),
            (LabelledGraph::empty(1), 1),
            (LabelledGraph::empty(0), 1),
        ];
        for (g, want) in cases {
            assert_eq!(canonical_form(&g).unwrap().aut_size, BigUint::from(want));
        }
        let c300 = canonical_form(&LabelledGraph::cycle(300)).unwrap();
        assert_eq!(c300.aut_size, BigUint::from(600u32));
    }

    #[test]
    fn petersen_graph() {
        let outer = (0..5).map(|i| (i + 1, (i + 1) % 5 + 1));
        let spokes = (0..5).map(|i| (i + 1, i + 6));
        let inner = (0..5).map(|i| (i + 6, (i + 2) % 5 + 6));
        let g = LabelledGraph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap();
        assert_eq!(canonical_form(&g).unwrap().aut_size, BigUint::from(120u32));
    }

    #[test]
    fn three_vertex_graphs_have_four_forms() {
        let pairs = [(1, 2), (1, 3), (2, 3)];
        let mut forms = HashSet::new();
        for mask in 0..8 {
            let edges = (0..3).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]);
            let g = LabelledGraph::from_edges(3, edges).unwrap();
            forms.insert(canonical_form(&g).unwrap().canonical_edge_list);
        }
        assert_eq!(forms.len(), 4);
    }

    #[test]
    fn matches_enumeration_on_small_random_graphs() {
        for seed in 0..200 {
            let n = 3 + (seed % 6) as usize;
            let p = [0.2, 0.4, 0.5, 0.7][(seed % 4) as usize];
            let g = sample_er(n, p, seed).unwrap();
            let cf = canonical_form(&g).unwrap();
            assert_eq!(
                cf.aut_size,
                BigUint::from(aut_size_enumeration(&g).unwrap()),
                "seed {seed}"
            );
            assert_eq!(g.relabel(&cf.labelling).unwrap(), cf.to_graph());
        }
    }

    #[test]
    fn form_is_invariant_under_every_relabelling() {
        let g = sample_er(6, 0.5, 3).unwrap();
        let want = canonical_form(&g).unwrap().canonical_edge_list;
        for_each_permutation(6, |perm| {
            let pi = Permutation::from_zero_based(perm.to_vec());
            let h = g.relabel(&pi).unwrap();
            assert_eq!(canonical_form(&h).unwrap().canonical_edge_list, want);
        });
    }

    #[test]
    fn non_isomorphic_graphs_get_distinct_forms() {
        // all graphs on 5 vertices: 34 isomorphism classes
        let pairs: Vec<(usize, usize)> = (1..=5)
            .flat_map(|u| (u + 1..=5).map(move |v| (u, v)))
            .collect();
        let mut forms = HashSet::new();
        for mask in 0u32..1 << 10 {
            let edges = (0..10).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]);
            let g = LabelledGraph::from_edges(5, edges).unwrap();
            forms.insert(canonical_form(&g).unwrap().canonical_edge_list);
        }
        assert_eq!(forms.len(), 34);
    }

    #[test]
    fn large_sample_is_relabelling_invariant() {
        let params = ModelParams::new(2000, 0.5, 5.0).unwrap();
        let g = sample_sw(&params, 11);
        let h = random_relabel(&g, 99);
        let (cg, ch) = (canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
        assert_eq!(cg.canonical_edge_list, ch.canonical_edge_list);
        assert_eq!(cg.aut_size, ch.aut_size);
    }

    #[test]
    fn regular_graphs_are_relabelling_invariant() {
        // circulant C_30(1, 4) and a shuffled copy
        let edges = (0..30).flat_map(|i| [(i, (i + 1) % 30), (i, (i + 4) % 30)]);
        let edges: Vec<_> = edges
            .map(|(u, v): (usize, usize)| (u.min(v) + 1, u.max(v) + 1))
            .collect();
        let g = LabelledGraph::from_edges(30, edges).unwrap();
        let h = random_relabel(&g, 5);
        let (cg, ch) = (canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
        assert_eq!(cg.canonical_edge_list, ch.canonical_edge_list);
        assert_eq!(cg.aut_size, BigUint::from(60u32));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let g = LabelledGraph::empty(12);
        assert!(matches!(
            canonical_form_with_budget(&g, 5),
            Err(Error::ResourceLimit { budget: 5 })
        ));
    }
}
