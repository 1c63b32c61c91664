//! Canonical labelling and isomorphism-class enumeration for small graphs.
//!
//! The canonical form is the minimum adjacency code over the leaves of an
//! individualization-refinement search tree. The leaf set depends only on the
//! isomorphism class, so the result is a complete invariant.

use std::collections::HashSet;

use crate::error::{check_limit, Result};
use crate::graph::Graph;

/// Largest vertex count the canonical code can hold (upper triangle in a u128).
pub const MAX_CANON_N: usize = 16;

/// Default size limit for the exact path.
pub const DEFAULT_CANON_LIMIT: usize = 8;

/// Compact graph: bit j of `rows[i]` is the edge {i, j}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    pub n: u8,
    pub rows: [u16; MAX_CANON_N],
}

impl SmallGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_CANON_N);
        SmallGraph {
            n: n as u8,
            rows: [0; MAX_CANON_N],
        }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut s = SmallGraph::empty(g.n());
        for (a, b) in g.edges() {
            s.add_edge(a, b);
        }
        s
    }

    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::empty(self.n as usize);
        for (a, b) in self.edges() {
            g.add_edge(a, b);
        }
        g
    }

    #[inline]
    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.rows[a] |= 1 << b;
        self.rows[b] |= 1 << a;
    }

    #[inline]
    pub fn toggle_edge(&mut self, a: usize, b: usize) {
        self.rows[a] ^= 1 << b;
        self.rows[b] ^= 1 << a;
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n as usize;
        let mut out = Vec::new();
        for a in 0..n {
            let mut r = self.rows[a] >> (a + 1);
            let mut b = a + 1;
            while r != 0 {
                if r & 1 == 1 {
                    out.push((a, b));
                }
                r >>= 1;
                b += 1;
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        let n = self.n as usize;
        self.rows[..n].iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn local_complement(&self, a: usize) -> SmallGraph {
        let mut g = *self;
        let nb = self.rows[a];
        let mut r = nb;
        while r != 0 {
            let x = r.trailing_zeros() as usize;
            r &= r - 1;
            // complement row x restricted to N_a, excluding x itself
            g.rows[x] ^= nb & !(1 << x);
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n as usize;
        if n <= 1 {
            return true;
        }
        let full: u16 = if n == 16 { u16::MAX } else { (1 << n) - 1 };
        let mut seen: u16 = 1;
        let mut frontier: u16 = 1;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.rows[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == full
    }

    /// Adjacency code under a labelling: `pos[v]` is the new label of v.
    /// Bits are laid out row-major over pairs (i, j), i < j, first pair most
    /// significant.
    fn code_under(&self, pos: &[u8]) -> u128 {
        let n = self.n as usize;
        let mut inv = [0u8; MAX_CANON_N];
        for v in 0..n {
            inv[pos[v] as usize] = v as u8;
        }
        let mut code: u128 = 0;
        for i in 0..n {
            let vi = inv[i] as usize;
            for j in i + 1..n {
                let vj = inv[j] as usize;
                code = (code << 1) | ((self.rows[vi] >> vj) & 1) as u128;
            }
        }
        code
    }

    pub fn from_code(n: usize, code: u128) -> SmallGraph {
        let mut g = SmallGraph::empty(n);
        let total = n * n.saturating_sub(1) / 2;
        let mut k = total;
        for i in 0..n {
            for j in i + 1..n {
                k -= 1;
                if (code >> k) & 1 == 1 {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }
}

/// Ordered partition of the vertices, as a list of cells.
type Partition = Vec<Vec<u8>>;

fn refine(g: &SmallGraph, mut p: Partition) -> Partition {
    loop {
        let n = g.n as usize;
        let mut cell_of = [0usize; MAX_CANON_N];
        for (k, cell) in p.iter().enumerate() {
            for &v in cell {
                cell_of[v as usize] = k;
            }
        }
        let ncells = p.len();
        let mut next: Partition = Vec::with_capacity(n);
        for cell in &p {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            // signature: neighbor counts into each cell
            let mut sig: Vec<(Vec<u8>, u8)> = cell
                .iter()
                .map(|&v| {
                    let mut s = vec![0u8; ncells];
                    let mut r = g.rows[v as usize];
                    while r != 0 {
                        let w = r.trailing_zeros() as usize;
                        r &= r - 1;
                        s[cell_of[w]] += 1;
                    }
                    (s, v)
                })
                .collect();
            sig.sort();
            let mut start = 0;
            for i in 1..=sig.len() {
                if i == sig.len() || sig[i].0 != sig[start].0 {
                    next.push(sig[start..i].iter().map(|x| x.1).collect());
                    start = i;
                }
            }
        }
        let changed = next.len() > ncells;
        p = next;
        if !changed {
            return p;
        }
    }
}

struct Search<'a> {
    g: &'a SmallGraph,
    best: Option<u128>,
}

impl Search<'_> {
    fn run(&mut self, p: Partition) {
        let n = self.g.n as usize;
        if p.len() == n {
            let mut pos = [0u8; MAX_CANON_N];
            for (k, cell) in p.iter().enumerate() {
                pos[cell[0] as usize] = k as u8;
            }
            let c = self.g.code_under(&pos[..n]);
            if self.best.is_none_or(|b| c < b) {
                self.best = Some(c);
            }
            return;
        }
        let (target, cell) = p
            .iter()
            .enumerate()
            .find(|(_, c)| c.len() > 1)
            .map(|(k, c)| (k, c.clone()))
            .expect("non-discrete partition has a non-singleton cell");
        let mut tried: Vec<u8> = Vec::new();
        for &v in &cell {
            // A transposition of twins is an automorphism fixing every
            // individualized vertex, so its subtree repeats one already seen.
            if tried.iter().any(|&u| self.twins(u, v)) {
                continue;
            }
            tried.push(v);
            let mut q: Partition = Vec::with_capacity(p.len() + 1);
            for (k, c) in p.iter().enumerate() {
                if k == target {
                    q.push(vec![v]);
                    q.push(c.iter().copied().filter(|&x| x != v).collect());
                } else {
                    q.push(c.clone());
                }
            }
            let q = refine(self.g, q);
            self.run(q);
        }
    }

    fn twins(&self, u: u8, v: u8) -> bool {
        let (u, v) = (u as usize, v as usize);
        let mask = !((1u16 << u) | (1u16 << v));
        (self.g.rows[u] & mask) == (self.g.rows[v] & mask)
    }
}

/// Canonical code of a small graph (n ≤ 16).
pub fn canonical_code(g: &SmallGraph) -> u128 {
    let n = g.n as usize;
    if n <= 1 {
        return 0;
    }
    let init: Partition = vec![(0..n as u8).collect()];
    let p = refine(g, init);
    let mut s = Search { g, best: None };
    s.run(p);
    s.best.expect("search reaches at least one leaf")
}

/// Canonical representative of the isomorphism class of `g`.
///
/// `canonical_form(π(g)) == canonical_form(g)` for every permutation π.
pub fn canonical_form(g: &Graph) -> Result<Graph> {
    canonical_form_with_limit(g, DEFAULT_CANON_LIMIT)
}

pub fn canonical_form_with_limit(g: &Graph, limit: usize) -> Result<Graph> {
    check_limit("vertex count", g.n(), limit.min(MAX_CANON_N))?;
    let s = SmallGraph::from_graph(g);
    Ok(SmallGraph::from_code(g.n(), canonical_code(&s)).to_graph())
}

/// One representative (by canonical code) of every isomorphism class of graphs
/// on `n` vertices, connected or not. Sorted by code.
pub fn all_graph_codes(n: usize) -> Result<Vec<u128>> {
    check_limit("vertex count", n, 10)?;
    let mut layer: Vec<u128> = vec![0];
    for m in 2..=n {
        let mut next: HashSet<u128> = HashSet::new();
        for &code in &layer {
            let base = SmallGraph::from_code(m - 1, code);
            for subset in 0u32..(1u32 << (m - 1)) {
                let mut h = base;
                h.n = m as u8;
                for b in 0..m - 1 {
                    if subset >> b & 1 == 1 {
                        h.add_edge(m - 1, b);
                    }
                }
                next.insert(canonical_code(&h));
            }
        }
        layer = next.into_iter().collect();
    }
    if n == 0 {
        return Ok(vec![0]);
    }
    layer.sort_unstable();
    Ok(layer)
}

/// Canonical codes of the connected isomorphism classes on `n` vertices.
pub fn connected_graph_codes(n: usize) -> Result<Vec<u128>> {
    check_limit("vertex count", n, DEFAULT_CANON_LIMIT)?;
    Ok(all_graph_codes(n)?
        .into_iter()
        .filter(|&c| SmallGraph::from_code(n, c).is_connected())
        .collect())
}

/// One representative per isomorphism class of connected graphs on `n` vertices.
pub fn enumerate_connected_graphs(n: usize) -> Result<Vec<Graph>> {
    Ok(connected_graph_codes(n)?
        .into_iter()
        .map(|c| SmallGraph::from_code(n, c).to_graph())
        .collect())
}
