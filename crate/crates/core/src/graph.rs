//! Simple undirected graphs and the transformations graph states are written in.

use std::collections::VecDeque;

use crate::error::{check_index, Error, Result};
use crate::f2::{BitMatrix, BitVec};

/// A vertex subset, identified with its indicator vector.
pub type VertexSet = BitVec;

/// Simple graph on vertices `0..n`, stored as a symmetric adjacency matrix with
/// zero diagonal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: BitMatrix,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

/// Result of [`Graph::two_coloring`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwoColoring {
    Colorable(VertexSet, VertexSet),
    /// Vertices of an odd cycle, in cyclic order.
    OddCycle(Vec<usize>),
}

impl TwoColoring {
    pub fn parts(&self) -> Option<(&VertexSet, &VertexSet)> {
        match self {
            TwoColoring::Colorable(a, b) => Some((a, b)),
            TwoColoring::OddCycle(_) => None,
        }
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: BitMatrix::zeros(n, n),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(a, b) in edges {
            check_index(a, n)?;
            check_index(b, n)?;
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {a}")));
            }
            g.add_edge(a, b);
        }
        Ok(g)
    }

    /// Build from an adjacency matrix, checking symmetry and the zero diagonal.
    pub fn from_adjacency(adj: BitMatrix) -> Result<Self> {
        let n = adj.nrows();
        if adj.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: adj.ncols(),
            });
        }
        for a in 0..n {
            if adj.get(a, a) {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {a}")));
            }
            for b in adj.row(a).iter_ones() {
                if !adj.get(b, a) {
                    return Err(Error::InvalidArgument(format!(
                        "adjacency not symmetric at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(Graph { adj })
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b);
            }
        }
        g
    }

    /// Star with center 0.
    pub fn star(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for b in 1..n {
            g.add_edge(0, b);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for a in 1..n {
            g.add_edge(a - 1, a);
        }
        g
    }

    pub fn ring(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n > 2 {
            g.add_edge(0, n - 1);
        }
        g
    }

    /// Rectangular lattice with `dims` side lengths; vertex index is row-major.
    pub fn lattice(dims: &[usize]) -> Self {
        let n: usize = dims.iter().product();
        let mut g = Graph::empty(n);
        let mut strides = vec![1usize; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        for v in 0..n {
            for (k, &d) in dims.iter().enumerate() {
                let coord = (v / strides[k]) % d;
                if coord + 1 < d {
                    g.add_edge(v, v + strides[k]);
                }
            }
        }
        g
    }

    /// The Petersen graph: outer 5-cycle 0..5, spokes i -- i+5, inner pentagram.
    pub fn petersen() -> Self {
        let mut g = Graph::empty(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(i, i + 5);
            g.add_edge(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.nrows()
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj.get(a, b)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert_ne!(a, b);
        self.adj.set(a, b, true);
        self.adj.set(b, a, true);
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.adj.set(a, b, false);
        self.adj.set(b, a, false);
    }

    #[inline]
    pub fn toggle_edge(&mut self, a: usize, b: usize) {
        assert_ne!(a, b);
        self.adj.toggle(a, b);
        self.adj.toggle(b, a);
    }

    /// N_a as an indicator vector.
    pub fn neighborhood(&self, a: usize) -> &VertexSet {
        self.adj.row(a)
    }

    pub fn neighbors(&self, a: usize) -> Vec<usize> {
        self.adj.row(a).iter_ones().collect()
    }

    pub fn degree(&self, a: usize) -> usize {
        self.adj.row(a).count_ones()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|a| self.degree(a)).max().unwrap_or(0)
    }

    pub fn is_isolated(&self, a: usize) -> bool {
        self.adj.row(a).is_zero()
    }

    /// Edges (a, b) with a < b in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n() {
            for b in self.adj.row(a).iter_ones() {
                if b > a {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n()).map(|a| self.degree(a)).sum::<usize>() / 2
    }

    /// Γ·U over F2.
    pub fn apply(&self, u: &VertexSet) -> VertexSet {
        self.adj.mul_vec(u)
    }

    /// τ_a in place: complement the subgraph induced on N_a.
    pub fn local_complement_in_place(&mut self, a: usize) {
        let nb = self.neighbors(a);
        for (i, &x) in nb.iter().enumerate() {
            for &y in &nb[i + 1..] {
                self.toggle_edge(x, y);
            }
        }
    }

    pub fn local_complement(&self, a: usize) -> Result<Graph> {
        check_index(a, self.n())?;
        let mut g = self.clone();
        g.local_complement_in_place(a);
        Ok(g)
    }

    /// Remove every edge at `a`, keeping the vertex.
    pub fn isolate(&mut self, a: usize) {
        for b in self.neighbors(a) {
            self.remove_edge(a, b);
        }
    }

    /// G ∖ a with the labels above `a` shifted down by one.
    pub fn delete_vertex(&self, a: usize) -> Result<Graph> {
        check_index(a, self.n())?;
        let keep: Vec<usize> = (0..self.n()).filter(|&v| v != a).collect();
        Ok(self.induced(&keep))
    }

    /// Induced subgraph on `vs`, relabelled 0..vs.len() in the given order.
    pub fn induced(&self, vs: &[usize]) -> Graph {
        Graph {
            adj: self.adj.submatrix(vs, vs),
        }
    }

    /// Relabel: vertex v of self becomes vertex perm[v].
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n());
        let mut g = Graph::empty(self.n());
        for (a, b) in self.edges() {
            g.add_edge(perm[a], perm[b]);
        }
        g
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n());
        for a in 0..self.n() {
            for b in a + 1..self.n() {
                if !self.has_edge(a, b) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for w in self.adj.row(v).iter_ones() {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        q.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// Shortest path from `a` to `b` as a vertex list, if any.
    pub fn shortest_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let n = self.n();
        let mut prev = vec![usize::MAX; n];
        prev[a] = a;
        let mut q = VecDeque::from([a]);
        while let Some(v) = q.pop_front() {
            if v == b {
                break;
            }
            for w in self.adj.row(v).iter_ones() {
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    q.push_back(w);
                }
            }
        }
        if prev[b] == usize::MAX {
            return None;
        }
        let mut path = vec![b];
        let mut v = b;
        while v != a {
            v = prev[v];
            path.push(v);
        }
        path.reverse();
        Some(path)
    }

    /// Proper two-coloring, or an odd cycle proving none exists.
    pub fn two_coloring(&self) -> TwoColoring {
        let n = self.n();
        let mut color = vec![u8::MAX; n];
        let mut parent = vec![usize::MAX; n];
        for s in 0..n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for w in self.adj.row(v).iter_ones() {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        parent[w] = v;
                        q.push_back(w);
                    } else if color[w] == color[v] {
                        return TwoColoring::OddCycle(odd_cycle(&parent, v, w));
                    }
                }
            }
        }
        let mut a = VertexSet::zeros(n);
        let mut b = VertexSet::zeros(n);
        for v in 0..n {
            if color[v] == 0 {
                a.set(v, true);
            } else {
                b.set(v, true);
            }
        }
        TwoColoring::Colorable(a, b)
    }

    pub fn is_two_colorable(&self) -> bool {
        matches!(self.two_coloring(), TwoColoring::Colorable(..))
    }

    /// Cut block Γ_AB: rows indexed by `rows`, columns by `cols`.
    pub fn cut_matrix(&self, rows: &[usize], cols: &[usize]) -> BitMatrix {
        self.adj.submatrix(rows, cols)
    }
}

// Walk both BFS-tree branches up to their meeting point; v and w are adjacent
// with equal colors, so the two branches have equal depth parity.
fn odd_cycle(parent: &[usize], v: usize, w: usize) -> Vec<usize> {
    let chain = |mut x: usize| {
        let mut c = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            c.push(x);
        }
        c
    };
    let cv = chain(v);
    let cw = chain(w);
    let lca = *cv.iter().find(|x| cw.contains(x)).expect("same BFS tree");
    let mut cycle: Vec<usize> = cv.iter().copied().take_while(|&x| x != lca).collect();
    cycle.push(lca);
    let tail: Vec<usize> = cw.iter().copied().take_while(|&x| x != lca).collect();
    cycle.extend(tail.into_iter().rev());
    cycle
}

/// Vertex set from a list of indices.
pub fn vertex_set(n: usize, idx: &[usize]) -> VertexSet {
    VertexSet::from_indices(n, idx)
}
