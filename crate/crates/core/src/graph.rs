//! Simple undirected graphs on at most 64 vertices, one adjacency word per row.

use std::fmt;

use thiserror::Error;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph order {0} exceeds the {MAX_VERTICES}-vertex cap")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
}

/// A simple undirected graph with vertices `0..n`.
///
/// Row `v` of the adjacency table is a bitmask of the neighbours of `v`. The
/// table is kept symmetric and irreflexive by every mutating method.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

#[inline]
pub(crate) fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Mask with the low `n` bits set.
#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bits of a word, lowest first.
#[derive(Clone, Copy)]
pub struct Bits(pub u64);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let v = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(v)
        }
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for v in 0..n {
            g.adj[v] = low_mask(n) & !bit(v);
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from raw adjacency rows, symmetrising and dropping loops.
    pub(crate) fn from_rows(rows: Vec<u64>) -> Self {
        let n = rows.len();
        let mut g = Graph { n, adj: rows };
        let m = low_mask(n);
        for v in 0..n {
            g.adj[v] &= m & !bit(v);
        }
        for v in 0..n {
            for w in Bits(g.adj[v]) {
                g.adj[w] |= bit(v);
            }
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    /// Bitmask of all vertices.
    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        low_mask(self.n)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & bit(v) != 0
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.add_edge(u, v);
        Ok(())
    }

    /// Adds `uv`. Panics in debug builds on a loop or out-of-range vertex.
    #[inline]
    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
    }

    #[inline]
    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !bit(v);
        self.adj[v] &= !bit(u);
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in Bits(self.adj[u] & !low_mask(u + 1)) {
                out.push((u, v));
            }
        }
        out
    }

    /// Non-adjacent pairs `(u, v)` with `u < v`.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            let miss = !self.adj[u] & self.vertex_mask() & !low_mask(u + 1);
            for v in Bits(miss) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn isolated_vertices(&self) -> usize {
        self.adj.iter().filter(|&&r| r == 0).count()
    }

    /// The subgraph induced by the vertices in `keep`, relabelled in increasing order.
    pub fn induced(&self, keep: u64) -> Graph {
        let keep = keep & self.vertex_mask();
        let verts: Vec<usize> = Bits(keep).collect();
        let mut rows = vec![0u64; verts.len()];
        for (i, &v) in verts.iter().enumerate() {
            for (j, &w) in verts.iter().enumerate() {
                if self.has_edge(v, w) {
                    rows[i] |= bit(j);
                }
            }
        }
        Graph {
            n: verts.len(),
            adj: rows,
        }
    }

    /// `G - v`, with vertices above `v` shifted down by one.
    pub fn remove_vertex(&self, v: usize) -> Graph {
        self.induced(self.vertex_mask() & !bit(v))
    }

    /// `G - uv`.
    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        g.remove_edge(u, v);
        g
    }

    /// `G` with one new vertex `n` adjacent to `nbrs`.
    pub fn with_vertex(&self, nbrs: u64) -> Result<Graph, GraphError> {
        if self.n + 1 > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(self.n + 1));
        }
        let nbrs = nbrs & self.vertex_mask();
        let mut adj = self.adj.clone();
        for w in Bits(nbrs) {
            adj[w] |= bit(self.n);
        }
        adj.push(nbrs);
        Ok(Graph { n: self.n + 1, adj })
    }

    /// Relabels so that vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        debug_assert_eq!(perm.len(), self.n);
        let mut rows = vec![0u64; self.n];
        for v in 0..self.n {
            let mut r = 0u64;
            for w in Bits(self.adj[v]) {
                r |= bit(perm[w]);
            }
            rows[perm[v]] = r;
        }
        Graph { n: self.n, adj: rows }
    }

    /// Replaces the neighbourhood of `v` by `nbrs` (loops are dropped).
    pub fn set_neighborhood(&mut self, v: usize, nbrs: u64) {
        let nbrs = nbrs & self.vertex_mask() & !bit(v);
        for w in Bits(self.adj[v]) {
            self.adj[w] &= !bit(v);
        }
        self.adj[v] = nbrs;
        for w in Bits(nbrs) {
            self.adj[w] |= bit(v);
        }
    }

    /// Whether `set` is pairwise non-adjacent.
    pub fn is_independent(&self, set: u64) -> bool {
        Bits(set).all(|v| self.adj[v] & set == 0)
    }

    /// Whether `set` is pairwise adjacent.
    pub fn is_clique(&self, set: u64) -> bool {
        Bits(set).all(|v| (self.adj[v] | bit(v)) & set == set)
    }

    /// Size of a largest clique, by simple branch and bound.
    pub fn clique_number(&self) -> usize {
        fn grow(g: &Graph, size: usize, cand: u64, best: &mut usize) {
            if cand == 0 {
                *best = (*best).max(size);
                return;
            }
            if size + cand.count_ones() as usize <= *best {
                return;
            }
            let mut rest = cand;
            while rest != 0 {
                if size + rest.count_ones() as usize <= *best {
                    return;
                }
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                grow(g, size + 1, rest & g.adj[v], best);
            }
            *best = (*best).max(size);
        }
        let mut best = 0;
        grow(self, 0, self.vertex_mask(), &mut best);
        best
    }

    /// Whether the graph is connected (the null graph counts as connected).
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0;
            for v in Bits(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == self.vertex_mask()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}
