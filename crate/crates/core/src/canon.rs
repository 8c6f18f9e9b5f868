//! Canonical labelling by equitable refinement and individualization.
//!
//! The search tree is the usual one: refine an ordered partition to an
//! equitable one, then branch on every vertex of the first smallest
//! non-singleton cell. Leaves are discrete partitions, i.e. orderings of the
//! vertices. The canonical form is the lexicographically largest relabelled
//! adjacency table over all leaves. Two leaves with the same relabelled
//! graph differ by an automorphism; these automorphisms prune sibling
//! branches, and the orbit sizes along the leftmost path give `|Aut(G)|`
//! via the orbit-stabiliser theorem.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::One;

use crate::graph::{bit, Bits, Graph};
use crate::graph6::emit_graph6;

/// An isomorphism-invariant certificate plus the automorphism group order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    /// graph6 bytes of the canonically relabelled graph.
    pub bytes: Vec<u8>,
    pub aut_order: BigUint,
}

impl CanonicalForm {
    pub fn graph6(&self) -> &str {
        std::str::from_utf8(&self.bytes).expect("graph6 is ASCII")
    }
}

/// Everything the canonical search learns about a graph.
#[derive(Debug, Clone)]
pub struct Canon {
    pub form: CanonicalForm,
    /// `labeling[v]` is the position of `v` in the canonical order.
    pub labeling: Vec<usize>,
    /// The canonically relabelled graph.
    pub graph: Graph,
    /// `orbits[v]` is the least vertex in the automorphism orbit of `v`.
    pub orbits: Vec<usize>,
    /// Automorphisms found during the search; they generate `Aut(G)`.
    pub generators: Vec<Vec<usize>>,
}

pub fn canonical(g: &Graph) -> CanonicalForm {
    canon(g).form
}

/// Canonical form of `g` together with labelling, orbits and generators.
pub fn canon(g: &Graph) -> Canon {
    let n = g.n();
    if n == 0 {
        return Canon {
            form: CanonicalForm {
                bytes: emit_graph6(g).into_bytes(),
                aut_order: BigUint::one(),
            },
            labeling: Vec::new(),
            graph: g.clone(),
            orbits: Vec::new(),
            generators: Vec::new(),
        };
    }
    let mut search = Search {
        g,
        first: None,
        best: None,
        first_path: Vec::new(),
        first_cells: Vec::new(),
        generators: Vec::new(),
    };
    let mut path = Vec::with_capacity(n);
    search.dfs(vec![g.vertex_mask()], g.vertex_mask(), &mut path);

    let mut aut_order = BigUint::one();
    for (level, &v) in search.first_path.iter().enumerate() {
        let fixing: Vec<&Vec<usize>> = search
            .generators
            .iter()
            .filter(|p| search.first_path[..level].iter().all(|&u| p[u] == u))
            .collect();
        let orbit_id = orbit_ids(n, fixing.iter().copied());
        let size = Bits(search.first_cells[level])
            .filter(|&w| orbit_id[w] == orbit_id[v])
            .count();
        aut_order *= BigUint::from(size);
    }
    let orbits = orbit_ids(n, search.generators.iter());
    let (best_graph, labeling) = search.best.take().expect("search visits a leaf");
    Canon {
        form: CanonicalForm {
            bytes: emit_graph6(&best_graph).into_bytes(),
            aut_order,
        },
        labeling,
        graph: best_graph,
        orbits,
        generators: search.generators,
    }
}

/// Union-find orbits; each vertex maps to the least vertex of its orbit.
fn orbit_ids<'a>(n: usize, gens: impl Iterator<Item = &'a Vec<usize>>) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for perm in gens {
        for (v, &w) in perm.iter().enumerate() {
            let a = find(&mut parent, v);
            let b = find(&mut parent, w);
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

/// Refines an ordered partition (cells as bitmasks) to the coarsest
/// equitable refinement reachable from the given splitters. Split cells are
/// ordered by ascending neighbour count into the splitter, so the result is
/// labelling invariant.
pub(crate) fn refine(g: &Graph, cells: &mut Vec<u64>, splitters: Vec<u64>) {
    let n = g.n();
    let mut queue: VecDeque<u64> = splitters.into();
    let mut groups: Vec<(u32, u64)> = Vec::new();
    while let Some(splitter) = queue.pop_front() {
        if cells.len() == n {
            return;
        }
        let mut i = 0;
        while i < cells.len() {
            let cell = cells[i];
            if cell.count_ones() == 1 {
                i += 1;
                continue;
            }
            groups.clear();
            for v in Bits(cell) {
                let c = (g.neighbors(v) & splitter).count_ones();
                match groups.iter_mut().find(|(k, _)| *k == c) {
                    Some((_, m)) => *m |= bit(v),
                    None => groups.push((c, bit(v))),
                }
            }
            if groups.len() == 1 {
                i += 1;
                continue;
            }
            groups.sort_unstable_by_key(|&(c, _)| c);
            let parts = groups.len();
            cells.splice(i..=i, groups.iter().map(|&(_, m)| m));
            queue.extend(groups.iter().map(|&(_, m)| m));
            i += parts;
        }
    }
}

struct Search<'a> {
    g: &'a Graph,
    /// Relabelled graph and labelling of the first leaf.
    first: Option<(Graph, Vec<usize>)>,
    best: Option<(Graph, Vec<usize>)>,
    first_path: Vec<usize>,
    /// Target cell at each level of the first path.
    first_cells: Vec<u64>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Returns `Some(level)` to abandon the branch taken at depth `level`.
    fn dfs(&mut self, mut cells: Vec<u64>, splitter: u64, path: &mut Vec<usize>) -> Option<usize> {
        refine(self.g, &mut cells, vec![splitter]);
        if cells.len() == self.g.n() {
            return self.leaf(&cells, path);
        }
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.count_ones() > 1)
            .min_by_key(|&(i, c)| (c.count_ones(), i))
            .map(|(i, &c)| (i, c))
            .expect("non-discrete partition has a non-singleton cell");
        let (ti, tcell) = target;
        let depth = path.len();
        if self.first.is_none() {
            self.first_cells.push(tcell);
        }

        let mut explored = 0u64;
        for w in Bits(tcell) {
            if explored != 0 && self.in_known_orbit(path, w, explored) {
                continue;
            }
            explored |= bit(w);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..ti]);
            child.push(bit(w));
            child.push(tcell & !bit(w));
            child.extend_from_slice(&cells[ti + 1..]);
            path.push(w);
            let jump = self.dfs(child, bit(w), path);
            path.pop();
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    fn in_known_orbit(&self, path: &[usize], w: usize, explored: u64) -> bool {
        let fixing = self
            .generators
            .iter()
            .filter(|p| path.iter().all(|&u| p[u] == u));
        let ids = orbit_ids(self.g.n(), fixing);
        Bits(explored).any(|x| ids[x] == ids[w])
    }

    fn leaf(&mut self, cells: &[u64], path: &[usize]) -> Option<usize> {
        let n = self.g.n();
        let mut labeling = vec![0usize; n];
        for (pos, &c) in cells.iter().enumerate() {
            labeling[c.trailing_zeros() as usize] = pos;
        }
        let relabelled = self.g.permute(&labeling);

        let Some((first_graph, first_lab)) = &self.first else {
            self.first = Some((relabelled.clone(), labeling.clone()));
            self.best = Some((relabelled, labeling));
            self.first_path = path.to_vec();
            return None;
        };
        if relabelled == *first_graph {
            let gamma = automorphism(first_lab, &labeling);
            self.push_generator(gamma);
            let level = path
                .iter()
                .zip(&self.first_path)
                .position(|(a, b)| a != b)
                .expect("distinct leaves differ somewhere on their paths");
            return Some(level);
        }
        let (best_graph, best_lab) = self.best.as_ref().expect("set with first");
        match relabelled.rows().cmp(best_graph.rows()) {
            std::cmp::Ordering::Greater => self.best = Some((relabelled, labeling)),
            std::cmp::Ordering::Equal => {
                let gamma = automorphism(best_lab, &labeling);
                self.push_generator(gamma);
            }
            std::cmp::Ordering::Less => {}
        }
        None
    }

    fn push_generator(&mut self, gamma: Vec<usize>) {
        if gamma.iter().enumerate().any(|(v, &w)| v != w) && !self.generators.contains(&gamma) {
            self.generators.push(gamma);
        }
    }
}

/// The permutation taking the leaf labelled `from` onto the leaf labelled `to`.
fn automorphism(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut inv_to = vec![0usize; to.len()];
    for (v, &p) in to.iter().enumerate() {
        inv_to[p] = v;
    }
    from.iter().map(|&p| inv_to[p]).collect()
}

/// Whether two graphs are isomorphic, by comparing certificates.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n() && a.edge_count() == b.edge_count() && canonical(a).bytes == canonical(b).bytes
}
