//! Chromatic number, colouring enumeration and colour-criticality.

use serde::Serialize;

use crate::count::{count_copies, for_each_embedding};
use crate::graph::{bit, Bits, Graph};
use crate::multipartite::{realize, PartSizes};

/// A proper colouring as a partition of the vertices into independent classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ColoringWitness {
    pub k: usize,
    pub classes: Vec<Vec<usize>>,
}

impl ColoringWitness {
    fn from_assignment(assign: &[usize], k: usize) -> Self {
        let mut classes = vec![Vec::new(); k];
        for (v, &c) in assign.iter().enumerate() {
            classes[c].push(v);
        }
        classes.retain(|c| !c.is_empty());
        ColoringWitness {
            k: classes.len(),
            classes,
        }
    }

    /// Whether this is a proper colouring of `g` partitioning its vertex set.
    pub fn is_proper_for(&self, g: &Graph) -> bool {
        let mut seen = 0u64;
        for class in &self.classes {
            let mask = class.iter().fold(0u64, |m, &v| m | bit(v));
            if class.is_empty() || mask & seen != 0 || !g.is_independent(mask) {
                return false;
            }
            seen |= mask;
        }
        seen == g.vertex_mask()
    }
}

/// Greedy largest-degree-first colouring, giving an upper bound.
fn greedy(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut classes: Vec<u64> = Vec::new();
    let mut assign = vec![0; g.n()];
    for v in order {
        let c = classes
            .iter()
            .position(|&m| m & g.neighbors(v) == 0)
            .unwrap_or_else(|| {
                classes.push(0);
                classes.len() - 1
            });
        classes[c] |= bit(v);
        assign[v] = c;
    }
    assign
}

/// A proper colouring with at most `k` colours, by DSATUR-ordered backtracking.
fn k_coloring(g: &Graph, k: usize) -> Option<Vec<usize>> {
    fn rec(g: &Graph, k: usize, classes: &mut Vec<u64>, assign: &mut [usize], uncolored: u64) -> bool {
        if uncolored == 0 {
            return true;
        }
        // most saturated vertex, then highest degree
        let v = Bits(uncolored)
            .max_by_key(|&v| {
                let sat = classes.iter().filter(|&&m| m & g.neighbors(v) != 0).count();
                (sat, (g.neighbors(v) & uncolored).count_ones(), std::cmp::Reverse(v))
            })
            .expect("uncolored is nonempty");
        let used = classes.len();
        for c in 0..used.min(k) {
            if classes[c] & g.neighbors(v) == 0 {
                classes[c] |= bit(v);
                assign[v] = c;
                if rec(g, k, classes, assign, uncolored & !bit(v)) {
                    return true;
                }
                classes[c] &= !bit(v);
            }
        }
        if used < k {
            classes.push(bit(v));
            assign[v] = used;
            if rec(g, k, classes, assign, uncolored & !bit(v)) {
                return true;
            }
            classes.pop();
        }
        false
    }
    let mut assign = vec![0; g.n()];
    let mut classes = Vec::with_capacity(k);
    rec(g, k, &mut classes, &mut assign, g.vertex_mask()).then_some(assign)
}

/// The chromatic number together with an optimal colouring.
///
/// The clique number bounds from below and a greedy colouring from above;
/// each intermediate `k` is decided exactly by backtracking.
pub fn optimal_coloring(g: &Graph) -> ColoringWitness {
    if g.n() == 0 {
        return ColoringWitness { k: 0, classes: Vec::new() };
    }
    let upper = greedy(g);
    let upper_k = upper.iter().max().map_or(0, |&c| c + 1);
    let lower = g.clique_number();
    for k in lower..upper_k {
        if let Some(assign) = k_coloring(g, k) {
            return ColoringWitness::from_assignment(&assign, k);
        }
    }
    ColoringWitness::from_assignment(&upper, upper_k)
}

pub fn chromatic_number(g: &Graph) -> usize {
    optimal_coloring(g).k
}

/// Every proper colouring of `g` with at most `k` classes, one per
/// partition (colourings equal up to renaming classes appear once).
///
/// Vertices are assigned in index order and vertex `v` may only open class
/// `c` if classes `0..c` are already in use, i.e. restricted growth strings.
pub fn enumerate_colorings(g: &Graph, k: usize) -> Colorings<'_> {
    let n = g.n();
    Colorings {
        g,
        k,
        assign: vec![0; n],
        classes: vec![0; k],
        cursor: vec![0; n + 1],
        used: vec![0; n + 1],
        pos: 0,
        done: n > 0 && k == 0,
    }
}

/// Iterator returned by [`enumerate_colorings`].
pub struct Colorings<'a> {
    g: &'a Graph,
    k: usize,
    assign: Vec<usize>,
    classes: Vec<u64>,
    cursor: Vec<usize>,
    used: Vec<usize>,
    pos: usize,
    done: bool,
}

impl Colorings<'_> {
    fn unassign(&mut self, v: usize) {
        self.classes[self.assign[v]] &= !bit(v);
    }
}

impl Iterator for Colorings<'_> {
    type Item = ColoringWitness;

    fn next(&mut self) -> Option<ColoringWitness> {
        let n = self.g.n();
        if self.done {
            return None;
        }
        if n == 0 {
            self.done = true;
            return Some(ColoringWitness { k: 0, classes: Vec::new() });
        }
        loop {
            if self.pos == n {
                let out = ColoringWitness::from_assignment(&self.assign, self.used[n]);
                self.pos = n - 1;
                self.unassign(n - 1);
                self.cursor[n - 1] += 1;
                return Some(out);
            }
            let v = self.pos;
            let c = self.cursor[v];
            let used = self.used[v];
            if c >= (used + 1).min(self.k) {
                self.cursor[v] = 0;
                if v == 0 {
                    self.done = true;
                    return None;
                }
                self.pos -= 1;
                self.unassign(self.pos);
                self.cursor[self.pos] += 1;
                continue;
            }
            if self.g.neighbors(v) & self.classes[c] == 0 {
                self.classes[c] |= bit(v);
                self.assign[v] = c;
                self.used[v + 1] = used.max(c + 1);
                self.pos += 1;
            } else {
                self.cursor[v] += 1;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CriticalityReport {
    pub chi: usize,
    pub critical_vertices: Vec<usize>,
    pub critical_edges: Vec<(usize, usize)>,
}

/// Colour-critical vertices and edges: those whose deletion lowers χ.
pub fn criticality(f: &Graph) -> CriticalityReport {
    let chi = chromatic_number(f);
    let critical_vertices = (0..f.n())
        .filter(|&v| chromatic_number(&f.remove_vertex(v)) < chi)
        .collect();
    let critical_edges = f
        .edges()
        .into_iter()
        .filter(|&(u, v)| chromatic_number(&f.without_edge(u, v)) < chi)
        .collect();
    CriticalityReport {
        chi,
        critical_vertices,
        critical_edges,
    }
}

/// Where the minimum in [`critical_r`] is attained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CriticalR {
    pub r: usize,
    pub vertex: usize,
    /// Colouring of `F - vertex`, in the vertex labels of `F`.
    pub coloring: ColoringWitness,
    /// Index into `coloring.classes` of the class meeting `N(vertex)` in `r` vertices.
    pub class: usize,
}

/// The least `r` such that some colour-critical vertex `v` has exactly `r`
/// neighbours in some class of some proper `(χ(F)-1)`-colouring of `F - v`.
///
/// Classes missing `N(v)` entirely are skipped. `None` when `F` has no
/// colour-critical vertex or no class meets a neighbourhood.
pub fn critical_r(f: &Graph) -> Option<CriticalR> {
    let report = criticality(f);
    let k = report.chi.checked_sub(1)?;
    let mut best: Option<CriticalR> = None;
    for &v in &report.critical_vertices {
        let rest = f.remove_vertex(v);
        // vertex i of f - v is vertex `back[i]` of f
        let back: Vec<usize> = (0..f.n()).filter(|&u| u != v).collect();
        for col in enumerate_colorings(&rest, k) {
            let classes: Vec<Vec<usize>> = col
                .classes
                .iter()
                .map(|c| c.iter().map(|&i| back[i]).collect())
                .collect();
            for (ci, class) in classes.iter().enumerate() {
                let meet = class.iter().filter(|&&u| f.has_edge(v, u)).count();
                if meet >= 1 && best.as_ref().is_none_or(|b| meet < b.r) {
                    best = Some(CriticalR {
                        r: meet,
                        vertex: v,
                        coloring: ColoringWitness {
                            k: classes.len(),
                            classes: classes.clone(),
                        },
                        class: ci,
                    });
                }
            }
        }
    }
    best
}

/// A placement inside the parts that creates a new copy of the pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SafetyWitness {
    /// Edges placed inside parts, in the vertex labels of the realized host.
    pub inside_edges: Vec<(usize, usize)>,
    /// `embedding[x]` is the host vertex of pattern vertex `x`.
    pub embedding: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE", tag = "verdict")]
pub enum SafetyVerdict {
    #[serde(rename_all = "camelCase")]
    Safe { parts: Vec<usize>, placements_checked: u64 },
    #[serde(rename_all = "camelCase")]
    Unsafe { parts: Vec<usize>, witness: SafetyWitness },
    /// The placement space exceeded the budget before a verdict.
    #[serde(rename_all = "camelCase")]
    Inconclusive { parts: Vec<usize>, placements_checked: u64 },
}

/// Searches every way of placing graphs of maximum degree below `r` inside
/// the parts of the complete multipartite graph `parts` for a copy of `h`
/// that uses an inside edge. `budget` bounds the number of search nodes.
///
/// Only edge-maximal placements are tested: a copy that appears in some
/// placement also appears in any maximal placement containing it.
pub fn embedding_safety_check(h: &Graph, r: usize, parts: &PartSizes, budget: u64) -> SafetyVerdict {
    let sizes = parts.sizes().to_vec();
    let host = match realize(parts) {
        Ok(g) => g,
        Err(_) => {
            return SafetyVerdict::Inconclusive {
                parts: sizes,
                placements_checked: 0,
            }
        }
    };
    if r <= 1 {
        return SafetyVerdict::Safe {
            parts: sizes,
            placements_checked: 1,
        };
    }
    let mut inside = Vec::new();
    let mut start = 0;
    for &s in &sizes {
        for j in start..start + s {
            for i in start..j {
                inside.push((i, j));
            }
        }
        start += s;
    }
    let base = count_copies(h, &host);
    let mut state = SafetySearch {
        h,
        host: &host,
        base,
        inside: &inside,
        cap: r - 1,
        degree: vec![0; host.n()],
        chosen: Vec::new(),
        nodes: 0,
        checked: 0,
        budget,
    };
    match state.rec(0) {
        Outcome::Found(witness) => SafetyVerdict::Unsafe { parts: sizes, witness },
        Outcome::OutOfBudget => SafetyVerdict::Inconclusive {
            parts: sizes,
            placements_checked: state.checked,
        },
        Outcome::Clear => SafetyVerdict::Safe {
            parts: sizes,
            placements_checked: state.checked,
        },
    }
}

enum Outcome {
    Clear,
    Found(SafetyWitness),
    OutOfBudget,
}

struct SafetySearch<'a> {
    h: &'a Graph,
    host: &'a Graph,
    base: crate::count::Count,
    inside: &'a [(usize, usize)],
    cap: usize,
    degree: Vec<usize>,
    chosen: Vec<usize>,
    nodes: u64,
    checked: u64,
    budget: u64,
}

impl SafetySearch<'_> {
    fn rec(&mut self, i: usize) -> Outcome {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Outcome::OutOfBudget;
        }
        if i == self.inside.len() {
            return self.leaf();
        }
        let (a, b) = self.inside[i];
        if self.degree[a] < self.cap && self.degree[b] < self.cap {
            self.degree[a] += 1;
            self.degree[b] += 1;
            self.chosen.push(i);
            let out = self.rec(i + 1);
            self.chosen.pop();
            self.degree[a] -= 1;
            self.degree[b] -= 1;
            if !matches!(out, Outcome::Clear) {
                return out;
            }
        }
        self.rec(i + 1)
    }

    fn leaf(&mut self) -> Outcome {
        let maximal = self.inside.iter().enumerate().all(|(i, &(a, b))| {
            self.chosen.contains(&i) || self.degree[a] >= self.cap || self.degree[b] >= self.cap
        });
        if !maximal {
            return Outcome::Clear;
        }
        self.checked += 1;
        let mut g = self.host.clone();
        for &i in &self.chosen {
            let (a, b) = self.inside[i];
            g.add_edge(a, b);
        }
        if count_copies(self.h, &g) == self.base {
            return Outcome::Clear;
        }
        let host = self.host;
        let mut witness = None;
        let _ = for_each_embedding(self.h, &g, |order, img| {
            let mut map = vec![0; order.len()];
            for (i, &x) in order.iter().enumerate() {
                map[x] = img[i];
            }
            if self.h.edges().iter().any(|&(x, y)| !host.has_edge(map[x], map[y])) {
                witness = Some(map);
                std::ops::ControlFlow::Break(())
            } else {
                std::ops::ControlFlow::Continue(())
            }
        });
        let embedding = witness.expect("count increase implies an embedding using an inside edge");
        Outcome::Found(SafetyWitness {
            inside_edges: self.chosen.iter().map(|&i| self.inside[i]).collect(),
            embedding,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn book_f2() -> Graph {
        Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap()
    }

    fn petersen() -> Graph {
        Graph::from_edges(
            10,
            &[(0, 1), (0, 4), (0, 5), (1, 2), (1, 6), (2, 3), (2, 7), (3, 4), (3, 8), (4, 9), (5, 7), (5, 8), (6, 8), (6, 9), (7, 9)],
        )
        .unwrap()
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(chromatic_number(&cycle(5)), 3);
        assert_eq!(chromatic_number(&realize(&PartSizes::new(vec![3, 2, 2]).unwrap()).unwrap()), 3);
        let p = petersen();
        let w = optimal_coloring(&p);
        assert_eq!(w.k, 3);
        assert!(w.is_proper_for(&p));
        assert!(k_coloring(&p, 2).is_none());
        assert_eq!(chromatic_number(&Graph::empty(0).unwrap()), 0);
        assert_eq!(chromatic_number(&Graph::empty(4).unwrap()), 1);
    }

    #[test]
    fn colouring_enumeration_examples() {
        assert_eq!(enumerate_colorings(&Graph::complete(3).unwrap(), 3).count(), 1);
        let two_k2 = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let cols: Vec<_> = enumerate_colorings(&two_k2, 2).collect();
        assert_eq!(cols.len(), 2);
        assert!(cols.iter().all(|c| c.is_proper_for(&two_k2)));
        assert_eq!(enumerate_colorings(&cycle(4), 2).count(), 1);
        assert_eq!(enumerate_colorings(&cycle(5), 2).count(), 0);
        // partitions of 3 points into at most 2 blocks
        assert_eq!(enumerate_colorings(&Graph::empty(3).unwrap(), 2).count(), 4);
    }

    #[test]
    fn criticality_examples() {
        let c5 = criticality(&cycle(5));
        assert_eq!(c5.chi, 3);
        assert_eq!(c5.critical_vertices, vec![0, 1, 2, 3, 4]);
        assert_eq!(c5.critical_edges.len(), 5);

        let f2 = criticality(&book_f2());
        assert!(f2.critical_edges.is_empty());
        assert_eq!(f2.critical_vertices, vec![0]);

        let k4 = criticality(&Graph::complete(4).unwrap());
        assert_eq!(k4.critical_vertices.len(), 4);
        assert_eq!(k4.critical_edges.len(), 6);
    }

    #[test]
    fn critical_r_examples() {
        assert_eq!(critical_r(&Graph::complete(3).unwrap()).unwrap().r, 1);
        assert_eq!(critical_r(&Graph::complete(4).unwrap()).unwrap().r, 1);
        let f2 = critical_r(&book_f2()).unwrap();
        assert_eq!(f2.r, 2);
        assert_eq!(f2.vertex, 0);
        assert!(critical_r(&cycle(4)).is_none());
    }

    #[test]
    fn safety_examples() {
        let k3 = Graph::complete(3).unwrap();
        let parts = PartSizes::new(vec![2, 2]).unwrap();
        assert!(matches!(
            embedding_safety_check(&k3, 1, &parts, 1_000),
            SafetyVerdict::Safe { .. }
        ));
        match embedding_safety_check(&k3, 2, &parts, 1_000) {
            SafetyVerdict::Unsafe { witness, .. } => {
                assert!(!witness.inside_edges.is_empty());
            }
            other => panic!("expected UNSAFE, got {other:?}"),
        }
    }

    #[test]
    fn safety_budget_is_reported() {
        let c4 = cycle(4);
        let parts = PartSizes::new(vec![6, 6]).unwrap();
        assert!(matches!(
            embedding_safety_check(&c4, 3, &parts, 10),
            SafetyVerdict::Inconclusive { .. }
        ));
    }
}
