//! Exhaustive isomorph-free generation of `F`-free graphs, `ex(n, H, F)`,
//! and Zykov symmetrization.
//!
//! Generation is canonical augmentation by vertex extension. A child of a
//! parent class on `m` vertices is the parent plus a vertex `m` with some
//! neighbourhood. The child is accepted only when `m` lies in the same
//! automorphism orbit as the vertex placed last by the canonical labelling,
//! so each class on `m + 1` vertices has exactly one parent class. Children
//! of one parent are then deduplicated by certificate. `F`-freeness is
//! hereditary, so pruning a node that contains `F` loses nothing.

use std::collections::{BTreeSet, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::canon::canon;
use crate::count::{copy_degree, count_copies, Count};
use crate::graph::{Graph, GraphError};
use crate::graph6::parse_graph6;
use crate::multipartite::{realize, turan_parts};

/// Documented soft cap on the order for full enumeration.
pub const DEFAULT_ORDER_CAP: usize = 12;
/// Witnesses retained per report.
pub const WITNESS_CAP: usize = 64;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchConfig {
    /// Budget on generation-tree nodes (classes at every level).
    pub max_nodes: u64,
    /// Keep only edge-maximal `F`-free graphs at the final level.
    pub maximal_only: bool,
    /// Worker threads; results do not depend on it.
    #[serde(skip)]
    pub parallelism: usize,
    pub order_cap: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_nodes: 50_000_000,
            maximal_only: false,
            parallelism: 1,
            order_cap: DEFAULT_ORDER_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("order {n} is above the enumeration cap of {cap}")]
    OrderTooLarge { n: usize, cap: usize },
    #[error("node budget of {budget} exhausted after visiting {visited} classes")]
    BudgetExhausted { visited: u64, budget: u64 },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("failed to start worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Tree statistics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchStats {
    /// `F`-free classes on `n` vertices examined.
    pub generated: u64,
    /// Classes visited at all levels.
    pub tree_nodes: u64,
}

/// Accepted children of `parent`, in increasing neighbourhood-mask order.
fn children(parent: &Graph, f: &Graph) -> Vec<Graph> {
    let m = parent.n();
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << m) {
        let child = parent.with_vertex(mask).expect("order checked against cap");
        if !crate::count::is_free(&child, f) {
            continue;
        }
        let c = canon(&child);
        let last = c
            .labeling
            .iter()
            .position(|&p| p == m)
            .expect("labelling is a bijection");
        if c.orbits[m] != c.orbits[last] {
            continue;
        }
        if seen.insert(c.form.bytes) {
            out.push(c.graph);
        }
    }
    out
}

struct Tree<'a> {
    n: usize,
    f: &'a Graph,
    cfg: &'a SearchConfig,
    nodes: AtomicU64,
    aborted: AtomicBool,
}

impl Tree<'_> {
    fn tick(&self) -> bool {
        let v = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if v > self.cfg.max_nodes {
            self.aborted.store(true, Ordering::Relaxed);
        }
        !self.aborted.load(Ordering::Relaxed)
    }

    fn is_maximal(&self, g: &Graph) -> bool {
        g.non_edges().into_iter().all(|(u, v)| {
            let mut h = g.clone();
            h.add_edge(u, v);
            !crate::count::is_free(&h, self.f)
        })
    }

    fn descend<A>(&self, node: Graph, acc: &mut A, leaves: &mut u64, step: &(impl Fn(&mut A, Graph) + Sync)) {
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        if node.n() == self.n {
            *leaves += 1;
            if !self.cfg.maximal_only || self.is_maximal(&node) {
                step(acc, node);
            }
            return;
        }
        for child in children(&node, self.f) {
            if !self.tick() {
                return;
            }
            self.descend(child, acc, leaves, step);
        }
    }
}

/// Folds `step` over one representative of every `F`-free class on `n`
/// vertices. Subtrees below a fixed split level are folded independently
/// and merged left to right, so the result does not depend on the number
/// of workers.
pub fn fold_free<A, I, S, M>(n: usize, f: &Graph, cfg: &SearchConfig, init: I, step: S, merge: M) -> Result<(A, SearchStats), SearchError>
where
    A: Send,
    I: Fn() -> A + Sync,
    S: Fn(&mut A, Graph) + Sync,
    M: Fn(A, A) -> A,
{
    if n > cfg.order_cap {
        return Err(SearchError::OrderTooLarge { n, cap: cfg.order_cap });
    }
    let tree = Tree {
        n,
        f,
        cfg,
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
    };
    let root = Graph::empty(0)?;
    if !crate::count::is_free(&root, f) {
        return Ok((init(), SearchStats::default()));
    }

    // sequential expansion down to the split level
    let split = n.min(5);
    let mut frontier = vec![root];
    for _ in 0..split {
        let mut next = Vec::new();
        for g in &frontier {
            for c in children(g, f) {
                if !tree.tick() {
                    return Err(tree.exhausted());
                }
                next.push(c);
            }
        }
        frontier = next;
    }

    let run = || {
        frontier
            .par_iter()
            .map(|g| {
                let mut acc = init();
                let mut leaves = 0u64;
                tree.descend(g.clone(), &mut acc, &mut leaves, &step);
                (acc, leaves)
            })
            .collect::<Vec<_>>()
    };
    let parts = if cfg.parallelism <= 1 {
        let mut out = Vec::with_capacity(frontier.len());
        for g in &frontier {
            let mut acc = init();
            let mut leaves = 0u64;
            tree.descend(g.clone(), &mut acc, &mut leaves, &step);
            out.push((acc, leaves));
        }
        out
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.parallelism)
            .build()
            .map_err(|e| SearchError::Pool(e.to_string()))?
            .install(run)
    };
    if tree.aborted.load(Ordering::Relaxed) {
        return Err(tree.exhausted());
    }
    let mut generated = 0;
    let mut total = init();
    for (acc, leaves) in parts {
        generated += leaves;
        total = merge(total, acc);
    }
    Ok((
        total,
        SearchStats {
            generated,
            tree_nodes: tree.nodes.load(Ordering::Relaxed),
        },
    ))
}

impl Tree<'_> {
    fn exhausted(&self) -> SearchError {
        SearchError::BudgetExhausted {
            visited: self.nodes.load(Ordering::Relaxed).min(self.cfg.max_nodes),
            budget: self.cfg.max_nodes,
        }
    }
}

/// One canonical representative per class of `F`-free graphs on `n`
/// vertices (edge-maximal ones only with `maximal_only`), in a
/// deterministic order.
pub fn enumerate_free(n: usize, f: &Graph, cfg: &SearchConfig) -> Result<Vec<Graph>, SearchError> {
    fold_free(
        n,
        f,
        cfg,
        Vec::new,
        |acc: &mut Vec<Graph>, g| acc.push(g),
        |mut a, b| {
            a.extend(b);
            a
        },
    )
    .map(|(v, _)| v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtremalReport {
    pub n: usize,
    pub value: Count,
    /// Canonical graph6 of maximisers, lexicographically first `WITNESS_CAP`.
    pub witnesses: Vec<String>,
    /// Total number of maximising classes.
    pub witness_count: u64,
    pub suppressed_witnesses: u64,
    /// F-free classes on n vertices examined.
    pub generated: u64,
    pub tree_nodes: u64,
    /// Per retained witness, `min_v d(H, v)`.
    pub min_copy_degree: Vec<Count>,
}

struct Best {
    value: Option<Count>,
    witnesses: BTreeSet<String>,
    total: u64,
}

impl Best {
    fn new() -> Self {
        Best {
            value: None,
            witnesses: BTreeSet::new(),
            total: 0,
        }
    }

    fn offer(&mut self, value: Count, g6: impl FnOnce() -> String) {
        match &self.value {
            Some(v) if value < *v => return,
            Some(v) if value == *v => {}
            _ => {
                self.value = Some(value);
                self.witnesses.clear();
                self.total = 0;
            }
        }
        self.total += 1;
        self.witnesses.insert(g6());
        if self.witnesses.len() > WITNESS_CAP {
            let last = self.witnesses.iter().next_back().cloned().expect("nonempty");
            self.witnesses.remove(&last);
        }
    }

    fn merge(mut self, other: Best) -> Best {
        match (&self.value, &other.value) {
            (_, None) => self,
            (None, _) => other,
            (Some(a), Some(b)) if b > a => other,
            (Some(a), Some(b)) if b < a => self,
            _ => {
                self.total += other.total;
                self.witnesses.extend(other.witnesses);
                while self.witnesses.len() > WITNESS_CAP {
                    let last = self.witnesses.iter().next_back().cloned().expect("nonempty");
                    self.witnesses.remove(&last);
                }
                self
            }
        }
    }
}

/// `ex(n, H, F)` by exhaustive search, with all maximisers up to isomorphism.
pub fn ex_brute(n: usize, h: &Graph, f: &Graph, cfg: &SearchConfig) -> Result<ExtremalReport, SearchError> {
    let (best, stats) = fold_free(
        n,
        f,
        cfg,
        Best::new,
        |acc: &mut Best, g| acc.offer(count_copies(h, &g), || crate::graph6::emit_graph6(&g)),
        Best::merge,
    )?;
    let value = best
        .value
        .ok_or_else(|| SearchError::InvalidInstance(format!("no {n}-vertex graph avoids the forbidden graph")))?;
    let witnesses: Vec<String> = best.witnesses.into_iter().collect();
    let min_copy_degree = witnesses
        .iter()
        .map(|w| {
            let g = parse_graph6(w).expect("emitted by this crate");
            (0..g.n())
                .map(|v| copy_degree(h, &g, v).expect("v in range"))
                .min()
                .unwrap_or_default()
        })
        .collect();
    Ok(ExtremalReport {
        n,
        value,
        witness_count: best.total,
        suppressed_witnesses: best.total - witnesses.len() as u64,
        witnesses,
        generated: stats.generated,
        tree_nodes: stats.tree_nodes,
        min_copy_degree,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Improved { graph: Graph, count: Count },
    Unchanged,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZykovError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("the set S must be nonempty and must not contain u")]
    BadSet,
    #[error("moving {u} onto the common neighbourhood of {s:?} creates the forbidden graph")]
    Refused { u: usize, s: Vec<usize> },
    #[error("seed graph contains the forbidden graph")]
    SeedNotFree,
}

fn zykov_candidate(g: &Graph, u: usize, s: &[usize]) -> Result<Graph, ZykovError> {
    if u >= g.n() {
        return Err(ZykovError::VertexOutOfRange(u));
    }
    if let Some(&bad) = s.iter().find(|&&x| x >= g.n()) {
        return Err(ZykovError::VertexOutOfRange(bad));
    }
    if s.is_empty() || s.contains(&u) {
        return Err(ZykovError::BadSet);
    }
    let common = s.iter().fold(g.vertex_mask(), |m, &x| m & g.neighbors(x));
    let mut out = g.clone();
    out.set_neighborhood(u, common);
    Ok(out)
}

/// Replaces `N(u)` by the common neighbourhood of `s`, keeping the result
/// only if it strictly increases the number of copies of `h`. An improving
/// step that would create `forbidden` is refused.
pub fn zykov_step(g: &Graph, h: &Graph, u: usize, s: &[usize], forbidden: &Graph) -> Result<StepOutcome, ZykovError> {
    let before = count_copies(h, g);
    zykov_step_from(g, &before, h, u, s, forbidden)
}

fn zykov_step_from(g: &Graph, before: &Count, h: &Graph, u: usize, s: &[usize], forbidden: &Graph) -> Result<StepOutcome, ZykovError> {
    let cand = zykov_candidate(g, u, s)?;
    if cand == *g {
        return Ok(StepOutcome::Unchanged);
    }
    let after = count_copies(h, &cand);
    if after <= *before {
        return Ok(StepOutcome::Unchanged);
    }
    if !crate::count::is_free(&cand, forbidden) {
        return Err(ZykovError::Refused { u, s: s.to_vec() });
    }
    Ok(StepOutcome::Improved { graph: cand, count: after })
}

/// One hill-climbing run of single-vertex symmetrization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetrizeRun {
    pub start: Graph,
    /// Graph and count after each accepted step, starting with the seed.
    pub trajectory: Vec<(Graph, Count)>,
}

impl SymmetrizeRun {
    pub fn last(&self) -> &(Graph, Count) {
        self.trajectory.last().expect("trajectory holds the seed")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetrizeResult {
    pub best: Graph,
    pub best_count: Count,
    pub runs: Vec<SymmetrizeRun>,
}

/// Applies improving steps with `|S| = 1` over all ordered non-adjacent
/// pairs until a full pass finds none.
pub fn symmetrize_run(g0: &Graph, h: &Graph, forbidden: &Graph) -> SymmetrizeRun {
    let mut g = g0.clone();
    let mut count = count_copies(h, &g);
    let mut trajectory = vec![(g.clone(), count.clone())];
    loop {
        let mut improved = false;
        for u in 0..g.n() {
            for v in 0..g.n() {
                if u == v || g.has_edge(u, v) {
                    continue;
                }
                if let Ok(StepOutcome::Improved { graph, count: c }) = zykov_step_from(&g, &count, h, u, &[v], forbidden) {
                    g = graph;
                    count = c;
                    trajectory.push((g.clone(), count.clone()));
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    SymmetrizeRun {
        start: g0.clone(),
        trajectory,
    }
}

/// A random `K_{k+1}`-free graph: pairs in random order, each kept with
/// probability `density` when it creates no `K_{k+1}`.
pub fn random_clique_free(n: usize, k: usize, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::empty(n).expect("caller checks the order");
    let clique = Graph::complete(k + 1).expect("k + 1 <= 64");
    let mut pairs = g.non_edges();
    pairs.shuffle(rng);
    let density: f64 = rng.gen_range(0.2..1.0);
    for (u, v) in pairs {
        if rng.gen_bool(density) {
            g.add_edge(u, v);
            if !crate::count::is_free(&g, &clique) {
                g.remove_edge(u, v);
            }
        }
    }
    g
}

/// Symmetrization from `g0` and from `restarts` random `K_{k+1}`-free
/// seeds on the same order; the best final graph is a certified lower
/// bound for `ex(n, h, K_{k+1})`.
pub fn symmetrize_search(g0: &Graph, h: &Graph, k: usize, restarts: usize, seed: u64) -> Result<SymmetrizeResult, ZykovError> {
    let forbidden = Graph::complete(k + 1).map_err(|_| ZykovError::BadSet)?;
    if !crate::count::is_free(g0, &forbidden) {
        return Err(ZykovError::SeedNotFree);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut runs = vec![symmetrize_run(g0, h, &forbidden)];
    for _ in 0..restarts {
        let start = random_clique_free(g0.n(), k, &mut rng);
        runs.push(symmetrize_run(&start, h, &forbidden));
    }
    let (best, best_count) = runs
        .iter()
        .map(|r| r.last())
        .fold(None::<&(Graph, Count)>, |acc, cand| match acc {
            Some(a) if a.1 >= cand.1 => Some(a),
            _ => Some(cand),
        })
        .cloned()
        .expect("at least one run");
    Ok(SymmetrizeResult { best, best_count, runs })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReferenceDegree {
    pub part_size: usize,
    pub degree: Count,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AuditRow {
    pub witness: String,
    pub min_degree: Count,
    /// `min_degree` over the smallest Turán reference degree.
    pub ratio: f64,
    pub at_least_reference: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AuditTable {
    pub n: usize,
    pub k: usize,
    pub reference: Vec<ReferenceDegree>,
    pub rows: Vec<AuditRow>,
}

/// Compares each witness's minimum copy degree with the copy degrees of the
/// vertices of `T(n, k)`, one reference value per distinct part size.
pub fn min_copy_degree_audit(report: &ExtremalReport, h: &Graph, k: usize) -> Result<AuditTable, SearchError> {
    let n = report.n;
    let parts = turan_parts(n, k).map_err(|e| SearchError::InvalidInstance(e.to_string()))?;
    let t = realize(&parts)?;
    let mut reference = Vec::new();
    let mut start = 0;
    for &s in parts.sizes() {
        if reference.iter().all(|r: &ReferenceDegree| r.part_size != s) {
            reference.push(ReferenceDegree {
                part_size: s,
                degree: copy_degree(h, &t, start)?,
            });
        }
        start += s;
    }
    let floor = reference
        .iter()
        .map(|r| r.degree.clone())
        .min()
        .expect("at least one part");
    let rows = report
        .witnesses
        .iter()
        .zip(&report.min_copy_degree)
        .map(|(w, d)| AuditRow {
            witness: w.clone(),
            min_degree: d.clone(),
            ratio: if floor.is_zero() { f64::INFINITY } else { d.to_f64() / floor.to_f64() },
            at_least_reference: *d >= floor,
        })
        .collect();
    Ok(AuditTable { n, k, reference, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        Graph::complete(n).unwrap()
    }

    #[test]
    fn small_triangle_free_counts() {
        let cfg = SearchConfig::default();
        assert_eq!(enumerate_free(4, &k(3), &cfg).unwrap().len(), 7);
        assert_eq!(enumerate_free(3, &k(3), &cfg).unwrap().len(), 3);
        for n in 1..=6 {
            assert_eq!(enumerate_free(n, &k(2), &cfg).unwrap().len(), 1);
        }
    }

    #[test]
    fn vacuous_freeness_gives_all_classes() {
        let cfg = SearchConfig::default();
        let big = k(9);
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_free(n, &big, &cfg).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn extremal_examples() {
        let cfg = SearchConfig::default();
        let r = ex_brute(6, &k(3), &k(4), &cfg).unwrap();
        assert_eq!(r.value, Count::from(8u64));
        let k222 = canon(&realize(&turan_parts(6, 3).unwrap()).unwrap()).form;
        assert_eq!(r.witnesses, vec![k222.graph6().to_string()]);

        let r = ex_brute(5, &k(2), &k(3), &cfg).unwrap();
        assert_eq!(r.value, Count::from(6u64));
        let k23 = canon(&realize(&turan_parts(5, 2).unwrap()).unwrap()).form;
        assert_eq!(r.witnesses, vec![k23.graph6().to_string()]);
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = SearchConfig {
            max_nodes: 10,
            ..Default::default()
        };
        assert!(matches!(
            enumerate_free(7, &k(4), &cfg),
            Err(SearchError::BudgetExhausted { budget: 10, .. })
        ));
        let capped = SearchConfig {
            order_cap: 5,
            ..Default::default()
        };
        assert_eq!(
            enumerate_free(6, &k(3), &capped),
            Err(SearchError::OrderTooLarge { n: 6, cap: 5 })
        );
    }

    #[test]
    fn zykov_step_examples() {
        let t = realize(&turan_parts(6, 3).unwrap()).unwrap();
        for u in 0..6 {
            for v in 0..6 {
                if u != v {
                    assert_eq!(zykov_step(&t, &k(3), u, &[v], &k(4)).unwrap(), StepOutcome::Unchanged);
                }
            }
        }
        let damaged = t.without_edge(0, 2);
        assert_eq!(count_copies(&k(3), &damaged), Count::from(6u64));
        let restored = (0..6)
            .flat_map(|u| (0..6).map(move |v| (u, v)))
            .filter(|(u, v)| u != v)
            .find_map(|(u, v)| match zykov_step(&damaged, &k(3), u, &[v], &k(4)) {
                Ok(StepOutcome::Improved { count, .. }) => Some(count),
                _ => None,
            });
        assert_eq!(restored, Some(Count::from(8u64)));
        assert_eq!(zykov_step(&t, &k(3), 0, &[0], &k(4)), Err(ZykovError::BadSet));
        assert_eq!(zykov_step(&t, &k(3), 0, &[], &k(4)), Err(ZykovError::BadSet));
        assert_eq!(zykov_step(&t, &k(3), 9, &[1], &k(4)), Err(ZykovError::VertexOutOfRange(9)));
    }

    #[test]
    fn improving_step_that_creates_forbidden_graph_is_refused() {
        // moving vertex 3 onto N(0) = {1} gives vertex 1 three leaves
        let g = Graph::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(
            zykov_step(&g, &k(2), 3, &[0], &star),
            Err(ZykovError::Refused { u: 3, s: vec![0] })
        );
    }

    #[test]
    fn symmetrize_examples() {
        let e8 = Graph::empty(8).unwrap();
        let r = symmetrize_search(&e8, &k(2), 2, 0, 1).unwrap();
        // the empty seed is already a fixed point; restarts do the work
        assert_eq!(r.runs[0].trajectory.len(), 1);
        let r = symmetrize_search(&e8, &k(2), 2, 16, 1).unwrap();
        assert_eq!(r.best_count, Count::from(16u64));

        let t9 = realize(&turan_parts(9, 3).unwrap()).unwrap();
        let r = symmetrize_search(&t9, &k(3), 3, 0, 0).unwrap();
        assert_eq!(r.best, t9);
        assert_eq!(r.best_count, Count::from(27u64));

        assert_eq!(symmetrize_search(&k(4), &k(3), 3, 0, 0), Err(ZykovError::SeedNotFree));
    }

    #[test]
    fn audit_on_turan_witness() {
        let cfg = SearchConfig::default();
        let r = ex_brute(6, &k(3), &k(4), &cfg).unwrap();
        let audit = min_copy_degree_audit(&r, &k(3), 3).unwrap();
        assert_eq!(audit.reference.len(), 1);
        assert_eq!(audit.reference[0].degree, Count::from(4u64));
        assert_eq!(audit.rows[0].min_degree, Count::from(4u64));
        assert_eq!(audit.rows[0].ratio, 1.0);
    }
}
