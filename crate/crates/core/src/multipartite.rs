//! Complete multipartite hosts: counting copies in closed form and choosing
//! part sizes.
//!
//! A copy of `H` in the complete multipartite graph with parts
//! `n_1, ..., n_k` is determined by a proper colouring of `H` whose classes
//! go to distinct parts, plus an injective choice of vertices inside each
//! part. Summing `prod_i (n_i)_{|c^-1(i)|}` over colourings therefore counts
//! injective homomorphisms, and dividing by `|Aut(H)|` counts copies.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::canon::canonical;
use crate::coloring::enumerate_colorings;
use crate::count::{falling_factorial, Count};
use crate::graph::{Graph, GraphError, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultipartiteError {
    #[error("part sizes must be a nonempty list of positive integers")]
    InvalidParts,
    #[error("need 1 <= k <= n, got n = {n}, k = {k}")]
    InvalidK { n: usize, k: usize },
    #[error("exact search needs {needed} part vectors, over the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Part sizes of a complete multipartite graph, sorted nonincreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartSizes {
    sizes: Vec<usize>,
}

impl PartSizes {
    pub fn new(mut sizes: Vec<usize>) -> Result<Self, MultipartiteError> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(MultipartiteError::InvalidParts);
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(PartSizes { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }
}

impl fmt::Display for PartSizes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for PartSizes {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.sizes.serialize(s)
    }
}

/// Part sizes of the Turán graph `T(n, k)`.
pub fn turan_parts(n: usize, k: usize) -> Result<PartSizes, MultipartiteError> {
    if k == 0 || k > n {
        return Err(MultipartiteError::InvalidK { n, k });
    }
    let (q, r) = (n / k, n % k);
    let sizes = (0..k).map(|i| if i < r { q + 1 } else { q }).collect();
    PartSizes::new(sizes)
}

/// The complete multipartite graph; part `i` occupies a contiguous block of
/// vertices, largest part first.
pub fn realize(p: &PartSizes) -> Result<Graph, GraphError> {
    let n = p.n();
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n));
    }
    let mut g = Graph::complete(n)?;
    let mut start = 0;
    for &s in &p.sizes {
        for j in start..start + s {
            for i in start..j {
                g.remove_edge(i, j);
            }
        }
        start += s;
    }
    Ok(g)
}

/// `N(h, K_{n_1, ..., n_k})` without building the host.
pub fn count_copies_multipartite(h: &Graph, p: &PartSizes) -> Count {
    let homs = multipartite_homs(h, p);
    if homs.is_zero() {
        return Count::zero();
    }
    let aut = canonical(h).aut_order;
    let (q, r) = homs.div_rem(&aut);
    debug_assert!(r.is_zero());
    Count(q)
}

fn multipartite_homs(h: &Graph, p: &PartSizes) -> BigUint {
    // distinct part sizes with multiplicities
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for &s in &p.sizes {
        match groups.last_mut() {
            Some((size, mult)) if *size == s => *mult += 1,
            _ => groups.push((s, 1)),
        }
    }
    let mut total = BigUint::zero();
    for col in enumerate_colorings(h, p.k()) {
        let class_sizes: Vec<usize> = col.classes.iter().map(|c| c.len()).collect();
        total += injective_class_placements(&class_sizes, &groups);
    }
    total
}

/// Sum over injective maps from classes to parts of the product of falling
/// factorials, with parts grouped by size so the state is a use count per group.
fn injective_class_placements(class_sizes: &[usize], groups: &[(usize, usize)]) -> BigUint {
    let mut dp: HashMap<Vec<usize>, BigUint> = HashMap::new();
    dp.insert(vec![0; groups.len()], BigUint::one());
    for &s in class_sizes {
        let mut next: HashMap<Vec<usize>, BigUint> = HashMap::new();
        for (used, ways) in &dp {
            for (j, &(size, mult)) in groups.iter().enumerate() {
                if used[j] == mult || size < s {
                    continue;
                }
                let free_parts = BigUint::from(mult - used[j]);
                let mut key = used.clone();
                key[j] += 1;
                let add = ways * free_parts * falling_factorial(size as u64, s as u64);
                *next.entry(key).or_default() += add;
            }
        }
        dp = next;
    }
    dp.into_values().sum()
}

/// `min(sizes) / n`.
pub fn min_part_fraction(p: &PartSizes) -> Ratio<usize> {
    Ratio::new(*p.sizes.last().expect("nonempty"), p.n())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Hillclimb,
}

#[derive(Debug, Clone)]
pub struct OptimizeConfig {
    /// Largest number of part vectors the exact mode may enumerate.
    pub budget: u64,
    /// Extra hill-climb runs from random starts after the Turán start.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        OptimizeConfig {
            budget: 5_000_000,
            restarts: 8,
            seed: 0,
        }
    }
}

/// One improving single-vertex transfer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Move {
    pub from_part_size: usize,
    pub to_part_size: usize,
    pub parts: PartSizes,
    pub count: Count,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OptimizationResult {
    #[serde(rename = "parts")]
    pub best: PartSizes,
    pub count: Count,
    pub mode: Mode,
    /// Every vector attaining `count` that was seen (all of them in exact mode).
    pub co_optimal: Vec<PartSizes>,
    pub moves: Vec<Move>,
}

/// Number of partitions of `n` into exactly `k` positive parts.
pub fn partition_count(n: usize, k: usize) -> u128 {
    // p(n, k) = p(n - 1, k - 1) + p(n - k, k)
    let mut table = vec![vec![0u128; k + 1]; n + 1];
    table[0][0] = 1;
    for m in 1..=n {
        for j in 1..=k.min(m) {
            table[m][j] = table[m - 1][j - 1].saturating_add(table[m - j][j]);
        }
    }
    table[n][k]
}

/// Nonincreasing vectors of `k` positive parts summing to `n` whose first
/// part is exactly `first`.
fn partitions_with_first(n: usize, k: usize, first: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, slots: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // each remaining slot needs at least 1 and at most cap
        if rem < slots || rem > slots * cap {
            return;
        }
        for s in (1..=cap.min(rem)).rev() {
            cur.push(s);
            rec(rem - s, slots - 1, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if first == 0 || first > n {
        return out;
    }
    let mut cur = vec![first];
    rec(n - first, k - 1, first, &mut cur, &mut out);
    out
}

/// Every nonincreasing vector of `k` positive parts summing to `n`, in
/// lexicographically decreasing order.
pub fn part_vectors(n: usize, k: usize) -> Vec<PartSizes> {
    if k == 0 || k > n {
        return Vec::new();
    }
    (n.div_ceil(k)..=n - (k - 1))
        .rev()
        .flat_map(|first| partitions_with_first(n, k, first))
        .map(|sizes| PartSizes { sizes })
        .collect()
}

/// Orders candidates so that the preferred one is the smallest: higher
/// count first, then the lexicographically smallest (most balanced) vector.
fn better(a: &(Count, PartSizes), b: &(Count, PartSizes)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1.sizes < b.1.sizes)
}

/// Maximises `N(h, K_{n_1..n_k})` over part sizes with `n_1 + ... + n_k = n`.
///
/// Exact mode enumerates every sorted vector and breaks ties towards the
/// most balanced one. Hill-climb mode starts from `T(n, k)` and from
/// `cfg.restarts` random vectors, each time applying the best single-vertex
/// transfer between two parts until no transfer improves the count.
pub fn optimize_parts(
    h: &Graph,
    n: usize,
    k: usize,
    mode: Mode,
    cfg: &OptimizeConfig,
) -> Result<OptimizationResult, MultipartiteError> {
    if k == 0 || k > n {
        return Err(MultipartiteError::InvalidK { n, k });
    }
    match mode {
        Mode::Exact => optimize_exact(h, n, k, cfg),
        Mode::Hillclimb => Ok(optimize_hillclimb(h, n, k, cfg)),
    }
}

fn optimize_exact(h: &Graph, n: usize, k: usize, cfg: &OptimizeConfig) -> Result<OptimizationResult, MultipartiteError> {
    let needed = partition_count(n, k);
    if needed > cfg.budget as u128 {
        return Err(MultipartiteError::BudgetExceeded {
            needed,
            budget: cfg.budget,
        });
    }
    let firsts: Vec<usize> = (n.div_ceil(k)..=n - (k - 1)).collect();
    let scored: Vec<Vec<(Count, PartSizes)>> = firsts
        .par_iter()
        .map(|&first| {
            partitions_with_first(n, k, first)
                .into_iter()
                .map(|sizes| {
                    let p = PartSizes { sizes };
                    (count_copies_multipartite(h, &p), p)
                })
                .collect()
        })
        .collect();
    let all: Vec<(Count, PartSizes)> = scored.into_iter().flatten().collect();
    let best = all
        .iter()
        .fold(None::<&(Count, PartSizes)>, |acc, c| match acc {
            Some(a) if !better(c, a) => Some(a),
            _ => Some(c),
        })
        .expect("at least one partition")
        .clone();
    let mut co_optimal: Vec<PartSizes> = all
        .iter()
        .filter(|(c, _)| *c == best.0)
        .map(|(_, p)| p.clone())
        .collect();
    co_optimal.sort();
    Ok(OptimizationResult {
        best: best.1,
        count: best.0,
        mode: Mode::Exact,
        co_optimal,
        moves: Vec::new(),
    })
}

fn random_parts(rng: &mut ChaCha8Rng, n: usize, k: usize) -> PartSizes {
    // k - 1 distinct cut points in 1..n
    let mut cuts: Vec<usize> = rand::seq::index::sample(rng, n - 1, k - 1)
        .into_iter()
        .map(|c| c + 1)
        .collect();
    cuts.sort_unstable();
    let mut sizes = Vec::with_capacity(k);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(n)) {
        sizes.push(c - prev);
        prev = c;
    }
    PartSizes::new(sizes).expect("cuts are distinct")
}

fn optimize_hillclimb(h: &Graph, n: usize, k: usize, cfg: &OptimizeConfig) -> OptimizationResult {
    let mut memo: HashMap<PartSizes, Count> = HashMap::new();
    let mut eval = |p: &PartSizes| -> Count {
        memo.entry(p.clone())
            .or_insert_with(|| count_copies_multipartite(h, p))
            .clone()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts = vec![turan_parts(n, k).expect("1 <= k <= n")];
    for _ in 0..cfg.restarts {
        if n > k {
            starts.push(random_parts(&mut rng, n, k));
        }
    }

    let mut best: Option<(Count, PartSizes, Vec<Move>)> = None;
    let mut seen_optima: Vec<(Count, PartSizes)> = Vec::new();
    for start in starts {
        let mut cur = start;
        let mut cur_count = eval(&cur);
        let mut moves = Vec::new();
        loop {
            let mut step: Option<(Count, PartSizes, usize, usize)> = None;
            for i in 0..k {
                if cur.sizes[i] < 2 {
                    continue;
                }
                for j in 0..k {
                    if i == j {
                        continue;
                    }
                    let mut sizes = cur.sizes.clone();
                    sizes[i] -= 1;
                    sizes[j] += 1;
                    let cand = PartSizes::new(sizes).expect("sizes stay positive");
                    let c = eval(&cand);
                    let better_step = match &step {
                        None => c > cur_count,
                        Some((sc, sp, _, _)) => better(&(c.clone(), cand.clone()), &(sc.clone(), sp.clone())),
                    };
                    if better_step && c > cur_count {
                        step = Some((c, cand, cur.sizes[i], cur.sizes[j]));
                    }
                }
            }
            match step {
                Some((c, p, from, to)) => {
                    moves.push(Move {
                        from_part_size: from,
                        to_part_size: to,
                        parts: p.clone(),
                        count: c.clone(),
                    });
                    cur = p;
                    cur_count = c;
                }
                None => break,
            }
        }
        seen_optima.push((cur_count.clone(), cur.clone()));
        let replace = match &best {
            None => true,
            Some((bc, bp, _)) => better(&(cur_count.clone(), cur.clone()), &(bc.clone(), bp.clone())),
        };
        if replace {
            best = Some((cur_count, cur, moves));
        }
    }
    let (count, best, moves) = best.expect("at least the Turán start");
    let mut co_optimal: Vec<PartSizes> = seen_optima
        .into_iter()
        .filter(|(c, _)| *c == count)
        .map(|(_, p)| p)
        .collect();
    co_optimal.sort();
    co_optimal.dedup();
    OptimizationResult {
        best,
        count,
        mode: Mode::Hillclimb,
        co_optimal,
        moves,
    }
}
