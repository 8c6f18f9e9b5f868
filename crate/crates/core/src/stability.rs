//! Distance to complete multipartite structure, Turán-goodness verdicts at
//! a fixed order, and near-extremal profiles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coloring::chromatic_number;
use crate::count::{count_copies, Count};
use crate::graph::{bit, Bits, Graph};
use crate::graph6::emit_graph6;
use crate::multipartite::{count_copies_multipartite, part_vectors, turan_parts, MultipartiteError, PartSizes};
use crate::search::{ex_brute, fold_free, SearchConfig, SearchError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilityError {
    #[error("k = 0 admits no partition of a nonempty graph")]
    InvalidK,
    #[error("exact distance search exceeded its budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Multipartite(#[from] MultipartiteError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMode {
    Exact,
    Heuristic,
}

#[derive(Debug, Clone)]
pub struct DistanceConfig {
    /// Node budget of the exact branch and bound.
    pub budget: u64,
    /// Random starts of the local search.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        DistanceConfig {
            budget: 50_000_000,
            restarts: 32,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PartitionDistance {
    /// Edges inside classes plus non-adjacent pairs across classes.
    pub cost: usize,
    /// Nonempty classes, each sorted, ordered by least vertex.
    pub partition: Vec<Vec<usize>>,
    pub mode: DistanceMode,
}

impl PartitionDistance {
    fn from_masks(classes: &[u64], cost: usize, mode: DistanceMode) -> Self {
        let mut partition: Vec<Vec<usize>> = classes
            .iter()
            .filter(|&&m| m != 0)
            .map(|&m| Bits(m).collect())
            .collect();
        partition.sort();
        PartitionDistance { cost, partition, mode }
    }

    /// Classes joined by `|`, vertices by spaces: `0 2|1 3 4`.
    pub fn partition_string(&self) -> String {
        self.partition
            .iter()
            .map(|c| c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("|")
    }
}

/// Cost of the partition given by class masks.
pub fn partition_cost(g: &Graph, classes: &[u64]) -> usize {
    let n = g.n();
    let mut within = 0;
    let mut same_pairs = 0;
    for &c in classes {
        within += Bits(c).map(|v| (g.neighbors(v) & c).count_ones() as usize).sum::<usize>() / 2;
        let s = c.count_ones() as usize;
        same_pairs += s * s.saturating_sub(1) / 2;
    }
    let cross_pairs = n * n.saturating_sub(1) / 2 - same_pairs;
    let cross_edges = g.edge_count() - within;
    within + cross_pairs - cross_edges
}

/// Minimum number of edge edits turning `g` into a complete multipartite
/// graph with at most `k` parts.
pub fn multipartite_distance(g: &Graph, k: usize, mode: DistanceMode, cfg: &DistanceConfig) -> Result<PartitionDistance, StabilityError> {
    if k == 0 {
        if g.n() == 0 {
            return Ok(PartitionDistance {
                cost: 0,
                partition: Vec::new(),
                mode,
            });
        }
        return Err(StabilityError::InvalidK);
    }
    let heuristic = local_search(g, k, cfg);
    match mode {
        DistanceMode::Heuristic => Ok(heuristic),
        DistanceMode::Exact => exact_distance(g, k, heuristic, cfg.budget),
    }
}

fn local_search(g: &Graph, k: usize, cfg: &DistanceConfig) -> PartitionDistance {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<(usize, Vec<u64>)> = None;
    for _ in 0..cfg.restarts.max(1) {
        let mut classes = vec![0u64; k];
        let mut of = vec![0usize; n];
        for (v, slot) in of.iter_mut().enumerate() {
            let c = rng.gen_range(0..k);
            classes[c] |= bit(v);
            *slot = c;
        }
        let mut cost = partition_cost(g, &classes);
        loop {
            let mut step: Option<(usize, Vec<u64>, Vec<usize>)> = None;
            let consider = |cand: Vec<u64>, cand_of: Vec<usize>, step: &mut Option<(usize, Vec<u64>, Vec<usize>)>| {
                let c = partition_cost(g, &cand);
                if c < step.as_ref().map_or(cost, |s| s.0) {
                    *step = Some((c, cand, cand_of));
                }
            };
            for v in 0..n {
                for c in 0..k {
                    if c != of[v] {
                        let mut cand = classes.clone();
                        cand[of[v]] &= !bit(v);
                        cand[c] |= bit(v);
                        let mut cand_of = of.clone();
                        cand_of[v] = c;
                        consider(cand, cand_of, &mut step);
                    }
                }
            }
            for u in 0..n {
                for v in u + 1..n {
                    if of[u] != of[v] {
                        let mut cand = classes.clone();
                        cand[of[u]] ^= bit(u) | bit(v);
                        cand[of[v]] ^= bit(u) | bit(v);
                        let mut cand_of = of.clone();
                        cand_of.swap(u, v);
                        consider(cand, cand_of, &mut step);
                    }
                }
            }
            match step {
                Some((c, cand, cand_of)) => {
                    cost = c;
                    classes = cand;
                    of = cand_of;
                }
                None => break,
            }
        }
        if best.as_ref().is_none_or(|b| cost < b.0) {
            best = Some((cost, classes));
        }
    }
    let (cost, classes) = best.expect("at least one restart");
    PartitionDistance::from_masks(&classes, cost, DistanceMode::Heuristic)
}

struct Exact<'a> {
    g: &'a Graph,
    k: usize,
    classes: Vec<u64>,
    best_cost: usize,
    best: Vec<u64>,
    nodes: u64,
    budget: u64,
}

impl Exact<'_> {
    /// Cost added by putting `v` into class `c` (`c == used` opens a class),
    /// counting pairs with already assigned vertices only.
    fn increment(&self, v: usize, c: usize, assigned: u64) -> usize {
        let nb = self.g.neighbors(v);
        let class = self.classes.get(c).copied().unwrap_or(0);
        ((nb & class).count_ones() + (assigned & !class & !nb & !bit(v)).count_ones()) as usize
    }

    fn rec(&mut self, v: usize, used: usize, assigned: u64, cost: usize) -> Result<(), StabilityError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(StabilityError::BudgetExceeded { budget: self.budget });
        }
        let n = self.g.n();
        if v == n {
            if cost < self.best_cost {
                self.best_cost = cost;
                self.best = self.classes[..used].to_vec();
            }
            return Ok(());
        }
        let open = if used < self.k { used + 1 } else { used };
        let bound: usize = (v..n)
            .map(|w| (0..open).map(|c| self.increment(w, c, assigned)).min().unwrap_or(0))
            .sum();
        if cost + bound >= self.best_cost {
            return Ok(());
        }
        for c in 0..open {
            let inc = self.increment(v, c, assigned);
            if cost + inc >= self.best_cost {
                continue;
            }
            if c == used {
                self.classes.push(bit(v));
            } else {
                self.classes[c] |= bit(v);
            }
            let r = self.rec(v + 1, used.max(c + 1), assigned | bit(v), cost + inc);
            if c == used {
                self.classes.pop();
            } else {
                self.classes[c] &= !bit(v);
            }
            r?;
        }
        Ok(())
    }
}

fn exact_distance(g: &Graph, k: usize, upper: PartitionDistance, budget: u64) -> Result<PartitionDistance, StabilityError> {
    let best: Vec<u64> = upper
        .partition
        .iter()
        .map(|c| c.iter().fold(0u64, |m, &v| m | bit(v)))
        .collect();
    let mut search = Exact {
        g,
        k,
        classes: Vec::with_capacity(k),
        // one above the local-search cost, so the search itself finds a partition at most that cost
        best_cost: upper.cost + 1,
        best,
        nodes: 0,
        budget,
    };
    search.rec(0, 0, 0, 0)?;
    Ok(PartitionDistance::from_masks(&search.best, search.best_cost, DistanceMode::Exact))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    TuranGood,
    WeaklyTuranGood,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HostRow {
    pub parts: PartSizes,
    pub count: Count,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessDistance {
    pub graph6: String,
    pub distance: PartitionDistance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StabilityVerdict {
    pub n: usize,
    pub h: String,
    pub f: String,
    /// `chi(f) - 1`.
    pub k: usize,
    pub ex_value: Count,
    pub turan_parts: PartSizes,
    pub turan_host_count: Count,
    pub best_host: PartSizes,
    pub best_host_count: Count,
    /// Every complete `k`-partite host on `n` vertices.
    pub hosts: Vec<HostRow>,
    pub classification: Classification,
    pub witness_count: u64,
    pub witness_distances: Vec<WitnessDistance>,
    /// Always true: the verdict concerns this `n` only.
    pub small_n: bool,
}

fn instance_k(n: usize, h: &Graph, f: &Graph) -> Result<usize, StabilityError> {
    let (ch, cf) = (chromatic_number(h), chromatic_number(f));
    if cf <= ch {
        return Err(StabilityError::InvalidInstance(format!(
            "chi(H) = {ch} must be smaller than chi(F) = {cf}"
        )));
    }
    let k = cf - 1;
    if k > n {
        return Err(StabilityError::InvalidInstance(format!("n = {n} is below chi(F) - 1 = {k}")));
    }
    Ok(k)
}

/// Decides at order `n` whether `ex(n, h, f)` is attained by the Turán
/// graph, by some complete `(chi(f)-1)`-partite graph, or by neither.
pub fn classify(n: usize, h: &Graph, f: &Graph, cfg: &SearchConfig, dist: &DistanceConfig) -> Result<StabilityVerdict, StabilityError> {
    let k = instance_k(n, h, f)?;
    let report = ex_brute(n, h, f, cfg)?;
    let tp = turan_parts(n, k)?;
    let turan_host_count = count_copies_multipartite(h, &tp);
    let hosts: Vec<HostRow> = part_vectors(n, k)
        .into_iter()
        .map(|p| HostRow {
            count: count_copies_multipartite(h, &p),
            parts: p,
        })
        .collect();
    // highest count, ties to the most balanced (lexicographically smallest)
    let best = hosts
        .iter()
        .max_by(|a, b| a.count.cmp(&b.count).then(b.parts.cmp(&a.parts)))
        .expect("k <= n gives at least one host")
        .clone();
    if report.value < best.count {
        return Err(StabilityError::InvariantViolation(format!(
            "ex value {} below the {}-partite host count {}",
            report.value, k, best.count
        )));
    }
    let classification = if report.value == turan_host_count {
        Classification::TuranGood
    } else if report.value == best.count {
        Classification::WeaklyTuranGood
    } else {
        Classification::Neither
    };
    let witness_distances = report
        .witnesses
        .par_iter()
        .map(|w| {
            let g = crate::graph6::parse_graph6(w).expect("emitted by this crate");
            multipartite_distance(&g, k, DistanceMode::Exact, dist).map(|d| WitnessDistance {
                graph6: w.clone(),
                distance: d,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StabilityVerdict {
        n,
        h: emit_graph6(h),
        f: emit_graph6(f),
        k,
        ex_value: report.value,
        turan_parts: tp,
        turan_host_count,
        best_host: best.parts,
        best_host_count: best.count,
        hosts,
        classification,
        witness_count: report.witness_count,
        witness_distances,
        small_n: true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProfileRow {
    pub graph6: String,
    pub count: Count,
    pub distance: usize,
    pub partition: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Profile {
    pub n: usize,
    pub k: usize,
    pub slack: u64,
    pub ex_value: Count,
    /// Rows sorted by count descending, then graph6.
    pub rows: Vec<ProfileRow>,
    pub max_distance: usize,
    pub generated: u64,
}

struct Near {
    max: Option<Count>,
    rows: Vec<(Count, Graph)>,
}

impl Near {
    fn prune(&mut self, slack: &Count) {
        if let Some(m) = &self.max {
            let floor = if m.0 > slack.0 { Count(&m.0 - &slack.0) } else { Count::zero() };
            self.rows.retain(|(c, _)| *c >= floor);
        }
    }
}

/// Every `f`-free class on `n` vertices whose copy count is within `slack`
/// of `ex(n, h, f)`, with its exact distance to `(chi(f)-1)`-partite
/// structure. All classes are examined; `maximal_only` is ignored.
pub fn near_extremal_profile(n: usize, h: &Graph, f: &Graph, slack: u64, cfg: &SearchConfig, dist: &DistanceConfig) -> Result<Profile, StabilityError> {
    let k = chromatic_number(f).saturating_sub(1);
    let slack_c = Count::from(slack);
    let all = SearchConfig {
        maximal_only: false,
        ..cfg.clone()
    };
    let (near, stats) = fold_free(
        n,
        f,
        &all,
        || Near { max: None, rows: Vec::new() },
        |acc: &mut Near, g| {
            let c = count_copies(h, &g);
            if acc.max.as_ref().is_none_or(|m| c > *m) {
                acc.max = Some(c.clone());
                acc.rows.push((c, g));
                acc.prune(&slack_c);
            } else {
                let m = acc.max.as_ref().expect("set above");
                if c.0.clone() + &slack_c.0 >= m.0 {
                    acc.rows.push((c, g));
                }
            }
        },
        |mut a, b| {
            a.max = match (a.max.take(), b.max) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            };
            a.rows.extend(b.rows);
            a.prune(&slack_c);
            a
        },
    )?;
    let ex_value = near
        .max
        .ok_or_else(|| StabilityError::InvalidInstance(format!("no {n}-vertex graph avoids the forbidden graph")))?;
    let mut keyed: Vec<(Count, String, Graph)> = near.rows.into_iter().map(|(c, g)| (c, emit_graph6(&g), g)).collect();
    keyed.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let rows = keyed
        .par_iter()
        .map(|(c, g6, g)| {
            multipartite_distance(g, k.max(1), DistanceMode::Exact, dist).map(|d| ProfileRow {
                graph6: g6.clone(),
                count: c.clone(),
                distance: d.cost,
                partition: d.partition_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let max_distance = rows.iter().map(|r| r.distance).max().unwrap_or(0);
    Ok(Profile {
        n,
        k,
        slack,
        ex_value,
        rows,
        max_distance,
        generated: stats.generated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipartite::realize;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn exact(g: &Graph, k: usize) -> PartitionDistance {
        multipartite_distance(g, k, DistanceMode::Exact, &DistanceConfig::default()).unwrap()
    }

    #[test]
    fn distance_examples() {
        let d = exact(&cycle(5), 2);
        assert_eq!(d.cost, 3);
        assert_eq!(partition_cost(&cycle(5), &d.partition.iter().map(|c| c.iter().fold(0, |m, &v| m | bit(v))).collect::<Vec<_>>()), 3);
        let t73 = realize(&turan_parts(7, 3).unwrap()).unwrap();
        assert_eq!(exact(&t73, 3).cost, 0);
        let k222 = realize(&turan_parts(6, 3).unwrap()).unwrap();
        assert_eq!(exact(&k222.without_edge(0, 2), 3).cost, 1);
        // a complete bipartite graph is at distance 0 for k = 3 as well
        let k33 = realize(&turan_parts(6, 2).unwrap()).unwrap();
        assert_eq!(exact(&k33, 3).cost, 0);
        assert_eq!(exact(&Graph::complete(4).unwrap(), 3).cost, 1);
    }

    #[test]
    fn exact_budget() {
        let cfg = DistanceConfig {
            budget: 3,
            ..Default::default()
        };
        assert_eq!(
            multipartite_distance(&cycle(9), 3, DistanceMode::Exact, &cfg),
            Err(StabilityError::BudgetExceeded { budget: 3 })
        );
    }

    #[test]
    fn classify_examples() {
        let k3 = Graph::complete(3).unwrap();
        let k4 = Graph::complete(4).unwrap();
        let cfg = SearchConfig::default();
        let dc = DistanceConfig::default();
        let v = classify(6, &k3, &k4, &cfg, &dc).unwrap();
        assert_eq!(v.classification, Classification::TuranGood);
        assert_eq!(v.ex_value, Count::from(8u64));
        assert!(v.witness_distances.iter().all(|w| w.distance.cost == 0));
        assert!(v.small_n);
        assert!(matches!(classify(6, &k3, &k3, &cfg, &dc), Err(StabilityError::InvalidInstance(_))));
    }

    #[test]
    fn profile_examples() {
        let k2 = Graph::complete(2).unwrap();
        let k3 = Graph::complete(3).unwrap();
        let cfg = SearchConfig::default();
        let p = near_extremal_profile(5, &k2, &k3, 0, &cfg, &DistanceConfig::default()).unwrap();
        assert_eq!(p.rows.len(), 1);
        assert_eq!(p.rows[0].count, Count::from(6u64));
        assert_eq!(p.rows[0].distance, 0);
        let p1 = near_extremal_profile(5, &k2, &k3, 1, &cfg, &DistanceConfig::default()).unwrap();
        assert!(p1.rows.iter().any(|r| r.graph6 == crate::canon::canonical(&cycle(5)).graph6()));
        assert!(p1.rows.windows(2).all(|w| w[0].count >= w[1].count));
    }
}
