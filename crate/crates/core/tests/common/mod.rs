//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the search or counting code it is used to check.
#![allow(dead_code)]

use std::collections::HashSet;

use turan_core::Graph;

/// A copy as its sorted vertex set and sorted edge list.
pub type CopyKey = (Vec<usize>, Vec<(usize, usize)>);

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.n();
    (0..n)
        .map(|u| (0..n).map(|v| g.has_edge(u, v)).collect())
        .collect()
}

/// Isomorphism by trying every bijection.
pub fn brute_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let (aa, bb) = (adjacency(a), adjacency(b));
    let n = a.n();
    permutations(n)
        .iter()
        .any(|p| (0..n).all(|u| (0..n).all(|v| aa[u][v] == bb[p[u]][p[v]])))
}

pub fn brute_aut_count(g: &Graph) -> u64 {
    let a = adjacency(g);
    let n = g.n();
    permutations(n)
        .iter()
        .filter(|p| (0..n).all(|u| (0..n).all(|v| a[u][v] == a[p[u]][p[v]])))
        .count() as u64
}

/// `k`-subsets of `0..n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Number of distinct subgraphs of `g` isomorphic to `h`: every vertex
/// subset, every bijection onto it, deduplicated by (vertex set, edge set).
pub fn brute_copies(h: &Graph, g: &Graph) -> u64 {
    let k = h.n();
    if k > g.n() {
        return 0;
    }
    let he = h.edges();
    let perms = permutations(k);
    let mut seen: HashSet<CopyKey> = HashSet::new();
    for set in subsets(g.n(), k) {
        for p in &perms {
            let map: Vec<usize> = p.iter().map(|&i| set[i]).collect();
            if he.iter().all(|&(a, b)| g.has_edge(map[a], map[b])) {
                let mut edges: Vec<(usize, usize)> = he
                    .iter()
                    .map(|&(a, b)| (map[a].min(map[b]), map[a].max(map[b])))
                    .collect();
                edges.sort_unstable();
                seen.insert((set.clone(), edges));
            }
        }
    }
    seen.len() as u64
}

/// Every copy of `h` in `g` as (sorted vertex set, sorted edge set).
pub fn brute_copy_list(h: &Graph, g: &Graph) -> Vec<CopyKey> {
    let k = h.n();
    if k > g.n() {
        return Vec::new();
    }
    let he = h.edges();
    let perms = permutations(k);
    let mut seen: HashSet<CopyKey> = HashSet::new();
    for set in subsets(g.n(), k) {
        for p in &perms {
            let map: Vec<usize> = p.iter().map(|&i| set[i]).collect();
            if he.iter().all(|&(a, b)| g.has_edge(map[a], map[b])) {
                let mut edges: Vec<(usize, usize)> = he
                    .iter()
                    .map(|&(a, b)| (map[a].min(map[b]), map[a].max(map[b])))
                    .collect();
                edges.sort_unstable();
                seen.insert((set.clone(), edges));
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    out
}

/// Copies of `h` whose vertex set contains `v`, same deduplication.
pub fn brute_copy_degree(h: &Graph, g: &Graph, v: usize) -> u64 {
    let k = h.n();
    let he = h.edges();
    let perms = permutations(k);
    let mut seen: HashSet<CopyKey> = HashSet::new();
    for set in subsets(g.n(), k).into_iter().filter(|s| s.contains(&v)) {
        for p in &perms {
            let map: Vec<usize> = p.iter().map(|&i| set[i]).collect();
            if he.iter().all(|&(a, b)| g.has_edge(map[a], map[b])) {
                let mut edges: Vec<(usize, usize)> = he
                    .iter()
                    .map(|&(a, b)| (map[a].min(map[b]), map[a].max(map[b])))
                    .collect();
                edges.sort_unstable();
                seen.insert((set.clone(), edges));
            }
        }
    }
    seen.len() as u64
}

/// Chromatic number by trying every assignment into `k` colours.
pub fn brute_chromatic(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let edges = g.edges();
    for k in 1..=n {
        let mut col = vec![0usize; n];
        loop {
            if edges.iter().all(|&(a, b)| col[a] != col[b]) {
                return k;
            }
            let mut i = 0;
            while i < n {
                col[i] += 1;
                if col[i] < k {
                    break;
                }
                col[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    n
}

/// Every labelled graph on `n` vertices.
pub fn all_labelled(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
        .collect()
}

/// One representative per isomorphism class, found by pairwise brute-force
/// isomorphism tests bucketed by sorted degree sequence.
pub fn catalogue(n: usize) -> Vec<Graph> {
    let mut buckets: std::collections::HashMap<Vec<usize>, Vec<Graph>> = Default::default();
    for g in all_labelled(n) {
        let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        deg.sort_unstable();
        let bucket = buckets.entry(deg).or_default();
        if !bucket.iter().any(|r| brute_isomorphic(r, &g)) {
            bucket.push(g);
        }
    }
    buckets.into_values().flatten().collect()
}

pub fn random_graph(rng: &mut impl rand::Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n).unwrap();
    for j in 1..n {
        for i in 0..j {
            if rng.gen_bool(p) {
                g.add_edge(i, j);
            }
        }
    }
    g
}
