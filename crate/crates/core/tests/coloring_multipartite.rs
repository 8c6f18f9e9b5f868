mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use turan_core::coloring::{embedding_safety_check, optimal_coloring, SafetyVerdict};
use turan_core::multipartite::{Mode, OptimizeConfig};
use turan_core::{
    chromatic_number, count_copies, count_copies_multipartite, critical_r, criticality,
    enumerate_colorings, optimize_parts, realize, turan_parts, Graph, PartSizes,
};

fn small_graphs() -> Vec<Graph> {
    let mut out: Vec<Graph> = (1..=5).flat_map(common::catalogue).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..120 {
        let n = rng.gen_range(6..=7);
        let p = rng.gen_range(0.2..0.8);
        out.push(common::random_graph(&mut rng, n, p));
    }
    out
}

#[test]
fn chromatic_number_matches_exhaustive_assignment() {
    for g in small_graphs() {
        assert_eq!(chromatic_number(&g), common::brute_chromatic(&g), "{g:?}");
        assert!(optimal_coloring(&g).is_proper_for(&g));
    }
}

#[test]
fn criticality_matches_deletion_minors() {
    for g in small_graphs() {
        let rep = criticality(&g);
        let chi = common::brute_chromatic(&g);
        assert_eq!(rep.chi, chi);
        for v in 0..g.n() {
            let drops = common::brute_chromatic(&g.remove_vertex(v)) < chi;
            assert_eq!(rep.critical_vertices.contains(&v), drops);
        }
        for (u, v) in g.edges() {
            let minor = common::brute_chromatic(&g.without_edge(u, v));
            assert!(minor + 1 >= chi, "edge deletion dropped chi by more than one");
            assert_eq!(rep.critical_edges.contains(&(u, v)), minor < chi);
        }
    }
}

#[test]
fn critical_r_is_between_one_and_max_degree() {
    for g in small_graphs() {
        if let Some(w) = critical_r(&g) {
            assert!(w.r >= 1 && w.r <= g.max_degree());
            // the reported class really meets the neighbourhood in r vertices
            let class = &w.coloring.classes[w.class];
            assert_eq!(class.iter().filter(|&&u| g.has_edge(w.vertex, u)).count(), w.r);
            assert!(!class.contains(&w.vertex));
        }
    }
}

/// Set partitions of the vertex set into at most `k` independent blocks,
/// by recursive block insertion.
fn brute_partition_count(g: &Graph, k: usize) -> usize {
    fn rec(g: &Graph, v: usize, blocks: &mut Vec<Vec<usize>>, k: usize) -> usize {
        if v == g.n() {
            return 1;
        }
        let mut total = 0;
        for b in 0..blocks.len() {
            if blocks[b].iter().all(|&u| !g.has_edge(u, v)) {
                blocks[b].push(v);
                total += rec(g, v + 1, blocks, k);
                blocks[b].pop();
            }
        }
        if blocks.len() < k {
            blocks.push(vec![v]);
            total += rec(g, v + 1, blocks, k);
            blocks.pop();
        }
        total
    }
    rec(g, 0, &mut Vec::new(), k)
}

#[test]
fn colouring_enumeration_counts_partitions() {
    for g in small_graphs().into_iter().take(200) {
        let chi = chromatic_number(&g);
        assert!(enumerate_colorings(&g, chi).next().is_some());
        for k in 0..=chi + 1 {
            let cols: Vec<_> = enumerate_colorings(&g, k).collect();
            assert_eq!(cols.len(), brute_partition_count(&g, k));
            assert!(cols.iter().all(|c| c.is_proper_for(&g) && c.k <= k));
        }
    }
}

#[test]
fn c4_safety_with_matchings_in_both_parts() {
    // A matching edge in each part of K_{3,3} closes a 4-cycle a1 a2 b2 b1,
    // so the verdict is UNSAFE; the witness is checked by hand below.
    let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let parts = PartSizes::new(vec![3, 3]).unwrap();
    let SafetyVerdict::Unsafe { witness, .. } = embedding_safety_check(&c4, 2, &parts, 100_000) else {
        panic!("expected UNSAFE");
    };
    let mut g = realize(&parts).unwrap();
    let host = g.clone();
    let mut deg = [0usize; 6];
    for &(a, b) in &witness.inside_edges {
        assert!((a < 3) == (b < 3), "inside edge crosses parts");
        g.add_edge(a, b);
        deg[a] += 1;
        deg[b] += 1;
    }
    assert!(deg.iter().all(|&d| d < 2));
    let m = &witness.embedding;
    let mut uses_inside = false;
    for (x, y) in c4.edges() {
        assert!(g.has_edge(m[x], m[y]));
        uses_inside |= !host.has_edge(m[x], m[y]);
    }
    assert!(uses_inside);
}

#[test]
fn safety_with_one_part_matching_only() {
    // A single part of size 2 under K_{2,1}: one inside edge makes a triangle.
    let k3 = Graph::complete(3).unwrap();
    let verdict = embedding_safety_check(&k3, 2, &PartSizes::new(vec![2, 1]).unwrap(), 1000);
    assert!(matches!(verdict, SafetyVerdict::Unsafe { .. }));
    // Complete bipartite patterns with large classes survive matchings.
    let k33 = realize(&PartSizes::new(vec![3, 3]).unwrap()).unwrap();
    let verdict = embedding_safety_check(&k33, 2, &PartSizes::new(vec![3, 3]).unwrap(), 100_000);
    assert!(matches!(verdict, SafetyVerdict::Safe { .. }), "{verdict:?}");
}

fn arb_small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::empty(n).unwrap();
            let mut k = 0;
            for j in 1..n {
                for i in 0..j {
                    if bits[k] {
                        g.add_edge(i, j);
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

proptest! {
    #[test]
    fn closed_form_matches_realized_count(
        h in arb_small_graph(5),
        sizes in proptest::collection::vec(1usize..=4, 1..=4),
    ) {
        let p = PartSizes::new(sizes.clone()).unwrap();
        let host = realize(&p).unwrap();
        prop_assert_eq!(count_copies_multipartite(&h, &p), count_copies(&h, &host));
        let mut rev = sizes;
        rev.reverse();
        prop_assert_eq!(
            count_copies_multipartite(&h, &PartSizes::new(rev).unwrap()),
            count_copies_multipartite(&h, &p)
        );
    }
}

#[test]
fn cliques_are_maximised_by_turan_parts() {
    let cfg = OptimizeConfig::default();
    for r in 2..=4 {
        let kr = Graph::complete(r).unwrap();
        for k in r..=4 {
            for n in k..=20 {
                let exact = optimize_parts(&kr, n, k, Mode::Exact, &cfg).unwrap();
                assert_eq!(exact.best, turan_parts(n, k).unwrap(), "K{r}, n={n}, k={k}");
                let climb = optimize_parts(&kr, n, k, Mode::Hillclimb, &cfg).unwrap();
                assert_eq!(climb.count, exact.count);
                assert!(climb.moves.is_empty(), "Turán start must be a fixed point");
            }
        }
    }
}

#[test]
fn hillclimb_never_beats_exact_and_matches_it_here() {
    let cfg = OptimizeConfig::default();
    let patterns = vec![
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap(),
        Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap(),
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap(),
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(),
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap(),
        Graph::from_edges(3, &[(0, 1)]).unwrap(),
    ];
    for h in &patterns {
        for k in 2..=3 {
            for n in [k, 7, 12, 18] {
                if n < k {
                    continue;
                }
                let exact = optimize_parts(h, n, k, Mode::Exact, &cfg).unwrap();
                let climb = optimize_parts(h, n, k, Mode::Hillclimb, &cfg).unwrap();
                assert!(exact.count >= climb.count);
                assert_eq!(exact.count, climb.count, "{h:?} n={n} k={k}");
            }
        }
    }
}
