mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use turan_core::constructions::H3Failure;
use turan_core::{
    assemble_h3, build, canonical, count_copies, disjoint_union, parse_graph_spec, Count, FamilyKind, FamilySpec,
    Graph, GraphSource, H3Spec,
};

fn g(s: &str) -> Graph {
    parse_graph_spec(s).unwrap()
}

#[test]
fn union_counts_match_disjoint_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let pieces = [("K2", "P3"), ("K3", "K2"), ("P3", "K2"), ("K2", "K2"), ("P3", "P3"), ("K3", "K13")];
    for _ in 0..12 {
        let n = rng.gen_range(5..=8);
        let p = rng.gen_range(0.3..0.8);
        let host = common::random_graph(&mut rng, n, p);
        for (a, b) in pieces {
            let (ha, hb) = (g(a), g(b));
            let ca = common::brute_copy_list(&ha, &host);
            let cb = common::brute_copy_list(&hb, &host);
            let pairs = ca
                .iter()
                .flat_map(|x| cb.iter().map(move |y| (x, y)))
                .filter(|(x, y)| x.0.iter().all(|v| !y.0.contains(v)))
                .count() as u64;
            let symmetry = if canonical(&ha) == canonical(&hb) { 2 } else { 1 };
            let u = disjoint_union(&ha, &hb).unwrap();
            assert_eq!(count_copies(&u, &host), Count::from(pairs / symmetry), "{a}+{b} in {host:?}");
        }
    }
}

#[test]
fn build_is_deterministic() {
    let specs = [
        (FamilyKind::Clique, vec![5]),
        (FamilyKind::Path, vec![6]),
        (FamilyKind::Cycle, vec![7]),
        (FamilyKind::Star, vec![4]),
        (FamilyKind::CompleteMultipartite, vec![3, 1, 2]),
        (FamilyKind::Turan, vec![10, 4]),
        (FamilyKind::UnionOfCliques, vec![3, 3, 2]),
        (FamilyKind::BookF2, vec![]),
    ];
    for (kind, parameters) in specs {
        let spec = FamilySpec { kind, parameters };
        let a = build(&spec).unwrap();
        let b = build(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(canonical(&a), canonical(&b));
    }
}

/// Cliques of order `k` by subset enumeration.
fn brute_cliques(g: &Graph, k: usize) -> Vec<Vec<usize>> {
    common::subsets(g.n(), k)
        .into_iter()
        .filter(|s| s.iter().enumerate().all(|(i, &u)| s[..i].iter().all(|&v| g.has_edge(u, v))))
        .collect()
}

#[test]
fn h3_validity_is_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let bases = ["K3", "K2", "C5", "P3", "K4", "union:3,3"];
    let mut valid_seen = 0;
    for _ in 0..300 {
        let base = g(bases[rng.gen_range(0..bases.len())]);
        let k = rng.gen_range(2..=4);
        let total = base.n() + k;
        let extra: Vec<(usize, usize)> = (0..rng.gen_range(0..8))
            .map(|_| (rng.gen_range(base.n()..total), rng.gen_range(0..base.n())))
            .collect();
        let b = assemble_h3(&H3Spec {
            h: GraphSource::from(&base),
            k,
            extra_edges: extra,
        })
        .unwrap();
        let cliques = brute_cliques(&b.graph, k);
        let anchors_ok = b.anchors.iter().enumerate().all(|(i, &v)| {
            cliques
                .iter()
                .any(|c| c.contains(&v) && b.anchors[i + 1..].iter().all(|w| !c.contains(w)))
        });
        let chi_ok = common::brute_chromatic(&b.graph) == k;
        assert_eq!(b.valid, anchors_ok && chi_ok);
        match b.failure {
            Some(H3Failure::Anchor { .. }) => assert!(!anchors_ok),
            Some(H3Failure::Chromatic { chromatic_number }) => {
                assert!(anchors_ok);
                assert_eq!(chromatic_number, common::brute_chromatic(&b.graph));
            }
            None => valid_seen += 1,
        }
    }
    assert!(valid_seen > 0);
}
