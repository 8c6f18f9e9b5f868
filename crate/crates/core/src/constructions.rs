//! Named families, disjoint unions, and the two clique-gluing constructions
//! used to build Turán-good patterns from smaller ones.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::chromatic_number;
use crate::graph::{bit, Bits, Graph, GraphError, MAX_VERTICES};
use crate::graph6::emit_graph6;
use crate::multipartite::{realize, turan_parts};
use crate::notation::{GraphSource, NotationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("invalid parameters {parameters:?} for {kind:?}: {reason}")]
    InvalidParameters {
        kind: FamilyKind,
        parameters: Vec<usize>,
        reason: &'static str,
    },
    #[error("combined order {0} exceeds 64 vertices")]
    TooLarge(usize),
    #[error("{which} = {vertices:?} is not a clique")]
    NotAClique { which: &'static str, vertices: Vec<usize> },
    #[error("pattern pair ({y}, {x}) leaves Y x X")]
    PatternOutside { y: usize, x: usize },
    #[error("extra edge ({0}, {1}) is out of range or a loop")]
    BadExtraEdge(usize, usize),
    #[error("graph: {0}")]
    Source(Box<NotationError>),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<NotationError> for ConstructionError {
    fn from(e: NotationError) -> Self {
        ConstructionError::Source(Box::new(e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FamilyKind {
    Clique,
    Path,
    Cycle,
    Star,
    CompleteMultipartite,
    Turan,
    UnionOfCliques,
    BookF2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    #[serde(default)]
    pub parameters: Vec<usize>,
}

/// Builds a named graph. Cliques, parts and union components occupy
/// consecutive vertex blocks; the star's centre and the book's shared
/// vertex are vertex 0.
pub fn build(spec: &FamilySpec) -> Result<Graph, ConstructionError> {
    let p = &spec.parameters;
    let bad = |reason| ConstructionError::InvalidParameters {
        kind: spec.kind,
        parameters: p.clone(),
        reason,
    };
    let single = || match p.as_slice() {
        [x] => Ok(*x),
        _ => Err(bad("expects exactly one parameter")),
    };
    let sizes = || {
        if p.is_empty() || p.contains(&0) {
            Err(bad("expects a nonempty list of positive sizes"))
        } else if p.iter().sum::<usize>() > MAX_VERTICES {
            Err(ConstructionError::TooLarge(p.iter().sum()))
        } else {
            Ok(p.clone())
        }
    };
    let g = match spec.kind {
        FamilyKind::Clique => {
            let n = single()?;
            if n == 0 {
                return Err(bad("order must be positive"));
            }
            Graph::complete(n)?
        }
        FamilyKind::Path => {
            let n = single()?;
            if n == 0 {
                return Err(bad("order must be positive"));
            }
            let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            Graph::from_edges(n, &edges)?
        }
        FamilyKind::Cycle => {
            let n = single()?;
            if n < 3 {
                return Err(bad("a cycle needs at least 3 vertices"));
            }
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            Graph::from_edges(n, &edges)?
        }
        FamilyKind::Star => {
            let t = single()?;
            if t == 0 {
                return Err(bad("a star needs at least one leaf"));
            }
            let edges: Vec<_> = (1..=t).map(|i| (0, i)).collect();
            Graph::from_edges(t + 1, &edges)?
        }
        FamilyKind::CompleteMultipartite => {
            let s = sizes()?;
            // keep the given order rather than PartSizes' sorted one
            let mut g = Graph::empty(s.iter().sum())?;
            let mut start = 0;
            for (i, &a) in s.iter().enumerate() {
                let rest: usize = s[i + 1..].iter().sum();
                for u in start..start + a {
                    for v in start + a..start + a + rest {
                        g.add_edge(u, v);
                    }
                }
                start += a;
            }
            g
        }
        FamilyKind::Turan => match p.as_slice() {
            [n, k] if *k >= 1 && k <= n => realize(&turan_parts(*n, *k).map_err(|_| bad("needs 1 <= k <= n"))?)?,
            _ => return Err(bad("expects n,k with 1 <= k <= n")),
        },
        FamilyKind::UnionOfCliques => {
            let s = sizes()?;
            let mut g = Graph::empty(0)?;
            for a in s {
                g = disjoint_union(&g, &Graph::complete(a)?)?;
            }
            g
        }
        FamilyKind::BookF2 => {
            if !p.is_empty() {
                return Err(bad("takes no parameters"));
            }
            Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])?
        }
    };
    Ok(g)
}

/// `h` on vertices `0..n(h)` and `h_prime` shifted to follow it.
pub fn disjoint_union(h: &Graph, h_prime: &Graph) -> Result<Graph, ConstructionError> {
    let n = h.n() + h_prime.n();
    if n > MAX_VERTICES {
        return Err(ConstructionError::TooLarge(n));
    }
    let mut edges = h.edges();
    edges.extend(h_prime.edges().into_iter().map(|(u, v)| (u + h.n(), v + h.n())));
    Ok(Graph::from_edges(n, &edges)?)
}

/// Glue `h_prime` to `h` along cliques: `pattern` lists pairs `(y, x)` with
/// `y` in the clique `Y` of `h_prime` and `x` in the clique `X` of `h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct H2Spec {
    pub h: GraphSource,
    pub x: Vec<usize>,
    pub h_prime: GraphSource,
    pub y: Vec<usize>,
    #[serde(default)]
    pub pattern: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct H2Build {
    #[serde(skip)]
    pub graph: Graph,
    pub graph6: String,
    /// `|X|`.
    pub k: usize,
    pub chromatic_number: usize,
    pub chromatic_number_h: usize,
    pub chromatic_number_h_prime: usize,
}

fn clique_mask(g: &Graph, vs: &[usize], which: &'static str) -> Result<u64, ConstructionError> {
    for &v in vs {
        g.check_vertex(v)?;
    }
    let mask = vs.iter().fold(0u64, |m, &v| m | bit(v));
    if vs.is_empty() || mask.count_ones() as usize != vs.len() || !g.is_clique(mask) {
        return Err(ConstructionError::NotAClique {
            which,
            vertices: vs.to_vec(),
        });
    }
    Ok(mask)
}

/// Disjoint union of `h` and `h_prime` plus the pattern edges; vertex `y`
/// of `h_prime` becomes `n(h) + y`.
pub fn build_h2(spec: &H2Spec) -> Result<H2Build, ConstructionError> {
    let h = spec.h.resolve()?;
    let hp = spec.h_prime.resolve()?;
    let xm = clique_mask(&h, &spec.x, "X")?;
    let ym = clique_mask(&hp, &spec.y, "Y")?;
    let mut g = disjoint_union(&h, &hp)?;
    for &(y, x) in &spec.pattern {
        if y >= 64 || x >= 64 || ym & bit(y) == 0 || xm & bit(x) == 0 {
            return Err(ConstructionError::PatternOutside { y, x });
        }
        g.add_edge(h.n() + y, x);
    }
    Ok(H2Build {
        graph6: emit_graph6(&g),
        k: spec.x.len(),
        chromatic_number: chromatic_number(&g),
        chromatic_number_h: chromatic_number(&h),
        chromatic_number_h_prime: chromatic_number(&hp),
        graph: g,
    })
}

/// `h` plus a new clique on `k` anchor vertices `v_1..v_k` (numbered
/// `n(h)..n(h)+k`), plus `extra_edges` in the numbering of the result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct H3Spec {
    pub h: GraphSource,
    pub k: usize,
    #[serde(default)]
    pub extra_edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "reason")]
pub enum H3Failure {
    /// No `K_k` contains anchor `v_i` (1-based) while avoiding every later anchor.
    #[serde(rename = "anchor")]
    Anchor { i: usize, vertex: usize },
    #[serde(rename = "chromatic")]
    Chromatic { chromatic_number: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct H3Build {
    #[serde(skip)]
    pub graph: Graph,
    pub graph6: String,
    pub anchors: Vec<usize>,
    /// For each anchor, a `K_k` through it avoiding later anchors, if any.
    pub anchor_cliques: Vec<Option<Vec<usize>>>,
    pub chromatic_number: usize,
    pub valid: bool,
    pub failure: Option<H3Failure>,
}

/// Some clique of `size` vertices inside `allowed`, containing `must`.
fn clique_containing(g: &Graph, must: usize, allowed: u64, size: usize) -> Option<Vec<usize>> {
    fn extend(g: &Graph, cand: u64, need: usize, cur: &mut Vec<usize>) -> bool {
        if need == 0 {
            return true;
        }
        if (cand.count_ones() as usize) < need {
            return false;
        }
        for v in Bits(cand) {
            cur.push(v);
            // only later candidates, so each clique is tried once
            let rest = cand & g.neighbors(v) & !((bit(v) << 1) - 1);
            if extend(g, rest, need - 1, cur) {
                return true;
            }
            cur.pop();
        }
        false
    }
    if size == 0 || allowed & bit(must) == 0 {
        return None;
    }
    let mut cur = vec![must];
    extend(g, g.neighbors(must) & allowed, size - 1, &mut cur).then(|| {
        cur.sort_unstable();
        cur
    })
}

/// Assembles the graph and checks both side conditions: each anchor `v_i`
/// lies in a `K_k` avoiding `v_j` for `j > i`, and the chromatic number is
/// `k`. A failed condition is reported, not raised.
pub fn assemble_h3(spec: &H3Spec) -> Result<H3Build, ConstructionError> {
    let h = spec.h.resolve()?;
    let k = spec.k;
    if k == 0 {
        return Err(ConstructionError::InvalidParameters {
            kind: FamilyKind::Clique,
            parameters: vec![0],
            reason: "k must be positive",
        });
    }
    let mut g = disjoint_union(&h, &Graph::complete(k)?)?;
    for &(u, v) in &spec.extra_edges {
        if u == v || u >= g.n() || v >= g.n() {
            return Err(ConstructionError::BadExtraEdge(u, v));
        }
        g.add_edge(u, v);
    }
    let anchors: Vec<usize> = (h.n()..h.n() + k).collect();
    let anchor_cliques: Vec<Option<Vec<usize>>> = anchors
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let later = anchors[i + 1..].iter().fold(0u64, |m, &w| m | bit(w));
            clique_containing(&g, v, g.vertex_mask() & !later, k)
        })
        .collect();
    let chi = chromatic_number(&g);
    let failure = match anchor_cliques.iter().position(Option::is_none) {
        Some(i) => Some(H3Failure::Anchor {
            i: i + 1,
            vertex: anchors[i],
        }),
        None if chi != k => Some(H3Failure::Chromatic { chromatic_number: chi }),
        None => None,
    };
    Ok(H3Build {
        graph6: emit_graph6(&g),
        graph: g,
        anchors,
        anchor_cliques,
        chromatic_number: chi,
        valid: failure.is_none(),
        failure,
    })
}

/// One construction request from an instance file, tagged by
/// `"construction"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "camelCase")]
pub enum Construction {
    Family(FamilySpec),
    #[serde(rename_all = "camelCase")]
    DisjointUnion {
        h: GraphSource,
        h_prime: GraphSource,
    },
    H2(H2Spec),
    H3(H3Spec),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConstructionReport {
    pub graph6: String,
    pub n: usize,
    pub edges: usize,
    pub chromatic_number: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h2: Option<H2Build>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h3: Option<H3Build>,
}

pub fn construct(c: &Construction) -> Result<(Graph, ConstructionReport), ConstructionError> {
    let (g, h2, h3) = match c {
        Construction::Family(f) => (build(f)?, None, None),
        Construction::DisjointUnion { h, h_prime } => (disjoint_union(&h.resolve()?, &h_prime.resolve()?)?, None, None),
        Construction::H2(s) => {
            let b = build_h2(s)?;
            (b.graph.clone(), Some(b), None)
        }
        Construction::H3(s) => {
            let b = assemble_h3(s)?;
            (b.graph.clone(), None, Some(b))
        }
    };
    let report = ConstructionReport {
        graph6: emit_graph6(&g),
        n: g.n(),
        edges: g.edge_count(),
        chromatic_number: chromatic_number(&g),
        h2,
        h3,
    };
    Ok((g, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{count_copies, Count};

    fn fam(kind: FamilyKind, parameters: &[usize]) -> Result<Graph, ConstructionError> {
        build(&FamilySpec {
            kind,
            parameters: parameters.to_vec(),
        })
    }

    fn src(g: &Graph) -> GraphSource {
        GraphSource::from(g)
    }

    #[test]
    fn family_examples() {
        let b = fam(FamilyKind::BookF2, &[]).unwrap();
        assert_eq!((b.n(), b.edge_count(), b.degree(0)), (5, 6, 4));
        assert_eq!(
            fam(FamilyKind::Turan, &[7, 3]).unwrap(),
            realize(&turan_parts(7, 3).unwrap()).unwrap()
        );
        let u = fam(FamilyKind::UnionOfCliques, &[3, 3, 2]).unwrap();
        assert_eq!((u.n(), u.edge_count()), (8, 7));
        assert_eq!(fam(FamilyKind::Star, &[3]).unwrap().degree(0), 3);
        assert_eq!(fam(FamilyKind::Path, &[1]).unwrap().n(), 1);
        let km = fam(FamilyKind::CompleteMultipartite, &[1, 3]).unwrap();
        assert_eq!(km, fam(FamilyKind::Star, &[3]).unwrap());
    }

    #[test]
    fn family_errors() {
        assert!(fam(FamilyKind::Cycle, &[2]).is_err());
        assert!(fam(FamilyKind::Clique, &[0]).is_err());
        assert!(fam(FamilyKind::Clique, &[65]).is_err());
        assert!(fam(FamilyKind::Turan, &[3, 4]).is_err());
        assert!(fam(FamilyKind::UnionOfCliques, &[]).is_err());
        assert!(fam(FamilyKind::UnionOfCliques, &[40, 40]).is_err());
        assert!(fam(FamilyKind::BookF2, &[1]).is_err());
    }

    #[test]
    fn union_examples() {
        let k3 = Graph::complete(3).unwrap();
        let k2 = Graph::complete(2).unwrap();
        let u = disjoint_union(&k3, &k2).unwrap();
        assert_eq!((u.n(), u.edge_count()), (5, 4));
        assert_eq!(count_copies(&k2, &u), Count::from(4u64));
        let p3 = fam(FamilyKind::Path, &[3]).unwrap();
        let pp = disjoint_union(&p3, &p3).unwrap();
        assert_eq!((pp.n(), pp.edge_count()), (6, 4));
        assert!(disjoint_union(&Graph::empty(40).unwrap(), &Graph::empty(30).unwrap()).is_err());
    }

    #[test]
    fn h2_examples() {
        let k3 = Graph::complete(3).unwrap();
        let k2 = Graph::complete(2).unwrap();
        let plain = build_h2(&H2Spec {
            h: src(&k3),
            x: vec![0, 1, 2],
            h_prime: src(&k2),
            y: vec![0, 1],
            pattern: vec![],
        })
        .unwrap();
        assert_eq!(plain.graph, disjoint_union(&k3, &k2).unwrap());

        let joined = build_h2(&H2Spec {
            h: src(&k3),
            x: vec![0, 1, 2],
            h_prime: src(&k3),
            y: vec![0],
            pattern: vec![(0, 0), (0, 1), (0, 2)],
        })
        .unwrap();
        assert_eq!(joined.graph.edge_count(), 9);
        assert_eq!(joined.graph.n(), 6);
        assert_eq!(joined.chromatic_number, 4);
        assert_eq!((joined.chromatic_number_h, joined.chromatic_number_h_prime), (3, 3));

        let outside = build_h2(&H2Spec {
            h: src(&k3),
            x: vec![0, 1],
            h_prime: src(&k3),
            y: vec![0],
            pattern: vec![(0, 2)],
        });
        assert_eq!(outside, Err(ConstructionError::PatternOutside { y: 0, x: 2 }));
        let p3 = fam(FamilyKind::Path, &[3]).unwrap();
        assert!(matches!(
            build_h2(&H2Spec {
                h: src(&p3),
                x: vec![0, 2],
                h_prime: src(&k2),
                y: vec![0],
                pattern: vec![],
            }),
            Err(ConstructionError::NotAClique { which: "X", .. })
        ));
    }

    #[test]
    fn h3_examples() {
        // two triangles of h, anchors 3,4,5; v1 and v2 each close a triangle with h
        let h = Graph::complete(3).unwrap();
        let ok = assemble_h3(&H3Spec {
            h: src(&h),
            k: 3,
            extra_edges: vec![(3, 0), (3, 1), (4, 1), (4, 2)],
        })
        .unwrap();
        assert!(ok.valid, "{:?}", ok.failure);
        assert_eq!(ok.anchors, vec![3, 4, 5]);
        assert_eq!(ok.anchor_cliques[0], Some(vec![0, 1, 3]));

        let missing = assemble_h3(&H3Spec {
            h: src(&h),
            k: 3,
            extra_edges: vec![(4, 1), (4, 2)],
        })
        .unwrap();
        assert_eq!(missing.failure, Some(H3Failure::Anchor { i: 1, vertex: 3 }));

        let k2 = Graph::complete(2).unwrap();
        let tiny = assemble_h3(&H3Spec {
            h: src(&k2),
            k: 2,
            extra_edges: vec![(2, 0)],
        })
        .unwrap();
        assert!(tiny.valid);

        let chromatic = assemble_h3(&H3Spec {
            h: src(&h),
            k: 3,
            extra_edges: vec![(3, 0), (3, 1), (3, 2), (4, 1), (4, 2)],
        })
        .unwrap();
        assert_eq!(chromatic.failure, Some(H3Failure::Chromatic { chromatic_number: 4 }));
        assert!(!chromatic.valid);
    }
}
