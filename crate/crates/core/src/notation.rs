//! Terse graph names.
//!
//! | form | graph |
//! |---|---|
//! | `graph6:<code>` | the graph6 code |
//! | `K<d>` | clique on `d` vertices, `d` a single digit |
//! | `K<d><d>...` | complete multipartite graph with the digits as part sizes (`K13` is the 3-star, `K222` the octahedron) |
//! | `P<k>`, `C<n>` | path on `k` vertices, cycle on `n >= 3` vertices |
//! | `F2` | two triangles sharing a vertex |
//! | `clique:n`, `path:k`, `cycle:n`, `star:t`, `empty:n` | as named; `star:t` is `K_{1,t}` |
//! | `turan:n,k` | Turán graph `T(n, k)` |
//! | `Kab:a,b,...` | complete multipartite graph with the given part sizes |
//! | `union:a,b,...` | disjoint union of cliques of the given orders |
//! | `petersen` | the Petersen graph |
//!
//! Vertex order is fixed for every form: parts and cliques occupy
//! consecutive blocks in the order given, paths and cycles run `0, 1, ...`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{build, ConstructionError, FamilyKind, FamilySpec};
use crate::graph::{Graph, GraphError};
use crate::graph6::{parse_graph6, Graph6Error};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotationError {
    #[error("unrecognised graph name {0:?}")]
    Unknown(String),
    #[error("bad number list in {0:?}")]
    BadNumbers(String),
    #[error(transparent)]
    Graph6(#[from] Graph6Error),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn numbers(s: &str, whole: &str) -> Result<Vec<usize>, NotationError> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| NotationError::BadNumbers(whole.to_string()))
}

fn family(kind: FamilyKind, parameters: Vec<usize>) -> Result<Graph, NotationError> {
    Ok(build(&FamilySpec { kind, parameters })?)
}

/// Parses a graph name; see the module documentation for the grammar.
pub fn parse_graph_spec(spec: &str) -> Result<Graph, NotationError> {
    let s = spec.trim();
    let unknown = || NotationError::Unknown(s.to_string());
    if let Some(code) = s.strip_prefix("graph6:") {
        return Ok(parse_graph6(code)?);
    }
    if let Some((name, args)) = s.split_once(':') {
        let nums = numbers(args, s)?;
        let one = |kind| match nums.as_slice() {
            [_] => family(kind, nums.clone()),
            _ => Err(NotationError::BadNumbers(s.to_string())),
        };
        return match name {
            "clique" => one(FamilyKind::Clique),
            "path" => one(FamilyKind::Path),
            "cycle" => one(FamilyKind::Cycle),
            "star" => one(FamilyKind::Star),
            "empty" => match nums.as_slice() {
                [n] => Ok(Graph::empty(*n)?),
                _ => Err(NotationError::BadNumbers(s.to_string())),
            },
            "turan" => family(FamilyKind::Turan, nums),
            "Kab" => family(FamilyKind::CompleteMultipartite, nums),
            "union" => family(FamilyKind::UnionOfCliques, nums),
            _ => Err(unknown()),
        };
    }
    match s {
        "F2" => return family(FamilyKind::BookF2, Vec::new()),
        "petersen" => return Ok(petersen()),
        _ => {}
    }
    let (head, digits) = s.split_at(s.chars().next().map_or(0, |c| c.len_utf8()));
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(unknown());
    }
    match head {
        "K" if digits.len() == 1 => family(FamilyKind::Clique, vec![digits.parse().expect("digit")]),
        "K" => family(
            FamilyKind::CompleteMultipartite,
            digits.bytes().map(|b| (b - b'0') as usize).collect(),
        ),
        "P" => family(FamilyKind::Path, vec![digits.parse().map_err(|_| unknown())?]),
        "C" => family(FamilyKind::Cycle, vec![digits.parse().map_err(|_| unknown())?]),
        _ => Err(unknown()),
    }
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges).expect("valid")
}

/// A graph given inline in an instance file: a name, an edge list, or a
/// family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    Name(String),
    EdgeList { n: usize, edges: Vec<(usize, usize)> },
    Family(FamilySpec),
}

impl GraphSource {
    pub fn resolve(&self) -> Result<Graph, NotationError> {
        match self {
            GraphSource::Name(s) => parse_graph_spec(s),
            GraphSource::EdgeList { n, edges } => Ok(Graph::from_edges(*n, edges)?),
            GraphSource::Family(f) => Ok(build(f)?),
        }
    }
}

impl From<&Graph> for GraphSource {
    fn from(g: &Graph) -> Self {
        GraphSource::EdgeList { n: g.n(), edges: g.edges() }
    }
}
