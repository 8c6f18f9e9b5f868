//! Subgraph copy counting.
//!
//! A copy of `H` in `G` is a (not necessarily induced) subgraph of `G`
//! isomorphic to `H`. Every copy is the image of exactly `|Aut(H)|`
//! injective homomorphisms, so `N(H, G) = inj(H, G) / |Aut(H)|`.

use std::fmt;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::canon::canon;
use crate::graph::{bit, Bits, Graph, GraphError};

/// An exact non-negative count. Serialises as a decimal string.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Count(pub BigUint);

impl Count {
    pub fn zero() -> Self {
        Count(BigUint::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl From<u64> for Count {
    fn from(v: u64) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<u128> for Count {
    fn from(v: u128) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<BigUint> for Count {
    fn from(v: BigUint) -> Self {
        Count(v)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

/// `n (n-1) ... (n-k+1)`, zero when `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (n - k + 1..=n).fold(BigUint::one(), |acc, x| acc * x)
}

/// Search order and back-edge structure for embedding a pattern graph.
struct Plan {
    /// Pattern vertices in search order.
    order: Vec<usize>,
    /// For each position, the earlier positions adjacent to it.
    back: Vec<Vec<usize>>,
    /// Pattern degree per position, used to filter host candidates.
    degree: Vec<usize>,
}

impl Plan {
    /// Orders the vertices of `h` in `verts`, starting from `first` if given,
    /// greedily preferring the most already-placed neighbours.
    fn new(h: &Graph, verts: u64, first: Option<usize>) -> Plan {
        let mut order = Vec::with_capacity(verts.count_ones() as usize);
        let mut placed = 0u64;
        let mut left = verts;
        while left != 0 {
            let pick = match first {
                Some(f) if placed == 0 && left & bit(f) != 0 => f,
                _ => Bits(left)
                    .max_by_key(|&v| {
                        (
                            (h.neighbors(v) & placed).count_ones(),
                            h.degree(v),
                            std::cmp::Reverse(v),
                        )
                    })
                    .expect("left is nonempty"),
            };
            order.push(pick);
            placed |= bit(pick);
            left &= !bit(pick);
        }
        let pos_of = |v: usize| order.iter().position(|&x| x == v).expect("ordered");
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                Bits(h.neighbors(v) & verts)
                    .map(pos_of)
                    .filter(|&j| j < i)
                    .collect()
            })
            .collect();
        let degree = order.iter().map(|&v| h.degree(v)).collect();
        Plan { order, back, degree }
    }
}

struct Embedder<'a> {
    plan: &'a Plan,
    g: &'a Graph,
    /// `min_degree_mask[d]`: host vertices of degree at least `d`.
    min_degree_mask: Vec<u64>,
    image: Vec<usize>,
}

impl<'a> Embedder<'a> {
    fn new(plan: &'a Plan, g: &'a Graph) -> Self {
        let maxd = plan.degree.iter().copied().max().unwrap_or(0);
        let min_degree_mask = (0..=maxd)
            .map(|d| Bits(g.vertex_mask()).filter(|&v| g.degree(v) >= d).fold(0, |m, v| m | bit(v)))
            .collect();
        Embedder {
            plan,
            g,
            min_degree_mask,
            image: vec![0; plan.order.len()],
        }
    }

    #[inline]
    fn candidates(&self, pos: usize, free: u64) -> u64 {
        let mut cand = free & self.min_degree_mask[self.plan.degree[pos]];
        for &j in &self.plan.back[pos] {
            cand &= self.g.neighbors(self.image[j]);
        }
        cand
    }

    fn count(&mut self, pos: usize, free: u64) -> u128 {
        let cand = self.candidates(pos, free);
        if pos + 1 == self.plan.order.len() {
            return cand.count_ones() as u128;
        }
        let mut total = 0u128;
        for w in Bits(cand) {
            self.image[pos] = w;
            total += self.count(pos + 1, free & !bit(w));
        }
        total
    }

    fn visit<F>(&mut self, pos: usize, free: u64, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if pos == self.plan.order.len() {
            return f(&self.image);
        }
        for w in Bits(self.candidates(pos, free)) {
            self.image[pos] = w;
            self.visit(pos + 1, free & !bit(w), f)?;
        }
        ControlFlow::Continue(())
    }
}

fn non_isolated(h: &Graph) -> u64 {
    Bits(h.vertex_mask())
        .filter(|&v| h.neighbors(v) != 0)
        .fold(0, |m, v| m | bit(v))
}

/// Injective maps `V(h) -> V(g)` carrying edges to edges, where `pin`
/// optionally forces one pattern vertex onto one host vertex.
fn injective_homs(h: &Graph, g: &Graph, pin: Option<(usize, usize)>) -> BigUint {
    if h.n() > g.n() {
        return BigUint::zero();
    }
    let core = non_isolated(h);
    let m = core.count_ones() as u64;
    let isolated = h.n() as u64 - m;
    let gn = g.n() as u64;
    match pin {
        None => {
            let core_homs = if m == 0 {
                1
            } else {
                let plan = Plan::new(h, core, None);
                Embedder::new(&plan, g).count(0, g.vertex_mask())
            };
            BigUint::from(core_homs) * falling_factorial(gn - m, isolated)
        }
        Some((x, v)) if core & bit(x) == 0 => {
            // x is isolated: it takes v, the rest avoid v.
            let free = g.vertex_mask() & !bit(v);
            let core_homs = if m == 0 {
                1
            } else {
                let plan = Plan::new(h, core, None);
                Embedder::new(&plan, g).count(0, free)
            };
            BigUint::from(core_homs) * falling_factorial(gn - 1 - m, isolated - 1)
        }
        Some((x, v)) => {
            let plan = Plan::new(h, core, Some(x));
            let mut e = Embedder::new(&plan, g);
            if g.degree(v) < plan.degree[0] {
                return BigUint::zero();
            }
            e.image[0] = v;
            let core_homs = if m == 1 {
                1
            } else {
                e.count(1, g.vertex_mask() & !bit(v))
            };
            BigUint::from(core_homs) * falling_factorial(gn - m, isolated)
        }
    }
}

/// Number of injective homomorphisms from `h` into `g`.
pub fn count_injective_homs(h: &Graph, g: &Graph) -> Count {
    Count(injective_homs(h, g, None))
}

/// `N(h, g)`: the number of copies of `h` in `g`.
pub fn count_copies(h: &Graph, g: &Graph) -> Count {
    let homs = injective_homs(h, g, None);
    if homs.is_zero() {
        return Count::zero();
    }
    let aut = canon(h).form.aut_order;
    let (q, r) = homs.div_rem(&aut);
    debug_assert!(r.is_zero(), "injective homs not divisible by |Aut(h)|");
    Count(q)
}

/// Number of copies of `h` in `g` whose vertex set contains `v`.
pub fn copy_degree(h: &Graph, g: &Graph, v: usize) -> Result<Count, GraphError> {
    g.check_vertex(v)?;
    let c = canon(h);
    let mut total = BigUint::zero();
    for x in 0..h.n() {
        if c.orbits[x] != x {
            continue;
        }
        let orbit_size = c.orbits.iter().filter(|&&o| o == x).count();
        total += injective_homs(h, g, Some((x, v))) * BigUint::from(orbit_size);
    }
    let (q, r) = total.div_rem(&c.form.aut_order);
    debug_assert!(r.is_zero(), "pinned homs not divisible by |Aut(h)|");
    Ok(Count(q))
}

/// Calls `f(order, image)` for every injective homomorphism `h -> g` until
/// it breaks; `image[i]` is the host vertex of pattern vertex `order[i]`.
pub fn for_each_embedding<F>(h: &Graph, g: &Graph, mut f: F) -> ControlFlow<()>
where
    F: FnMut(&[usize], &[usize]) -> ControlFlow<()>,
{
    if h.n() > g.n() {
        return ControlFlow::Continue(());
    }
    let plan = Plan::new(h, h.vertex_mask(), None);
    if plan.order.is_empty() {
        return f(&[], &[]);
    }
    let order = plan.order.clone();
    let mut e = Embedder::new(&plan, g);
    e.visit(0, g.vertex_mask(), &mut |img: &[usize]| f(&order, img))
}

/// Some injective homomorphism `h -> g` as a map `pattern vertex -> host vertex`.
pub fn find_embedding(h: &Graph, g: &Graph) -> Option<Vec<usize>> {
    let mut found = None;
    let _ = for_each_embedding(h, g, |order, img| {
        let mut map = vec![0; order.len()];
        for (i, &x) in order.iter().enumerate() {
            map[x] = img[i];
        }
        found = Some(map);
        ControlFlow::Break(())
    });
    found
}

/// Whether `g` contains no copy of `f`.
pub fn is_free(g: &Graph, f: &Graph) -> bool {
    if f.n() > g.n() || f.edge_count() > g.edge_count() {
        return true;
    }
    // isolated vertices of f only need room, which n(f) <= n(g) provides
    let core = non_isolated(f);
    if core == 0 {
        return false;
    }
    let plan = Plan::new(f, core, None);
    let mut e = Embedder::new(&plan, g);
    e.visit(0, g.vertex_mask(), &mut |_| ControlFlow::Break(()))
        .is_continue()
}
