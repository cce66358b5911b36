//! Weighted homomorphism counts `hom(F, H)` and homomorphism polynomials
//! `hom(g, X)`.
//!
//! `hom(F, H) = Σ_φ Π_v α(φ(v)) Π_{ij ∈ E(F)} β(φ(i), φ(j))`, the sum over all
//! maps `φ: V(F) -> [q]`, with an edge of multiplicity `m` contributing
//! `β^m`. Two interchangeable counters are registered by name:
//!
//! * `brute` enumerates all `q^|V|` maps;
//! * `dp` eliminates vertices one at a time (greedy minimum degree) over
//!   factor tables, which is exponential only in the elimination width.
//!
//! Both are generic over a [`Semiring`], so the same code evaluates rational
//! weights and symbolic polynomial weights.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{CanonicalKey, Multigraph};
use crate::poly::SymPolynomial;
use crate::quantum::QuantumGraph;
use crate::rational::Rational;

/// Default cap on maps visited by `brute`.
pub const BRUTE_FORCE_BUDGET: f64 = 4.0e6;
/// Default cap on table entries touched by `dp`.
pub const ELIMINATION_BUDGET: f64 = 5.0e7;

pub trait Semiring {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn pow(&self, a: &Self::Elem, e: u32) -> Self::Elem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }
}

pub struct Rationals;

impl Semiring for Rationals {
    type Elem = Rational;
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn pow(&self, a: &Rational, e: u32) -> Rational {
        num_traits::pow(a.clone(), e as usize)
    }
}

pub struct PolynomialRing {
    pub q: usize,
}

impl Semiring for PolynomialRing {
    type Elem = SymPolynomial;
    fn zero(&self) -> SymPolynomial {
        SymPolynomial::zero(self.q)
    }
    fn one(&self) -> SymPolynomial {
        SymPolynomial::one(self.q)
    }
    fn add(&self, a: &SymPolynomial, b: &SymPolynomial) -> SymPolynomial {
        a.add(b).expect("same ring")
    }
    fn mul(&self, a: &SymPolynomial, b: &SymPolynomial) -> SymPolynomial {
        a.mul(b).expect("same ring")
    }
    fn pow(&self, a: &SymPolynomial, e: u32) -> SymPolynomial {
        a.pow(e)
    }
}

/// Node-weighted, edge-weighted target on `[q]`. Diagonal edge weights are
/// allowed; node weights need not sum to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedTarget {
    node_weights: Vec<Rational>,
    edge_weights: Vec<Vec<Rational>>,
}

impl WeightedTarget {
    pub fn new(node_weights: Vec<Rational>, edge_weights: Vec<Vec<Rational>>) -> Result<Self> {
        let q = node_weights.len();
        if q == 0 {
            return Err(Error::InvalidInput("target needs at least one node".into()));
        }
        if edge_weights.len() != q || edge_weights.iter().any(|r| r.len() != q) {
            return Err(Error::Mismatch(format!(
                "{q} node weights need a {q}x{q} edge-weight matrix"
            )));
        }
        for i in 0..q {
            for j in 0..i {
                if edge_weights[i][j] != edge_weights[j][i] {
                    return Err(Error::InvalidMatrix(format!(
                        "edge weights not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(WeightedTarget {
            node_weights,
            edge_weights,
        })
    }

    /// Node weights all 1.
    pub fn unit_nodes(edge_weights: Vec<Vec<Rational>>) -> Result<Self> {
        Self::new(vec![Rational::one(); edge_weights.len()], edge_weights)
    }

    pub fn node_count(&self) -> usize {
        self.node_weights.len()
    }

    pub fn node_weights(&self) -> &[Rational] {
        &self.node_weights
    }

    pub fn edge_weights(&self) -> &[Vec<Rational>] {
        &self.edge_weights
    }
}

/// A homomorphism-counting strategy.
pub trait HomCounter: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// Estimated work for `f` into a `q`-node target, in the units of the
    /// strategy's budget.
    fn cost(&self, f: &Multigraph, q: usize) -> f64;
    fn count(&self, f: &Multigraph, target: &WeightedTarget) -> Result<Rational>;
    /// Symbolic count into the target with node weights 1 and edge weights
    /// `x_ij`.
    fn polynomial(&self, f: &Multigraph, q: usize) -> Result<SymPolynomial>;
}

fn variable_matrix(q: usize) -> Vec<Vec<SymPolynomial>> {
    (1..=q)
        .map(|i| {
            (1..=q)
                .map(|j| SymPolynomial::var(q, i, j).expect("in range"))
                .collect()
        })
        .collect()
}

fn guard(cost: f64, budget: f64, f: &Multigraph, q: usize) -> Result<()> {
    if cost > budget {
        return Err(Error::too_large(
            "instance",
            format!(
                "{} vertices into {q} target nodes needs ~{cost:.3e} steps (budget {budget:.0e})",
                f.vertex_count()
            ),
        ));
    }
    Ok(())
}

/// Enumerates every map `V(F) -> [q]`.
pub struct BruteForce {
    pub budget: f64,
}

impl Default for BruteForce {
    fn default() -> Self {
        BruteForce {
            budget: BRUTE_FORCE_BUDGET,
        }
    }
}

pub fn brute_force<R: Semiring>(ring: &R, f: &Multigraph, nodes: &[R::Elem], edges: &[Vec<R::Elem>]) -> R::Elem {
    let n = f.vertex_count();
    let q = nodes.len();
    let pairs: Vec<((usize, usize), u32)> = f.edges().collect();
    let powered = edge_powers(ring, edges, pairs.iter().map(|&(_, m)| m));
    let mut phi = vec![0usize; n];
    let mut total = ring.zero();
    loop {
        let mut term = ring.one();
        for &v in &phi {
            term = ring.mul(&term, &nodes[v]);
        }
        for &((i, j), m) in &pairs {
            term = ring.mul(&term, &powered[&m][phi[i]][phi[j]]);
        }
        total = ring.add(&total, &term);
        // odometer
        let mut k = 0;
        loop {
            if k == n {
                return total;
            }
            phi[k] += 1;
            if phi[k] < q {
                break;
            }
            phi[k] = 0;
            k += 1;
        }
    }
}

fn edge_powers<R: Semiring>(
    ring: &R,
    edges: &[Vec<R::Elem>],
    mults: impl Iterator<Item = u32>,
) -> BTreeMap<u32, Vec<Vec<R::Elem>>> {
    let mut out = BTreeMap::new();
    for m in mults {
        out.entry(m).or_insert_with(|| {
            edges
                .iter()
                .map(|row| row.iter().map(|w| ring.pow(w, m)).collect())
                .collect()
        });
    }
    out
}

impl HomCounter for BruteForce {
    fn name(&self) -> &'static str {
        "brute"
    }
    fn description(&self) -> &'static str {
        "enumerate all q^|V| vertex maps"
    }
    fn cost(&self, f: &Multigraph, q: usize) -> f64 {
        (q as f64).powi(f.vertex_count() as i32)
    }
    fn count(&self, f: &Multigraph, target: &WeightedTarget) -> Result<Rational> {
        let q = target.node_count();
        guard(self.cost(f, q), self.budget, f, q)?;
        Ok(brute_force(&Rationals, f, &target.node_weights, &target.edge_weights))
    }
    fn polynomial(&self, f: &Multigraph, q: usize) -> Result<SymPolynomial> {
        guard(self.cost(f, q), self.budget, f, q)?;
        let ring = PolynomialRing { q };
        let nodes = vec![ring.one(); q];
        Ok(brute_force(&ring, f, &nodes, &variable_matrix(q)))
    }
}

/// Vertex elimination over factor tables.
pub struct Elimination {
    pub budget: f64,
}

impl Default for Elimination {
    fn default() -> Self {
        Elimination {
            budget: ELIMINATION_BUDGET,
        }
    }
}

/// Greedy minimum-degree elimination order on the skeleton of `f`, with the
/// scope size of each elimination step.
pub fn elimination_order(f: &Multigraph) -> Vec<(usize, usize)> {
    let n = f.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for ((i, j), _) in f.edges() {
        adj[i].insert(j);
        adj[j].insert(i);
    }
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&v) = alive.iter().min_by_key(|&&v| (adj[v].len(), v)) {
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        order.push((v, nb.len() + 1));
        for &a in &nb {
            adj[a].remove(&v);
            for &b in &nb {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
        adj[v].clear();
        alive.remove(&v);
    }
    order
}

struct Factor<E> {
    scope: Vec<usize>,
    table: Vec<E>,
}

fn index_of(scope: &[usize], assignment: &[usize], q: usize) -> usize {
    scope.iter().rev().fold(0, |acc, &v| acc * q + assignment[v])
}

pub fn eliminate<R: Semiring>(ring: &R, f: &Multigraph, nodes: &[R::Elem], edges: &[Vec<R::Elem>]) -> R::Elem {
    let n = f.vertex_count();
    let q = nodes.len();
    let mut factors: Vec<Factor<R::Elem>> = Vec::new();
    for v in 0..n {
        factors.push(Factor {
            scope: vec![v],
            table: nodes.to_vec(),
        });
    }
    let powered = edge_powers(ring, edges, f.edges().map(|(_, m)| m));
    for ((i, j), m) in f.edges() {
        let w = &powered[&m];
        // scope [i, j] with i varying fastest
        let mut table = Vec::with_capacity(q * q);
        for b in 0..q {
            for a in 0..q {
                table.push(w[a][b].clone());
            }
        }
        factors.push(Factor {
            scope: vec![i, j],
            table,
        });
    }

    let mut assignment = vec![0usize; n];
    for (v, _) in elimination_order(f) {
        let (touching, rest): (Vec<_>, Vec<_>) = factors.into_iter().partition(|fa| fa.scope.contains(&v));
        factors = rest;
        let scope: Vec<usize> = touching
            .iter()
            .flat_map(|fa| fa.scope.iter().copied())
            .filter(|&u| u != v)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let size = q.pow(scope.len() as u32);
        let mut table = Vec::with_capacity(size);
        for idx in 0..size {
            let mut rem = idx;
            for &u in &scope {
                assignment[u] = rem % q;
                rem /= q;
            }
            let mut sum = ring.zero();
            for val in 0..q {
                assignment[v] = val;
                let mut prod = ring.one();
                for fa in &touching {
                    prod = ring.mul(&prod, &fa.table[index_of(&fa.scope, &assignment, q)]);
                }
                sum = ring.add(&sum, &prod);
            }
            table.push(sum);
        }
        factors.push(Factor { scope, table });
    }
    factors.iter().fold(ring.one(), |acc, fa| ring.mul(&acc, &fa.table[0]))
}

impl HomCounter for Elimination {
    fn name(&self) -> &'static str {
        "dp"
    }
    fn description(&self) -> &'static str {
        "vertex elimination with greedy minimum-degree order"
    }
    fn cost(&self, f: &Multigraph, q: usize) -> f64 {
        elimination_order(f)
            .iter()
            .map(|&(_, width)| (q as f64).powi(width as i32))
            .sum()
    }
    fn count(&self, f: &Multigraph, target: &WeightedTarget) -> Result<Rational> {
        let q = target.node_count();
        guard(self.cost(f, q), self.budget, f, q)?;
        Ok(eliminate(&Rationals, f, &target.node_weights, &target.edge_weights))
    }
    fn polynomial(&self, f: &Multigraph, q: usize) -> Result<SymPolynomial> {
        guard(self.cost(f, q), self.budget, f, q)?;
        let ring = PolynomialRing { q };
        let nodes = vec![ring.one(); q];
        Ok(eliminate(&ring, f, &nodes, &variable_matrix(q)))
    }
}

/// Name-keyed set of [`HomCounter`]s.
#[derive(Clone)]
pub struct HomRegistry {
    counters: BTreeMap<&'static str, Arc<dyn HomCounter>>,
}

impl Default for HomRegistry {
    fn default() -> Self {
        let mut r = HomRegistry {
            counters: BTreeMap::new(),
        };
        r.register(Arc::new(BruteForce::default()));
        r.register(Arc::new(Elimination::default()));
        r
    }
}

impl HomRegistry {
    pub const DEFAULT: &'static str = "dp";

    pub fn register(&mut self, counter: Arc<dyn HomCounter>) {
        self.counters.insert(counter.name(), counter);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn HomCounter>> {
        self.counters
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownToken(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.counters.keys().copied()
    }
}

/// `hom(F, H)` with the default counter.
pub fn hom_count(f: &Multigraph, target: &WeightedTarget) -> Result<Rational> {
    Elimination::default().count(f, target)
}

/// Homomorphism polynomial of an unlabeled quantum graph.
///
/// Constituents are split into connected components, whose polynomials are
/// computed once each and multiplied.
pub fn hom_poly(g: &QuantumGraph, q: usize) -> Result<SymPolynomial> {
    hom_poly_with(g, q, &Elimination::default())
}

pub fn hom_poly_with(g: &QuantumGraph, q: usize, counter: &dyn HomCounter) -> Result<SymPolynomial> {
    if q == 0 {
        return Err(Error::InvalidInput("q must be at least 1".into()));
    }
    if g.is_labeled() {
        return Err(Error::InvalidInput(
            "homomorphism polynomials need unlabeled quantum graphs; unlabel first".into(),
        ));
    }
    let mut memo: BTreeMap<CanonicalKey, SymPolynomial> = BTreeMap::new();
    let mut total = SymPolynomial::zero(q);
    for (c, f) in g.terms() {
        let mut prod = SymPolynomial::one(q);
        for vs in f.components() {
            let comp = component(f, &vs);
            let key = comp.canonical_key()?;
            let p = match memo.get(&key) {
                Some(p) => p.clone(),
                None => {
                    let p = counter.polynomial(&comp, q)?;
                    memo.insert(key, p.clone());
                    p
                }
            };
            prod = prod.mul(&p)?;
        }
        total = total.add(&prod.scale(c))?;
    }
    Ok(total)
}

fn component(f: &Multigraph, vs: &[usize]) -> Multigraph {
    let index: BTreeMap<usize, usize> = vs.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let edges: Vec<(usize, usize, u32)> = f
        .edges()
        .filter_map(|((i, j), m)| Some((*index.get(&i)?, *index.get(&j)?, m)))
        .collect();
    Multigraph::with_multiplicities(vs.len(), &edges, &[]).expect("component of a valid graph")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::standard_graph;
    use crate::rational::{int, ratio};

    fn ones(q: usize) -> WeightedTarget {
        WeightedTarget::unit_nodes(vec![vec![int(1); q]; q]).unwrap()
    }

    #[test]
    fn single_vertex_counts_nodes() {
        for q in 1..5 {
            assert_eq!(hom_count(&Multigraph::empty(1), &ones(q)).unwrap(), int(q as i64));
        }
    }

    #[test]
    fn edge_into_all_ones() {
        assert_eq!(hom_count(&Multigraph::complete(2), &ones(2)).unwrap(), int(4));
        assert_eq!(
            BruteForce::default().count(&Multigraph::complete(2), &ones(2)).unwrap(),
            int(4)
        );
    }

    #[test]
    fn empty_graph_is_one() {
        let t = WeightedTarget::new(vec![int(3)], vec![vec![int(5)]]).unwrap();
        assert_eq!(hom_count(&Multigraph::empty(0), &t).unwrap(), int(1));
    }

    #[test]
    fn multiplicity_is_a_power() {
        let t = WeightedTarget::new(
            vec![ratio(1, 2), ratio(1, 2)],
            vec![vec![int(2), int(0)], vec![int(0), int(3)]],
        )
        .unwrap();
        let dbl = Multigraph::with_multiplicities(2, &[(0, 1, 2)], &[]).unwrap();
        // 1/4 (2^2 + 3^2)
        assert_eq!(hom_count(&dbl, &t).unwrap(), ratio(13, 4));
        assert_eq!(BruteForce::default().count(&dbl, &t).unwrap(), ratio(13, 4));
    }

    #[test]
    fn target_validation() {
        assert!(WeightedTarget::unit_nodes(vec![vec![int(1), int(2)], vec![int(3), int(1)]]).is_err());
        assert!(WeightedTarget::new(vec![int(1)], vec![vec![int(1), int(1)]]).is_err());
        assert!(WeightedTarget::new(vec![], vec![]).is_err());
    }

    #[test]
    fn hom_polynomials() {
        assert_eq!(hom_poly(&QuantumGraph::unit(), 3).unwrap(), SymPolynomial::one(3));
        let k1 = QuantumGraph::graph(&Multigraph::empty(1)).unwrap();
        assert_eq!(hom_poly(&k1, 2).unwrap(), SymPolynomial::constant(2, int(2)));
        let k2 = QuantumGraph::graph(&Multigraph::complete(2)).unwrap();
        assert_eq!(hom_poly(&k2, 2).unwrap().to_compact_string(), "x11 + 2 x12 + x22");
    }

    #[test]
    fn labeled_input_rejected() {
        let dot = QuantumGraph::graph(&Multigraph::new(2, &[(0, 1)], &[(0, 1)]).unwrap()).unwrap();
        assert!(matches!(hom_poly(&dot, 2), Err(Error::InvalidInput(_))));
        assert!(hom_poly(&QuantumGraph::unit(), 0).is_err());
    }

    #[test]
    fn size_guard() {
        let small = BruteForce { budget: 10.0 };
        assert!(matches!(
            small.count(&Multigraph::empty(4), &ones(2)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn registry_lookup() {
        let r = HomRegistry::default();
        assert_eq!(r.names().collect::<Vec<_>>(), vec!["brute", "dp"]);
        assert_eq!(r.get("dp").unwrap().name(), "dp");
        assert!(r.get("magic").is_err());
    }

    #[test]
    fn elimination_order_on_path_is_linear() {
        let p5 = standard_graph("P5").unwrap();
        assert!(elimination_order(&p5).iter().all(|&(_, w)| w <= 2));
        let k4 = Multigraph::complete(4);
        assert_eq!(elimination_order(&k4)[0].1, 4);
    }
}
