//! Oracles and random instance generators shared by the integration tests.
//! The oracles are written from the definitions and share no code with the
//! library routines they check.
#![allow(dead_code)]

use std::collections::BTreeMap;

use graphon_core::kernel::StepKernel;
use graphon_core::rational::{int, ratio, Rational};
use graphon_core::{Multigraph, QuantumGraph};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

/// `t(F, W) = Σ_φ Π_v μ_φ(v) Π_{ij} P_φ(i)φ(j)^m`, summed over all maps.
pub fn density_oracle(f: &Multigraph, w: &StepKernel) -> Rational {
    let n = f.vertex_count();
    let q = w.step_count();
    let mut total = Rational::zero();
    let maps = q.pow(n as u32);
    for code in 0..maps {
        let phi: Vec<usize> = (0..n).map(|k| code / q.pow(k as u32) % q).collect();
        let mut term = Rational::one();
        for &v in &phi {
            term *= &w.steps()[v];
        }
        for ((i, j), m) in f.edges() {
            for _ in 0..m {
                term *= &w.values()[phi[i]][phi[j]];
            }
        }
        total += term;
    }
    total
}

/// Weighted homomorphism count by direct enumeration.
pub fn hom_oracle(f: &Multigraph, nodes: &[Rational], edges: &[Vec<Rational>]) -> Rational {
    let n = f.vertex_count();
    let q = nodes.len();
    let mut total = Rational::zero();
    for code in 0..q.pow(n as u32) {
        let phi: Vec<usize> = (0..n).map(|k| code / q.pow(k as u32) % q).collect();
        let mut term: Rational = phi.iter().map(|&v| nodes[v].clone()).product();
        for ((i, j), m) in f.edges() {
            term *= num_traits::pow(edges[phi[i]][phi[j]].clone(), m as usize);
        }
        total += term;
    }
    total
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Isomorphism preserving multiplicities and label names, by trying every
/// vertex bijection.
pub fn isomorphic(a: &Multigraph, b: &Multigraph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_total() != b.edge_total() {
        return false;
    }
    let ea: BTreeMap<(usize, usize), u32> = a.edges().collect();
    let eb: BTreeMap<(usize, usize), u32> = b.edges().collect();
    permutations(n).into_iter().any(|p| {
        (0..n).all(|v| a.label_of(v) == b.label_of(p[v]))
            && ea.iter().all(|(&(i, j), &m)| {
                let (x, y) = (p[i].min(p[j]), p[i].max(p[j]));
                eb.get(&(x, y)) == Some(&m)
            })
            && ea.len() == eb.len()
    })
}

/// Representatives of the simple graphs on exactly `n` vertices, by the
/// isomorphism oracle.
pub fn simple_graphs(n: usize) -> Vec<Multigraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut reps: Vec<Multigraph> = Vec::new();
    let mut by_key: BTreeMap<(usize, Vec<usize>), Vec<usize>> = BTreeMap::new();
    for mask in 0u64..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Multigraph::new(n, &edges, &[]).unwrap();
        let mut degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        degrees.sort();
        let bucket = by_key.entry((edges.len(), degrees)).or_default();
        if !bucket.iter().any(|&k| isomorphic(&reps[k], &g)) {
            bucket.push(reps.len());
            reps.push(g);
        }
    }
    reps
}

/// Simple graphs on at most `n` vertices, up to isomorphism.
pub fn simple_graphs_upto(n: usize) -> Vec<Multigraph> {
    (0..=n).flat_map(simple_graphs).collect()
}

pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let den = [1, 1, 2, 3, 4, 5][rng.gen_range(0..6)];
    ratio(rng.gen_range(-6..=6), den)
}

/// Positive lengths summing to 1.
pub fn random_partition<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = weights.iter().sum();
    weights.into_iter().map(|w| ratio(w, total)).collect()
}

pub fn random_step_kernel<R: Rng>(rng: &mut R, max_steps: usize) -> StepKernel {
    let n = rng.gen_range(1..=max_steps);
    let mut values = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = small_rational(rng);
            values[i][j] = v.clone();
            values[j][i] = v;
        }
    }
    let steps = if rng.gen_bool(0.5) {
        None
    } else {
        Some(random_partition(rng, n))
    };
    StepKernel::new(values, steps).unwrap()
}

/// Step graphon with values in `[0, 1]`.
pub fn random_graphon<R: Rng>(rng: &mut R, max_steps: usize) -> StepKernel {
    let n = rng.gen_range(1..=max_steps);
    let mut values = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = ratio(rng.gen_range(0..=4), 4);
            values[i][j] = v.clone();
            values[j][i] = v;
        }
    }
    StepKernel::new(values, Some(random_partition(rng, n))).unwrap()
}

/// Loop-free multigraph with at most `max_v` vertices and `max_e` edges.
pub fn random_multigraph<R: Rng>(rng: &mut R, max_v: usize, max_e: usize) -> Multigraph {
    let n = rng.gen_range(0..=max_v);
    let mut edges = Vec::new();
    if n >= 2 {
        for _ in 0..rng.gen_range(0..=max_e) {
            let mut pair: Vec<usize> = (0..n).collect();
            pair.shuffle(rng);
            edges.push((pair[0], pair[1]));
        }
    }
    Multigraph::new(n, &edges, &[]).unwrap()
}

/// Labeled multigraph: a few vertices carry names from `1..=3`.
pub fn random_labeled<R: Rng>(rng: &mut R, max_v: usize, max_e: usize) -> Multigraph {
    let g = random_multigraph(rng, max_v, max_e);
    let n = g.vertex_count();
    let mut names = [1u32, 2, 3];
    names.shuffle(rng);
    let labels: Vec<(usize, u32)> = (0..n.min(rng.gen_range(0..=3))).map(|v| (v, names[v])).collect();
    let edges: Vec<(usize, usize, u32)> = g.edges().map(|((i, j), m)| (i, j, m)).collect();
    Multigraph::with_multiplicities(n, &edges, &labels).unwrap()
}

pub fn random_quantum<R: Rng>(rng: &mut R, terms: usize, max_v: usize, max_e: usize) -> QuantumGraph {
    QuantumGraph::combine(
        (0..rng.gen_range(1..=terms)).map(|_| (small_rational(rng), random_multigraph(rng, max_v, max_e))),
    )
    .unwrap()
}

pub fn k(token: &str) -> Multigraph {
    graphon_core::standard_graph(token).unwrap()
}

pub fn q(token: &str) -> QuantumGraph {
    QuantumGraph::graph(&k(token)).unwrap()
}

pub fn one() -> Rational {
    int(1)
}
