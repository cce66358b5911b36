//! Homomorphism densities `t(F, W)` and `t(g, W)`.
//!
//! Three routes are registered by name:
//!
//! * `step`: `Σ_φ Π_{ij} P_{φ(i)φ(j)} Π_v μ_{φ(v)}` by vertex elimination;
//! * `spectral`: `Σ_χ Π_e λ_{χ(e)} Π_v M_χ(v)` over edge colourings `χ`;
//! * `montecarlo`: sample mean of `Π W(x_i, x_j)` with a standard error.
//!
//! Labels are ignored: quantum graphs are unlabeled before evaluation.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::hom::{Elimination, HomCounter};
use crate::kernel::{exact_decompose, Kernel, SpectralKernel, StepKernel};
use crate::quantum::QuantumGraph;
use crate::rational::{format_rational, to_f64, Rational};

/// Cap on edge colourings visited by the spectral route.
pub const SPECTRAL_BUDGET: f64 = 2.0e7;
/// Samples per Monte Carlo task; each task has its own seed stream.
pub const MC_CHUNK: u64 = 4096;
pub const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum DensityValue {
    Exact(#[serde(with = "crate::rational")] Rational),
    Estimate { mean: f64, std_error: f64, samples: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityResult {
    pub route: &'static str,
    pub value: DensityValue,
}

impl DensityResult {
    pub fn exact(&self) -> Option<&Rational> {
        match &self.value {
            DensityValue::Exact(r) => Some(r),
            DensityValue::Estimate { .. } => None,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match &self.value {
            DensityValue::Exact(r) => to_f64(r),
            DensityValue::Estimate { mean, .. } => *mean,
        }
    }

    /// `(value, error)` as CSV cells; exact routes leave the error blank.
    pub fn cells(&self) -> (String, String) {
        match &self.value {
            DensityValue::Exact(r) => (format_rational(r), String::new()),
            DensityValue::Estimate { mean, std_error, .. } => (mean.to_string(), std_error.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DensityOptions {
    pub samples: u64,
    pub seed: u64,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions {
            samples: DEFAULT_SAMPLES,
            seed: 0,
        }
    }
}

/// A way of evaluating `t(g, W)`.
pub trait DensityRoute: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn evaluate(&self, g: &QuantumGraph, w: &Kernel, opts: &DensityOptions) -> Result<DensityResult>;
}

fn exact_sum(g: &QuantumGraph, mut t: impl FnMut(&Multigraph) -> Result<Rational>) -> Result<Rational> {
    let g = g.unlabel()?;
    let mut total = Rational::zero();
    for (c, f) in g.terms() {
        total += c * t(f)?;
    }
    Ok(total)
}

pub struct StepRoute;

impl DensityRoute for StepRoute {
    fn name(&self) -> &'static str {
        "step"
    }
    fn description(&self) -> &'static str {
        "exact sum over vertex maps into the step blocks"
    }
    fn evaluate(&self, g: &QuantumGraph, w: &Kernel, _: &DensityOptions) -> Result<DensityResult> {
        let w = w.to_step();
        Ok(DensityResult {
            route: self.name(),
            value: DensityValue::Exact(exact_sum(g, |f| t_step(f, &w))?),
        })
    }
}

pub struct SpectralRoute;

impl DensityRoute for SpectralRoute {
    fn name(&self) -> &'static str {
        "spectral"
    }
    fn description(&self) -> &'static str {
        "exact sum over edge colourings of a finite spectral decomposition"
    }
    fn evaluate(&self, g: &QuantumGraph, w: &Kernel, _: &DensityOptions) -> Result<DensityResult> {
        let s = match w {
            Kernel::Spectral(s) => s.clone(),
            Kernel::Step(k) => exact_decompose(k),
        };
        Ok(DensityResult {
            route: self.name(),
            value: DensityValue::Exact(exact_sum(g, |f| t_spectral(f, &s))?),
        })
    }
}

pub struct MonteCarloRoute;

impl DensityRoute for MonteCarloRoute {
    fn name(&self) -> &'static str {
        "montecarlo"
    }
    fn description(&self) -> &'static str {
        "sample mean over uniform vertex coordinates"
    }
    /// Each constituent uses the same seed; the reported error is the
    /// conservative `Σ |c| s.e.`.
    fn evaluate(&self, g: &QuantumGraph, w: &Kernel, opts: &DensityOptions) -> Result<DensityResult> {
        let w = w.to_step();
        let g = g.unlabel()?;
        let (mut mean, mut err) = (0.0, 0.0);
        for (c, f) in g.terms() {
            let r = t_monte_carlo(f, &w, opts.samples, opts.seed)?;
            if let DensityValue::Estimate {
                mean: m, std_error: s, ..
            } = r.value
            {
                mean += to_f64(c) * m;
                err += to_f64(&c.abs()) * s;
            }
        }
        Ok(DensityResult {
            route: self.name(),
            value: DensityValue::Estimate {
                mean,
                std_error: err,
                samples: opts.samples,
            },
        })
    }
}

#[derive(Clone)]
pub struct RouteRegistry {
    routes: BTreeMap<&'static str, Arc<dyn DensityRoute>>,
}

impl Default for RouteRegistry {
    fn default() -> Self {
        let mut r = RouteRegistry {
            routes: BTreeMap::new(),
        };
        r.register(Arc::new(StepRoute));
        r.register(Arc::new(SpectralRoute));
        r.register(Arc::new(MonteCarloRoute));
        r
    }
}

impl RouteRegistry {
    pub const DEFAULT: &'static str = "step";

    pub fn register(&mut self, route: Arc<dyn DensityRoute>) {
        self.routes.insert(route.name(), route);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn DensityRoute>> {
        self.routes
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownToken(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.routes.keys().copied()
    }
}

/// Exact `t(F, W)` for a step kernel.
pub fn t_step(f: &Multigraph, w: &StepKernel) -> Result<Rational> {
    Elimination::default().count(&f.unlabeled(), &w.target())
}

/// `M_χ(v) = ∫ Π_{e ∋ v} f_{χ(e)}`. `chi[k]` colours the `k`-th entry of
/// `f.edge_list()`.
pub fn vertex_moment(v: usize, chi: &[usize], s: &SpectralKernel, f: &Multigraph) -> Rational {
    let colours: Vec<usize> = f
        .edge_list()
        .iter()
        .zip(chi)
        .filter(|((a, b), _)| *a == v || *b == v)
        .map(|(_, &c)| c)
        .collect();
    moment(&colours, s)
}

fn moment(colours: &[usize], s: &SpectralKernel) -> Rational {
    if colours.is_empty() {
        return Rational::one();
    }
    let fs = s.functions();
    s.partition()
        .iter()
        .enumerate()
        .map(|(cell, len)| colours.iter().fold(len.clone(), |acc, &k| acc * &fs[k][cell]))
        .sum()
}

/// Exact `t(F, S)` by summing over all `r^|E|` edge colourings.
///
/// Colourings are enumerated depth first in edge order; a vertex's moment
/// enters the running product once its last incident edge is coloured.
pub fn t_spectral(f: &Multigraph, s: &SpectralKernel) -> Result<Rational> {
    let edges = f.edge_list();
    let r = s.rank();
    let m = edges.len();
    if m == 0 {
        return Ok(Rational::one());
    }
    if r == 0 {
        return Ok(Rational::zero());
    }
    let cost = (r as f64).powi(m as i32);
    if cost > SPECTRAL_BUDGET {
        return Err(Error::too_large(
            "instance",
            format!("{m} edges at rank {r} need {cost:.3e} colourings"),
        ));
    }
    let n = f.vertex_count();
    let incident: Vec<Vec<usize>> = (0..n)
        .map(|v| (0..m).filter(|&k| edges[k].0 == v || edges[k].1 == v).collect())
        .collect();
    // moment table per vertex, indexed by the colours of its incident edges
    let tables: Vec<Vec<Rational>> = incident
        .iter()
        .map(|inc| {
            let d = inc.len();
            (0..r.pow(d as u32))
                .map(|idx| {
                    let colours: Vec<usize> = (0..d).map(|k| idx / r.pow(k as u32) % r).collect();
                    moment(&colours, s)
                })
                .collect()
        })
        .collect();
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (v, inc) in incident.iter().enumerate() {
        if let Some(&last) = inc.last() {
            closing[last].push(v);
        }
    }
    // integer numerators over common denominators: no gcd work in the search
    let lambda_den = common_denominator(s.eigenvalues().iter());
    let lambda: Vec<BigInt> = s
        .eigenvalues()
        .iter()
        .map(|l| (l * Rational::from_integer(lambda_den.clone())).to_integer())
        .collect();
    let mut denominator = num_traits::pow(lambda_den, m);
    let mut int_tables = Vec::with_capacity(n);
    for t in &tables {
        let d = common_denominator(t.iter());
        int_tables.push(
            t.iter()
                .map(|x| (x * Rational::from_integer(d.clone())).to_integer())
                .collect::<Vec<_>>(),
        );
        denominator *= d;
    }
    let search = Search {
        r,
        lambda: &lambda,
        incident: &incident,
        tables: &int_tables,
        closing: &closing,
    };
    let partial: Vec<BigInt> = (0..r)
        .into_par_iter()
        .map(|c0| {
            let mut chi = vec![0usize; m];
            let mut sum = BigInt::zero();
            search.extend(0, c0, BigInt::one(), &mut chi, &mut sum);
            sum
        })
        .collect();
    let total: BigInt = partial.into_iter().sum();
    Ok(Rational::new(total, denominator))
}

fn common_denominator<'a>(xs: impl Iterator<Item = &'a Rational>) -> BigInt {
    xs.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

struct Search<'a> {
    r: usize,
    lambda: &'a [BigInt],
    incident: &'a [Vec<usize>],
    tables: &'a [Vec<BigInt>],
    closing: &'a [Vec<usize>],
}

impl Search<'_> {
    /// Colour edge `k` with `c` and recurse over the remaining edges.
    fn extend(&self, k: usize, c: usize, prod: BigInt, chi: &mut [usize], sum: &mut BigInt) {
        chi[k] = c;
        let mut p = prod * &self.lambda[c];
        for &v in &self.closing[k] {
            if p.is_zero() {
                return;
            }
            let idx = self.incident[v]
                .iter()
                .rev()
                .fold(0usize, |acc, &e| acc * self.r + chi[e]);
            p *= &self.tables[v][idx];
        }
        if p.is_zero() {
            return;
        }
        if k + 1 == chi.len() {
            *sum += p;
            return;
        }
        for next in 0..self.r {
            self.extend(k + 1, next, p.clone(), chi, sum);
        }
    }
}

/// Exact `t(g, W)`, summed over the unlabeled constituents of `g`.
pub fn t_quantum(g: &QuantumGraph, w: &Kernel) -> Result<Rational> {
    match w {
        Kernel::Step(k) => exact_sum(g, |f| t_step(f, k)),
        Kernel::Spectral(s) => exact_sum(g, |f| t_spectral(f, s)),
    }
}

/// Monte Carlo estimate of `t(F, W)`. Task `c` draws from a ChaCha8 stream
/// `c` seeded by `seed`, so the result does not depend on scheduling.
pub fn t_monte_carlo(f: &Multigraph, w: &StepKernel, samples: u64, seed: u64) -> Result<DensityResult> {
    if samples == 0 {
        return Err(Error::InvalidInput("samples must be at least 1".into()));
    }
    let n = f.vertex_count();
    let edges: Vec<((usize, usize), i32)> = f.edges().map(|(e, m)| (e, m as i32)).collect();
    let mut cumulative = Vec::with_capacity(w.step_count());
    let mut acc = Rational::zero();
    for m in w.steps() {
        acc += m;
        cumulative.push(to_f64(&acc));
    }
    let values: Vec<Vec<f64>> = w.values().iter().map(|r| r.iter().map(to_f64).collect()).collect();
    let last = cumulative.len() - 1;
    let chunks = samples.div_ceil(MC_CHUNK);
    let sums: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut cells = vec![0usize; n];
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                for cell in cells.iter_mut() {
                    let x: f64 = rng.gen();
                    *cell = cumulative.partition_point(|&b| b <= x).min(last);
                }
                let prod = edges
                    .iter()
                    .fold(1.0, |p, &((i, j), m)| p * values[cells[i]][cells[j]].powi(m));
                s += prod;
                s2 += prod * prod;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = sums.into_iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let k = samples as f64;
    let mean = s / k;
    let var = if samples > 1 {
        ((s2 - k * mean * mean) / (k - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(DensityResult {
        route: "montecarlo",
        value: DensityValue::Estimate {
            mean,
            std_error: (var / k).sqrt(),
            samples,
        },
    })
}

/// One CSV row: graph, kernel, route, value, error.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityRow {
    pub graph: String,
    pub kernel: String,
    pub route: String,
    pub value: String,
    pub error: String,
}

impl DensityRow {
    pub fn new(graph: impl Into<String>, kernel: impl Into<String>, result: &DensityResult) -> Self {
        let (value, error) = result.cells();
        DensityRow {
            graph: graph.into(),
            kernel: kernel.into(),
            route: result.route.to_string(),
            value,
            error,
        }
    }
}

pub fn write_csv<W: Write>(rows: &[DensityRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
