//! Step-function kernels and finite-rank spectral kernels.
//!
//! A [`StepKernel`] is constant on each product of cells `T_a × T_b` of a
//! partition of `[0,1]` into steps of lengths `μ_1..μ_n`. A
//! [`SpectralKernel`] is `W(x,y) = Σ_k λ_k f_k(x) f_k(y)` with every `f_k` a
//! step function on one shared partition.

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hom::WeightedTarget;
use crate::rational::{self, format_rational, to_f64, Rational};

fn check_partition(lengths: &[Rational], what: &str) -> Result<()> {
    if lengths.is_empty() {
        return Err(Error::InvalidKernel(format!("{what} is empty")));
    }
    if let Some(bad) = lengths.iter().find(|m| !m.is_positive()) {
        return Err(Error::InvalidKernel(format!(
            "{what} length {} is not positive",
            format_rational(bad)
        )));
    }
    let total: Rational = lengths.iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidKernel(format!(
            "{what} lengths sum to {}, not 1",
            format_rational(&total)
        )));
    }
    Ok(())
}

fn uniform(n: usize) -> Vec<Rational> {
    vec![Rational::new(1.into(), (n as i64).into()); n]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphonFlag {
    /// Every value in `[0, 1]`.
    Graphon,
    /// Every value in `[-1, 1]`, some negative.
    SignedUnit,
    KernelOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StepKernelJson", into = "StepKernelJson")]
pub struct StepKernel {
    steps: Vec<Rational>,
    values: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepKernelJson {
    #[serde(with = "rational::vec", default)]
    steps: Vec<Rational>,
    #[serde(with = "rational::matrix")]
    values: Vec<Vec<Rational>>,
}

impl TryFrom<StepKernelJson> for StepKernel {
    type Error = Error;
    fn try_from(j: StepKernelJson) -> Result<Self> {
        let steps = (!j.steps.is_empty()).then_some(j.steps);
        StepKernel::new(j.values, steps)
    }
}

impl From<StepKernel> for StepKernelJson {
    fn from(k: StepKernel) -> Self {
        StepKernelJson {
            steps: k.steps,
            values: k.values,
        }
    }
}

impl StepKernel {
    /// Validated kernel `W_P`; uniform steps `1/n` when `steps` is `None`.
    pub fn new(values: Vec<Vec<Rational>>, steps: Option<Vec<Rational>>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidKernel("kernel needs at least one step".into()));
        }
        if values.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidKernel("value matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if values[i][j] != values[j][i] {
                    return Err(Error::InvalidKernel(format!(
                        "value matrix not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let steps = steps.unwrap_or_else(|| uniform(n));
        if steps.len() != n {
            return Err(Error::InvalidKernel(format!(
                "{} step lengths for a {n}x{n} matrix",
                steps.len()
            )));
        }
        check_partition(&steps, "step")?;
        Ok(StepKernel { steps, values })
    }

    pub fn uniform(values: Vec<Vec<Rational>>) -> Result<Self> {
        Self::new(values, None)
    }

    pub fn constant(p: Rational) -> Self {
        StepKernel {
            steps: vec![Rational::one()],
            values: vec![vec![p]],
        }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    pub fn steps(&self) -> &[Rational] {
        &self.steps
    }

    pub fn values(&self) -> &[Vec<Rational>] {
        &self.values
    }

    pub fn classify(&self) -> GraphonFlag {
        let all = |lo: i64| {
            self.values
                .iter()
                .flatten()
                .all(|v| *v >= Rational::from_integer(lo.into()) && *v <= Rational::one())
        };
        if all(0) {
            GraphonFlag::Graphon
        } else if all(-1) {
            GraphonFlag::SignedUnit
        } else {
            GraphonFlag::KernelOnly
        }
    }

    /// Node weights `μ`, edge weights `P`.
    pub fn target(&self) -> WeightedTarget {
        WeightedTarget::new(self.steps.clone(), self.values.clone()).expect("validated kernel")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Step function on a partition of `[0,1]` into cells of the given lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepFunction {
    pub cells: Vec<Rational>,
    pub values: Vec<Rational>,
}

impl StepFunction {
    pub fn new(cells: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        check_partition(&cells, "partition")?;
        if cells.len() != values.len() {
            return Err(Error::InvalidKernel(format!(
                "{} values for {} cells",
                values.len(),
                cells.len()
            )));
        }
        Ok(StepFunction { cells, values })
    }

    pub fn constant(c: Rational) -> Self {
        StepFunction {
            cells: vec![Rational::one()],
            values: vec![c],
        }
    }

    pub fn integral(&self) -> Rational {
        self.cells.iter().zip(&self.values).map(|(m, v)| m * v).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpectralKernelJson", into = "SpectralKernelJson")]
pub struct SpectralKernel {
    partition: Vec<Rational>,
    eigenvalues: Vec<Rational>,
    functions: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectralKernelJson {
    #[serde(with = "rational::vec")]
    partition: Vec<Rational>,
    #[serde(with = "rational::vec")]
    eigenvalues: Vec<Rational>,
    #[serde(with = "rational::matrix")]
    functions: Vec<Vec<Rational>>,
}

impl TryFrom<SpectralKernelJson> for SpectralKernel {
    type Error = Error;
    fn try_from(j: SpectralKernelJson) -> Result<Self> {
        SpectralKernel::new(j.partition, j.eigenvalues, j.functions)
    }
}

impl From<SpectralKernel> for SpectralKernelJson {
    fn from(k: SpectralKernel) -> Self {
        SpectralKernelJson {
            partition: k.partition,
            eigenvalues: k.eigenvalues,
            functions: k.functions,
        }
    }
}

impl SpectralKernel {
    /// `functions[k][c]` is the value of `f_k` on cell `c`.
    pub fn new(partition: Vec<Rational>, eigenvalues: Vec<Rational>, functions: Vec<Vec<Rational>>) -> Result<Self> {
        check_partition(&partition, "partition")?;
        if eigenvalues.len() != functions.len() {
            return Err(Error::InvalidKernel(format!(
                "{} eigenvalues for {} eigenfunctions",
                eigenvalues.len(),
                functions.len()
            )));
        }
        if functions.iter().any(|f| f.len() != partition.len()) {
            return Err(Error::InvalidKernel(
                "eigenfunction length differs from partition".into(),
            ));
        }
        Ok(SpectralKernel {
            partition,
            eigenvalues,
            functions,
        })
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn partition(&self) -> &[Rational] {
        &self.partition
    }

    pub fn eigenvalues(&self) -> &[Rational] {
        &self.eigenvalues
    }

    pub fn functions(&self) -> &[Vec<Rational>] {
        &self.functions
    }

    /// Gram matrix `∫ f_k f_l`.
    pub fn gram(&self) -> Vec<Vec<Rational>> {
        self.functions
            .iter()
            .map(|f| {
                self.functions
                    .iter()
                    .map(|g| {
                        self.partition
                            .iter()
                            .zip(f.iter().zip(g))
                            .map(|(m, (a, b))| m * a * b)
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    /// Advisory; densities do not need orthonormal eigenfunctions.
    pub fn is_orthonormal(&self) -> bool {
        self.gram().iter().enumerate().all(|(k, row)| {
            row.iter()
                .enumerate()
                .all(|(l, v)| *v == if k == l { Rational::one() } else { Rational::zero() })
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Spectral kernel from eigenvalues and step functions sharing one partition.
/// With no eigenpairs the result is the zero kernel on `[0,1]`.
pub fn spectral_kernel(eigenvalues: Vec<Rational>, functions: &[StepFunction]) -> Result<SpectralKernel> {
    let partition = match functions.first() {
        Some(f) => f.cells.clone(),
        None => vec![Rational::one()],
    };
    if functions.iter().any(|f| f.cells != partition) {
        return Err(Error::InvalidKernel("eigenfunctions use different partitions".into()));
    }
    SpectralKernel::new(
        partition,
        eigenvalues,
        functions.iter().map(|f| f.values.clone()).collect(),
    )
}

/// Exact block matrix `Σ_k λ_k f_k(a) f_k(b)` on the shared partition.
pub fn spectral_to_step(s: &SpectralKernel) -> StepKernel {
    let n = s.partition.len();
    let values = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    s.eigenvalues
                        .iter()
                        .zip(&s.functions)
                        .map(|(l, f)| l * &f[a] * &f[b])
                        .sum()
                })
                .collect()
        })
        .collect();
    StepKernel {
        steps: s.partition.clone(),
        values,
    }
}

/// Exact rational decomposition `P = Σ_k λ_k v_k v_kᵀ` by symmetric
/// elimination. A nonzero diagonal pivot `a` removes `(1/a) c cᵀ`; a zero
/// diagonal with `P_ij = b ≠ 0` removes `(u wᵀ + w uᵀ)/b`, written as two
/// squares. Eigenfunctions are not orthogonal in general.
pub fn exact_decompose(w: &StepKernel) -> SpectralKernel {
    let n = w.step_count();
    let mut p = w.values.clone();
    let mut eigenvalues = Vec::new();
    let mut functions = Vec::new();
    let col = |p: &Vec<Vec<Rational>>, i: usize| -> Vec<Rational> { p.iter().map(|r| r[i].clone()).collect() };
    let subtract = |p: &mut Vec<Vec<Rational>>, lam: &Rational, v: &[Rational]| {
        for a in 0..n {
            for b in 0..n {
                p[a][b] -= lam * &v[a] * &v[b];
            }
        }
    };
    loop {
        if let Some(i) = (0..n).find(|&i| !p[i][i].is_zero()) {
            let lam = p[i][i].recip();
            let v = col(&p, i);
            subtract(&mut p, &lam, &v);
            eigenvalues.push(lam);
            functions.push(v);
            continue;
        }
        let Some((i, j)) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| !p[i][j].is_zero())
        else {
            break;
        };
        let two_b = &p[i][j] * Rational::from_integer(2.into());
        let u = col(&p, i);
        let v = col(&p, j);
        let plus: Vec<Rational> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        let minus: Vec<Rational> = u.iter().zip(&v).map(|(a, b)| a - b).collect();
        let lam = two_b.recip();
        subtract(&mut p, &lam, &plus);
        subtract(&mut p, &-lam.clone(), &minus);
        eigenvalues.push(lam.clone());
        functions.push(plus);
        eigenvalues.push(-lam);
        functions.push(minus);
    }
    SpectralKernel {
        partition: w.steps.clone(),
        eigenvalues,
        functions,
    }
}

/// Floating-point eigendecomposition of `T_W`. Values are rational
/// approximations of floats.
#[derive(Clone, Debug, Serialize)]
pub struct NumericDecomposition {
    pub kernel: SpectralKernel,
    /// Largest block deviation of the reconstruction from `W`.
    pub max_error: f64,
    pub approximate: bool,
}

const EIGEN_ITERATIONS: usize = 10_000;

fn approximate(x: f64) -> Rational {
    match Ratio::<i64>::approximate_float(x) {
        Some(r) => Rational::new((*r.numer()).into(), (*r.denom()).into()),
        None => rational::from_f64(x).unwrap_or_else(Rational::zero),
    }
}

/// Eigenpairs of `D^{1/2} P D^{1/2}` with `D = diag(μ)`; eigenvector `v`
/// becomes the step function `v_a / sqrt(μ_a)`.
pub fn numeric_decompose(w: &StepKernel, tol: f64) -> Result<NumericDecomposition> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let n = w.step_count();
    let mu: Vec<f64> = w.steps.iter().map(to_f64).collect();
    let a = DMatrix::from_fn(n, n, |i, j| to_f64(&w.values[i][j]) * (mu[i] * mu[j]).sqrt());
    let eig =
        SymmetricEigen::try_new(a, f64::EPSILON, EIGEN_ITERATIONS).ok_or(Error::NonConvergence(EIGEN_ITERATIONS))?;
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let mut eigenvalues = Vec::new();
    let mut functions = Vec::new();
    for k in 0..n {
        let lam = eig.eigenvalues[k];
        if lam.abs() <= scale * 1e-12 || lam == 0.0 {
            continue;
        }
        eigenvalues.push(approximate(lam));
        functions.push(
            (0..n)
                .map(|i| approximate(eig.eigenvectors[(i, k)] / mu[i].sqrt()))
                .collect(),
        );
    }
    let kernel = SpectralKernel {
        partition: w.steps.clone(),
        eigenvalues,
        functions,
    };
    let rebuilt = spectral_to_step(&kernel);
    let max_error = rebuilt
        .values
        .iter()
        .flatten()
        .zip(w.values.iter().flatten())
        .map(|(a, b)| to_f64(&(a - b)).abs())
        .fold(0.0, f64::max);
    if max_error > tol {
        return Err(Error::NonConvergence(EIGEN_ITERATIONS));
    }
    Ok(NumericDecomposition {
        kernel,
        max_error,
        approximate: true,
    })
}

/// A kernel file: step form (`steps`, `values`) or spectral form
/// (`partition`, `eigenvalues`, `functions`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Kernel {
    Step(StepKernel),
    Spectral(SpectralKernel),
}

impl Kernel {
    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        if v.get("eigenvalues").is_some() {
            Ok(Kernel::Spectral(serde_json::from_value(v)?))
        } else {
            Ok(Kernel::Step(serde_json::from_value(v)?))
        }
    }

    pub fn to_step(&self) -> StepKernel {
        match self {
            Kernel::Step(k) => k.clone(),
            Kernel::Spectral(s) => spectral_to_step(s),
        }
    }
}

impl From<StepKernel> for Kernel {
    fn from(k: StepKernel) -> Self {
        Kernel::Step(k)
    }
}

impl From<SpectralKernel> for Kernel {
    fn from(k: SpectralKernel) -> Self {
        Kernel::Spectral(k)
    }
}
