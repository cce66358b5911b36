//! Hadamard matrices and Hadamard graphons `U_B = (W_B + 1) / 2`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::density::t_step;
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::kernel::StepKernel;
use crate::quantum::QuantumGraph;
use crate::rational::{self, format_rational, int, Rational};

/// Largest `k` accepted by [`sylvester`].
pub const SYLVESTER_MAX: u32 = 6;
/// Largest order searched by [`symmetric_hadamards`].
pub const ENUMERATION_MAX_ORDER: usize = 4;
/// Cap on maps visited by [`map_probability`].
pub const MAP_BUDGET: f64 = 1.0e7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct HadamardMatrix {
    entries: Vec<Vec<i64>>,
}

impl TryFrom<Vec<Vec<i64>>> for HadamardMatrix {
    type Error = Error;
    fn try_from(entries: Vec<Vec<i64>>) -> Result<Self> {
        HadamardMatrix::new(entries)
    }
}

impl From<HadamardMatrix> for Vec<Vec<i64>> {
    fn from(h: HadamardMatrix) -> Self {
        h.entries
    }
}

/// Entries `±1` and `B Bᵀ = n I`.
pub fn is_hadamard(b: &[Vec<i64>]) -> bool {
    let n = b.len();
    if n == 0 || b.iter().any(|r| r.len() != n) {
        return false;
    }
    if b.iter().flatten().any(|&v| v != 1 && v != -1) {
        return false;
    }
    (0..n).all(|i| {
        (0..n).all(|j| {
            let dot: i64 = (0..n).map(|k| b[i][k] * b[j][k]).sum();
            dot == if i == j { n as i64 } else { 0 }
        })
    })
}

impl HadamardMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        if !is_hadamard(&entries) {
            return Err(Error::InvalidMatrix("not a Hadamard matrix".into()));
        }
        Ok(HadamardMatrix { entries })
    }

    pub fn order(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn has_positive_diagonal_entry(&self) -> bool {
        (0..self.order()).any(|i| self.entries[i][i] == 1)
    }
}

/// Sylvester matrix of order `2^k`: `H_{k+1} = [[H, H], [H, -H]]`.
pub fn sylvester(k: u32) -> Result<HadamardMatrix> {
    if k > SYLVESTER_MAX {
        return Err(Error::too_large(
            "sylvester order",
            format!("k = {k} exceeds the bound {SYLVESTER_MAX}"),
        ));
    }
    let mut h = vec![vec![1i64]];
    for _ in 0..k {
        let n = h.len();
        let mut next = vec![vec![0; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = h[i][j];
                next[i][j + n] = h[i][j];
                next[i + n][j] = h[i][j];
                next[i + n][j + n] = -h[i][j];
            }
        }
        h = next;
    }
    Ok(HadamardMatrix { entries: h })
}

/// Every symmetric Hadamard matrix of the given order, by exhaustive search
/// over symmetric `±1` matrices, in lexicographic order of entries.
pub fn symmetric_hadamards(order: usize) -> Result<Vec<HadamardMatrix>> {
    if order > ENUMERATION_MAX_ORDER {
        return Err(Error::too_large(
            "hadamard enumeration",
            format!("order {order} exceeds the bound {ENUMERATION_MAX_ORDER}"),
        ));
    }
    if order == 0 {
        return Ok(Vec::new());
    }
    let slots: Vec<(usize, usize)> = (0..order).flat_map(|i| (i..order).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << slots.len()) {
        let mut b = vec![vec![0i64; order]; order];
        for (k, &(i, j)) in slots.iter().enumerate() {
            // bit set means -1; slot 0 is the most significant bit
            let bit = mask >> (slots.len() - 1 - k) & 1;
            let v = if bit == 1 { -1 } else { 1 };
            b[i][j] = v;
            b[j][i] = v;
        }
        if is_hadamard(&b) {
            out.push(HadamardMatrix { entries: b });
        }
    }
    Ok(out)
}

/// `U_B` on uniform steps, blocks `(b_ij + 1) / 2`.
pub fn hadamard_graphon(b: &HadamardMatrix) -> Result<StepKernel> {
    if !b.is_symmetric() {
        return Err(Error::InvalidMatrix("Hadamard graphons need a symmetric matrix".into()));
    }
    StepKernel::uniform(
        b.entries
            .iter()
            .map(|r| r.iter().map(|&v| int((v + 1) / 2)).collect())
            .collect(),
    )
}

/// Fraction of maps `φ: V(F) -> [n]` sending every adjacent pair of the
/// skeleton of `F` onto a `+1` entry of `B`.
pub fn map_probability(b: &HadamardMatrix, f: &Multigraph) -> Result<Rational> {
    let n = b.order();
    let v = f.vertex_count();
    let cost = (n as f64).powi(v as i32);
    if cost > MAP_BUDGET {
        return Err(Error::too_large(
            "instance",
            format!("{v} vertices into order {n} needs {cost:.3e} maps"),
        ));
    }
    let pairs: Vec<(usize, usize)> = f.skeleton().edge_list();
    let mut phi = vec![0usize; v];
    let mut good: u64 = 0;
    let mut total: u64 = 0;
    loop {
        total += 1;
        if pairs.iter().all(|&(i, j)| b.entries[phi[i]][phi[j]] == 1) {
            good += 1;
        }
        let mut k = 0;
        loop {
            if k == v {
                return Ok(Rational::new(good.into(), total.into()));
            }
            phi[k] += 1;
            if phi[k] < n {
                break;
            }
            phi[k] = 0;
            k += 1;
        }
    }
}

/// `(1/2) Σ_i α_i P(B, F_i) 2^{|E(F_i)|}` evaluated as written, with
/// `|E(F_i)|` counting edges with multiplicity.
pub fn closed_form(g: &QuantumGraph, b: &HadamardMatrix) -> Result<Rational> {
    let g = g.unlabel()?;
    let mut total = Rational::zero();
    for (alpha, f) in g.terms() {
        let scale = num_traits::pow(int(2), f.edge_total());
        total += alpha * map_probability(b, f)? * scale;
    }
    Ok(total / int(2))
}

/// Side-by-side audit of `t(g, U_B)` against the closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HadamardAudit {
    pub matrix: Vec<Vec<i64>>,
    pub graph: String,
    #[serde(with = "rational")]
    pub density: Rational,
    /// `Σ α_i P(B, F_i)`; equals the density for Hadamard graphons.
    #[serde(with = "rational")]
    pub map_probability: Rational,
    #[serde(skip_serializing_if = "Option::is_none", with = "optional")]
    pub closed_form: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_agrees: Option<bool>,
}

mod optional {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&format_rational(r)),
            None => s.serialize_none(),
        }
    }
}

pub fn audit(g: &QuantumGraph, b: &HadamardMatrix, compare_closed_form: bool) -> Result<HadamardAudit> {
    let u = hadamard_graphon(b)?;
    let g = g.unlabel()?;
    let mut density = Rational::zero();
    let mut prob = Rational::zero();
    for (alpha, f) in g.terms() {
        density += alpha * t_step(f, &u)?;
        prob += alpha * map_probability(b, f)?;
    }
    let closed_form = if compare_closed_form {
        Some(closed_form(&g, b)?)
    } else {
        None
    };
    Ok(HadamardAudit {
        matrix: b.entries.clone(),
        graph: g.to_string(),
        closed_form_agrees: closed_form.as_ref().map(|c| *c == density),
        density,
        map_probability: prob,
        closed_form,
    })
}

/// Whether `t(F, U_B) > 0` holds; true for every `F` when `B` has a `+1`
/// on its diagonal.
pub fn density_positive(b: &HadamardMatrix, f: &Multigraph) -> Result<bool> {
    Ok(t_step(f, &hadamard_graphon(b)?)? > Rational::zero())
}
