//! Polynomials in the entries `x_ij = x_ji` (`1 <= i <= j <= q`) of a
//! symmetric `q x q` matrix, the `S_q` action on them, and ideals with
//! membership and radical-membership tests.
//!
//! Variables are numbered `(1,1) < (1,2) < ... < (1,q) < (2,2) < ... < (q,q)`;
//! variable 0 is the largest in every monomial order.
//!
//! Text form: `c * x[i][j]^e * ...` terms joined by `+` / `-`, e.g.
//! `x[1][1] + 2 * x[1][2] + x[2][2]`. The parser also accepts the compact
//! `x11 + 2 x12 + x22` form for `q <= 9`.
//!
//! Membership is decided over the rationals. For ideals generated by rational
//! polynomials this agrees with membership over the complex numbers, since
//! `C[X]` is faithfully flat over `Q[X]`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::{self, MonomialOrder, Poly, DEFAULT_BUDGET};
use crate::rational::{format_rational, parse_rational, Rational};

/// Largest `q` for the exhaustive `S_q` invariance check.
pub const INVARIANCE_Q_LIMIT: usize = 5;

pub fn var_count(q: usize) -> usize {
    q * (q + 1) / 2
}

/// Index of `x_ij` (1-based, either order).
pub fn var_index(q: usize, i: usize, j: usize) -> Result<usize> {
    let (i, j) = (i.min(j), i.max(j));
    if i == 0 || j > q {
        return Err(Error::Mismatch(format!("x[{i}][{j}] outside q = {q}")));
    }
    // rows 1..i-1 contribute q, q-1, ..., q-i+2 variables
    let before: usize = (1..i).map(|r| q - r + 1).sum();
    Ok(before + (j - i))
}

/// Inverse of [`var_index`].
pub fn var_pair(q: usize, idx: usize) -> (usize, usize) {
    let mut rest = idx;
    for i in 1..=q {
        let row = q - i + 1;
        if rest < row {
            return (i, i + rest);
        }
        rest -= row;
    }
    panic!("variable index {idx} out of range for q = {q}")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymPolynomial {
    q: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl SymPolynomial {
    pub fn zero(q: usize) -> Self {
        SymPolynomial {
            q,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(q: usize, c: Rational) -> Self {
        let mut p = Self::zero(q);
        if !c.is_zero() {
            p.terms.insert(vec![0; var_count(q)], c);
        }
        p
    }

    pub fn one(q: usize) -> Self {
        Self::constant(q, Rational::one())
    }

    /// `x_ij`, 1-based.
    pub fn var(q: usize, i: usize, j: usize) -> Result<Self> {
        let mut m = vec![0; var_count(q)];
        m[var_index(q, i, j)?] = 1;
        Ok(Self::from_terms(q, [(m, Rational::one())]))
    }

    pub fn from_terms(q: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(q);
        for (m, c) in terms {
            debug_assert_eq!(m.len(), var_count(q));
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Vec<u32>, c: Rational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including 0).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum::<u32>()).max().unwrap_or(0)
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.q != other.q {
            return Err(Error::Mismatch(format!(
                "polynomials over q = {} and q = {}",
                self.q, other.q
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.q);
        }
        SymPolynomial {
            q: self.q,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                *acc.entry(m).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(SymPolynomial { q: self.q, terms: acc })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.q);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Substitute `x_ij -> x_{σ(i)σ(j)}`; `sigma` is 0-based (`sigma[i]` is the
    /// image of `i + 1`, minus one).
    pub fn permute_vars(&self, sigma: &[usize]) -> Result<Self> {
        let q = self.q;
        check_permutation(sigma, q)?;
        let n = var_count(q);
        let image: Vec<usize> = (0..n)
            .map(|idx| {
                let (i, j) = var_pair(q, idx);
                var_index(q, sigma[i - 1] + 1, sigma[j - 1] + 1).expect("in range")
            })
            .collect();
        Ok(SymPolynomial {
            q,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut mm = vec![0; n];
                    for (idx, &e) in m.iter().enumerate() {
                        mm[image[idx]] += e;
                    }
                    (mm, c.clone())
                })
                .collect(),
        })
    }

    /// Fixed by every permutation of `[q]`; exhaustive for `q <= 5`.
    pub fn is_sq_invariant(&self) -> Result<bool> {
        if self.q > INVARIANCE_Q_LIMIT {
            return Err(Error::too_large(
                "q",
                format!("exhaustive S_q check supports q <= {INVARIANCE_Q_LIMIT}"),
            ));
        }
        // transpositions (1 k) generate S_q
        for k in 1..self.q {
            let mut sigma: Vec<usize> = (0..self.q).collect();
            sigma.swap(0, k);
            if self.permute_vars(&sigma)? != *self {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact value at a symmetric rational matrix.
    pub fn eval(&self, m: &[Vec<Rational>]) -> Result<Rational> {
        let q = self.q;
        if m.len() != q || m.iter().any(|row| row.len() != q) {
            return Err(Error::Mismatch(format!("expected a {q}x{q} matrix")));
        }
        for i in 0..q {
            for j in 0..i {
                if m[i][j] != m[j][i] {
                    return Err(Error::InvalidMatrix(format!(
                        "matrix not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let values: Vec<Rational> = (0..var_count(q))
            .map(|idx| {
                let (i, j) = var_pair(q, idx);
                m[i - 1][j - 1].clone()
            })
            .collect();
        let mut total = Rational::zero();
        for (mono, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in values.iter().zip(mono) {
                if e > 0 {
                    t *= num_traits::pow(v.clone(), e as usize);
                }
            }
            total += t;
        }
        Ok(total)
    }

    pub fn to_poly(&self, order: MonomialOrder) -> Poly {
        Poly::from_terms(
            var_count(self.q),
            order,
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn from_poly(q: usize, p: &Poly) -> Result<Self> {
        if p.nvars() != var_count(q) {
            return Err(Error::Mismatch(format!(
                "{} variables cannot live over q = {q}",
                p.nvars()
            )));
        }
        Ok(Self::from_terms(q, p.terms().iter().cloned()))
    }

    /// Terms in decreasing grevlex order.
    fn display_terms(&self) -> Vec<(&Vec<u32>, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| MonomialOrder::GrevLex.compare(b.0, a.0));
        v
    }

    fn render(&self, compact: bool) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let compact = compact && self.q <= 9;
        let mut out = String::new();
        for (k, (m, c)) in self.display_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for (idx, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let (i, j) = var_pair(self.q, idx);
                let name = if compact {
                    format!("x{i}{j}")
                } else {
                    format!("x[{i}][{j}]")
                };
                factors.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            let sep = if compact { " " } else { " * " };
            if factors.is_empty() {
                out.push_str(&format_rational(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&format_rational(&abs));
                    out.push_str(sep);
                }
                out.push_str(&factors.join(sep));
            }
        }
        out
    }

    /// `x11 + 2 x12 + x22` style; falls back to brackets for `q > 9`.
    pub fn to_compact_string(&self) -> String {
        self.render(true)
    }

    /// Parse the text form (or the compact form) over a given `q`.
    pub fn parse(text: &str, q: usize) -> Result<Self> {
        PolyParser {
            src: text.as_bytes(),
            pos: 0,
            q,
        }
        .parse()
    }
}

impl fmt::Display for SymPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

fn check_permutation(sigma: &[usize], q: usize) -> Result<()> {
    let mut seen = vec![false; q];
    if sigma.len() != q || sigma.iter().any(|&s| s >= q || std::mem::replace(&mut seen[s], true)) {
        return Err(Error::InvalidInput(format!("not a permutation of [{q}]")));
    }
    Ok(())
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
    q: usize,
}

impl PolyParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: msg.to_string(),
        }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn parse(mut self) -> Result<SymPolynomial> {
        let mut acc = SymPolynomial::zero(self.q);
        let mut sign = Rational::one();
        match self.peek() {
            Some(b'-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = acc.add(&t.scale(&sign))?;
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') => sign = Rational::one(),
                Some(b'-') => sign = -Rational::one(),
                Some(_) => return Err(self.err("expected `+` or `-`")),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<SymPolynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_digit() || c == b'x' => {}
                _ => return Ok(acc),
            }
            acc = acc.mul(&self.factor()?)?;
        }
    }

    fn factor(&mut self) -> Result<SymPolynomial> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits().unwrap();
                let text = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.ws();
                    let den = self.digits().ok_or_else(|| self.err("expected denominator"))?;
                    format!("{num}/{den}")
                } else {
                    num
                };
                Ok(SymPolynomial::constant(self.q, parse_rational(&text)?))
            }
            Some(b'x') => {
                self.pos += 1;
                let (i, j) = if self.src.get(self.pos) == Some(&b'[') {
                    let i = self.bracket()?;
                    let j = self.bracket()?;
                    (i, j)
                } else {
                    match (self.src.get(self.pos), self.src.get(self.pos + 1)) {
                        (Some(a), Some(b)) if a.is_ascii_digit() && b.is_ascii_digit() => {
                            self.pos += 2;
                            ((a - b'0') as usize, (b - b'0') as usize)
                        }
                        _ => return Err(self.err("expected variable indices")),
                    }
                };
                let v = SymPolynomial::var(self.q, i, j).map_err(|e| self.err(&e.to_string()))?;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.ws();
                    let e: u32 = self
                        .digits()
                        .ok_or_else(|| self.err("expected integer exponent"))?
                        .parse()
                        .map_err(|_| self.err("exponent out of range"))?;
                    return Ok(v.pow(e));
                }
                Ok(v)
            }
            _ => Err(self.err("expected a number or a variable")),
        }
    }

    fn bracket(&mut self) -> Result<usize> {
        if self.src.get(self.pos) != Some(&b'[') {
            return Err(self.err("expected `[`"));
        }
        self.pos += 1;
        self.ws();
        let n = self
            .digits()
            .ok_or_else(|| self.err("expected index"))?
            .parse()
            .map_err(|_| self.err("index out of range"))?;
        self.ws();
        if self.src.get(self.pos) != Some(&b']') {
            return Err(self.err("expected `]`"));
        }
        self.pos += 1;
        Ok(n)
    }
}

/// Ideal of `C[X]` given by generators, with a write-once Gröbner basis.
#[derive(Debug)]
pub struct IdealHandle {
    q: usize,
    generators: Vec<SymPolynomial>,
    order: MonomialOrder,
    budget: u64,
    basis: OnceLock<Vec<SymPolynomial>>,
}

impl Clone for IdealHandle {
    fn clone(&self) -> Self {
        let basis = OnceLock::new();
        if let Some(b) = self.basis.get() {
            let _ = basis.set(b.clone());
        }
        IdealHandle {
            q: self.q,
            generators: self.generators.clone(),
            order: self.order,
            budget: self.budget,
            basis,
        }
    }
}

/// JSON export of a computed basis.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BasisExport {
    pub q: usize,
    pub order: MonomialOrder,
    pub generators: Vec<String>,
    pub basis: Vec<String>,
}

impl IdealHandle {
    pub fn new(q: usize, generators: Vec<SymPolynomial>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("ideal needs at least one generator".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.q != q) {
            return Err(Error::Mismatch(format!(
                "generator over q = {} in an ideal over q = {q}",
                g.q
            )));
        }
        Ok(IdealHandle {
            q,
            generators,
            order: MonomialOrder::default(),
            budget: DEFAULT_BUDGET,
            basis: OnceLock::new(),
        })
    }

    pub fn with_order(mut self, order: MonomialOrder) -> Self {
        if order != self.order {
            self.order = order;
            self.basis = OnceLock::new();
        }
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Install a previously computed basis (e.g. from a disk cache).
    /// It is checked to be a Gröbner basis that contains every generator.
    pub fn with_cached_basis(self, basis: Vec<SymPolynomial>) -> Result<Self> {
        let polys: Vec<Poly> = basis.iter().map(|b| b.to_poly(self.order)).collect();
        let ok = !polys.is_empty()
            && groebner::is_groebner_basis(&polys)
            && self
                .generators
                .iter()
                .all(|g| g.to_poly(self.order).remainder(&polys).is_zero());
        if !ok {
            return Err(Error::InvalidInput("cached basis failed verification".into()));
        }
        let _ = self.basis.set(basis);
        Ok(self)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn generators(&self) -> &[SymPolynomial] {
        &self.generators
    }

    fn generator_polys(&self) -> Vec<Poly> {
        self.generators.iter().map(|g| g.to_poly(self.order)).collect()
    }

    /// Reduced Gröbner basis under the handle's order, computed once.
    pub fn groebner_basis(&self) -> Result<&[SymPolynomial]> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let (polys, _) = groebner::buchberger(&self.generator_polys(), self.budget)?;
        let basis = polys
            .iter()
            .map(|p| SymPolynomial::from_poly(self.q, p))
            .collect::<Result<Vec<_>>>()?;
        let _ = self.basis.set(basis);
        Ok(self.basis.get().expect("just set"))
    }

    /// Division remainder of `f` by the reduced basis.
    pub fn remainder(&self, f: &SymPolynomial) -> Result<SymPolynomial> {
        f.same_ring(&self.generators[0])?;
        let basis: Vec<Poly> = self.groebner_basis()?.iter().map(|b| b.to_poly(self.order)).collect();
        SymPolynomial::from_poly(self.q, &f.to_poly(self.order).remainder(&basis))
    }

    pub fn ideal_member(&self, f: &SymPolynomial) -> Result<bool> {
        Ok(self.remainder(f)?.is_zero())
    }

    /// `f` lies in the radical iff `1` lies in `I + (1 - y f)` with a fresh
    /// variable `y`.
    pub fn radical_member(&self, f: &SymPolynomial) -> Result<bool> {
        f.same_ring(&self.generators[0])?;
        if f.is_zero() {
            return Ok(true);
        }
        let mut gens: Vec<Poly> = self.generator_polys().iter().map(|g| g.extend_vars(1)).collect();
        let n = var_count(self.q);
        let mut y = vec![0; n + 1];
        y[n] = 1;
        let y = Poly::from_terms(n + 1, self.order, [(y, Rational::one())]);
        let one = Poly::constant(n + 1, self.order, Rational::one());
        let yf = y.mul(&f.to_poly(self.order).extend_vars(1));
        gens.push(Poly::from_terms(
            n + 1,
            self.order,
            one.terms()
                .iter()
                .cloned()
                .chain(yf.terms().iter().map(|(m, c)| (m.clone(), -c))),
        ));
        let (basis, _) = groebner::buchberger(&gens, self.budget)?;
        Ok(basis.len() == 1 && basis[0].is_unit())
    }

    pub fn export(&self) -> Result<BasisExport> {
        Ok(BasisExport {
            q: self.q,
            order: self.order,
            generators: self.generators.iter().map(ToString::to_string).collect(),
            basis: self.groebner_basis()?.iter().map(ToString::to_string).collect(),
        })
    }
}
