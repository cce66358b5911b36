//! Sparse polynomials over the rationals in `n` variables, monomial orders,
//! multivariate division and Buchberger's algorithm.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Default cap on S-polynomial reductions per basis computation.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    Lex,
    GrLex,
    /// Graded reverse lexicographic, variable 0 largest.
    #[default]
    GrevLex,
}

impl MonomialOrder {
    pub const ALL: [MonomialOrder; 3] = [Self::Lex, Self::GrLex, Self::GrevLex];

    pub fn name(self) -> &'static str {
        match self {
            Self::Lex => "lex",
            Self::GrLex => "grlex",
            Self::GrevLex => "grevlex",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|o| o.name() == name)
            .ok_or_else(|| Error::UnknownToken(name.to_string()))
    }

    pub fn compare(self, a: &[u32], b: &[u32]) -> Ordering {
        let lex = || a.cmp(b);
        let deg = |m: &[u32]| m.iter().map(|&e| e as u64).sum::<u64>();
        match self {
            Self::Lex => lex(),
            Self::GrLex => deg(a).cmp(&deg(b)).then_with(lex),
            Self::GrevLex => deg(a).cmp(&deg(b)).then_with(|| {
                for (x, y) in a.iter().zip(b).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

pub type Monomial = Vec<u32>;

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn quotient(b: &[u32], a: &[u32]) -> Monomial {
    b.iter().zip(a).map(|(y, x)| y - x).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Terms kept sorted in strictly decreasing monomial order, no zero
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    order: MonomialOrder,
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero(nvars: usize, order: MonomialOrder) -> Self {
        Poly {
            nvars,
            order,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, order: MonomialOrder, c: Rational) -> Self {
        Self::from_terms(nvars, order, [(vec![0; nvars], c)])
    }

    pub fn from_terms(
        nvars: usize,
        order: MonomialOrder,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut v: Vec<(Monomial, Rational)> = terms.into_iter().collect();
        debug_assert!(v.iter().all(|(m, _)| m.len() == nvars));
        v.sort_by(|a, b| order.compare(&b.0, &a.0));
        let mut merged: Vec<(Monomial, Rational)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match merged.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => merged.push((m, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Poly {
            nvars,
            order,
            terms: merged,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Non-zero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0)
    }

    pub fn lead(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                Poly {
                    terms: self.terms.iter().map(|(m, a)| (m.clone(), a * &inv)).collect(),
                    ..self.clone()
                }
            }
        }
    }

    /// `self - c * x^shift * g`, merging sorted term lists.
    fn sub_scaled(&self, c: &Rational, shift: &[u32], g: &Poly) -> Self {
        let order = self.order;
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g
            .terms
            .iter()
            .map(|(m, k)| {
                let mm: Monomial = m.iter().zip(shift).map(|(x, y)| x + y).collect();
                (mm, -(k * c))
            })
            .peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some((ma, _)), Some((mb, _))) => match order.compare(ma, mb) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let (m, x) = a.next().unwrap().clone();
                        let (_, y) = b.next().unwrap();
                        let s = x + y;
                        if !s.is_zero() {
                            out.push((m, s));
                        }
                    }
                },
            }
        }
        Poly {
            nvars: self.nvars,
            order,
            terms: out,
        }
    }

    /// Remainder of full multivariate division by `divisors`.
    pub fn remainder(&self, divisors: &[Poly]) -> Poly {
        let mut p = self.clone();
        let mut rem: Vec<(Monomial, Rational)> = Vec::new();
        while let Some((lm, lc)) = p.terms.first().cloned() {
            let hit = divisors
                .iter()
                .find(|g| g.lead().is_some_and(|(gm, _)| divides(gm, &lm)));
            match hit {
                Some(g) => {
                    let (gm, gc) = g.lead().unwrap();
                    p = p.sub_scaled(&(lc / gc), &quotient(&lm, gm), g);
                }
                None => {
                    rem.push(p.terms.remove(0));
                }
            }
        }
        Poly {
            nvars: self.nvars,
            order: self.order,
            terms: rem,
        }
    }

    fn s_polynomial(f: &Poly, g: &Poly) -> Poly {
        let (fm, fc) = f.lead().unwrap();
        let (gm, gc) = g.lead().unwrap();
        let l = lcm(fm, gm);
        let a = Poly::zero(f.nvars, f.order).sub_scaled(&-fc.recip(), &quotient(&l, fm), f);
        a.sub_scaled(&gc.recip(), &quotient(&l, gm), g)
    }

    /// Copy into a ring with `extra` more variables appended.
    pub fn extend_vars(&self, extra: usize) -> Poly {
        Poly {
            nvars: self.nvars + extra,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut mm = m.clone();
                    mm.resize(self.nvars + extra, 0);
                    (mm, c.clone())
                })
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.iter().zip(mb).map(|(x, y)| x + y).collect(), ca * cb));
            }
        }
        Poly::from_terms(self.nvars, self.order, terms)
    }
}

/// Outcome counters of one Buchberger run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BuchbergerStats {
    pub reductions: u64,
    pub skipped_coprime: u64,
    pub skipped_chain: u64,
}

/// Reduced Gröbner basis of the ideal generated by `generators`, monic and
/// sorted by increasing leading monomial. Returns `[1]` as soon as a non-zero
/// constant appears.
pub fn buchberger(generators: &[Poly], budget: u64) -> Result<(Vec<Poly>, BuchbergerStats)> {
    let mut stats = BuchbergerStats::default();
    let Some(first) = generators.first() else {
        return Err(Error::InvalidInput("ideal needs at least one generator".into()));
    };
    let (nvars, order) = (first.nvars, first.order);
    if generators.iter().any(|g| g.nvars != nvars || g.order != order) {
        return Err(Error::Mismatch("generators live in different rings".into()));
    }
    let unit = || vec![Poly::constant(nvars, order, Rational::one())];

    let mut basis: Vec<Poly> = Vec::new();
    for g in generators {
        let r = g.remainder(&basis);
        if r.is_unit() {
            return Ok((unit(), stats));
        }
        if !r.is_zero() {
            basis.push(r.monic());
        }
    }
    if basis.is_empty() {
        return Ok((vec![], stats));
    }

    let mut pending: Vec<(usize, usize)> = (0..basis.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();

    while !pending.is_empty() {
        let lcm_of = |&(i, j): &(usize, usize)| lcm(&basis[i].terms[0].0, &basis[j].terms[0].0);
        let pick = (0..pending.len())
            .min_by(|&x, &y| {
                let (lx, ly) = (lcm_of(&pending[x]), lcm_of(&pending[y]));
                order.compare(&lx, &ly).then_with(|| pending[x].cmp(&pending[y]))
            })
            .unwrap();
        let (i, j) = pending.swap_remove(pick);
        let (mi, mj) = (&basis[i].terms[0].0, &basis[j].terms[0].0);
        if coprime(mi, mj) {
            stats.skipped_coprime += 1;
            continue;
        }
        let l = lcm(mi, mj);
        let is_pending = |a: usize, b: usize| pending.contains(&(a.min(b), a.max(b)));
        let chain = (0..basis.len())
            .any(|k| k != i && k != j && divides(&basis[k].terms[0].0, &l) && !is_pending(i, k) && !is_pending(j, k));
        if chain {
            stats.skipped_chain += 1;
            continue;
        }
        stats.reductions += 1;
        if stats.reductions > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        let r = Poly::s_polynomial(&basis[i], &basis[j]).remainder(&basis);
        if r.is_zero() {
            continue;
        }
        if r.is_unit() {
            return Ok((unit(), stats));
        }
        let new = basis.len();
        basis.push(r.monic());
        pending.extend((0..new).map(|k| (k, new)));
    }
    Ok((reduce_basis(basis), stats))
}

/// Minimal, inter-reduced, monic, sorted.
fn reduce_basis(mut basis: Vec<Poly>) -> Vec<Poly> {
    let order = basis[0].order;
    basis.sort_by(|a, b| order.compare(&a.terms[0].0, &b.terms[0].0));
    let mut minimal: Vec<Poly> = Vec::new();
    for p in basis {
        if !minimal.iter().any(|g| divides(&g.terms[0].0, &p.terms[0].0)) {
            minimal.push(p);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|&(x, _)| x != k)
            .map(|(_, p)| p.clone())
            .collect();
        let (lm, lc) = minimal[k].terms[0].clone();
        let tail = Poly {
            terms: minimal[k].terms[1..].to_vec(),
            ..minimal[k].clone()
        };
        let mut r = tail.remainder(&others);
        r.terms.insert(0, (lm, lc));
        reduced.push(r.monic());
    }
    reduced
}

/// True when every S-pair of `basis` reduces to zero modulo `basis`.
pub fn is_groebner_basis(basis: &[Poly]) -> bool {
    (0..basis.len()).all(|j| (0..j).all(|i| Poly::s_polynomial(&basis[i], &basis[j]).remainder(basis).is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(nvars: usize, terms: &[(&[u32], i64)]) -> Poly {
        Poly::from_terms(
            nvars,
            MonomialOrder::GrevLex,
            terms.iter().map(|(m, c)| (m.to_vec(), int(*c))),
        )
    }

    #[test]
    fn orders() {
        use Ordering::*;
        let g = MonomialOrder::GrevLex;
        // x0 > x1 > x2 at degree one
        assert_eq!(g.compare(&[1, 0, 0], &[0, 1, 0]), Greater);
        // x0 x2 < x1^2 in grevlex, > in grlex and lex
        assert_eq!(g.compare(&[1, 0, 1], &[0, 2, 0]), Less);
        assert_eq!(MonomialOrder::GrLex.compare(&[1, 0, 1], &[0, 2, 0]), Greater);
        assert_eq!(MonomialOrder::Lex.compare(&[1, 0, 0], &[0, 5, 0]), Greater);
        assert_eq!(g.compare(&[0, 0, 2], &[1, 0, 0]), Greater);
        assert_eq!(MonomialOrder::from_name("grevlex").unwrap(), g);
        assert!(MonomialOrder::from_name("foo").is_err());
    }

    #[test]
    fn single_generator() {
        let x = p(3, &[(&[1, 0, 0], 1)]);
        let (b, _) = buchberger(std::slice::from_ref(&x), DEFAULT_BUDGET).unwrap();
        assert_eq!(b, vec![x]);
    }

    #[test]
    fn two_generators_by_hand() {
        // (x0^2, x0 x1): S-pair is x1 * x0^2 - x0 * x0 x1 = 0, basis unchanged.
        let a = p(3, &[(&[2, 0, 0], 1)]);
        let b = p(3, &[(&[1, 1, 0], 1)]);
        let (basis, _) = buchberger(&[a.clone(), b.clone()], DEFAULT_BUDGET).unwrap();
        assert_eq!(basis, vec![b, a]);
    }

    #[test]
    fn textbook_example() {
        // (x^2 - y, x^3 - x) over Q[x, y], lex x > y:
        // reduced basis {y^2 - y, x y - x, x^2 - y}
        let mk =
            |t: &[(&[u32], i64)]| Poly::from_terms(2, MonomialOrder::Lex, t.iter().map(|(m, c)| (m.to_vec(), int(*c))));
        let f1 = mk(&[(&[2, 0], 1), (&[0, 1], -1)]);
        let f2 = mk(&[(&[3, 0], 1), (&[1, 0], -1)]);
        let (basis, _) = buchberger(&[f1, f2], DEFAULT_BUDGET).unwrap();
        let expected = vec![
            mk(&[(&[0, 2], 1), (&[0, 1], -1)]),
            mk(&[(&[1, 1], 1), (&[1, 0], -1)]),
            mk(&[(&[2, 0], 1), (&[0, 1], -1)]),
        ];
        assert_eq!(basis, expected);
        assert!(is_groebner_basis(&basis));
    }

    #[test]
    fn unit_ideal_short_circuits() {
        let a = p(2, &[(&[1, 0], 1)]);
        let b = p(2, &[(&[1, 0], 1), (&[0, 0], 1)]);
        let (basis, _) = buchberger(&[a, b], DEFAULT_BUDGET).unwrap();
        assert_eq!(basis.len(), 1);
        assert!(basis[0].is_unit());
    }

    #[test]
    fn budget_is_enforced() {
        let f1 = p(3, &[(&[2, 0, 0], 1), (&[0, 1, 0], -1)]);
        let f2 = p(3, &[(&[1, 1, 0], 1), (&[0, 0, 1], -1)]);
        let f3 = p(3, &[(&[0, 0, 3], 1), (&[1, 0, 0], -2)]);
        assert!(matches!(
            buchberger(&[f1, f2, f3], 0),
            Err(Error::BudgetExceeded { budget: 0 })
        ));
    }

    #[test]
    fn remainder_is_deterministic() {
        let g = vec![
            p(2, &[(&[1, 1], 1), (&[0, 0], -1)]),
            p(2, &[(&[0, 2], 1), (&[0, 0], -1)]),
        ];
        let f = Poly::from_terms(
            2,
            MonomialOrder::GrevLex,
            [(vec![2, 1], int(1)), (vec![1, 2], ratio(1, 3)), (vec![0, 2], int(1))],
        );
        assert_eq!(f.remainder(&g), f.remainder(&g));
    }
}
