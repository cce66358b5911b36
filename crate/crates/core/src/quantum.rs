//! Quantum graphs: finite rational combinations of partially labeled
//! multigraphs, multiplied by gluing along shared label names.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::graph::{CanonicalKey, Multigraph};
use crate::rational::{format_rational, Rational};

/// Glue two partially labeled graphs: disjoint union with vertices carrying
/// the same label name identified. Edge multisets are added, so multi-edges
/// may arise; unshared labels persist.
pub fn glue(a: &Multigraph, b: &Multigraph) -> Multigraph {
    let by_name: BTreeMap<u32, usize> = a.labels().map(|(v, l)| (l, v)).collect();
    let mut next = a.vertex_count();
    let map: Vec<usize> = (0..b.vertex_count())
        .map(|v| match b.label_of(v).and_then(|l| by_name.get(&l)) {
            Some(&target) => target,
            None => {
                next += 1;
                next - 1
            }
        })
        .collect();
    let mut edges: Vec<(usize, usize, u32)> = a.edges().map(|((i, j), m)| (i, j, m)).collect();
    edges.extend(b.edges().map(|((i, j), m)| (map[i], map[j], m)));
    let mut labels: Vec<(usize, u32)> = a.labels().collect();
    labels.extend(
        b.labels()
            .filter(|(_, l)| !by_name.contains_key(l))
            .map(|(v, l)| (map[v], l)),
    );
    Multigraph::with_multiplicities(next, &edges, &labels).expect("gluing valid graphs yields a valid graph")
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QuantumGraph {
    terms: BTreeMap<CanonicalKey, (Rational, Multigraph)>,
}

impl QuantumGraph {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit `K_0`.
    pub fn unit() -> Self {
        Self::graph(&Multigraph::empty(0)).expect("K0 canonicalizes")
    }

    pub fn graph(g: &Multigraph) -> Result<Self> {
        Self::combine([(Rational::one(), g.clone())])
    }

    pub fn constant(c: Rational) -> Self {
        Self::unit().scale(&c)
    }

    /// Merge isomorphic constituents and drop zero coefficients.
    pub fn combine(terms: impl IntoIterator<Item = (Rational, Multigraph)>) -> Result<Self> {
        let mut out = Self::zero();
        for (c, g) in terms {
            let (key, rep) = g.canonical_form()?;
            out.accumulate(key, c, rep);
        }
        Ok(out)
    }

    fn accumulate(&mut self, key: CanonicalKey, c: Rational, rep: Multigraph) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert((c, rep));
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().0 += c;
                if e.get().0.is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(coefficient, canonical representative)` in key order.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Multigraph)> {
        self.terms.values().map(|(c, g)| (c, g))
    }

    pub fn coefficient(&self, g: &Multigraph) -> Result<Rational> {
        let key = g.canonical_key()?;
        Ok(self
            .terms
            .get(&key)
            .map(|(c, _)| c.clone())
            .unwrap_or_else(Rational::zero))
    }

    pub fn is_labeled(&self) -> bool {
        self.terms.keys().any(CanonicalKey::is_labeled)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (key, (c, g)) in &other.terms {
            out.accumulate(key.clone(), c.clone(), g.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, (a, g))| (k.clone(), (a * c, g.clone())))
                .collect(),
        }
    }

    /// Bilinear extension of [`glue`].
    pub fn product(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (a, g) in self.terms.values() {
            for (b, h) in other.terms.values() {
                let (key, rep) = glue(g, h).canonical_form()?;
                out.accumulate(key, a * b, rep);
            }
        }
        Ok(out)
    }

    /// `k`-fold gluing power; `k = 0` gives the unit `K_0`.
    pub fn power(&self, k: u32) -> Result<Self> {
        let mut acc = Self::unit();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.product(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base)?;
            }
        }
        Ok(acc)
    }

    /// Drop all labels and re-merge.
    pub fn unlabel(&self) -> Result<Self> {
        Self::combine(self.terms.values().map(|(c, g)| (c.clone(), g.unlabeled())))
    }
}

/// `K3`, `C4`, `P3` names for connected unlabeled components that match a
/// standard family; `None` otherwise.
fn family_name(component: &Multigraph) -> Option<String> {
    let n = component.vertex_count();
    let key = component.canonical_key().ok()?;
    if Multigraph::complete(n).canonical_key().ok()? == key {
        return Some(format!("K{n}"));
    }
    if n >= 3 && Multigraph::cycle(n).ok()?.canonical_key().ok()? == key {
        return Some(format!("C{n}"));
    }
    if Multigraph::path(n).canonical_key().ok()? == key {
        return Some(format!("P{n}"));
    }
    None
}

fn component_token(component: &Multigraph) -> String {
    if !component.is_labeled() {
        if let Some(name) = family_name(component) {
            return name;
        }
    }
    format!("{{{component}}}")
}

/// Expression-syntax rendering of one graph: a product of component tokens
/// with repeated components written as powers.
pub fn graph_expression(g: &Multigraph) -> String {
    let comps = g.components();
    if comps.is_empty() {
        return "K0".to_string();
    }
    let mut tokens: Vec<(String, u32)> = Vec::new();
    for vs in comps {
        let mut edges = Vec::new();
        let index: BTreeMap<usize, usize> = vs.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        for ((i, j), m) in g.edges() {
            if let (Some(&a), Some(&b)) = (index.get(&i), index.get(&j)) {
                edges.push((a, b, m));
            }
        }
        let labels: Vec<(usize, u32)> = g.labels().filter_map(|(v, l)| index.get(&v).map(|&k| (k, l))).collect();
        let sub = Multigraph::with_multiplicities(vs.len(), &edges, &labels).expect("component of a valid graph");
        let token = component_token(&sub.canonical_form().map(|(_, f)| f).unwrap_or(sub));
        match tokens.iter_mut().find(|(t, _)| *t == token) {
            Some((_, k)) => *k += 1,
            None => tokens.push((token, 1)),
        }
    }
    tokens
        .iter()
        .map(|(t, k)| if *k == 1 { t.clone() } else { format!("{t}^{k}") })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for QuantumGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (c, g)) in self.terms.values().enumerate() {
            let abs = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            match (idx, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                (_, s) => write!(f, " {s} ")?,
            }
            let body = graph_expression(g);
            if g.vertex_count() == 0 {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{body}")?;
            } else {
                write!(f, "{}*{body}", format_rational(&abs))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::standard_graph;
    use crate::rational::{int, ratio};

    fn qg(token: &str) -> QuantumGraph {
        QuantumGraph::graph(&standard_graph(token).unwrap()).unwrap()
    }

    fn k2_dot() -> Multigraph {
        Multigraph::new(2, &[(0, 1)], &[(0, 1)]).unwrap()
    }

    #[test]
    fn combine_merges_isomorphic() {
        let k3 = Multigraph::complete(3);
        let g = QuantumGraph::combine([(int(1), k3.clone()), (int(1), k3.clone())]).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.coefficient(&k3).unwrap(), int(2));

        let relabeled = k3.permuted(&[1, 2, 0]).unwrap();
        let z = QuantumGraph::combine([(int(1), k3), (int(-1), relabeled)]).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn half_k2_cubed_minus_c4() {
        let k2_3 = Multigraph::new(6, &[(0, 1), (2, 3), (4, 5)], &[]).unwrap();
        let g = QuantumGraph::combine([(ratio(1, 2), k2_3.clone()), (int(-1), standard_graph("C4").unwrap())]).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.coefficient(&k2_3).unwrap(), ratio(1, 2));
        assert_eq!(g.to_string(), "1/2*K2^3 - C4");
    }

    #[test]
    fn glue_examples() {
        let p3 = glue(&k2_dot(), &k2_dot());
        assert_eq!(p3.vertex_count(), 3);
        assert_eq!(p3.edge_total(), 2);
        let centre = p3.labels().next().unwrap().0;
        assert_eq!(p3.degree(centre), 2);

        let k2 = Multigraph::complete(2);
        let two = glue(&k2, &k2);
        assert_eq!(two.components().len(), 2);
        assert_eq!(two.edge_total(), 2);

        let o1 = Multigraph::new(1, &[], &[(0, 1)]).unwrap();
        let g = Multigraph::new(3, &[(0, 1), (1, 2)], &[(1, 1)]).unwrap();
        assert_eq!(glue(&o1, &g).canonical_key().unwrap(), g.canonical_key().unwrap());
    }

    #[test]
    fn glue_creates_multi_edges() {
        let both = Multigraph::new(2, &[(0, 1)], &[(0, 1), (1, 2)]).unwrap();
        let g = glue(&both, &both);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.multiplicity(0, 1), 2);
    }

    #[test]
    fn powers() {
        let k2_4 = qg("K2").power(4).unwrap();
        assert_eq!(k2_4.len(), 1);
        let (c, g) = k2_4.terms().next().unwrap();
        assert_eq!(*c, int(1));
        assert_eq!((g.vertex_count(), g.edge_total()), (8, 4));
        assert_eq!(qg("K3").power(0).unwrap(), QuantumGraph::unit());

        let diff = k2_4.sub(&qg("C4"));
        let sq = diff.power(2).unwrap();
        let mut coeffs: Vec<Rational> = sq.terms().map(|(c, _)| c.clone()).collect();
        coeffs.sort();
        assert_eq!(coeffs, vec![int(-2), int(1), int(1)]);
    }

    #[test]
    fn unit_and_zero() {
        let g = qg("C4").add(&qg("K3").scale(&ratio(1, 3)));
        assert_eq!(g.product(&QuantumGraph::unit()).unwrap(), g);
        assert!(g.product(&QuantumGraph::zero()).unwrap().is_zero());
        assert_eq!(g.sub(&g), QuantumGraph::zero());
    }

    #[test]
    fn unlabel_examples() {
        let dot = QuantumGraph::graph(&k2_dot()).unwrap();
        assert_eq!(dot.unlabel().unwrap(), qg("K2"));
        let glued = dot.product(&dot).unwrap();
        assert!(glued.is_labeled());
        assert_eq!(glued.unlabel().unwrap(), qg("P3"));
        assert!(QuantumGraph::zero().unlabel().unwrap().is_zero());
    }

    #[test]
    fn display_forms() {
        assert_eq!(QuantumGraph::zero().to_string(), "0");
        assert_eq!(QuantumGraph::unit().to_string(), "1");
        let h = QuantumGraph::unit().sub(&qg("K1"));
        assert_eq!(h.to_string(), "1 - K1");
        let dot = QuantumGraph::graph(&k2_dot()).unwrap();
        assert_eq!(dot.to_string(), "{2; 0-1; 1:0}");
    }
}
