//! Loop-free multigraphs with optional partial labels.
//!
//! A [`Multigraph`] is the left-hand argument of every homomorphism count and
//! density in this crate. Labels are positive integer names attached to
//! distinct vertices; they only matter for the gluing product and for
//! canonical keys, densities ignore them.
//!
//! Text form: `n; i-j[*m],...; label:vertex,...`, e.g. `3; 0-1*2,1-2; 1:0`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest vertex count accepted by [`Multigraph::canonical_key`].
pub const CANONICAL_VERTEX_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Multigraph {
    vertex_count: usize,
    /// `(i, j)` with `i < j` mapped to a positive multiplicity.
    edges: BTreeMap<(usize, usize), u32>,
    /// vertex -> label name
    labels: BTreeMap<usize, u32>,
}

/// Isomorphism-class key respecting edge multiplicities and label names.
///
/// A sorted multiset of per-component keys, so only connected components
/// are subject to [`CANONICAL_VERTEX_LIMIT`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    components: Vec<ComponentKey>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct ComponentKey {
    vertex_count: usize,
    /// Label names, sorted; label `k` sits on canonical vertex `k`.
    labels: Vec<u32>,
    /// Upper-triangular multiplicities in row-major order.
    adjacency: Vec<u32>,
}

impl CanonicalKey {
    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(|c| c.vertex_count).sum()
    }

    pub fn is_labeled(&self) -> bool {
        self.components.iter().any(|c| !c.labels.is_empty())
    }

    /// The graph this key encodes, on canonical vertex numbering.
    pub fn to_graph(&self) -> Multigraph {
        let mut g = Multigraph::empty(0);
        for c in &self.components {
            g = g
                .disjoint_union(&c.to_graph())
                .expect("component label names are distinct");
        }
        g
    }
}

impl ComponentKey {
    fn to_graph(&self) -> Multigraph {
        let n = self.vertex_count;
        let mut edges = BTreeMap::new();
        let mut idx = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                let m = self.adjacency[idx];
                if m > 0 {
                    edges.insert((i, j), m);
                }
                idx += 1;
            }
        }
        let labels = self.labels.iter().enumerate().map(|(v, &name)| (v, name)).collect();
        Multigraph {
            vertex_count: n,
            edges,
            labels,
        }
    }
}

impl Multigraph {
    /// Validates and builds a multigraph. Repeated pairs add multiplicity.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)], labels: &[(usize, u32)]) -> Result<Self> {
        let weighted: Vec<_> = edges.iter().map(|&(i, j)| (i, j, 1)).collect();
        Self::with_multiplicities(vertex_count, &weighted, labels)
    }

    pub fn with_multiplicities(
        vertex_count: usize,
        edges: &[(usize, usize, u32)],
        labels: &[(usize, u32)],
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for &(i, j, m) in edges {
            if i == j {
                return Err(Error::InvalidGraph(format!("loop edge at vertex {i}")));
            }
            if i >= vertex_count || j >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge {i}-{j} out of range for {vertex_count} vertices"
                )));
            }
            if m == 0 {
                continue;
            }
            *map.entry((i.min(j), i.max(j))).or_insert(0) += m;
        }
        let mut label_map = BTreeMap::new();
        let mut names = BTreeSet::new();
        for &(v, name) in labels {
            if v >= vertex_count {
                return Err(Error::InvalidGraph(format!("label {name} on missing vertex {v}")));
            }
            if name == 0 {
                return Err(Error::InvalidGraph("label names must be positive".into()));
            }
            if !names.insert(name) {
                return Err(Error::InvalidGraph(format!("duplicate label name {name}")));
            }
            if label_map.insert(v, name).is_some() {
                return Err(Error::InvalidGraph(format!("vertex {v} labeled twice")));
            }
        }
        Ok(Multigraph {
            vertex_count,
            edges: map,
            labels: label_map,
        })
    }

    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Multigraph {
            vertex_count: n,
            ..Default::default()
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = BTreeMap::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.insert((i, j), 1);
            }
        }
        Multigraph {
            vertex_count: n,
            edges,
            labels: BTreeMap::new(),
        }
    }

    /// Path on `n` vertices (`n - 1` edges).
    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|i| ((i - 1, i), 1)).collect();
        Multigraph {
            vertex_count: n,
            edges,
            labels: BTreeMap::new(),
        }
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!("cycle needs at least 3 vertices, got {n}")));
        }
        let mut g = Self::path(n);
        g.edges.insert((0, n - 1), 1);
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Distinct adjacent pairs with their multiplicities.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.edges.iter().map(|(&p, &m)| (p, m))
    }

    /// Edge multiset flattened: a pair of multiplicity `m` appears `m` times.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .flat_map(|(&p, &m)| std::iter::repeat_n(p, m as usize))
            .collect()
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> u32 {
        self.edges.get(&(i.min(j), i.max(j))).copied().unwrap_or(0)
    }

    /// Number of edges counted with multiplicity.
    pub fn edge_total(&self) -> usize {
        self.edges.values().map(|&m| m as usize).sum()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|((i, j), _)| *i == v || *j == v)
            .map(|(_, &m)| m as usize)
            .sum()
    }

    pub fn labels(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.labels.iter().map(|(&v, &l)| (v, l))
    }

    pub fn label_of(&self, v: usize) -> Option<u32> {
        self.labels.get(&v).copied()
    }

    pub fn is_labeled(&self) -> bool {
        !self.labels.is_empty()
    }

    pub fn unlabeled(&self) -> Self {
        Multigraph {
            labels: BTreeMap::new(),
            ..self.clone()
        }
    }

    /// Same graph with all multiplicities clamped to 1.
    pub fn skeleton(&self) -> Self {
        Multigraph {
            vertex_count: self.vertex_count,
            edges: self.edges.keys().map(|&p| (p, 1)).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Disjoint union; labels of `other` must not clash with ours.
    pub fn disjoint_union(&self, other: &Multigraph) -> Result<Self> {
        let shift = self.vertex_count;
        let mut g = self.clone();
        g.vertex_count += other.vertex_count;
        for (&(i, j), &m) in &other.edges {
            g.edges.insert((i + shift, j + shift), m);
        }
        let names: BTreeSet<u32> = self.labels.values().copied().collect();
        for (&v, &name) in &other.labels {
            if names.contains(&name) {
                return Err(Error::InvalidGraph(format!(
                    "label {name} present on both sides of a disjoint union"
                )));
            }
            g.labels.insert(v + shift, name);
        }
        Ok(g)
    }

    /// Relabel vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.vertex_count;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidInput(format!("not a permutation of {n} vertices")));
        }
        let edges = self
            .edges
            .iter()
            .map(|(&(i, j), &m)| {
                let (a, b) = (perm[i], perm[j]);
                ((a.min(b), a.max(b)), m)
            })
            .collect();
        let labels = self.labels.iter().map(|(&v, &l)| (perm[v], l)).collect();
        Ok(Multigraph {
            vertex_count: n,
            edges,
            labels,
        })
    }

    pub fn canonical_key(&self) -> Result<CanonicalKey> {
        Ok(self.canonical_form()?.0)
    }

    /// Canonical key plus the graph renumbered into canonical order.
    pub fn canonical_form(&self) -> Result<(CanonicalKey, Multigraph)> {
        let mut components = Vec::new();
        for vertices in self.components() {
            components.push(self.induced(&vertices).component_key()?);
        }
        components.sort();
        let key = CanonicalKey { components };
        let graph = key.to_graph();
        Ok((key, graph))
    }

    /// Vertex sets of the connected components, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], v: usize) -> usize {
            let mut r = v;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = v;
            while parent[c] != r {
                let next = parent[c];
                parent[c] = r;
                c = next;
            }
            r
        }
        for &(i, j) in self.edges.keys() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    fn induced(&self, vertices: &[usize]) -> Multigraph {
        let index: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|(&(i, j), &m)| Some(((*index.get(&i)?, *index.get(&j)?), m)))
            .collect();
        let labels = self
            .labels
            .iter()
            .filter_map(|(v, &l)| Some((*index.get(v)?, l)))
            .collect();
        Multigraph {
            vertex_count: vertices.len(),
            edges,
            labels,
        }
    }

    /// Vertices are split into classes by colour refinement (labeled vertices
    /// get singleton classes, ordered by name). The key is the lexicographically
    /// smallest adjacency encoding over all class-respecting orderings.
    fn component_key(&self) -> Result<ComponentKey> {
        let n = self.vertex_count;
        if n > CANONICAL_VERTEX_LIMIT {
            return Err(Error::too_large(
                "graph",
                format!("component with {n} vertices; canonicalization supports at most {CANONICAL_VERTEX_LIMIT}"),
            ));
        }
        let classes = self.refined_classes();
        let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
        let mut order = Vec::with_capacity(n);
        self.search_orders(&classes, 0, &mut order, &mut best);
        let (adjacency, order) = best.unwrap_or_default();
        let labels: Vec<u32> = order.iter().map_while(|v| self.labels.get(v).copied()).collect();
        Ok(ComponentKey {
            vertex_count: n,
            labels,
            adjacency,
        })
    }

    fn search_orders(
        &self,
        classes: &[Vec<usize>],
        class_idx: usize,
        order: &mut Vec<usize>,
        best: &mut Option<(Vec<u32>, Vec<usize>)>,
    ) {
        if class_idx == classes.len() {
            let enc = self.encode(order);
            if best.as_ref().is_none_or(|(b, _)| enc < *b) {
                *best = Some((enc, order.clone()));
            }
            return;
        }
        let mut members = classes[class_idx].clone();
        permute_all(&mut members, 0, &mut |perm| {
            let len = order.len();
            order.extend_from_slice(perm);
            self.search_orders(classes, class_idx + 1, order, best);
            order.truncate(len);
        });
    }

    fn encode(&self, order: &[usize]) -> Vec<u32> {
        let n = order.len();
        let mut enc = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for a in 0..n {
            for b in (a + 1)..n {
                enc.push(self.multiplicity(order[a], order[b]));
            }
        }
        enc
    }

    fn refined_classes(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count;
        // (0, name) for labeled vertices sorts them first, by name.
        let initial: Vec<(u32, u32)> = (0..n)
            .map(|v| match self.labels.get(&v) {
                Some(&name) => (0, name),
                None => (1, 0),
            })
            .collect();
        let mut colour = rank(&initial);
        loop {
            let signatures: Vec<(usize, Vec<(usize, u32)>)> = (0..n)
                .map(|v| {
                    let mut nb: Vec<(usize, u32)> = (0..n)
                        .filter(|&u| u != v)
                        .filter_map(|u| {
                            let m = self.multiplicity(u, v);
                            (m > 0).then_some((colour[u], m))
                        })
                        .collect();
                    nb.sort_unstable();
                    (colour[v], nb)
                })
                .collect();
            let next = rank(&signatures);
            let stable = count_distinct(&next) == count_distinct(&colour);
            colour = next;
            if stable {
                break;
            }
        }
        let k = count_distinct(&colour);
        let mut classes = vec![Vec::new(); k];
        for (v, &c) in colour.iter().enumerate() {
            classes[c].push(v);
        }
        classes
    }
}

fn rank<T: Ord + Clone>(items: &[T]) -> Vec<usize> {
    let distinct: BTreeSet<T> = items.iter().cloned().collect();
    let index: BTreeMap<T, usize> = distinct.into_iter().enumerate().map(|(i, t)| (t, i)).collect();
    items.iter().map(|t| index[t]).collect()
}

fn count_distinct(colour: &[usize]) -> usize {
    colour.iter().collect::<BTreeSet<_>>().len()
}

fn permute_all(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_all(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Named families: `K<n>`, `C<n>`, `P<n>` and `E<n>` (edgeless), with an
/// optional underscore (`K_3`).
pub fn standard_graph(token: &str) -> Result<Multigraph> {
    let unknown = || Error::UnknownToken(token.to_string());
    let mut chars = token.chars();
    let family = chars.next().ok_or_else(unknown)?;
    let rest = chars.as_str();
    let digits = rest.strip_prefix('_').unwrap_or(rest);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(unknown());
    }
    let n: usize = digits.parse().map_err(|_| unknown())?;
    match family {
        'K' => Ok(Multigraph::complete(n)),
        'P' => Ok(Multigraph::path(n)),
        'E' => Ok(Multigraph::empty(n)),
        'C' => Multigraph::cycle(n),
        _ => Err(unknown()),
    }
}

/// One canonical representative per isomorphism class of unlabeled
/// loop-free multigraphs with at most `max_vertices` vertices and at most
/// `max_edge_total` edges (with multiplicity). Ordered by vertex count, then
/// edge total, then key.
pub fn enumerate_multigraphs(max_vertices: usize, max_edge_total: usize) -> Vec<Multigraph> {
    let mut seen: BTreeSet<(usize, usize, CanonicalKey)> = BTreeSet::new();
    for n in 0..=max_vertices.min(CANONICAL_VERTEX_LIMIT) {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        for total in 0..=max_edge_total {
            if pairs.is_empty() && total > 0 {
                break;
            }
            let mut chosen = Vec::with_capacity(total);
            multisets(pairs.len(), total, 0, &mut chosen, &mut |idx| {
                let edges: Vec<_> = idx.iter().map(|&k| pairs[k]).collect();
                let g = Multigraph::new(n, &edges, &[]).expect("generated edges are valid");
                let key = g.canonical_key().expect("within canonical limit");
                seen.insert((n, total, key));
            });
        }
    }
    seen.into_iter().map(|(_, _, key)| key.to_graph()).collect()
}

fn multisets(universe: usize, size: usize, start: usize, chosen: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if chosen.len() == size {
        f(chosen);
        return;
    }
    for k in start..universe {
        chosen.push(k);
        multisets(universe, size, k, chosen, f);
        chosen.pop();
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|(&(i, j), &m)| {
                if m == 1 {
                    format!("{i}-{j}")
                } else {
                    format!("{i}-{j}*{m}")
                }
            })
            .collect();
        let mut labels: Vec<(u32, usize)> = self.labels.iter().map(|(&v, &l)| (l, v)).collect();
        labels.sort_unstable();
        let labels: Vec<String> = labels.iter().map(|(l, v)| format!("{l}:{v}")).collect();
        write!(f, "{}; {}; {}", self.vertex_count, edges.join(","), labels.join(","))
    }
}

impl FromStr for Multigraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidGraph(format!("{msg} in `{s}`"));
        let mut parts = s.split(';');
        let n: usize = parts
            .next()
            .unwrap_or("")
            .trim()
            .parse()
            .map_err(|_| bad("bad vertex count"))?;
        let mut edges = Vec::new();
        if let Some(edge_part) = parts.next() {
            for item in edge_part.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let (pair, mult) = match item.split_once('*') {
                    Some((p, m)) => (p, m.trim().parse().map_err(|_| bad("bad multiplicity"))?),
                    None => (item, 1u32),
                };
                let (i, j) = pair.split_once('-').ok_or_else(|| bad("bad edge"))?;
                let i = i.trim().parse().map_err(|_| bad("bad edge endpoint"))?;
                let j = j.trim().parse().map_err(|_| bad("bad edge endpoint"))?;
                edges.push((i, j, mult));
            }
        }
        let mut labels = Vec::new();
        if let Some(label_part) = parts.next() {
            for item in label_part.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let (l, v) = item.split_once(':').ok_or_else(|| bad("bad label"))?;
                let l = l.trim().parse().map_err(|_| bad("bad label name"))?;
                let v = v.trim().parse().map_err(|_| bad("bad label vertex"))?;
                labels.push((v, l));
            }
        }
        if parts.next().is_some() {
            return Err(bad("too many fields"));
        }
        Multigraph::with_multiplicities(n, &edges, &labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_examples() {
        let k3 = Multigraph::new(3, &[(0, 1), (0, 2), (1, 2)], &[]).unwrap();
        assert_eq!(k3, Multigraph::complete(3));
        let k0 = Multigraph::new(0, &[], &[]).unwrap();
        assert_eq!(k0.vertex_count(), 0);
        let dbl = Multigraph::new(2, &[(0, 1), (0, 1)], &[]).unwrap();
        assert_eq!(dbl.multiplicity(0, 1), 2);
        assert_eq!(dbl.edge_total(), 2);
    }

    #[test]
    fn build_errors() {
        assert!(matches!(
            Multigraph::new(2, &[(1, 1)], &[]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(Multigraph::new(2, &[(0, 2)], &[]).is_err());
        assert!(Multigraph::new(2, &[], &[(0, 1), (1, 1)]).is_err());
        assert!(Multigraph::new(2, &[], &[(0, 0)]).is_err());
    }

    #[test]
    fn standard_families() {
        assert_eq!(standard_graph("K3").unwrap(), Multigraph::complete(3));
        let p3 = standard_graph("P3").unwrap();
        assert_eq!((p3.vertex_count(), p3.edge_total()), (3, 2));
        let c4 = standard_graph("C_4").unwrap();
        assert_eq!((c4.vertex_count(), c4.edge_total()), (4, 4));
        assert!((0..4).all(|v| c4.degree(v) == 2));
        assert!(matches!(standard_graph("Q3"), Err(Error::UnknownToken(_))));
        assert!(standard_graph("C2").is_err());
        assert!(standard_graph("K").is_err());
    }

    #[test]
    fn key_ignores_numbering() {
        let k3 = Multigraph::complete(3);
        let shuffled = k3.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(k3.canonical_key().unwrap(), shuffled.canonical_key().unwrap());

        let a = Multigraph::with_multiplicities(3, &[(0, 1, 2)], &[]).unwrap();
        let b = Multigraph::with_multiplicities(3, &[(2, 1, 2)], &[]).unwrap();
        assert_eq!(a.canonical_key().unwrap(), b.canonical_key().unwrap());
    }

    #[test]
    fn key_respects_labels() {
        let k2 = Multigraph::complete(2);
        let k2_dot = Multigraph::new(2, &[(0, 1)], &[(0, 1)]).unwrap();
        assert_ne!(k2.canonical_key().unwrap(), k2_dot.canonical_key().unwrap());
        // labeled endpoint vs labeled center of a path
        let end = Multigraph::new(3, &[(0, 1), (1, 2)], &[(0, 1)]).unwrap();
        let mid = Multigraph::new(3, &[(0, 1), (1, 2)], &[(1, 1)]).unwrap();
        assert_ne!(end.canonical_key().unwrap(), mid.canonical_key().unwrap());
        let two = Multigraph::new(2, &[(0, 1)], &[(0, 1), (1, 2)]).unwrap();
        let swapped = Multigraph::new(2, &[(0, 1)], &[(0, 2), (1, 1)]).unwrap();
        assert_eq!(two.canonical_key().unwrap(), swapped.canonical_key().unwrap());
    }

    #[test]
    fn key_size_limit() {
        let big = Multigraph::complete(CANONICAL_VERTEX_LIMIT + 1);
        assert!(matches!(big.canonical_key(), Err(Error::TooLarge { .. })));
        // many small components are fine
        let spread = Multigraph::empty(3 * CANONICAL_VERTEX_LIMIT);
        assert_eq!(spread.canonical_key().unwrap().vertex_count(), 30);
    }

    #[test]
    fn components_split() {
        let g = Multigraph::new(5, &[(0, 3), (3, 4)], &[]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 3, 4], vec![1], vec![2]]);
    }

    #[test]
    fn canonical_form_round_trips_key() {
        let g = Multigraph::with_multiplicities(4, &[(0, 3, 2), (1, 3, 1)], &[(1, 5)]).unwrap();
        let (key, form) = g.canonical_form().unwrap();
        assert_eq!(form.canonical_key().unwrap(), key);
        assert_eq!(form.edge_total(), 3);
    }

    #[test]
    fn small_enumerations() {
        let e = enumerate_multigraphs(1, 0);
        assert_eq!(e, vec![Multigraph::empty(0), Multigraph::empty(1)]);
        let e = enumerate_multigraphs(2, 1);
        assert_eq!(
            e,
            vec![
                Multigraph::empty(0),
                Multigraph::empty(1),
                Multigraph::empty(2),
                Multigraph::complete(2)
            ]
        );
    }

    #[test]
    fn skeleton_clamps() {
        let dbl = Multigraph::with_multiplicities(2, &[(0, 1, 2)], &[]).unwrap();
        assert_eq!(dbl.skeleton(), Multigraph::complete(2));
        assert_eq!(Multigraph::complete(3).skeleton(), Multigraph::complete(3));
        let tri = Multigraph::with_multiplicities(3, &[(0, 1, 2), (1, 2, 1), (0, 2, 1)], &[]).unwrap();
        assert_eq!(tri.skeleton(), Multigraph::complete(3));
    }

    #[test]
    fn text_form() {
        let g = Multigraph::with_multiplicities(3, &[(0, 1, 2), (1, 2, 1)], &[(0, 1)]).unwrap();
        assert_eq!(g.to_string(), "3; 0-1*2,1-2; 1:0");
        assert_eq!(g.to_string().parse::<Multigraph>().unwrap(), g);
        assert_eq!("0; ; ".parse::<Multigraph>().unwrap(), Multigraph::empty(0));
        assert_eq!("2".parse::<Multigraph>().unwrap(), Multigraph::empty(2));
        assert!("2; 0-0".parse::<Multigraph>().is_err());
        assert!("x".parse::<Multigraph>().is_err());
    }
}
