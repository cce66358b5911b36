//! Kernel varieties `V(g) = {W : t(g, W) = 0}`, their union and
//! intersection combinators, pre-ideal closure checks and HNAK audits.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::t_quantum;
use crate::error::{Error, Result};
use crate::graph::enumerate_multigraphs;
use crate::hom::hom_poly;
use crate::kernel::Kernel;
use crate::poly::{IdealHandle, SymPolynomial};
use crate::quantum::QuantumGraph;
use crate::rational::format_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Raw,
    Union,
    Intersection,
    /// Accepts every kernel; its defining quantum graph is `K0 - K0 = 0`.
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietyConstraint {
    g: QuantumGraph,
    provenance: Provenance,
}

impl VarietyConstraint {
    /// `V(g)`. The zero quantum graph is rejected; use [`Self::trivial`].
    pub fn new(g: QuantumGraph) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::InvalidInput(
                "zero defining quantum graph; use the trivial constraint".into(),
            ));
        }
        Ok(VarietyConstraint {
            g: g.unlabel()?,
            provenance: Provenance::Raw,
        })
    }

    pub fn trivial() -> Self {
        VarietyConstraint {
            g: QuantumGraph::zero(),
            provenance: Provenance::Trivial,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.provenance == Provenance::Trivial
    }

    pub fn defining_graph(&self) -> &QuantumGraph {
        &self.g
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn contains(&self, w: &Kernel) -> Result<bool> {
        in_variety(w, self)
    }
}

pub fn in_variety(w: &Kernel, c: &VarietyConstraint) -> Result<bool> {
    if c.is_trivial() {
        return Ok(true);
    }
    Ok(t_quantum(&c.g, w)?.is_zero())
}

/// `V(g1) ∪ V(g2) = V(g1 g2)`.
pub fn union_constraint(c1: &VarietyConstraint, c2: &VarietyConstraint) -> Result<VarietyConstraint> {
    if c1.is_trivial() || c2.is_trivial() {
        return Ok(VarietyConstraint::trivial());
    }
    Ok(VarietyConstraint {
        g: c1.g.product(&c2.g)?,
        provenance: Provenance::Union,
    })
}

/// `∩ V(g_i) = V(Σ g_i²)`. Trivial members are dropped.
pub fn intersection_constraint(cs: &[VarietyConstraint]) -> Result<VarietyConstraint> {
    let mut g = QuantumGraph::zero();
    for c in cs.iter().filter(|c| !c.is_trivial()) {
        g = g.add(&c.g.power(2)?);
    }
    if g.is_zero() {
        return Ok(VarietyConstraint::trivial());
    }
    Ok(VarietyConstraint {
        g,
        provenance: Provenance::Intersection,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub vertices: usize,
    pub edges: usize,
}

impl Default for Bound {
    fn default() -> Self {
        Bound { vertices: 4, edges: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Multiplier graph in text form.
    pub multiplier: String,
    pub density: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub kernel: String,
    pub base: String,
    pub base_density: String,
    /// `t(g, W) ≠ 0`: the check says nothing about the pre-ideal.
    pub vacuous: bool,
    pub bound: Bound,
    pub multipliers_checked: usize,
    pub violations: Vec<Violation>,
}

impl ClosureReport {
    pub fn holds(&self) -> bool {
        !self.vacuous && self.violations.is_empty()
    }
}

/// Tests `t(g F, W) = 0` for every multigraph `F` within `bound`.
pub fn closure_check(w: &Kernel, kernel_id: &str, g: &QuantumGraph, bound: Bound) -> Result<ClosureReport> {
    let g = g.unlabel()?;
    let base_density = t_quantum(&g, w)?;
    let multipliers = enumerate_multigraphs(bound.vertices, bound.edges);
    let results: Vec<Option<Violation>> = multipliers
        .par_iter()
        .map(|f| -> Result<Option<Violation>> {
            let gf = g.product(&QuantumGraph::graph(f)?)?;
            let t = t_quantum(&gf, w)?;
            Ok((!t.is_zero()).then(|| Violation {
                multiplier: f.to_string(),
                density: format_rational(&t),
            }))
        })
        .collect::<Result<_>>()?;
    Ok(ClosureReport {
        kernel: kernel_id.to_string(),
        base: g.to_string(),
        vacuous: !base_density.is_zero(),
        base_density: format_rational(&base_density),
        bound,
        multipliers_checked: multipliers.len(),
        violations: results.into_iter().flatten().collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Finding {
    /// Radical member that vanishes, or non-member that does not.
    Consistent,
    /// Not in the radical, yet vanishes on the kernel.
    StrictInclusion,
    /// In the radical, yet does not vanish: contradicts HNAK.
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelCheck {
    pub kernel: String,
    /// `t(g, W)` for each defining quantum graph, all zero.
    pub generator_densities: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub kernel: String,
    pub density: String,
    pub vanishes: bool,
    pub finding: Finding,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateAudit {
    pub candidate: String,
    pub hom_poly: String,
    pub radical_member: bool,
    pub outcomes: Vec<Outcome>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HnakReport {
    pub q: usize,
    pub order: String,
    pub generators: Vec<String>,
    pub ideal_generators: Vec<String>,
    pub kernels: Vec<KernelCheck>,
    pub candidates: Vec<CandidateAudit>,
    pub strict_inclusions: usize,
    pub violations: usize,
}

/// HNAK audit with the ideal generated by `hom(Q, X)`.
pub fn hnak_audit(
    q: usize,
    generators: &[QuantumGraph],
    candidates: &[QuantumGraph],
    kernels: &[(String, Kernel)],
) -> Result<HnakReport> {
    let polys = generators
        .iter()
        .map(|g| hom_poly(&g.unlabel()?, q))
        .collect::<Result<Vec<_>>>()?;
    hnak_audit_with_ideal(&IdealHandle::new(q, polys)?, generators, candidates, kernels)
}

/// HNAK audit against an explicit ideal. Every test kernel must lie in the
/// variety of `generators`; each candidate is tested for radical membership
/// of its hom polynomial and for vanishing on every kernel.
pub fn hnak_audit_with_ideal(
    ideal: &IdealHandle,
    generators: &[QuantumGraph],
    candidates: &[QuantumGraph],
    kernels: &[(String, Kernel)],
) -> Result<HnakReport> {
    let q = ideal.q();
    let mut checks = Vec::with_capacity(kernels.len());
    for (id, w) in kernels {
        let densities = generators.iter().map(|g| t_quantum(g, w)).collect::<Result<Vec<_>>>()?;
        if let Some(pos) = densities.iter().position(|t| !t.is_zero()) {
            return Err(Error::InvalidInput(format!(
                "kernel {id} is not in the variety: t({}, W) = {}",
                generators[pos],
                format_rational(&densities[pos])
            )));
        }
        checks.push(KernelCheck {
            kernel: id.clone(),
            generator_densities: densities.iter().map(format_rational).collect(),
        });
    }
    ideal.groebner_basis()?;

    let audits = candidates
        .par_iter()
        .map(|c| -> Result<CandidateAudit> {
            let c = c.unlabel()?;
            let p: SymPolynomial = hom_poly(&c, q)?;
            let member = ideal.radical_member(&p)?;
            let outcomes = kernels
                .iter()
                .map(|(id, w)| -> Result<Outcome> {
                    let t = t_quantum(&c, w)?;
                    let vanishes = t.is_zero();
                    let finding = match (member, vanishes) {
                        (true, false) => Finding::Violation,
                        (false, true) => Finding::StrictInclusion,
                        _ => Finding::Consistent,
                    };
                    Ok(Outcome {
                        kernel: id.clone(),
                        density: format_rational(&t),
                        vanishes,
                        finding,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CandidateAudit {
                candidate: c.to_string(),
                hom_poly: p.to_compact_string(),
                radical_member: member,
                outcomes,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let count = |f: Finding| {
        audits
            .iter()
            .flat_map(|a| &a.outcomes)
            .filter(|o| o.finding == f)
            .count()
    };
    Ok(HnakReport {
        q,
        order: ideal.order().name().to_string(),
        generators: generators.iter().map(ToString::to_string).collect(),
        ideal_generators: ideal.generators().iter().map(|g| g.to_compact_string()).collect(),
        kernels: checks,
        strict_inclusions: count(Finding::StrictInclusion),
        violations: count(Finding::Violation),
        candidates: audits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use crate::kernel::StepKernel;
    use crate::rational::ratio;

    fn c(text: &str) -> VarietyConstraint {
        VarietyConstraint::new(parse_expr(text).unwrap()).unwrap()
    }

    fn half() -> Kernel {
        StepKernel::constant(ratio(1, 2)).into()
    }

    #[test]
    fn membership_examples() {
        let gen = c("(K2^4 - C4)^2 + (P3 - 2*K3)^2");
        assert!(in_variety(&half(), &gen).unwrap());
        assert!(!in_variety(&half(), &c("K1")).unwrap());
        assert!(in_variety(&half(), &VarietyConstraint::trivial()).unwrap());
        assert!(VarietyConstraint::new(parse_expr("K0 - K0").unwrap()).is_err());
    }

    #[test]
    fn combinators() {
        let a = c("P3 - 2*K3");
        let b = c("K2 - 1/3");
        let w = half();
        let u = union_constraint(&a, &b).unwrap();
        assert_eq!(u.provenance(), Provenance::Union);
        assert!(in_variety(&w, &u).unwrap());
        let i = intersection_constraint(&[a.clone(), b.clone()]).unwrap();
        assert!(!in_variety(&w, &i).unwrap());
        let both = intersection_constraint(&[a.clone(), c("K2^4 - C4")]).unwrap();
        assert!(in_variety(&w, &both).unwrap());
        let with_trivial = intersection_constraint(&[a.clone(), VarietyConstraint::trivial()]).unwrap();
        assert_eq!(with_trivial.defining_graph(), &a.defining_graph().power(2).unwrap());
        assert!(intersection_constraint(&[]).unwrap().is_trivial());
        assert!(union_constraint(&a, &VarietyConstraint::trivial())
            .unwrap()
            .is_trivial());
    }

    #[test]
    fn closure_on_half() {
        let g = parse_expr("P3 - 2*K3").unwrap();
        let r = closure_check(&half(), "half", &g, Bound::default()).unwrap();
        assert!(!r.vacuous);
        assert!(r.violations.is_empty());
        assert!(r.holds());
        assert!(r.multipliers_checked > 0);
    }

    #[test]
    fn closure_vacuous_flag() {
        let r = closure_check(
            &half(),
            "half",
            &parse_expr("K2").unwrap(),
            Bound { vertices: 2, edges: 1 },
        )
        .unwrap();
        assert!(r.vacuous);
        assert_eq!(r.base_density, "1/2");
    }

    #[test]
    fn closure_on_zero_kernel() {
        let zero: Kernel = StepKernel::zero().into();
        let r = closure_check(
            &zero,
            "zero",
            &parse_expr("K0 - K1").unwrap(),
            Bound { vertices: 3, edges: 2 },
        )
        .unwrap();
        assert!(!r.vacuous);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn strict_inclusion_and_generator() {
        let gens = vec![parse_expr("(K2^4 - C4)^2 + (P3 - 2*K3)^2").unwrap()];
        let cands = vec![parse_expr("1/2*K2^3 - C4").unwrap(), gens[0].clone()];
        let r = hnak_audit(2, &gens, &cands, &[("half".into(), half())]).unwrap();
        assert!(!r.candidates[0].radical_member);
        assert_eq!(r.candidates[0].outcomes[0].finding, Finding::StrictInclusion);
        assert!(r.candidates[1].radical_member);
        assert_eq!(r.candidates[1].outcomes[0].finding, Finding::Consistent);
        assert_eq!(r.violations, 0);
        assert_eq!(r.strict_inclusions, 1);
    }

    #[test]
    fn kernel_outside_variety_rejected() {
        let gens = vec![parse_expr("K2").unwrap()];
        let err = hnak_audit(2, &gens, &gens, &[("half".into(), half())]);
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn variables_ideal() {
        let q = 2;
        let vars = (1..=q)
            .flat_map(|i| (i..=q).map(move |j| SymPolynomial::var(q, i, j).unwrap()))
            .collect();
        let ideal = IdealHandle::new(q, vars).unwrap();
        let gens = vec![parse_expr("K2").unwrap(), parse_expr("P3").unwrap()];
        let zero: Kernel = StepKernel::zero().into();
        let r = hnak_audit_with_ideal(
            &ideal,
            &gens,
            &[parse_expr("K0 - K1").unwrap()],
            &[("zero".into(), zero)],
        )
        .unwrap();
        assert_eq!(r.candidates[0].hom_poly, "-1");
        assert!(!r.candidates[0].radical_member);
        assert_eq!(r.candidates[0].outcomes[0].density, "0");
        assert_eq!(r.strict_inclusions, 1);
    }

    // hom(K1 - q*K0, X) = 0 lies in every ideal, yet its density is 1 - q.
    #[test]
    fn hom_kernel_element_is_flagged() {
        let gens = vec![parse_expr("P3 - 2*K3").unwrap()];
        let cands = vec![parse_expr("K1 - 2").unwrap(), parse_expr("K1").unwrap()];
        let r = hnak_audit(2, &gens, &cands, &[("half".into(), half())]).unwrap();
        assert_eq!(r.candidates[0].hom_poly, "0");
        assert!(r.candidates[0].radical_member);
        assert_eq!(r.candidates[0].outcomes[0].density, "-1");
        assert_eq!(r.candidates[0].outcomes[0].finding, Finding::Violation);
        assert!(!r.candidates[1].radical_member);
        assert_eq!(r.violations, 1);
    }
}
