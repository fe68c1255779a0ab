//! Dg-representations of a finite base category: a dg-category per object,
//! a dg-functor per morphism, and coherence 2-isomorphisms δ (units) and
//! μ (composites) with explicitly supplied inverses η and θ.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::category::{check_finite_category, FiniteCategory};
use crate::dgcat::{
    check_dg_category, check_dg_functor, check_dg_nat_iso, DgCategory, DgFunctor, DgNatIso, HomElt,
};
use crate::error::Error;
use crate::report::Report;

#[derive(Debug, Clone)]
pub struct DgRepresentation {
    base: FiniteCategory,
    fibers: Vec<Arc<DgCategory>>,
    functors: Vec<DgFunctor>,
    delta: Vec<DgNatIso>,
    mu: BTreeMap<(usize, usize), DgNatIso>,
}

impl DgRepresentation {
    /// Assemble a representation from raw coherence data. `delta[i]` is the
    /// pair (components, inverses) of `δ_i : 1_{R(i)} ⇒ R(1_i)`, and
    /// `mu[(b, a)]` the pair for `μ_{b,a} : R(b)R(a) ⇒ R(ba)`; a μ entry is
    /// required for every composable pair.
    pub fn new(
        base: FiniteCategory,
        fibers: Vec<Arc<DgCategory>>,
        functors: Vec<DgFunctor>,
        delta: Vec<(Vec<HomElt>, Vec<HomElt>)>,
        mu: BTreeMap<(usize, usize), (Vec<HomElt>, Vec<HomElt>)>,
    ) -> Result<DgRepresentation, Error> {
        if fibers.len() != base.objects().len() {
            return Err(Error::structural(
                "one fiber dg-category per base object required",
            ));
        }
        if functors.len() != base.morphisms().len() {
            return Err(Error::structural(
                "one dg-functor per base morphism required",
            ));
        }
        for (m, f) in functors.iter().enumerate() {
            let mor = &base.morphisms()[m];
            if *f.source != *fibers[mor.src] || *f.target != *fibers[mor.tgt] {
                return Err(Error::structural(format!(
                    "functor for {:?} does not go R({}) -> R({})",
                    mor.name,
                    base.objects()[mor.src],
                    base.objects()[mor.tgt]
                )));
            }
        }
        if delta.len() != base.objects().len() {
            return Err(Error::structural("one δ per base object required"));
        }
        let mut delta_isos = Vec::new();
        for (i, (comps, invs)) in delta.into_iter().enumerate() {
            let id = DgFunctor::identity(fibers[i].clone());
            let tgt = functors[base.identity_of(i)].clone();
            delta_isos
                .push(DgNatIso::new(id, tgt, comps, invs).map_err(|e| {
                    Error::structural(format!("δ at {}: {}", base.objects()[i], e))
                })?);
        }
        let mut mu_isos = BTreeMap::new();
        let mut mu = mu;
        for (b, a) in base.composable_pairs() {
            let Some((comps, invs)) = mu.remove(&(b, a)) else {
                return Err(Error::structural(format!(
                    "missing μ for composable pair ({}, {})",
                    base.morphisms()[b].name,
                    base.morphisms()[a].name
                )));
            };
            let Some(ba) = base.compose(b, a) else {
                return Err(Error::structural(format!(
                    "base composition table lacks {}∘{}",
                    base.morphisms()[b].name,
                    base.morphisms()[a].name
                )));
            };
            let src = DgFunctor::compose(&functors[b], &functors[a]);
            let tgt = functors[ba].clone();
            mu_isos.insert(
                (b, a),
                DgNatIso::new(src, tgt, comps, invs).map_err(|e| {
                    Error::structural(format!(
                        "μ at ({}, {}): {}",
                        base.morphisms()[b].name,
                        base.morphisms()[a].name,
                        e
                    ))
                })?,
            );
        }
        if let Some(((b, a), _)) = mu.into_iter().next() {
            return Err(Error::structural(format!(
                "μ declared for non-composable pair ({}, {})",
                base.morphisms()[b].name,
                base.morphisms()[a].name
            )));
        }
        Ok(DgRepresentation {
            base,
            fibers,
            functors,
            delta: delta_isos,
            mu: mu_isos,
        })
    }

    /// A strict representation: all δ and μ are identity transformations.
    /// Requires `R(1_i)` to act as the identity and `R(b)R(a) = R(ba)`
    /// on the nose.
    pub fn strict(
        base: FiniteCategory,
        fibers: Vec<Arc<DgCategory>>,
        functors: Vec<DgFunctor>,
    ) -> Result<DgRepresentation, Error> {
        let mut delta = Vec::new();
        for (i, fiber) in fibers.iter().enumerate() {
            let ident = DgFunctor::identity(fiber.clone());
            let ru = &functors[base.identity_of(i)];
            if *ru != ident {
                return Err(Error::structural(format!(
                    "strict representation needs R(1_{}) to be the identity functor",
                    base.objects()[i]
                )));
            }
            let comps: Vec<HomElt> = (0..fiber.objects().len())
                .map(|x| fiber.identity_elt(x))
                .collect();
            delta.push((comps.clone(), comps));
        }
        let mut mu = BTreeMap::new();
        for (b, a) in base.composable_pairs() {
            let ba = base.compose(b, a).ok_or_else(|| {
                Error::structural("strict representation over a non-total base table")
            })?;
            let comp = DgFunctor::compose(&functors[b], &functors[a]);
            if comp != functors[ba] {
                return Err(Error::structural(format!(
                    "strict representation needs R({})R({}) = R({})",
                    base.morphisms()[b].name,
                    base.morphisms()[a].name,
                    base.morphisms()[ba].name
                )));
            }
            let fiber = &functors[ba].target;
            let comps: Vec<HomElt> = (0..functors[a].source.objects().len())
                .map(|x| fiber.identity_elt(comp.apply_obj(x)))
                .collect();
            mu.insert((b, a), (comps.clone(), comps));
        }
        DgRepresentation::new(base, fibers, functors, delta, mu)
    }

    pub fn base(&self) -> &FiniteCategory {
        &self.base
    }

    pub fn fiber(&self, i: usize) -> &Arc<DgCategory> {
        &self.fibers[i]
    }

    pub fn functor(&self, a: usize) -> &DgFunctor {
        &self.functors[a]
    }

    pub fn delta(&self, i: usize) -> &DgNatIso {
        &self.delta[i]
    }

    pub fn mu(&self, b: usize, a: usize) -> &DgNatIso {
        self.mu
            .get(&(b, a))
            .expect("μ exists for every composable pair")
    }

    /// η_i = δ_i⁻¹ at a fiber object: the component `R(1_i)x -> x`.
    pub fn eta_at(&self, i: usize, x: usize) -> &HomElt {
        self.delta[i].inverse_component(x)
    }

    /// θ_{b,a} = μ_{b,a}⁻¹ at a fiber object: the component
    /// `R(ba)x -> R(b)R(a)x`.
    pub fn theta_at(&self, b: usize, a: usize, x: usize) -> &HomElt {
        self.mu(b, a).inverse_component(x)
    }

    /// Is every δ and μ an identity transformation?
    pub fn is_strict(&self) -> bool {
        self.delta.iter().all(|d| d.is_identity()) && self.mu.values().all(|m| m.is_identity())
    }
}

/// Full validation: base category, fibers, functors, 2-isomorphisms, and
/// the pseudofunctor axioms (Rep.1) and (Rep.2).
pub fn check_representation(r: &DgRepresentation) -> Result<Report, Error> {
    let mut report = Report::new("dg-representation");
    report.absorb("base", check_finite_category(&r.base)?);
    for (i, fiber) in r.fibers.iter().enumerate() {
        report.absorb(
            &format!("R({})", r.base.objects()[i]),
            check_dg_category(fiber)?,
        );
    }
    for (a, f) in r.functors.iter().enumerate() {
        report.absorb(
            &format!("R({})", r.base.morphisms()[a].name),
            check_dg_functor(f)?,
        );
    }
    for (i, d) in r.delta.iter().enumerate() {
        report.absorb(&format!("δ_{}", r.base.objects()[i]), check_dg_nat_iso(d)?);
    }
    for (&(b, a), m) in &r.mu {
        report.absorb(
            &format!(
                "μ_({},{})",
                r.base.morphisms()[b].name,
                r.base.morphisms()[a].name
            ),
            check_dg_nat_iso(m)?,
        );
    }

    // (Rep.1): for composable a: i->j, b: j->k, c: k->h,
    // μ_{c,ba} ∘ (R(c) μ_{b,a}) = μ_{cb,a} ∘ (μ_{c,b} R(a)) objectwise.
    for (b, a) in r.base.composable_pairs() {
        for c in 0..r.base.morphisms().len() {
            if r.base.morphisms()[c].src != r.base.morphisms()[b].tgt {
                continue;
            }
            let (Some(ba), Some(cb)) = (r.base.compose(b, a), r.base.compose(c, b)) else {
                continue;
            };
            let i = r.base.morphisms()[a].src;
            let fiber_h = &r.functors[c].target;
            for x in 0..r.fibers[i].objects().len() {
                let lhs = fiber_h.elt_compose(
                    r.mu(c, ba).component(x),
                    &r.functors[c].apply_elt(r.mu(b, a).component(x)),
                );
                let rhs = fiber_h.elt_compose(
                    r.mu(cb, a).component(x),
                    r.mu(c, b).component(r.functors[a].apply_obj(x)),
                );
                if lhs != rhs {
                    report.fail(
                        "(Rep.1)",
                        format!(
                            "triple ({}, {}, {}) at object {}",
                            r.base.morphisms()[a].name,
                            r.base.morphisms()[b].name,
                            r.base.morphisms()[c].name,
                            r.fibers[i].objects()[x]
                        ),
                    );
                }
            }
        }
    }

    // (Rep.2): both unit composites equal the identity transformation of R(a).
    for (a, f) in r.functors.iter().enumerate() {
        let mor = &r.base.morphisms()[a];
        let (i, j) = (mor.src, mor.tgt);
        let id_i = r.base.identity_of(i);
        let id_j = r.base.identity_of(j);
        let fiber_j = &f.target;
        for x in 0..r.fibers[i].objects().len() {
            let fx = f.apply_obj(x);
            let expected = fiber_j.identity_elt(fx);
            let left = fiber_j.elt_compose(
                r.mu(a, id_i).component(x),
                &f.apply_elt(r.delta[i].component(x)),
            );
            if left != expected {
                report.fail(
                    "(Rep.2)",
                    format!(
                        "μ_({},{}) ∘ R({})δ_{} ≠ 1 at object {}",
                        mor.name,
                        r.base.morphisms()[id_i].name,
                        mor.name,
                        r.base.objects()[i],
                        r.fibers[i].objects()[x]
                    ),
                );
            }
            let right = fiber_j.elt_compose(r.mu(id_j, a).component(x), r.delta[j].component(fx));
            if right != expected {
                report.fail(
                    "(Rep.2)",
                    format!(
                        "μ_({},{}) ∘ δ_{}R({}) ≠ 1 at object {}",
                        r.base.morphisms()[id_j].name,
                        mor.name,
                        r.base.objects()[j],
                        mor.name,
                        r.fibers[i].objects()[x]
                    ),
                );
            }
        }
    }

    report.sort();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcat::DgNatIso;
    use crate::ring::Ring;
    use crate::testutil::*;

    #[test]
    fn strict_representations_pass() {
        let reps = vec![
            trivial_rep(ground_cat(Ring::Rat)),
            trivial_rep(eps_cat(Ring::Rat)),
            trivial_rep(disk_end_cat(Ring::Rat)),
            arrow_strict_rep(Ring::Mod(2)),
            loop_strict_rep(Ring::Mod(4)),
        ];
        for r in &reps {
            let report = check_representation(r).unwrap();
            assert!(report.passed(), "{}", report);
            assert!(r.is_strict());
        }
    }

    #[test]
    fn twisted_loop_passes_and_single_component_mutant_fails() {
        let good = loop_twisted_rep(Ring::Int);
        let report = check_representation(&good).unwrap();
        assert!(report.passed(), "{}", report);
        assert!(!good.is_strict());

        // Negating μ_{s,s} at only one fiber object breaks (Rep.1) on the
        // triple (s, s, s).
        let bad = loop_twisted_rep_with_mu(Ring::Int, &[1, -1]);
        let report = check_representation(&bad).unwrap();
        assert!(!report.passed());
        assert!(report
            .failures
            .iter()
            .any(|f| f.axiom == "(Rep.1)" && f.witness.contains("(s, s, s)")));
    }

    #[test]
    fn scaled_delta_representation_is_coherent() {
        for fiber in [ground_cat(Ring::Rat), disk_end_cat(Ring::Rat)] {
            let r = scaled_delta_rep(fiber);
            let report = check_representation(&r).unwrap();
            assert!(report.passed(), "{}", report);
            assert!(!r.is_strict());
        }
    }

    #[test]
    fn strict_reduction_equivalence_on_corpus() {
        // For strict representations the full check is equivalent to
        // per-morphism functor checks plus on-the-nose functoriality.
        use crate::dgcat::{check_dg_functor, DgFunctor};
        for r in [
            trivial_rep(ground_cat(Ring::Rat)),
            arrow_strict_rep(Ring::Mod(2)),
            loop_strict_rep(Ring::Mod(4)),
        ] {
            let full = check_representation(&r).unwrap().passed();
            let mut reduced = true;
            for a in 0..r.base().morphisms().len() {
                reduced &= check_dg_functor(r.functor(a)).unwrap().passed();
            }
            for (b, a) in r.base().composable_pairs() {
                let ba = r.base().compose(b, a).unwrap();
                reduced &= DgFunctor::compose(r.functor(b), r.functor(a)) == *r.functor(ba);
            }
            assert_eq!(full, reduced);
            assert!(full);
        }
    }

    #[test]
    fn whiskering_preserves_nat_iso() {
        use crate::dgcat::check_dg_nat_iso;
        let r = loop_twisted_rep(Ring::Int);
        let mu_ss = r.mu(1, 1);
        let left = DgNatIso::whisker_left(r.functor(1), mu_ss);
        assert!(check_dg_nat_iso(&left).unwrap().passed());
        let right = DgNatIso::whisker_right(mu_ss, r.functor(1));
        assert!(check_dg_nat_iso(&right).unwrap().passed());
    }

    #[test]
    fn missing_mu_is_structural() {
        use std::collections::BTreeMap;
        let base = crate::category::c2_category();
        let fiber = ground_cat(Ring::Int);
        let functors = vec![
            crate::dgcat::DgFunctor::identity(fiber.clone()),
            crate::dgcat::DgFunctor::identity(fiber.clone()),
        ];
        let ids: Vec<_> = vec![fiber.identity_elt(0)];
        let delta = vec![(ids.clone(), ids.clone())];
        let mu = BTreeMap::new();
        let r = DgRepresentation::new(base, vec![fiber], functors, delta, mu);
        assert!(matches!(r, Err(crate::error::Error::Structural(_))));
    }
}
