//! The subobject classifier: the presheaf of sieves.
//!
//! A sieve on `c` is stored as a bitmask over global morphism ids (only
//! morphisms with codomain `c` may be set). Sieves at each object are listed
//! in ascending mask order, so the empty sieve always comes first.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Meter, Result, ToposError};
use crate::fincat::{FinCategory, MorphismId, ObjectId};
use crate::sublattice::SubPresheaf;

use super::limits::terminal;
use super::{Budget, Presheaf, PresheafMorphism};

#[derive(Clone, Debug)]
pub struct OmegaStructure {
    pub omega: Presheaf,
    /// `1 -> Omega`, the maximal sieve at every object.
    pub tt: PresheafMorphism,
    /// `1 -> Omega`, the empty sieve at every object.
    pub ff: PresheafMorphism,
    sieves: Vec<Vec<u64>>,
    lookup: Vec<HashMap<u64, usize>>,
}

fn is_sieve(base: &FinCategory, c: ObjectId, mask: u64) -> bool {
    base.arrows_into(c)
        .iter()
        .filter(|m| mask >> m.0 & 1 == 1)
        .all(|&phi| {
            base.arrows_into(base.src(phi))
                .iter()
                .all(|&psi| mask >> base.comp(phi, psi).0 & 1 == 1)
        })
}

pub fn omega(base: Arc<FinCategory>, budget: Budget) -> Result<OmegaStructure> {
    if base.morphism_count() > 64 {
        return Err(ToposError::TooLarge(format!(
            "{} morphisms; sieves are stored as 64-bit masks",
            base.morphism_count()
        )));
    }
    let mut meter = Meter::new("omega", budget.limit);
    let mut sieves = Vec::with_capacity(base.object_count());
    for c in base.objects() {
        let arrows = base.arrows_into(c);
        if arrows.len() >= 40 {
            return Err(ToposError::BudgetExceeded {
                op: "omega",
                limit: budget.limit,
            });
        }
        meter.tick(1u64 << arrows.len())?;
        let mut found: Vec<u64> = (0u64..1 << arrows.len())
            .map(|bits| {
                arrows
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| bits >> i & 1 == 1)
                    .fold(0u64, |acc, (_, m)| acc | 1 << m.0)
            })
            .filter(|&mask| is_sieve(&base, c, mask))
            .collect();
        found.sort_unstable();
        sieves.push(found);
    }
    let lookup: Vec<HashMap<u64, usize>> = sieves
        .iter()
        .map(|s| s.iter().enumerate().map(|(i, &m)| (m, i)).collect())
        .collect();
    let action = base
        .morphisms()
        .map(|phi| {
            let (c2, c) = (base.src(phi), base.dst(phi));
            sieves[c.0]
                .iter()
                .map(|&mask| {
                    let pulled = base
                        .arrows_into(c2)
                        .iter()
                        .filter(|&&psi| mask >> base.comp(phi, psi).0 & 1 == 1)
                        .fold(0u64, |acc, m| acc | 1 << m.0);
                    lookup[c2.0][&pulled]
                })
                .collect()
        })
        .collect();
    let sizes = sieves.iter().map(Vec::len).collect();
    let omega = Presheaf::new_unchecked(base.clone(), sizes, action);
    let one = terminal(base.clone());
    let maximal = |c: ObjectId| {
        base.arrows_into(c)
            .iter()
            .fold(0u64, |acc, m| acc | 1 << m.0)
    };
    let tt = PresheafMorphism::new_unchecked(
        one.clone(),
        omega.clone(),
        base.objects()
            .map(|c| vec![lookup[c.0][&maximal(c)]])
            .collect(),
    );
    let ff = PresheafMorphism::new_unchecked(
        one,
        omega.clone(),
        base.objects().map(|c| vec![lookup[c.0][&0]]).collect(),
    );
    Ok(OmegaStructure {
        omega,
        tt,
        ff,
        sieves,
        lookup,
    })
}

impl OmegaStructure {
    pub fn base(&self) -> &FinCategory {
        self.omega.base()
    }

    /// The morphisms in the `i`-th sieve on `c`, in id order.
    pub fn sieve(&self, c: ObjectId, i: usize) -> Vec<MorphismId> {
        let mask = self.sieves[c.0][i];
        self.base()
            .arrows_into(c)
            .iter()
            .copied()
            .filter(|m| mask >> m.0 & 1 == 1)
            .collect()
    }

    pub fn sieve_count(&self, c: ObjectId) -> usize {
        self.sieves[c.0].len()
    }

    pub fn maximal(&self, c: ObjectId) -> usize {
        self.tt.apply(c, 0)
    }

    /// The characteristic map of `m`: an element goes to the sieve of
    /// morphisms along which its restriction lies in `m`.
    pub fn classify(&self, m: &SubPresheaf) -> PresheafMorphism {
        let a = m.ambient();
        let base = a.base();
        let comps = base
            .objects()
            .map(|c| {
                (0..a.size(c))
                    .map(|x| {
                        let mask = base
                            .arrows_into(c)
                            .iter()
                            .filter(|&&phi| m.contains(base.src(phi), a.act(phi, x)))
                            .fold(0u64, |acc, phi| acc | 1 << phi.0);
                        self.lookup[c.0][&mask]
                    })
                    .collect()
            })
            .collect();
        PresheafMorphism::new_unchecked(a.clone(), self.omega.clone(), comps)
    }

    /// The subobject classified by `chi`: the pullback of `tt` along it.
    pub fn unclassify(&self, chi: &PresheafMorphism) -> Result<SubPresheaf> {
        if chi.dst() != &self.omega {
            return Err(ToposError::Mismatch(
                "unclassify expects a morphism into Omega".into(),
            ));
        }
        let a = chi.src();
        let selected = a
            .base()
            .objects()
            .map(|c| {
                (0..a.size(c))
                    .map(|x| chi.apply(c, x) == self.maximal(c))
                    .collect()
            })
            .collect();
        Ok(SubPresheaf::from_selection_unchecked(a.clone(), selected))
    }
}

pub fn classify(omega: &OmegaStructure, m: &SubPresheaf) -> PresheafMorphism {
    omega.classify(m)
}

pub fn unclassify(omega: &OmegaStructure, chi: &PresheafMorphism) -> Result<SubPresheaf> {
    omega.unclassify(chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::fixtures::*;

    fn sizes(base: FinCategory) -> Vec<usize> {
        omega(Arc::new(base), Budget::default())
            .unwrap()
            .omega
            .sizes()
            .to_vec()
    }

    #[test]
    fn omega_of_finite_sets_is_two_valued() {
        assert_eq!(sizes(FinCategory::terminal()), vec![2]);
    }

    #[test]
    fn omega_of_curated_bases() {
        assert_eq!(sizes(FinCategory::graph()), vec![2, 5]);
        assert_eq!(sizes(FinCategory::arrow()), vec![2, 3]);
    }

    #[test]
    fn omega_is_a_presheaf_and_truth_values_are_monos() {
        for base in [
            FinCategory::terminal(),
            FinCategory::arrow(),
            FinCategory::graph(),
        ] {
            let o = omega(Arc::new(base), Budget::default()).unwrap();
            assert!(o.omega.violations().is_empty());
            assert!(o.tt.is_natural() && o.ff.is_natural());
        }
    }

    #[test]
    fn classify_extremes() {
        let base = Arc::new(FinCategory::graph());
        let o = omega(base.clone(), Budget::default()).unwrap();
        let g = graph(&base, 2, &[(0, 1), (1, 1)]);
        let top = SubPresheaf::top(&g);
        let chi = o.classify(&top);
        assert_eq!(chi, o.tt.compose(&crate::presheaf::bang(&g)).unwrap());
        let empty =
            SubPresheaf::from_selection(g.clone(), vec![vec![false; 2], vec![false; 2]]).unwrap();
        assert_eq!(
            o.classify(&empty),
            o.ff.compose(&crate::presheaf::bang(&g)).unwrap()
        );
        assert_eq!(o.unclassify(&chi).unwrap(), top);
    }
}
