//! Exponentials `F^G`, computed pointwise through the Yoneda lemma:
//! the carrier at `c` is `hom(y(c) x G, F)`, and restriction along
//! `phi: c' -> c` precomposes with `y(phi) x G`.

use std::collections::HashMap;

use crate::error::{Meter, Result, ToposError};
use crate::fincat::ObjectId;

use super::limits::{product, yoneda, Pullback};
use super::natural::enumerate_natural;
use super::{Budget, Presheaf, PresheafMorphism};

#[derive(Clone, Debug)]
pub struct Exponential {
    /// `F^G`.
    pub object: Presheaf,
    /// `F^G x G -> F`.
    pub eval: PresheafMorphism,
    /// The product `F^G x G` that `eval` is defined on.
    pub eval_domain: Pullback,
    exponent: Presheaf,
    target: Presheaf,
    /// `y(c) x G` for each `c`.
    probes: Vec<Pullback>,
    /// Families at `c`, flattened over the carriers of `probes[c]`.
    families: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
}

/// `f^g` with its evaluation map.
pub fn exponential(g: &Presheaf, f: &Presheaf, budget: Budget) -> Result<Exponential> {
    if !g.same_base(f) {
        return Err(ToposError::BaseMismatch);
    }
    let base = g.base_arc().clone();
    let mut meter = Meter::new("exponential", budget.limit);
    let mut probes = Vec::new();
    let mut families = Vec::new();
    let mut lookup = Vec::new();
    for c in base.objects() {
        let probe = product(&yoneda(base.clone(), c), g, budget)?;
        let fams = enumerate_natural(&probe.object, f, None, &mut meter)?;
        lookup.push(
            fams.iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), i))
                .collect::<HashMap<_, _>>(),
        );
        families.push(fams);
        probes.push(probe);
    }

    let offsets = |probe: &Pullback| {
        let mut out = Vec::new();
        let mut at = 0;
        for d in base.objects() {
            out.push(at);
            at += probe.object.size(d);
        }
        out
    };
    let probe_offsets: Vec<Vec<usize>> = probes.iter().map(offsets).collect();

    let sizes: Vec<usize> = families.iter().map(Vec::len).collect();
    let mut action = Vec::with_capacity(base.morphism_count());
    for phi in base.morphisms() {
        let (c2, c) = (base.src(phi), base.dst(phi));
        let (small, big) = (&probes[c2.0], &probes[c.0]);
        let mut row = Vec::with_capacity(families[c.0].len());
        for alpha in &families[c.0] {
            // alpha' at d sends (u: d -> c', x) to alpha(phi . u, x).
            let mut restricted = Vec::with_capacity(small.object.total_size());
            for d in base.objects() {
                for i in 0..small.object.size(d) {
                    let (u_idx, x) = small.pair(d, i);
                    let u = base.hom(d, c2)[u_idx];
                    let moved = base.comp(phi, u);
                    let moved_idx = base
                        .hom(d, c)
                        .iter()
                        .position(|&v| v == moved)
                        .expect("hom position");
                    let j = big.pair_index(d, moved_idx, x).expect("probe pair");
                    restricted.push(alpha[probe_offsets[c.0][d.0] + j]);
                }
            }
            row.push(lookup[c2.0][&restricted]);
        }
        action.push(row);
    }
    let object = Presheaf::new_unchecked(base.clone(), sizes, action);

    let eval_domain = product(&object, g, budget)?;
    let mut eval_comps = Vec::new();
    for c in base.objects() {
        let id_idx = base
            .hom(c, c)
            .iter()
            .position(|&v| v == base.identity(c))
            .expect("identity");
        let comp = (0..eval_domain.object.size(c))
            .map(|i| {
                let (a, x) = eval_domain.pair(c, i);
                let j = probes[c.0].pair_index(c, id_idx, x).expect("probe pair");
                families[c.0][a][probe_offsets[c.0][c.0] + j]
            })
            .collect();
        eval_comps.push(comp);
    }
    let eval = PresheafMorphism::new_unchecked(eval_domain.object.clone(), f.clone(), eval_comps);

    Ok(Exponential {
        object,
        eval,
        eval_domain,
        exponent: g.clone(),
        target: f.clone(),
        probes,
        families,
        lookup,
    })
}

impl Exponential {
    pub fn exponent(&self) -> &Presheaf {
        &self.exponent
    }

    pub fn target(&self) -> &Presheaf {
        &self.target
    }

    /// The transpose `h -> F^G` of `k: h x G -> F`, where `h x G` must be the
    /// canonical product.
    pub fn transpose(
        &self,
        h: &Presheaf,
        k: &PresheafMorphism,
        budget: Budget,
    ) -> Result<PresheafMorphism> {
        let prod = product(h, &self.exponent, budget)?;
        if k.src() != &prod.object || k.dst() != &self.target {
            return Err(ToposError::Mismatch(
                "transpose expects a morphism h x G -> F".into(),
            ));
        }
        let base = h.base_arc().clone();
        let mut comps = Vec::with_capacity(base.object_count());
        for c in base.objects() {
            let probe = &self.probes[c.0];
            let mut comp = Vec::with_capacity(h.size(c));
            for e in 0..h.size(c) {
                let mut family = Vec::with_capacity(probe.object.total_size());
                for d in base.objects() {
                    for i in 0..probe.object.size(d) {
                        let (u_idx, x) = probe.pair(d, i);
                        let u = base.hom(d, c)[u_idx];
                        let j = prod.pair_index(d, h.act(u, e), x).expect("product pair");
                        family.push(k.apply(d, j));
                    }
                }
                match self.lookup[c.0].get(&family) {
                    Some(&a) => comp.push(a),
                    None => {
                        return Err(ToposError::InvalidMorphism(
                            "transposed family is not natural".into(),
                        ))
                    }
                }
            }
            comps.push(comp);
        }
        Ok(PresheafMorphism::new_unchecked(
            h.clone(),
            self.object.clone(),
            comps,
        ))
    }

    /// Number of elements of the carrier at `c`.
    pub fn size_at(&self, c: ObjectId) -> usize {
        self.families[c.0].len()
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fincat::FinCategory;
    use crate::presheaf::fixtures::*;
    use crate::presheaf::{hom_set, terminal};

    #[test]
    fn function_set_cardinality() {
        let base = Arc::new(FinCategory::terminal());
        let e = exponential(&set(&base, 3), &set(&base, 2), Budget::default()).unwrap();
        assert_eq!(e.object.sizes(), &[8]);
    }

    #[test]
    fn exponent_one_recovers_the_target() {
        let base = Arc::new(FinCategory::graph());
        let f = graph(&base, 2, &[(0, 1), (1, 1)]);
        let one = terminal(base.clone());
        let e = exponential(&one, &f, Budget::default()).unwrap();
        assert_eq!(e.object.sizes(), f.sizes());
        // eval against the unique point is an iso F^1 x 1 -> F.
        assert!(e.eval.inverse().is_some());
    }

    #[test]
    fn eval_after_transpose_is_the_original_map() {
        let base = Arc::new(FinCategory::graph());
        let g = graph(&base, 2, &[(0, 1)]);
        let f = graph(&base, 2, &[(0, 1), (1, 0), (1, 1)]);
        let h = graph(&base, 1, &[(0, 0)]);
        let e = exponential(&g, &f, Budget::default()).unwrap();
        let hg = product(&h, &g, Budget::default()).unwrap();
        let maps = hom_set(&hg.object, &f, Budget::default()).unwrap();
        assert!(!maps.is_empty());
        for k in &maps {
            let t = e.transpose(&h, k, Budget::default()).unwrap();
            assert!(t.is_natural());
            // eval . (t x id_G) = k
            let txg = e
                .eval_domain
                .mediate(&t.compose(&hg.p1).unwrap(), &hg.p2)
                .unwrap();
            assert_eq!(&e.eval.compose(&txg).unwrap(), k);
        }
        // transposes are pairwise distinct: hom(H x G, F) ~ hom(H, F^G)
        assert_eq!(
            hom_set(&h, &e.object, Budget::default()).unwrap().len(),
            maps.len()
        );
    }
}
