//! Ground truth computed directly from carriers, independent of the derived
//! layer. This is the only place that builds colimits pointwise.

use std::sync::Arc;

use crate::error::{Result, ToposError};
use crate::fincat::{FinCategory, ObjectId};
use crate::presheaf::{hom_set, yoneda, Budget, Presheaf, PresheafMorphism};
use crate::sublattice::SubPresheaf;

/// The pointwise disjoint union: at each object the elements of `a` come
/// first, then those of `b`.
#[derive(Clone, Debug)]
pub struct NativeCoproduct {
    pub object: Presheaf,
    pub inl: PresheafMorphism,
    pub inr: PresheafMorphism,
}

pub fn native_coproduct_oracle(a: &Presheaf, b: &Presheaf) -> Result<NativeCoproduct> {
    if !a.same_base(b) {
        return Err(ToposError::BaseMismatch);
    }
    let base = a.base_arc().clone();
    let sizes: Vec<usize> = base.objects().map(|c| a.size(c) + b.size(c)).collect();
    let action = base
        .morphisms()
        .map(|m| {
            let shift = a.size(base.src(m));
            a.action(m)
                .iter()
                .copied()
                .chain(b.action(m).iter().map(|&y| y + shift))
                .collect()
        })
        .collect();
    let object = Presheaf::new(base.clone(), sizes, action)?;
    let inl = PresheafMorphism::new(
        a.clone(),
        object.clone(),
        base.objects().map(|c| (0..a.size(c)).collect()).collect(),
    )?;
    let inr = PresheafMorphism::new(
        b.clone(),
        object.clone(),
        base.objects()
            .map(|c| (0..b.size(c)).map(|y| y + a.size(c)).collect())
            .collect(),
    )?;
    Ok(NativeCoproduct { object, inl, inr })
}

impl NativeCoproduct {
    /// The pointwise case split `[f, g]`.
    pub fn copair(&self, f: &PresheafMorphism, g: &PresheafMorphism) -> Result<PresheafMorphism> {
        if f.dst() != g.dst() || f.src() != self.inl.src() || g.src() != self.inr.src() {
            return Err(ToposError::Mismatch(
                "native copair expects f: A -> X and g: B -> X".into(),
            ));
        }
        let comps = f
            .components()
            .iter()
            .zip(g.components())
            .map(|(x, y)| x.iter().chain(y).copied().collect())
            .collect();
        PresheafMorphism::new(self.object.clone(), f.dst().clone(), comps)
    }
}

/// Every restriction-closed subset of the carriers, by scanning all subsets
/// of the total carrier in binary order.
pub fn brute_subobjects(a: &Presheaf) -> Result<Vec<SubPresheaf>> {
    let total = a.total_size();
    if total > 20 {
        return Err(ToposError::TooLarge(format!(
            "{total} elements to scan subsets of"
        )));
    }
    let base = a.base();
    let mut out = Vec::new();
    for bits in 0u32..1 << total {
        let mut selected = Vec::with_capacity(base.object_count());
        let mut at = 0;
        for c in base.objects() {
            selected.push((0..a.size(c)).map(|i| bits >> (at + i) & 1 == 1).collect());
            at += a.size(c);
        }
        if let Ok(s) = SubPresheaf::from_selection(a.clone(), selected) {
            out.push(s);
        }
    }
    Ok(out)
}

/// The subobject generated by the element `x` of `a` at `c`: all its
/// restrictions.
pub fn generated_subobject(a: &Presheaf, c: ObjectId, x: usize) -> SubPresheaf {
    let base = a.base();
    let mut selected: Vec<Vec<bool>> = a.sizes().iter().map(|&n| vec![false; n]).collect();
    for &m in base.arrows_into(c) {
        selected[base.src(m).0][a.act(m, x)] = true;
    }
    SubPresheaf::from_selection(a.clone(), selected)
        .expect("generated subobjects are restriction-closed")
}

/// All of `Sub(a)` when the carrier is small enough to scan; otherwise the
/// empty and maximal subobjects and those generated by single elements.
pub fn sample_subobjects(a: &Presheaf) -> Result<Vec<SubPresheaf>> {
    if a.total_size() <= 12 {
        return brute_subobjects(a);
    }
    let mut out = vec![SubPresheaf::empty(a), SubPresheaf::top(a)];
    for c in a.base().objects() {
        for x in 0..a.size(c) {
            let s = generated_subobject(a, c, x);
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Terminality by the Yoneda lemma: `a` is terminal iff every representable
/// has exactly one morphism into it.
pub fn is_terminal(a: &Presheaf, budget: Budget) -> Result<bool> {
    let base = a.base_arc();
    for c in base.objects() {
        if hom_set(&yoneda(base.clone(), c), a, budget)?.len() != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The carrier sizes of the partial map classifier of `a`: at `c`, one
/// element for each sieve `S` on `c` and natural map `S -> a`.
pub fn partial_map_sizes(a: &Presheaf, budget: Budget) -> Result<Vec<usize>> {
    let base: &Arc<FinCategory> = a.base_arc();
    let mut sizes = Vec::with_capacity(base.object_count());
    for c in base.objects() {
        let rep = yoneda(base.clone(), c);
        let mut count = 0;
        for sieve in brute_subobjects(&rep)? {
            let (domain, _) = sieve.inclusion();
            count += hom_set(&domain, a, budget)?.len();
        }
        sizes.push(count);
    }
    Ok(sizes)
}

/// The empty presheaf on `base`.
pub fn empty_presheaf(base: &Arc<FinCategory>) -> Presheaf {
    Presheaf::new(
        base.clone(),
        vec![0; base.object_count()],
        vec![Vec::new(); base.morphism_count()],
    )
    .expect("empty presheaf")
}

/// The image of `f` as a subobject of its codomain.
pub fn image(f: &PresheafMorphism) -> SubPresheaf {
    let b = f.dst();
    let mut selected: Vec<Vec<bool>> = b.sizes().iter().map(|&n| vec![false; n]).collect();
    for c in b.base().objects() {
        for &y in f.component(c) {
            selected[c.0][y] = true;
        }
    }
    SubPresheaf::from_selection(b.clone(), selected).expect("images are restriction-closed")
}

/// Carrier sizes per object, for witness messages.
pub fn describe(p: &Presheaf) -> String {
    let base = p.base();
    base.objects()
        .map(|c: ObjectId| format!("{}:{}", base.object_name(c), p.size(c)))
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCategory;

    fn set(base: &Arc<FinCategory>, n: usize) -> Presheaf {
        Presheaf::new(base.clone(), vec![n], vec![(0..n).collect()]).unwrap()
    }

    #[test]
    fn disjoint_union_of_sets() {
        let base = Arc::new(FinCategory::terminal());
        let n = native_coproduct_oracle(&set(&base, 2), &set(&base, 3)).unwrap();
        assert_eq!(n.object.sizes(), &[5]);
        assert!(n.inl.is_natural() && n.inr.is_natural());
    }

    #[test]
    fn native_coproduct_has_the_universal_property() {
        let g = Arc::new(FinCategory::graph());
        let edge = Presheaf::new(
            g.clone(),
            vec![2, 1],
            vec![vec![0, 1], vec![0], vec![0], vec![1]],
        )
        .unwrap();
        let lp = Presheaf::new(
            g.clone(),
            vec![1, 1],
            vec![vec![0], vec![0], vec![0], vec![0]],
        )
        .unwrap();
        let n = native_coproduct_oracle(&edge, &lp).unwrap();
        assert_eq!(n.object.sizes(), &[3, 2]);
        for x in [&edge, &lp] {
            let to_x = hom_set(&n.object, x, Budget::default()).unwrap();
            let pairs = hom_set(&edge, x, Budget::default()).unwrap().len()
                * hom_set(&lp, x, Budget::default()).unwrap().len();
            assert_eq!(to_x.len(), pairs);
        }
    }

    #[test]
    fn generated_subobjects_of_an_edge() {
        let g = Arc::new(FinCategory::graph());
        let edge = Presheaf::new(
            g.clone(),
            vec![2, 1],
            vec![vec![0, 1], vec![0], vec![0], vec![1]],
        )
        .unwrap();
        let v = generated_subobject(&edge, ObjectId(0), 1);
        assert_eq!((v.count(), v.is_top()), (1, false));
        assert!(generated_subobject(&edge, ObjectId(1), 0).is_top());
        assert_eq!(sample_subobjects(&edge).unwrap().len(), 5);
    }

    #[test]
    fn partial_maps_into_a_set() {
        let base = Arc::new(FinCategory::terminal());
        assert_eq!(
            partial_map_sizes(&set(&base, 3), Budget::default()).unwrap(),
            vec![4]
        );
    }
}
