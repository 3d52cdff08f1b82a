use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Meter, Result, ToposError};
use crate::fincat::{FinCategory, ObjectId};

use super::{Budget, Presheaf, PresheafMorphism};

/// The presheaf with a one-point carrier everywhere.
pub fn terminal(base: Arc<FinCategory>) -> Presheaf {
    let sizes = vec![1; base.object_count()];
    let action = vec![vec![0]; base.morphism_count()];
    Presheaf::new_unchecked(base, sizes, action)
}

/// The unique morphism `a -> 1`.
pub fn bang(a: &Presheaf) -> PresheafMorphism {
    let one = terminal(a.base_arc().clone());
    let comps = a.sizes().iter().map(|&n| vec![0; n]).collect();
    PresheafMorphism::new_unchecked(a.clone(), one, comps)
}

/// The representable presheaf `hom(-, c)`. The element `i` at `d` is the
/// morphism `base.hom(d, c)[i]`; restriction is precomposition.
pub fn yoneda(base: Arc<FinCategory>, c: ObjectId) -> Presheaf {
    let sizes: Vec<usize> = base.objects().map(|d| base.hom(d, c).len()).collect();
    let action = base
        .morphisms()
        .map(|psi| {
            let (d2, d) = (base.src(psi), base.dst(psi));
            base.hom(d, c)
                .iter()
                .map(|&u| {
                    let composite = base.comp(u, psi);
                    base.hom(d2, c)
                        .iter()
                        .position(|&v| v == composite)
                        .expect("composite lands in hom")
                })
                .collect()
        })
        .collect();
    Presheaf::new_unchecked(base, sizes, action)
}

/// A pullback of a cospan `f: X -> Z <- Y: g`. The carrier at `c` is the set
/// of pairs `(x, y)` with `f(x) = g(y)`, in lexicographic order.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub object: Presheaf,
    pub p1: PresheafMorphism,
    pub p2: PresheafMorphism,
    f: PresheafMorphism,
    g: PresheafMorphism,
    pairs: Vec<Vec<(usize, usize)>>,
    index: Vec<HashMap<(usize, usize), usize>>,
}

impl Pullback {
    pub fn pair(&self, c: ObjectId, i: usize) -> (usize, usize) {
        self.pairs[c.0][i]
    }

    pub fn pair_index(&self, c: ObjectId, x: usize, y: usize) -> Option<usize> {
        self.index[c.0].get(&(x, y)).copied()
    }

    pub fn legs(&self) -> (&PresheafMorphism, &PresheafMorphism) {
        (&self.f, &self.g)
    }

    /// The unique `w -> P` whose composites with the projections are `u` and
    /// `v`. Fails if `(u, v)` is not a cone over the cospan.
    pub fn mediate(&self, u: &PresheafMorphism, v: &PresheafMorphism) -> Result<PresheafMorphism> {
        if u.dst() != self.f.src() || v.dst() != self.g.src() {
            return Err(ToposError::NotACone(
                "legs do not land in the cospan".into(),
            ));
        }
        if u.src() != v.src() {
            return Err(ToposError::NotACone("legs have different domains".into()));
        }
        let w = u.src();
        let base = w.base();
        let mut comps = Vec::with_capacity(base.object_count());
        for c in base.objects() {
            let mut comp = Vec::with_capacity(w.size(c));
            for e in 0..w.size(c) {
                let (x, y) = (u.apply(c, e), v.apply(c, e));
                match self.pair_index(c, x, y) {
                    Some(i) => comp.push(i),
                    None => {
                        return Err(ToposError::NotACone(format!(
                            "element {e} at {} has images that disagree in the apex",
                            base.object_name(c)
                        )))
                    }
                }
            }
            comps.push(comp);
        }
        Ok(PresheafMorphism::new_unchecked(
            w.clone(),
            self.object.clone(),
            comps,
        ))
    }
}

pub fn pullback(f: &PresheafMorphism, g: &PresheafMorphism, budget: Budget) -> Result<Pullback> {
    if f.dst() != g.dst() {
        return Err(ToposError::Mismatch(
            "pullback of morphisms with different codomains".into(),
        ));
    }
    let (x, y) = (f.src(), g.src());
    let base = x.base_arc().clone();
    let mut meter = Meter::new("pullback", budget.limit);
    let mut pairs = Vec::with_capacity(base.object_count());
    let mut index = Vec::with_capacity(base.object_count());
    for c in base.objects() {
        meter.tick((x.size(c) * y.size(c)) as u64)?;
        let mut by_image: HashMap<usize, Vec<usize>> = HashMap::new();
        for yy in 0..y.size(c) {
            by_image.entry(g.apply(c, yy)).or_default().push(yy);
        }
        let mut ps = Vec::new();
        for xx in 0..x.size(c) {
            if let Some(ys) = by_image.get(&f.apply(c, xx)) {
                ps.extend(ys.iter().map(|&yy| (xx, yy)));
            }
        }
        let idx: HashMap<(usize, usize), usize> =
            ps.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        pairs.push(ps);
        index.push(idx);
    }
    let sizes = pairs.iter().map(Vec::len).collect();
    // Restricting a pair stays in the pullback exactly when f and g are
    // natural; unchecked morphisms can break this.
    let action = base
        .morphisms()
        .map(|m| {
            let (s, d) = (base.src(m), base.dst(m));
            pairs[d.0]
                .iter()
                .map(|&(xx, yy)| {
                    index[s.0]
                        .get(&(x.act(m, xx), y.act(m, yy)))
                        .copied()
                        .ok_or_else(|| {
                            ToposError::InvalidMorphism(
                                "pullback of a morphism that is not natural".into(),
                            )
                        })
                })
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let object = Presheaf::new_unchecked(base.clone(), sizes, action);
    let p1 = PresheafMorphism::new_unchecked(
        object.clone(),
        x.clone(),
        pairs
            .iter()
            .map(|ps| ps.iter().map(|p| p.0).collect())
            .collect(),
    );
    let p2 = PresheafMorphism::new_unchecked(
        object.clone(),
        y.clone(),
        pairs
            .iter()
            .map(|ps| ps.iter().map(|p| p.1).collect())
            .collect(),
    );
    Ok(Pullback {
        object,
        p1,
        p2,
        f: f.clone(),
        g: g.clone(),
        pairs,
        index,
    })
}

/// `a x b`, as the pullback over the terminal presheaf.
pub fn product(a: &Presheaf, b: &Presheaf, budget: Budget) -> Result<Pullback> {
    if !a.same_base(b) {
        return Err(ToposError::BaseMismatch);
    }
    pullback(&bang(a), &bang(b), budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::fixtures::*;

    #[test]
    fn product_of_sets_has_product_cardinality() {
        let base = Arc::new(FinCategory::terminal());
        let (a, b) = (set(&base, 2), set(&base, 3));
        let p = product(&a, &b, Budget::default()).unwrap();
        assert_eq!(p.object.sizes(), &[6]);
        assert_eq!(p.pair(ObjectId(0), 4), (1, 1));
    }

    #[test]
    fn pullback_of_identities_is_the_object() {
        let base = Arc::new(FinCategory::graph());
        let g = graph(&base, 2, &[(0, 1), (1, 1)]);
        let id = PresheafMorphism::identity(&g);
        let p = pullback(&id, &id, Budget::default()).unwrap();
        assert_eq!(p.object.sizes(), g.sizes());
        let back = p.p1.inverse().unwrap();
        assert!(p.p1.compose(&back).unwrap().is_identity());
        assert_eq!(p.p1.components(), p.p2.components());
    }

    #[test]
    fn mediate_rejects_non_cones() {
        let base = Arc::new(FinCategory::terminal());
        let (a, b) = (set(&base, 2), set(&base, 2));
        let f = func(&a, &b, vec![0, 1]);
        let p = pullback(&f, &f, Budget::default()).unwrap();
        let swap = func(&a, &a, vec![1, 0]);
        let id = PresheafMorphism::identity(&a);
        assert!(matches!(
            p.mediate(&id, &swap),
            Err(ToposError::NotACone(_))
        ));
        let m = p.mediate(&id, &id).unwrap();
        assert!(p.p1.compose(&m).unwrap().is_identity());
    }

    #[test]
    fn yoneda_is_a_presheaf() {
        for base in [
            FinCategory::terminal(),
            FinCategory::arrow(),
            FinCategory::graph(),
        ] {
            let base = Arc::new(base);
            for c in base.objects() {
                assert!(yoneda(base.clone(), c).violations().is_empty());
            }
        }
        let g = Arc::new(FinCategory::graph());
        assert_eq!(yoneda(g.clone(), ObjectId(1)).sizes(), &[2, 1]);
        assert_eq!(yoneda(g, ObjectId(0)).sizes(), &[1, 0]);
    }
}
