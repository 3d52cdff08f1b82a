//! The capability surface available to the derived constructions: finite
//! limits, local cartesian closure and a subobject classifier. Nothing here
//! builds a coproduct, an initial object or any other colimit.

use std::sync::{Arc, Mutex};

use crate::error::{Result, ToposError};
use crate::fincat::FinCategory;
use crate::presheaf::{
    self, Budget, Exponential, FamilyRule, MorphismPredicates, OmegaStructure, Presheaf,
    PresheafMorphism, Pullback, PulledBack, Pushforward, SliceObject,
};
use crate::sublattice::SubPresheaf;

/// The operations a topos backend supplies. Default methods delegate to the
/// presheaf module; test backends override individual operations.
pub trait ToposBackend: Send + Sync {
    fn name(&self) -> &str;

    fn terminal(&self, base: &Arc<FinCategory>) -> Presheaf {
        presheaf::terminal(base.clone())
    }

    fn pullback(
        &self,
        f: &PresheafMorphism,
        g: &PresheafMorphism,
        budget: Budget,
    ) -> Result<Pullback> {
        presheaf::pullback(f, g, budget)
    }

    fn exponential(&self, g: &Presheaf, f: &Presheaf, budget: Budget) -> Result<Exponential> {
        presheaf::exponential(g, f, budget)
    }

    fn pushforward(
        &self,
        f: &PresheafMorphism,
        x: &SliceObject,
        budget: Budget,
    ) -> Result<Pushforward> {
        presheaf::pushforward(f, x, budget)
    }

    fn omega(&self, base: &Arc<FinCategory>, budget: Budget) -> Result<OmegaStructure> {
        presheaf::omega(base.clone(), budget)
    }

    fn hom_set(&self, a: &Presheaf, b: &Presheaf, budget: Budget) -> Result<Vec<PresheafMorphism>> {
        presheaf::hom_set(a, b, budget)
    }

    fn slice_hom_set(
        &self,
        x: &SliceObject,
        y: &SliceObject,
        budget: Budget,
    ) -> Result<Vec<PresheafMorphism>> {
        presheaf::slice_hom_set(x, y, budget)
    }
}

/// The presheaf topos on a finite base.
#[derive(Debug, Default)]
pub struct PresheafTopos;

impl ToposBackend for PresheafTopos {
    fn name(&self) -> &str {
        "presheaf"
    }
}

/// A backend whose dependent products admit every family of lifts, natural or
/// not. It violates the adjunction `f^* -| f_*`.
#[derive(Debug, Default)]
pub struct UnnaturalPushforward;

impl ToposBackend for UnnaturalPushforward {
    fn name(&self) -> &str {
        "unnatural-pushforward"
    }

    fn pushforward(
        &self,
        f: &PresheafMorphism,
        x: &SliceObject,
        budget: Budget,
    ) -> Result<Pushforward> {
        presheaf::pushforward_with(f, x, budget, FamilyRule::Unconstrained)
    }
}

/// A backend whose hom-sets also contain componentwise functions that are not
/// natural.
#[derive(Debug, Default)]
pub struct UnnaturalHoms;

impl ToposBackend for UnnaturalHoms {
    fn name(&self) -> &str {
        "unnatural-homs"
    }

    fn hom_set(&self, a: &Presheaf, b: &Presheaf, budget: Budget) -> Result<Vec<PresheafMorphism>> {
        let mut tuples: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        let mut used = 0u64;
        for c in a.base().objects() {
            let (n, m) = (a.size(c), b.size(c));
            let mut next = Vec::new();
            for t in &tuples {
                if m == 0 && n > 0 {
                    continue;
                }
                let mut comp = vec![0usize; n];
                loop {
                    used += 1;
                    if used > budget.limit {
                        return Err(ToposError::BudgetExceeded {
                            op: "hom_set",
                            limit: budget.limit,
                        });
                    }
                    let mut t2 = t.clone();
                    t2.push(comp.clone());
                    next.push(t2);
                    if !advance(&mut comp, m) {
                        break;
                    }
                }
            }
            tuples = next;
        }
        Ok(tuples
            .into_iter()
            .map(|comps| PresheafMorphism::new_unchecked(a.clone(), b.clone(), comps))
            .collect())
    }
}

fn advance(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Subobject classifiers already built, per base.
type OmegaCache = Vec<(Arc<FinCategory>, OmegaStructure)>;

/// A finitely complete, locally cartesian closed category with a subobject
/// classifier, restricted from a backend.
#[derive(Clone)]
pub struct LccContext {
    backend: Arc<dyn ToposBackend>,
    budget: Budget,
    omegas: Arc<Mutex<OmegaCache>>,
}

impl std::fmt::Debug for LccContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LccContext")
            .field("backend", &self.backend.name())
            .field("budget", &self.budget)
            .finish()
    }
}

impl LccContext {
    pub fn restrict(backend: Arc<dyn ToposBackend>, budget: Budget) -> Self {
        LccContext {
            backend,
            budget,
            omegas: Arc::new(Mutex::new(Vec::new())),
        }
    }

    pub fn presheaf(budget: Budget) -> Self {
        Self::restrict(Arc::new(PresheafTopos), budget)
    }

    pub fn backend_name(&self) -> &str {
        self.backend.name()
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    // Terminal object and composition.

    pub fn terminal(&self, base: &Arc<FinCategory>) -> Presheaf {
        self.backend.terminal(base)
    }

    pub fn bang(&self, a: &Presheaf) -> PresheafMorphism {
        let one = self.terminal(a.base_arc());
        let comps = a.sizes().iter().map(|&n| vec![0; n]).collect();
        PresheafMorphism::new_unchecked(a.clone(), one, comps)
    }

    pub fn identity(&self, a: &Presheaf) -> PresheafMorphism {
        PresheafMorphism::identity(a)
    }

    /// `g . f`.
    pub fn compose(&self, g: &PresheafMorphism, f: &PresheafMorphism) -> Result<PresheafMorphism> {
        g.compose(f)
    }

    pub fn inverse(&self, f: &PresheafMorphism) -> Option<PresheafMorphism> {
        f.inverse()
    }

    // Finite limits.

    pub fn pullback(&self, f: &PresheafMorphism, g: &PresheafMorphism) -> Result<Pullback> {
        self.backend.pullback(f, g, self.budget)
    }

    pub fn product(&self, a: &Presheaf, b: &Presheaf) -> Result<Pullback> {
        self.pullback(&self.bang(a), &self.bang(b))
    }

    pub fn diagonal(&self, a: &Presheaf) -> Result<(Pullback, PresheafMorphism)> {
        let p = self.product(a, a)?;
        let id = self.identity(a);
        let d = p.mediate(&id, &id)?;
        Ok((p, d))
    }

    pub fn exponential(&self, g: &Presheaf, f: &Presheaf) -> Result<Exponential> {
        self.backend.exponential(g, f, self.budget)
    }

    // The adjoint triple on slices.

    pub fn pullback_functor(&self, f: &PresheafMorphism, x: &SliceObject) -> Result<PulledBack> {
        let pb = self.pullback(f, &x.proj)?;
        Ok(PulledBack {
            slice: SliceObject::new(pb.p1.clone()),
            pullback: pb,
        })
    }

    pub fn postcompose(&self, f: &PresheafMorphism, x: &SliceObject) -> Result<SliceObject> {
        Ok(SliceObject::new(self.compose(f, &x.proj)?))
    }

    pub fn pushforward(&self, f: &PresheafMorphism, x: &SliceObject) -> Result<Pushforward> {
        self.backend.pushforward(f, x, self.budget)
    }

    pub fn pushforward_map(
        &self,
        from: &Pushforward,
        to: &Pushforward,
        u: &PresheafMorphism,
    ) -> Result<PresheafMorphism> {
        presheaf::pushforward_map(from, to, u, self.budget)
    }

    // Subobject classifier.

    pub fn omega(&self, base: &Arc<FinCategory>) -> Result<OmegaStructure> {
        let mut cache = self.omegas.lock().expect("omega cache");
        if let Some((_, o)) = cache
            .iter()
            .find(|(b, _)| Arc::ptr_eq(b, base) || **b == **base)
        {
            return Ok(o.clone());
        }
        let o = self.backend.omega(base, self.budget)?;
        cache.push((base.clone(), o.clone()));
        Ok(o)
    }

    pub fn classify(&self, m: &SubPresheaf) -> Result<PresheafMorphism> {
        Ok(self.omega(m.ambient().base_arc())?.classify(m))
    }

    pub fn unclassify(&self, chi: &PresheafMorphism) -> Result<SubPresheaf> {
        self.omega(chi.src().base_arc())?.unclassify(chi)
    }

    // Hom-sets and predicates.

    pub fn hom_set(&self, a: &Presheaf, b: &Presheaf) -> Result<Vec<PresheafMorphism>> {
        self.backend.hom_set(a, b, self.budget)
    }

    pub fn slice_hom_set(&self, x: &SliceObject, y: &SliceObject) -> Result<Vec<PresheafMorphism>> {
        self.backend.slice_hom_set(x, y, self.budget)
    }

    pub fn morphism_predicates(&self, f: &PresheafMorphism) -> Result<MorphismPredicates> {
        presheaf::morphism_predicates(f, self.budget)
    }

    // Sub(-).

    pub fn sub_top(&self, a: &Presheaf) -> SubPresheaf {
        SubPresheaf::top(a)
    }

    pub fn sub_leq(&self, u: &SubPresheaf, v: &SubPresheaf) -> Result<bool> {
        u.leq(v)
    }

    pub fn sub_meet(&self, u: &SubPresheaf, v: &SubPresheaf) -> Result<SubPresheaf> {
        u.meet(v)
    }

    pub fn sub_implies(&self, u: &SubPresheaf, v: &SubPresheaf) -> Result<SubPresheaf> {
        u.implies(v)
    }

    pub fn sub_pullback(&self, f: &PresheafMorphism, v: &SubPresheaf) -> Result<SubPresheaf> {
        v.pullback_along(f)
    }

    pub fn sub_forall(&self, f: &PresheafMorphism, u: &SubPresheaf) -> Result<SubPresheaf> {
        u.forall_along(f)
    }

    /// The skeletal subobject of a monomorphism's codomain.
    pub fn sub_from_mono(&self, m: &PresheafMorphism) -> Result<SubPresheaf> {
        SubPresheaf::from_mono(m)
    }

    pub fn sub_inclusion(&self, u: &SubPresheaf) -> (Presheaf, PresheafMorphism) {
        u.inclusion()
    }
}
