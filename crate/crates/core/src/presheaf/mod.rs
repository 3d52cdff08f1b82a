//! Presheaves of finite sets on a finite base: the objects and morphisms of
//! the topos, together with its finite limits, exponentials, subobject
//! classifier and the adjoint triple on slices.
//!
//! Elements of a carrier are dense indices `0..size(c)`. Every construction
//! documents the order in which it enumerates its elements so that outputs
//! are reproducible.

mod exponential;
mod limits;
mod natural;
mod omega;
mod predicates;
mod slice;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Result, ToposError};
use crate::fincat::{FinCategory, MorphismId, ObjectId};

pub use exponential::{exponential, Exponential};
pub use limits::{bang, product, pullback, terminal, yoneda, Pullback};
pub use natural::{hom_set, slice_hom_set};
pub use omega::{classify, omega, unclassify, OmegaStructure};
pub use predicates::{morphism_predicates, MorphismPredicates};
pub use slice::{
    postcompose, pullback_functor, pushforward, pushforward_map, PulledBack, Pushforward,
};

pub(crate) use slice::{pushforward_with, FamilyRule};

/// Upper bound on candidate tuples examined by a single enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub limit: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { limit: 1_000_000 }
    }
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit }
    }
}

pub(crate) fn same_base(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

struct PresheafData {
    base: Arc<FinCategory>,
    sizes: Vec<usize>,
    /// `action[m][x']` is `x'.m` for `x'` in the carrier at `dst(m)`.
    action: Vec<Vec<usize>>,
}

/// A contravariant functor from the base to finite sets. Cloning is cheap.
#[derive(Clone)]
pub struct Presheaf(Arc<PresheafData>);

impl PartialEq for Presheaf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (same_base(&self.0.base, &other.0.base)
                && self.0.sizes == other.0.sizes
                && self.0.action == other.0.action)
    }
}

impl Eq for Presheaf {}

impl fmt::Debug for Presheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Presheaf")
            .field("sizes", &self.0.sizes)
            .field("action", &self.0.action)
            .finish()
    }
}

impl Presheaf {
    /// Build and validate a presheaf. `action[m]` lists, for each element of
    /// the carrier at `dst(m)`, its restriction along `m`.
    pub fn new(base: Arc<FinCategory>, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Result<Self> {
        let p = Self::new_unchecked(base, sizes, action);
        match p.violations().into_iter().next() {
            None => Ok(p),
            Some(v) => Err(ToposError::InvalidPresheaf(v)),
        }
    }

    pub(crate) fn new_unchecked(
        base: Arc<FinCategory>,
        sizes: Vec<usize>,
        action: Vec<Vec<usize>>,
    ) -> Self {
        Presheaf(Arc::new(PresheafData {
            base,
            sizes,
            action,
        }))
    }

    /// Every failure of the presheaf laws, as messages naming the witnesses.
    pub fn violations(&self) -> Vec<String> {
        let base = self.base();
        let mut out = Vec::new();
        if self.0.sizes.len() != base.object_count() || self.0.action.len() != base.morphism_count()
        {
            out.push("carrier or action table has the wrong length".to_string());
            return out;
        }
        for m in base.morphisms() {
            let (s, d) = (base.src(m), base.dst(m));
            let row = &self.0.action[m.0];
            if row.len() != self.size(d) {
                out.push(format!(
                    "action of {} has {} entries, expected {}",
                    base.morphism_name(m),
                    row.len(),
                    self.size(d)
                ));
                return out;
            }
            if let Some(x) = row.iter().position(|&y| y >= self.size(s)) {
                out.push(format!(
                    "action of {} sends {x} outside the carrier",
                    base.morphism_name(m)
                ));
                return out;
            }
        }
        for c in base.objects() {
            let id = base.identity(c);
            for x in 0..self.size(c) {
                if self.act(id, x) != x {
                    out.push(format!(
                        "identity of {} moves element {x}",
                        base.object_name(c)
                    ));
                }
            }
        }
        for f in base.morphisms() {
            for &g in base.arrows_out_of(base.dst(f)) {
                let gf = base.comp(g, f);
                for x in 0..self.size(base.dst(g)) {
                    if self.act(gf, x) != self.act(f, self.act(g, x)) {
                        out.push(format!(
                            "restriction along {} . {} differs from restricting along {} then {} at element {x}",
                            base.morphism_name(g),
                            base.morphism_name(f),
                            base.morphism_name(g),
                            base.morphism_name(f)
                        ));
                    }
                }
            }
        }
        out
    }

    pub fn base(&self) -> &FinCategory {
        &self.0.base
    }

    pub fn base_arc(&self) -> &Arc<FinCategory> {
        &self.0.base
    }

    pub fn size(&self, c: ObjectId) -> usize {
        self.0.sizes[c.0]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0.sizes
    }

    pub fn total_size(&self) -> usize {
        self.0.sizes.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_size() == 0
    }

    /// Restriction of `x` (in the carrier at `dst(m)`) along `m`.
    pub fn act(&self, m: MorphismId, x: usize) -> usize {
        self.0.action[m.0][x]
    }

    pub fn action(&self, m: MorphismId) -> &[usize] {
        &self.0.action[m.0]
    }

    pub fn same_base(&self, other: &Presheaf) -> bool {
        same_base(&self.0.base, &other.0.base)
    }
}

/// A natural transformation between presheaves on the same base.
#[derive(Clone, PartialEq, Eq)]
pub struct PresheafMorphism {
    src: Presheaf,
    dst: Presheaf,
    components: Arc<Vec<Vec<usize>>>,
}

impl fmt::Debug for PresheafMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PresheafMorphism")
            .field("src", &self.src.sizes())
            .field("dst", &self.dst.sizes())
            .field("components", &self.components)
            .finish()
    }
}

impl PresheafMorphism {
    pub fn new(src: Presheaf, dst: Presheaf, components: Vec<Vec<usize>>) -> Result<Self> {
        if !src.same_base(&dst) {
            return Err(ToposError::BaseMismatch);
        }
        let m = Self::new_unchecked(src, dst, components);
        match m.violations().into_iter().next() {
            None => Ok(m),
            Some(v) => Err(ToposError::InvalidMorphism(v)),
        }
    }

    pub(crate) fn new_unchecked(src: Presheaf, dst: Presheaf, components: Vec<Vec<usize>>) -> Self {
        PresheafMorphism {
            src,
            dst,
            components: Arc::new(components),
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let base = self.src.base();
        let mut out = Vec::new();
        if self.components.len() != base.object_count() {
            out.push("wrong number of components".to_string());
            return out;
        }
        for c in base.objects() {
            let comp = &self.components[c.0];
            if comp.len() != self.src.size(c) || comp.iter().any(|&y| y >= self.dst.size(c)) {
                out.push(format!(
                    "component at {} is not a function between the carriers",
                    base.object_name(c)
                ));
                return out;
            }
        }
        for m in base.morphisms() {
            let (s, d) = (base.src(m), base.dst(m));
            for x in 0..self.src.size(d) {
                if self.apply(s, self.src.act(m, x)) != self.dst.act(m, self.apply(d, x)) {
                    out.push(format!(
                        "naturality fails along {} at element {x}",
                        base.morphism_name(m)
                    ));
                }
            }
        }
        out
    }

    pub fn is_natural(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn identity(p: &Presheaf) -> Self {
        let comps = p.sizes().iter().map(|&n| (0..n).collect()).collect();
        Self::new_unchecked(p.clone(), p.clone(), comps)
    }

    pub fn src(&self) -> &Presheaf {
        &self.src
    }

    pub fn dst(&self) -> &Presheaf {
        &self.dst
    }

    pub fn component(&self, c: ObjectId) -> &[usize] {
        &self.components[c.0]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn apply(&self, c: ObjectId, x: usize) -> usize {
        self.components[c.0][x]
    }

    /// `self . f`.
    pub fn compose(&self, f: &PresheafMorphism) -> Result<PresheafMorphism> {
        if f.dst != self.src {
            return Err(ToposError::Mismatch(
                "composite of non-composable morphisms".into(),
            ));
        }
        let comps = self
            .components
            .iter()
            .zip(f.components.iter())
            .map(|(g, f)| f.iter().map(|&x| g[x]).collect())
            .collect();
        Ok(Self::new_unchecked(f.src.clone(), self.dst.clone(), comps))
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst
            && self
                .components
                .iter()
                .all(|c| c.iter().enumerate().all(|(i, &y)| i == y))
    }

    /// Componentwise inverse, if every component is a bijection.
    pub fn inverse(&self) -> Option<PresheafMorphism> {
        let mut comps = Vec::with_capacity(self.components.len());
        for (c, comp) in self.components.iter().enumerate() {
            let n = self.dst.size(ObjectId(c));
            if comp.len() != n {
                return None;
            }
            let mut inv = vec![usize::MAX; n];
            for (x, &y) in comp.iter().enumerate() {
                if inv[y] != usize::MAX {
                    return None;
                }
                inv[y] = x;
            }
            comps.push(inv);
        }
        Some(Self::new_unchecked(
            self.dst.clone(),
            self.src.clone(),
            comps,
        ))
    }
}

/// An object of the slice over `over()`: a morphism into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceObject {
    pub proj: PresheafMorphism,
}

impl SliceObject {
    pub fn new(proj: PresheafMorphism) -> Self {
        SliceObject { proj }
    }

    pub fn total(&self) -> &Presheaf {
        self.proj.src()
    }

    pub fn over(&self) -> &Presheaf {
        self.proj.dst()
    }

    /// The identity slice, the terminal object of the slice over `a`.
    pub fn identity(a: &Presheaf) -> Self {
        SliceObject {
            proj: PresheafMorphism::identity(a),
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn set(base: &Arc<FinCategory>, n: usize) -> Presheaf {
        assert_eq!(base.object_count(), 1);
        Presheaf::new(base.clone(), vec![n], vec![(0..n).collect()]).unwrap()
    }

    /// A graph over the graph base, given by vertex count and edge list.
    pub fn graph(base: &Arc<FinCategory>, vertices: usize, edges: &[(usize, usize)]) -> Presheaf {
        let src: Vec<usize> = edges.iter().map(|e| e.0).collect();
        let tgt: Vec<usize> = edges.iter().map(|e| e.1).collect();
        Presheaf::new(
            base.clone(),
            vec![vertices, edges.len()],
            vec![
                (0..vertices).collect(),
                (0..edges.len()).collect(),
                src,
                tgt,
            ],
        )
        .unwrap()
    }

    pub fn func(src: &Presheaf, dst: &Presheaf, f: Vec<usize>) -> PresheafMorphism {
        PresheafMorphism::new(src.clone(), dst.clone(), vec![f]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn presheaf_validation_catches_broken_functoriality() {
        let base = Arc::new(FinCategory::graph());
        let ok = graph(&base, 2, &[(0, 1)]);
        assert!(ok.violations().is_empty());
        let bad = Presheaf::new(
            base.clone(),
            vec![1, 1],
            vec![vec![0], vec![0], vec![0], vec![3]],
        );
        assert!(matches!(bad, Err(ToposError::InvalidPresheaf(_))));
    }

    #[test]
    fn naturality_is_checked() {
        let base = Arc::new(FinCategory::graph());
        let edge = graph(&base, 2, &[(0, 1)]);
        let two_loops = graph(&base, 2, &[(0, 0), (1, 1)]);
        let bad = PresheafMorphism::new(edge.clone(), two_loops.clone(), vec![vec![0, 1], vec![0]]);
        assert!(matches!(bad, Err(ToposError::InvalidMorphism(_))));
        let good = PresheafMorphism::new(edge, two_loops, vec![vec![1, 1], vec![1]]).unwrap();
        assert!(good.is_natural());
    }

    #[test]
    fn inverse_of_bijection() {
        let base = Arc::new(FinCategory::terminal());
        let a = set(&base, 3);
        let f = func(&a, &a, vec![2, 0, 1]);
        let g = f.inverse().unwrap();
        assert!(g.compose(&f).unwrap().is_identity());
        assert!(func(&a, &a, vec![0, 0, 1]).inverse().is_none());
    }
}
