use serde::Serialize;

use crate::error::Result;

use super::limits::pullback;
use super::{Budget, PresheafMorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismPredicates {
    pub is_iso: bool,
    pub is_mono: bool,
    /// The diagonal into the kernel pair is invertible. Equivalent to
    /// `is_mono`; computed independently as a cross-check.
    pub diagonal_is_iso: bool,
    /// Every carrier of the codomain is a singleton.
    pub dst_is_terminal: bool,
}

pub fn morphism_predicates(f: &PresheafMorphism, budget: Budget) -> Result<MorphismPredicates> {
    let base = f.src().base();
    let injective = base.objects().all(|c| {
        let comp = f.component(c);
        let mut seen = vec![false; f.dst().size(c)];
        comp.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    });
    let surjective = base.objects().all(|c| {
        let mut seen = vec![false; f.dst().size(c)];
        f.component(c).iter().for_each(|&y| seen[y] = true);
        seen.into_iter().all(|b| b)
    });
    let kernel = pullback(f, f, budget)?;
    let diagonal = kernel.mediate(
        &PresheafMorphism::identity(f.src()),
        &PresheafMorphism::identity(f.src()),
    )?;
    Ok(MorphismPredicates {
        is_iso: injective && surjective,
        is_mono: injective,
        diagonal_is_iso: diagonal.inverse().is_some(),
        dst_is_terminal: f.dst().sizes().iter().all(|&n| n == 1),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fincat::FinCategory;
    use crate::presheaf::fixtures::*;

    #[test]
    fn predicates_on_functions() {
        let base = Arc::new(FinCategory::terminal());
        let (a, b) = (set(&base, 2), set(&base, 3));
        let inj = morphism_predicates(&func(&a, &b, vec![0, 2]), Budget::default()).unwrap();
        assert!(inj.is_mono && inj.diagonal_is_iso && !inj.is_iso && !inj.dst_is_terminal);
        let col = morphism_predicates(&func(&b, &a, vec![0, 0, 1]), Budget::default()).unwrap();
        assert!(!col.is_mono && !col.diagonal_is_iso && !col.is_iso);
        let one = set(&base, 1);
        let bang = morphism_predicates(&func(&one, &one, vec![0]), Budget::default()).unwrap();
        assert!(bang.is_iso && bang.is_mono && bang.dst_is_terminal);
    }
}
