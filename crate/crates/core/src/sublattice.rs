//! The subobject lattice `Sub(A)`, stored skeletally: a subobject is the set
//! of elements it contains, which must be closed under restriction.

use std::fmt;

use crate::error::{Result, ToposError};
use crate::fincat::ObjectId;
use crate::presheaf::{hom_set, Budget, OmegaStructure, Presheaf, PresheafMorphism};

#[derive(Clone, PartialEq, Eq)]
pub struct SubPresheaf {
    ambient: Presheaf,
    selected: Vec<Vec<bool>>,
}

impl fmt::Debug for SubPresheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<Vec<usize>> = self
            .selected
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        f.debug_tuple("SubPresheaf").field(&sets).finish()
    }
}

impl SubPresheaf {
    pub fn from_selection(ambient: Presheaf, selected: Vec<Vec<bool>>) -> Result<Self> {
        let base = ambient.base();
        if selected.len() != base.object_count()
            || base
                .objects()
                .any(|c| selected[c.0].len() != ambient.size(c))
        {
            return Err(ToposError::Mismatch(
                "selection does not match the carrier sizes".into(),
            ));
        }
        for m in base.morphisms() {
            let (s, d) = (base.src(m), base.dst(m));
            for x in 0..ambient.size(d) {
                if selected[d.0][x] && !selected[s.0][ambient.act(m, x)] {
                    return Err(ToposError::NotRestrictionClosed(format!(
                        "element {x} at {} is selected but its restriction along {} is not",
                        base.object_name(d),
                        base.morphism_name(m)
                    )));
                }
            }
        }
        Ok(SubPresheaf { ambient, selected })
    }

    pub(crate) fn from_selection_unchecked(ambient: Presheaf, selected: Vec<Vec<bool>>) -> Self {
        SubPresheaf { ambient, selected }
    }

    /// The subobject generated by a list of elements per object.
    pub fn from_elements(ambient: Presheaf, elements: &[Vec<usize>]) -> Result<Self> {
        let mut selected: Vec<Vec<bool>> =
            ambient.sizes().iter().map(|&n| vec![false; n]).collect();
        for (c, els) in elements.iter().enumerate() {
            for &x in els {
                match selected.get_mut(c).and_then(|row| row.get_mut(x)) {
                    Some(slot) => *slot = true,
                    None => {
                        return Err(ToposError::Mismatch(format!(
                            "element {x} is not in the carrier"
                        )))
                    }
                }
            }
        }
        Self::from_selection(ambient, selected)
    }

    pub fn top(a: &Presheaf) -> Self {
        SubPresheaf {
            ambient: a.clone(),
            selected: a.sizes().iter().map(|&n| vec![true; n]).collect(),
        }
    }

    /// The empty subobject, computed pointwise. The derived layer obtains its
    /// least subobject without this.
    pub fn empty(a: &Presheaf) -> Self {
        SubPresheaf {
            ambient: a.clone(),
            selected: a.sizes().iter().map(|&n| vec![false; n]).collect(),
        }
    }

    pub fn ambient(&self) -> &Presheaf {
        &self.ambient
    }

    pub fn contains(&self, c: ObjectId, x: usize) -> bool {
        self.selected[c.0][x]
    }

    pub fn selection(&self) -> &[Vec<bool>] {
        &self.selected
    }

    pub fn elements(&self, c: ObjectId) -> Vec<usize> {
        (0..self.ambient.size(c))
            .filter(|&x| self.selected[c.0][x])
            .collect()
    }

    pub fn count(&self) -> usize {
        self.selected.iter().flatten().filter(|&&b| b).count()
    }

    pub fn is_top(&self) -> bool {
        self.selected.iter().flatten().all(|&b| b)
    }

    fn check(&self, other: &SubPresheaf) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(ToposError::Mismatch(
                "subobjects of different presheaves".into(),
            ));
        }
        Ok(())
    }

    pub fn leq(&self, other: &SubPresheaf) -> Result<bool> {
        self.check(other)?;
        Ok(self
            .selected
            .iter()
            .flatten()
            .zip(other.selected.iter().flatten())
            .all(|(&a, &b)| !a || b))
    }

    fn pointwise(
        &self,
        other: &SubPresheaf,
        op: impl Fn(bool, bool) -> bool,
    ) -> Result<SubPresheaf> {
        self.check(other)?;
        let selected = self
            .selected
            .iter()
            .zip(&other.selected)
            .map(|(r, s)| r.iter().zip(s).map(|(&a, &b)| op(a, b)).collect())
            .collect();
        Ok(SubPresheaf {
            ambient: self.ambient.clone(),
            selected,
        })
    }

    pub fn meet(&self, other: &SubPresheaf) -> Result<SubPresheaf> {
        self.pointwise(other, |a, b| a && b)
    }

    /// Pointwise union. Used as an oracle against the derived join.
    pub fn union(&self, other: &SubPresheaf) -> Result<SubPresheaf> {
        self.pointwise(other, |a, b| a || b)
    }

    /// `x` is in `U => V` iff every restriction of `x` lying in `U` lies in `V`.
    pub fn implies(&self, other: &SubPresheaf) -> Result<SubPresheaf> {
        self.check(other)?;
        let a = &self.ambient;
        let base = a.base();
        let selected = base
            .objects()
            .map(|c| {
                (0..a.size(c))
                    .map(|x| {
                        base.arrows_into(c).iter().all(|&phi| {
                            let (c2, y) = (base.src(phi), a.act(phi, x));
                            !self.selected[c2.0][y] || other.selected[c2.0][y]
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(SubPresheaf {
            ambient: a.clone(),
            selected,
        })
    }

    /// The pullback `f^* V` for `f: B -> A` and `V` in `Sub(A)`.
    pub fn pullback_along(&self, f: &PresheafMorphism) -> Result<SubPresheaf> {
        if f.dst() != &self.ambient {
            return Err(ToposError::Mismatch(
                "pullback along a morphism into another presheaf".into(),
            ));
        }
        let b = f.src();
        let selected = b
            .base()
            .objects()
            .map(|c| {
                (0..b.size(c))
                    .map(|x| self.selected[c.0][f.apply(c, x)])
                    .collect()
            })
            .collect();
        Ok(SubPresheaf {
            ambient: b.clone(),
            selected,
        })
    }

    /// `forall_f U` for `f: B -> A` and `U` in `Sub(B)`: `a` is in it iff every
    /// `b` over a restriction of `a` lies in `U`.
    pub fn forall_along(&self, f: &PresheafMorphism) -> Result<SubPresheaf> {
        if f.src() != &self.ambient {
            return Err(ToposError::Mismatch(
                "forall along a morphism out of another presheaf".into(),
            ));
        }
        let (a, b) = (f.dst(), f.src());
        let base = a.base();
        let selected = base
            .objects()
            .map(|c| {
                (0..a.size(c))
                    .map(|x| {
                        base.arrows_into(c).iter().all(|&phi| {
                            let c2 = base.src(phi);
                            let target = a.act(phi, x);
                            (0..b.size(c2))
                                .all(|y| f.apply(c2, y) != target || self.selected[c2.0][y])
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(SubPresheaf {
            ambient: a.clone(),
            selected,
        })
    }

    /// The image of a monomorphism. Fails if `m` is not injective.
    pub fn from_mono(m: &PresheafMorphism) -> Result<SubPresheaf> {
        let a = m.dst();
        let mut selected: Vec<Vec<bool>> = a.sizes().iter().map(|&n| vec![false; n]).collect();
        for c in a.base().objects() {
            for x in 0..m.src().size(c) {
                let y = m.apply(c, x);
                if std::mem::replace(&mut selected[c.0][y], true) {
                    return Err(ToposError::NotMono(format!(
                        "two elements at {} have the same image {y}",
                        a.base().object_name(c)
                    )));
                }
            }
        }
        Ok(SubPresheaf {
            ambient: a.clone(),
            selected,
        })
    }

    /// The subobject as a presheaf with its inclusion. Elements of the domain
    /// are the selected elements in ascending order.
    pub fn inclusion(&self) -> (Presheaf, PresheafMorphism) {
        let a = &self.ambient;
        let base = a.base_arc().clone();
        let members: Vec<Vec<usize>> = base.objects().map(|c| self.elements(c)).collect();
        let position: Vec<Vec<usize>> = base
            .objects()
            .map(|c| {
                let mut pos = vec![usize::MAX; a.size(c)];
                for (i, &x) in members[c.0].iter().enumerate() {
                    pos[x] = i;
                }
                pos
            })
            .collect();
        let action = base
            .morphisms()
            .map(|m| {
                let s = base.src(m);
                members[base.dst(m).0]
                    .iter()
                    .map(|&x| position[s.0][a.act(m, x)])
                    .collect()
            })
            .collect();
        let domain = Presheaf::new_unchecked(base, members.iter().map(Vec::len).collect(), action);
        let mono = PresheafMorphism::new_unchecked(domain.clone(), a.clone(), members);
        (domain, mono)
    }
}

pub fn sub_top(a: &Presheaf) -> SubPresheaf {
    SubPresheaf::top(a)
}

pub fn sub_leq(u: &SubPresheaf, v: &SubPresheaf) -> Result<bool> {
    u.leq(v)
}

pub fn sub_meet(u: &SubPresheaf, v: &SubPresheaf) -> Result<SubPresheaf> {
    u.meet(v)
}

pub fn sub_implies(u: &SubPresheaf, v: &SubPresheaf) -> Result<SubPresheaf> {
    u.implies(v)
}

pub fn sub_pullback(f: &PresheafMorphism, v: &SubPresheaf) -> Result<SubPresheaf> {
    v.pullback_along(f)
}

pub fn sub_forall(f: &PresheafMorphism, u: &SubPresheaf) -> Result<SubPresheaf> {
    u.forall_along(f)
}

/// Every subobject of `a`, as the subobjects classified by maps into Omega.
pub fn all_subobjects(
    a: &Presheaf,
    omega: &OmegaStructure,
    budget: Budget,
) -> Result<Vec<SubPresheaf>> {
    hom_set(a, &omega.omega, budget)?
        .iter()
        .map(|chi| omega.unclassify(chi))
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fincat::FinCategory;
    use crate::presheaf::omega;

    fn subsets(n: usize, a: &Presheaf) -> Vec<SubPresheaf> {
        (0u32..1 << n)
            .map(|bits| {
                SubPresheaf::from_selection(
                    a.clone(),
                    vec![(0..n).map(|i| bits >> i & 1 == 1).collect()],
                )
                .unwrap()
            })
            .collect()
    }

    fn set(base: &Arc<FinCategory>, n: usize) -> Presheaf {
        Presheaf::new(base.clone(), vec![n], vec![(0..n).collect()]).unwrap()
    }

    #[test]
    fn implication_is_residuation_on_sets() {
        let base = Arc::new(FinCategory::terminal());
        for n in 0..=4 {
            let a = set(&base, n);
            let all = subsets(n, &a);
            for u in &all {
                for v in &all {
                    let imp = u.implies(v).unwrap();
                    for w in &all {
                        assert_eq!(w.leq(&imp).unwrap(), w.meet(u).unwrap().leq(v).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn forall_is_right_adjoint_to_pullback_on_sets() {
        let base = Arc::new(FinCategory::terminal());
        for (na, nb) in [(2, 3), (3, 2), (1, 3), (3, 3)] {
            let (a, b) = (set(&base, na), set(&base, nb));
            for f in hom_set(&b, &a, Budget::default()).unwrap() {
                for u in subsets(nb, &b) {
                    let fu = u.forall_along(&f).unwrap();
                    for v in subsets(na, &a) {
                        assert_eq!(
                            v.pullback_along(&f).unwrap().leq(&u).unwrap(),
                            v.leq(&fu).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn selection_must_be_restriction_closed() {
        let base = Arc::new(FinCategory::graph());
        let edge = Presheaf::new(
            base,
            vec![2, 1],
            vec![vec![0, 1], vec![0], vec![0], vec![1]],
        )
        .unwrap();
        let bad = SubPresheaf::from_selection(edge.clone(), vec![vec![true, false], vec![true]]);
        assert!(matches!(bad, Err(ToposError::NotRestrictionClosed(_))));
        let o = omega(edge.base_arc().clone(), Budget::default()).unwrap();
        // the edge graph has subgraphs {}, {x}, {y}, {x,y}, {x,y,e}
        assert_eq!(
            all_subobjects(&edge, &o, Budget::default()).unwrap().len(),
            5
        );
    }

    #[test]
    fn inclusion_round_trips_through_from_mono() {
        let base = Arc::new(FinCategory::graph());
        let g = Presheaf::new(
            base,
            vec![3, 2],
            vec![vec![0, 1, 2], vec![0, 1], vec![0, 2], vec![1, 2]],
        )
        .unwrap();
        let u = SubPresheaf::from_elements(g.clone(), &[vec![0, 2], vec![1]]).unwrap();
        let (d, m) = u.inclusion();
        assert!(d.violations().is_empty() && m.is_natural());
        assert_eq!(SubPresheaf::from_mono(&m).unwrap(), u);
        let collapse = crate::presheaf::bang(&g);
        assert!(matches!(
            SubPresheaf::from_mono(&collapse),
            Err(ToposError::NotMono(_))
        ));
    }
}
