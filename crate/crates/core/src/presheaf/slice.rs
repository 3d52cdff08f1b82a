//! The adjoint triple `f_! -| f^* -| f_*` between slices.
//!
//! `f_*` is the right Kan extension along the category of elements, computed
//! pointwise: for `f: B -> A`, the fiber of `f_* x` over `a` in `A(c)` is the
//! set of families `s(phi, b)` in `x` over `b`, indexed by `phi: c' -> c` and
//! `b` in `B(c')` with `f(b) = a.phi`, that are natural in `(phi, b)`.

use std::collections::HashMap;

use crate::error::{Meter, Result, ToposError};
use crate::fincat::{MorphismId, ObjectId};

use super::limits::{pullback, Pullback};
use super::natural::enumerate_natural;
use super::{Budget, Presheaf, PresheafMorphism, SliceObject};

/// `f^* x`: the slice object together with the pullback square computing it.
/// `slice.proj` is `pullback.p1`; `pullback.p2` maps into `x.total()`.
#[derive(Clone, Debug)]
pub struct PulledBack {
    pub slice: SliceObject,
    pub pullback: Pullback,
}

pub fn pullback_functor(
    f: &PresheafMorphism,
    x: &SliceObject,
    budget: Budget,
) -> Result<PulledBack> {
    let pb = pullback(f, &x.proj, budget)?;
    Ok(PulledBack {
        slice: SliceObject::new(pb.p1.clone()),
        pullback: pb,
    })
}

/// `f_! x = f . x`.
pub fn postcompose(f: &PresheafMorphism, x: &SliceObject) -> Result<SliceObject> {
    Ok(SliceObject::new(f.compose(&x.proj)?))
}

/// Which families a fiber of `f_*` admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum FamilyRule {
    Natural,
    /// Every choice of lifts, natural or not. Only used to build deliberately
    /// broken backends.
    Unconstrained,
}

#[derive(Clone, Debug)]
struct Fiber {
    /// Index entries `(c', phi, b)` in `(c', phi, b)` order.
    entries: Vec<(ObjectId, MorphismId, usize)>,
    position: HashMap<(usize, usize), usize>,
    families: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

/// `f_* x` for `f: B -> A` and `x` over `B`, with its counit and transposes.
#[derive(Clone, Debug)]
pub struct Pushforward {
    along: PresheafMorphism,
    source: SliceObject,
    pub slice: SliceObject,
    fibers: Vec<Vec<Fiber>>,
    offsets: Vec<Vec<usize>>,
    owner: Vec<Vec<(usize, usize)>>,
}

pub fn pushforward(f: &PresheafMorphism, x: &SliceObject, budget: Budget) -> Result<Pushforward> {
    pushforward_with(f, x, budget, FamilyRule::Natural)
}

pub(crate) fn pushforward_with(
    f: &PresheafMorphism,
    x: &SliceObject,
    budget: Budget,
    rule: FamilyRule,
) -> Result<Pushforward> {
    if x.over() != f.src() {
        return Err(ToposError::Mismatch(
            "pushforward: slice object is not over the domain".into(),
        ));
    }
    let (b, a) = (f.src(), f.dst());
    let xt = x.total();
    let base = a.base_arc().clone();
    let mut meter = Meter::new("pushforward", budget.limit);

    let mut fibers: Vec<Vec<Fiber>> = Vec::with_capacity(base.object_count());
    for c in base.objects() {
        let mut row = Vec::with_capacity(a.size(c));
        for el in 0..a.size(c) {
            let mut entries = Vec::new();
            for c2 in base.objects() {
                for &phi in base.hom(c2, c) {
                    let target = a.act(phi, el);
                    for bb in 0..b.size(c2) {
                        if f.apply(c2, bb) == target {
                            entries.push((c2, phi, bb));
                        }
                    }
                }
            }
            meter.tick(entries.len() as u64)?;
            let position: HashMap<(usize, usize), usize> = entries
                .iter()
                .enumerate()
                .map(|(i, &(_, phi, bb))| ((phi.0, bb), i))
                .collect();

            // The index presheaf: entries at c2, restricted by (phi, b).psi = (phi . psi, b.psi).
            let mut local: Vec<Vec<usize>> = vec![Vec::new(); base.object_count()];
            let mut local_pos = vec![0usize; entries.len()];
            for (i, &(c2, _, _)) in entries.iter().enumerate() {
                local_pos[i] = local[c2.0].len();
                local[c2.0].push(i);
            }
            let sizes: Vec<usize> = local.iter().map(Vec::len).collect();
            let action: Vec<Vec<usize>> = base
                .morphisms()
                .map(|psi| {
                    let d = base.dst(psi);
                    local[d.0]
                        .iter()
                        .map(|&i| {
                            let (_, phi, bb) = entries[i];
                            let j = position[&(base.comp(phi, psi).0, b.act(psi, bb))];
                            local_pos[j]
                        })
                        .collect()
                })
                .collect();
            let index = Presheaf::new_unchecked(base.clone(), sizes, action);
            let lifts = |c2: ObjectId, k: usize| {
                let (_, _, bb) = entries[local[c2.0][k]];
                (0..xt.size(c2))
                    .filter(|&s| x.proj.apply(c2, s) == bb)
                    .collect::<Vec<_>>()
            };

            let by_object = match rule {
                FamilyRule::Natural => enumerate_natural(&index, xt, Some(&lifts), &mut meter)?,
                FamilyRule::Unconstrained => {
                    let mut all: Vec<Vec<usize>> = vec![Vec::new()];
                    for c2 in base.objects() {
                        for k in 0..index.size(c2) {
                            let options = lifts(c2, k);
                            meter.tick((all.len() * options.len()) as u64)?;
                            all = all
                                .into_iter()
                                .flat_map(|v| {
                                    options.iter().map(move |&s| {
                                        let mut w = v.clone();
                                        w.push(s);
                                        w
                                    })
                                })
                                .collect();
                        }
                    }
                    all
                }
            };
            // Reorder each family from index-presheaf layout to entry order.
            let families: Vec<Vec<usize>> = by_object
                .into_iter()
                .map(|flat| {
                    let mut out = vec![0; entries.len()];
                    let mut at = 0;
                    for ids in &local {
                        for &i in ids {
                            out[i] = flat[at];
                            at += 1;
                        }
                    }
                    out
                })
                .collect();
            let lookup = families
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), i))
                .collect();
            row.push(Fiber {
                entries,
                position,
                families,
                lookup,
            });
        }
        fibers.push(row);
    }

    let mut offsets = Vec::with_capacity(base.object_count());
    let mut owner = Vec::with_capacity(base.object_count());
    for row in &fibers {
        let mut offs = Vec::with_capacity(row.len());
        let mut own = Vec::new();
        for (el, fiber) in row.iter().enumerate() {
            offs.push(own.len());
            own.extend((0..fiber.families.len()).map(|i| (el, i)));
        }
        offsets.push(offs);
        owner.push(own);
    }

    let mut action = Vec::with_capacity(base.morphism_count());
    for psi in base.morphisms() {
        let (c2, c) = (base.src(psi), base.dst(psi));
        let mut row = Vec::with_capacity(owner[c.0].len());
        for &(el, i) in &owner[c.0] {
            let family = &fibers[c.0][el].families[i];
            let el2 = a.act(psi, el);
            let small = &fibers[c2.0][el2];
            let restricted: Vec<usize> = small
                .entries
                .iter()
                .map(|&(_, chi, bb)| {
                    let j = fibers[c.0][el].position[&(base.comp(psi, chi).0, bb)];
                    family[j]
                })
                .collect();
            match small.lookup.get(&restricted) {
                Some(&k) => row.push(offsets[c2.0][el2] + k),
                None => {
                    return Err(ToposError::InvalidMorphism(
                        "pushforward: restricted family is not in the fiber".into(),
                    ))
                }
            }
        }
        action.push(row);
    }
    let sizes = owner.iter().map(Vec::len).collect();
    let total = Presheaf::new_unchecked(base.clone(), sizes, action);
    let proj = PresheafMorphism::new_unchecked(
        total,
        a.clone(),
        owner
            .iter()
            .map(|own| own.iter().map(|&(el, _)| el).collect())
            .collect(),
    );
    Ok(Pushforward {
        along: f.clone(),
        source: x.clone(),
        slice: SliceObject::new(proj),
        fibers,
        offsets,
        owner,
    })
}

impl Pushforward {
    pub fn along(&self) -> &PresheafMorphism {
        &self.along
    }

    pub fn source(&self) -> &SliceObject {
        &self.source
    }

    /// The counit `f^* f_* x -> x`, defined on the canonical pullback of
    /// `self.slice` along `f`, which is returned alongside.
    pub fn counit(&self, budget: Budget) -> Result<(PulledBack, PresheafMorphism)> {
        let pulled = pullback_functor(&self.along, &self.slice, budget)?;
        let pb = &pulled.pullback;
        let base = pb.object.base();
        let mut comps = Vec::with_capacity(base.object_count());
        for c in base.objects() {
            let id = base.identity(c);
            let comp = (0..pb.object.size(c))
                .map(|i| {
                    let (bb, e) = pb.pair(c, i);
                    let (el, fam) = self.owner[c.0][e];
                    let fiber = &self.fibers[c.0][el];
                    fiber.families[fam][fiber.position[&(id.0, bb)]]
                })
                .collect();
            comps.push(comp);
        }
        let eps =
            PresheafMorphism::new_unchecked(pb.object.clone(), self.source.total().clone(), comps);
        Ok((pulled, eps))
    }

    /// The transpose `y -> f_* x` (over `A`) of `u: f^* y -> x` (over `B`).
    /// `u` must be defined on the canonical pullback of `y` along `f`.
    pub fn transpose(
        &self,
        y: &SliceObject,
        u: &PresheafMorphism,
        budget: Budget,
    ) -> Result<PresheafMorphism> {
        if y.over() != self.along.dst() {
            return Err(ToposError::Mismatch(
                "transpose: slice object is not over the codomain".into(),
            ));
        }
        let pb = pullback(&self.along, &y.proj, budget)?;
        if u.src() != &pb.object || u.dst() != self.source.total() {
            return Err(ToposError::Mismatch(
                "transpose: expected a morphism f^* y -> x".into(),
            ));
        }
        if self.source.proj.compose(u)? != pb.p1 {
            return Err(ToposError::Mismatch(
                "transpose: morphism is not over the domain of f".into(),
            ));
        }
        let yt = y.total();
        let base = yt.base();
        let mut comps = Vec::with_capacity(base.object_count());
        for c in base.objects() {
            let mut comp = Vec::with_capacity(yt.size(c));
            for t in 0..yt.size(c) {
                let el = y.proj.apply(c, t);
                let fiber = &self.fibers[c.0][el];
                let family: Vec<usize> = fiber
                    .entries
                    .iter()
                    .map(|&(c2, phi, bb)| {
                        let j = pb
                            .pair_index(c2, bb, yt.act(phi, t))
                            .expect("cone over the pullback");
                        u.apply(c2, j)
                    })
                    .collect();
                match fiber.lookup.get(&family) {
                    Some(&k) => comp.push(self.offsets[c.0][el] + k),
                    None => {
                        return Err(ToposError::InvalidMorphism(
                            "transposed family is not in the fiber".into(),
                        ))
                    }
                }
            }
            comps.push(comp);
        }
        Ok(PresheafMorphism::new_unchecked(
            yt.clone(),
            self.slice.total().clone(),
            comps,
        ))
    }
}

/// `f_*` on a morphism `u: x -> x'` over `B`: the transpose of `u . counit`.
pub fn pushforward_map(
    from: &Pushforward,
    to: &Pushforward,
    u: &PresheafMorphism,
    budget: Budget,
) -> Result<PresheafMorphism> {
    if from.along != to.along {
        return Err(ToposError::Mismatch(
            "pushforward_map: different morphisms".into(),
        ));
    }
    let (_, eps) = from.counit(budget)?;
    to.transpose(&from.slice, &u.compose(&eps)?, budget)
}
