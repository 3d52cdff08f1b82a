//! Colimits obtained from finite limits, dependent products and the
//! subobject classifier alone. Every construction here goes through
//! [`LccContext`].

use std::sync::Arc;

use crate::error::{Result, ToposError};
use crate::fincat::FinCategory;
use crate::lcc::LccContext;
use crate::presheaf::{Presheaf, PresheafMorphism, Pullback, SliceObject};
use crate::sublattice::SubPresheaf;

/// A pair of mutually inverse morphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub forward: PresheafMorphism,
    pub backward: PresheafMorphism,
}

impl IsoWitness {
    pub fn new(forward: PresheafMorphism, backward: PresheafMorphism) -> Result<Self> {
        let there = backward.compose(&forward)?;
        let back = forward.compose(&backward)?;
        if !there.is_identity() || !back.is_identity() {
            return Err(ToposError::NotIso("composites are not identities".into()));
        }
        Ok(IsoWitness { forward, backward })
    }

    pub fn of(ctx: &LccContext, f: &PresheafMorphism) -> Result<Self> {
        match ctx.inverse(f) {
            Some(g) => Self::new(f.clone(), g),
            None => Err(ToposError::NotIso("morphism is not invertible".into())),
        }
    }
}

fn unique(mut candidates: Vec<PresheafMorphism>, what: &str) -> Result<PresheafMorphism> {
    match candidates.len() {
        0 => Err(ToposError::NoCandidate {
            what: what.to_string(),
        }),
        1 => Ok(candidates.pop().expect("one candidate")),
        count => Err(ToposError::Ambiguous {
            what: what.to_string(),
            count,
        }),
    }
}

// Objects of contractibility.

/// `x_!(pi_* delta)` over `I`, where `x: X -> I`, `pi: X x_I X -> X` is the
/// first projection and `delta` the relative diagonal.
pub fn is_contr_object(ctx: &LccContext, x: &SliceObject) -> Result<SliceObject> {
    let kernel = ctx.pullback(&x.proj, &x.proj)?;
    let id = ctx.identity(x.total());
    let delta = kernel.mediate(&id, &id)?;
    let sections = ctx.pushforward(&kernel.p1, &SliceObject::new(delta))?;
    ctx.postcompose(&x.proj, &sections.slice)
}

/// `isContr_I(X)` as a subobject of `I`.
pub fn is_contr_over(ctx: &LccContext, x: &SliceObject) -> Result<SubPresheaf> {
    ctx.sub_from_mono(&is_contr_object(ctx, x)?.proj)
}

/// `isContr(A)` as a subobject of the terminal presheaf.
pub fn is_contr(ctx: &LccContext, a: &Presheaf) -> Result<SubPresheaf> {
    is_contr_over(ctx, &SliceObject::new(ctx.bang(a)))
}

// Finite joins in Sub(A).

/// `A x Omega` with the subobject `pi_2^* tt`, from which the least subobject
/// and binary joins of `Sub(A)` are computed.
#[derive(Clone, Debug)]
pub struct SubobjectJoins {
    product: Pullback,
    truth: SubPresheaf,
}

impl SubobjectJoins {
    pub fn new(ctx: &LccContext, a: &Presheaf) -> Result<Self> {
        let omega = ctx.omega(a.base_arc())?;
        let product = ctx.product(a, &omega.omega)?;
        let tt = ctx.sub_from_mono(&omega.tt)?;
        let truth = ctx.sub_pullback(&product.p2, &tt)?;
        Ok(SubobjectJoins { product, truth })
    }

    pub fn ambient(&self) -> &Presheaf {
        self.product.p1.dst()
    }

    /// `forall_{pi_1} pi_2^* tt`.
    pub fn bottom(&self, ctx: &LccContext) -> Result<SubPresheaf> {
        ctx.sub_forall(&self.product.p1, &self.truth)
    }

    /// `forall_{pi_1}((pi_1^* U => T) and (pi_1^* V => T) => T)` with `T = pi_2^* tt`.
    pub fn join(&self, ctx: &LccContext, u: &SubPresheaf, v: &SubPresheaf) -> Result<SubPresheaf> {
        let t = &self.truth;
        let pu = ctx.sub_pullback(&self.product.p1, u)?;
        let pv = ctx.sub_pullback(&self.product.p1, v)?;
        let both = ctx.sub_meet(&ctx.sub_implies(&pu, t)?, &ctx.sub_implies(&pv, t)?)?;
        ctx.sub_forall(&self.product.p1, &ctx.sub_implies(&both, t)?)
    }
}

pub fn bottom_subobject(ctx: &LccContext, a: &Presheaf) -> Result<SubPresheaf> {
    SubobjectJoins::new(ctx, a)?.bottom(ctx)
}

pub fn join_subobjects(ctx: &LccContext, u: &SubPresheaf, v: &SubPresheaf) -> Result<SubPresheaf> {
    SubobjectJoins::new(ctx, u.ambient())?.join(ctx, u, v)
}

// The initial object.

/// The least subobject of `1`, viewed as an object.
#[derive(Clone, Debug)]
pub struct InitialObject {
    pub object: Presheaf,
    /// `0 -> 1`.
    pub inclusion: PresheafMorphism,
}

impl InitialObject {
    /// The unique morphism `0 -> a`, found by scanning the hom-set.
    pub fn to(&self, ctx: &LccContext, a: &Presheaf) -> Result<PresheafMorphism> {
        unique(
            ctx.hom_set(&self.object, a)?,
            "morphism out of the initial object",
        )
    }
}

pub fn initial_object(ctx: &LccContext, base: &Arc<FinCategory>) -> Result<InitialObject> {
    let one = ctx.terminal(base);
    let least = bottom_subobject(ctx, &one)?;
    let (object, inclusion) = ctx.sub_inclusion(&least);
    Ok(InitialObject { object, inclusion })
}

/// The pullback of two morphisms with a witness that it is initial.
#[derive(Clone, Debug)]
pub struct Disjointness {
    pub pullback: Pullback,
    pub to_initial: IsoWitness,
}

pub fn disjointness(
    ctx: &LccContext,
    f: &PresheafMorphism,
    g: &PresheafMorphism,
    initial: &InitialObject,
) -> Result<Disjointness> {
    let pullback = ctx.pullback(f, g)?;
    let forward = unique(
        ctx.hom_set(&pullback.object, &initial.object)?,
        "morphism into the initial object",
    )?;
    let backward = initial.to(ctx, &pullback.object)?;
    let to_initial = IsoWitness::new(forward, backward)?;
    Ok(Disjointness {
        pullback,
        to_initial,
    })
}

// Partial map classifiers.

#[derive(Clone, Debug)]
pub struct PartialMapClassifier {
    /// The classified object `A`.
    pub source: Presheaf,
    /// `A-bar`.
    pub object: Presheaf,
    /// `A-bar -> Omega`, the dependent product of `A -> 1` along `tt`.
    pub classifier: PresheafMorphism,
    pub eta: PresheafMorphism,
    pub point: PresheafMorphism,
    pub disjointness: Disjointness,
}

pub fn partial_map_classifier(
    ctx: &LccContext,
    a: &Presheaf,
    initial: &InitialObject,
) -> Result<PartialMapClassifier> {
    let base = a.base_arc();
    let omega = ctx.omega(base)?;
    let one = ctx.terminal(base);
    let pushed = ctx.pushforward(&omega.tt, &SliceObject::new(ctx.bang(a)))?;
    let classifier = pushed.slice.proj.clone();
    let object = pushed.slice.total().clone();

    let (pulled, counit) = pushed.counit(ctx.budget())?;
    let unit = ctx
        .inverse(&counit)
        .ok_or_else(|| ToposError::NotIso("counit of the dependent product along tt".into()))?;
    let eta = ctx.compose(&pulled.pullback.p2, &unit)?;

    let ff = ctx.classify(&bottom_subobject(ctx, &one)?)?;
    let fiber = ctx.pullback(&ff, &classifier)?;
    let collapse = ctx
        .inverse(&fiber.p1)
        .ok_or_else(|| ToposError::NotIso("fiber of the partial map classifier over ff".into()))?;
    let point = ctx.compose(&fiber.p2, &collapse)?;

    let disjointness = disjointness(ctx, &eta, &point, initial)?;
    Ok(PartialMapClassifier {
        source: a.clone(),
        object,
        classifier,
        eta,
        point,
        disjointness,
    })
}

// Coproducts.

#[derive(Clone, Debug)]
pub struct CoproductData {
    pub object: Presheaf,
    pub inl: PresheafMorphism,
    pub inr: PresheafMorphism,
    pub disjointness: Disjointness,
    pub left: PartialMapClassifier,
    pub right: PartialMapClassifier,
    /// `A-bar x B-bar`.
    pub ambient: Pullback,
    /// `C -> A-bar x B-bar`.
    pub embedding: PresheafMorphism,
    /// The images of `A` and `B` in `Sub(A-bar x B-bar)`.
    pub summands: (SubPresheaf, SubPresheaf),
}

impl CoproductData {
    pub fn left_summand(&self) -> &Presheaf {
        self.inl.src()
    }

    pub fn right_summand(&self) -> &Presheaf {
        self.inr.src()
    }
}

/// The morphism `x -> M` through which `f: x -> Y` factors along the mono
/// `m: M -> Y`.
fn factor_through(
    ctx: &LccContext,
    f: &PresheafMorphism,
    m: &PresheafMorphism,
) -> Result<PresheafMorphism> {
    let pb = ctx.pullback(f, m)?;
    let back = ctx.inverse(&pb.p1).ok_or_else(|| ToposError::NoCandidate {
        what: "factorization through a subobject".into(),
    })?;
    ctx.compose(&pb.p2, &back)
}

pub fn binary_coproduct(ctx: &LccContext, a: &Presheaf, b: &Presheaf) -> Result<CoproductData> {
    if !a.same_base(b) {
        return Err(ToposError::BaseMismatch);
    }
    let initial = initial_object(ctx, a.base_arc())?;
    let left = partial_map_classifier(ctx, a, &initial)?;
    let right = partial_map_classifier(ctx, b, &initial)?;
    let ambient = ctx.product(&left.object, &right.object)?;

    let ea = ambient.mediate(&left.eta, &ctx.compose(&right.point, &ctx.bang(a))?)?;
    let eb = ambient.mediate(&ctx.compose(&left.point, &ctx.bang(b))?, &right.eta)?;
    let u = ctx.sub_from_mono(&ea)?;
    let v = ctx.sub_from_mono(&eb)?;
    let joined = SubobjectJoins::new(ctx, &ambient.object)?.join(ctx, &u, &v)?;
    let (object, embedding) = ctx.sub_inclusion(&joined);

    let inl = factor_through(ctx, &ea, &embedding)?;
    let inr = factor_through(ctx, &eb, &embedding)?;

    let iu = ctx.sub_from_mono(&inl)?;
    let iv = ctx.sub_from_mono(&inr)?;
    let in_c = SubobjectJoins::new(ctx, &object)?;
    if !ctx.sub_leq(&ctx.sub_meet(&iu, &iv)?, &in_c.bottom(ctx)?)? {
        return Err(ToposError::Postcondition(
            "the summands meet above the least subobject".into(),
        ));
    }
    if !ctx.sub_leq(&ctx.sub_top(&object), &in_c.join(ctx, &iu, &iv)?)? {
        return Err(ToposError::Postcondition(
            "the summands do not cover the coproduct".into(),
        ));
    }

    let disjointness = disjointness(ctx, &inl, &inr, &initial)?;
    Ok(CoproductData {
        object,
        inl,
        inr,
        disjointness,
        left,
        right,
        ambient,
        embedding,
        summands: (u, v),
    })
}

/// The unique `h: C -> X` with `h . inl = f` and `h . inr = g`, found by
/// scanning `hom(C, X)`.
pub fn copair(
    ctx: &LccContext,
    data: &CoproductData,
    f: &PresheafMorphism,
    g: &PresheafMorphism,
) -> Result<PresheafMorphism> {
    if f.src() != data.left_summand() || g.src() != data.right_summand() || f.dst() != g.dst() {
        return Err(ToposError::Mismatch(
            "copair expects f: A -> X and g: B -> X".into(),
        ));
    }
    let mut found = Vec::new();
    for h in ctx.hom_set(&data.object, f.dst())? {
        if &ctx.compose(&h, &data.inl)? == f && &ctx.compose(&h, &data.inr)? == g {
            found.push(h);
        }
    }
    unique(found, "copairing")
}

/// A coproduct of a list, formed by folding binary coproducts from the left.
#[derive(Clone, Debug)]
pub struct FiniteCoproduct {
    pub object: Presheaf,
    pub injections: Vec<PresheafMorphism>,
    pub steps: Vec<CoproductData>,
}

pub fn finite_coproduct(
    ctx: &LccContext,
    base: &Arc<FinCategory>,
    summands: &[Presheaf],
) -> Result<FiniteCoproduct> {
    let Some((first, rest)) = summands.split_first() else {
        let initial = initial_object(ctx, base)?;
        return Ok(FiniteCoproduct {
            object: initial.object,
            injections: Vec::new(),
            steps: Vec::new(),
        });
    };
    let mut object = first.clone();
    let mut injections = vec![ctx.identity(first)];
    let mut steps = Vec::new();
    for next in rest {
        let data = binary_coproduct(ctx, &object, next)?;
        injections = injections
            .iter()
            .map(|i| ctx.compose(&data.inl, i))
            .collect::<Result<_>>()?;
        injections.push(data.inr.clone());
        object = data.object.clone();
        steps.push(data);
    }
    Ok(FiniteCoproduct {
        object,
        injections,
        steps,
    })
}
