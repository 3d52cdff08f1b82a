//! Backtracking enumeration of natural transformations.
//!
//! Elements of the source are visited in `(object, element)` order and values
//! are tried in ascending order, so solutions come out lexicographically
//! sorted by their flattened component tuple. Naturality constraints are
//! attached to the later of the two elements they mention; when the earlier
//! element is the one being restricted, the later value is forced.

use crate::error::{Meter, Result, ToposError};
use crate::fincat::{MorphismId, ObjectId};

use super::{Budget, Presheaf, PresheafMorphism, SliceObject};

/// All natural transformations `src -> dst`, flattened in `(object, element)`
/// order. `allowed`, when given, restricts the admissible values of each
/// source element (and must list them in ascending order).
pub(crate) fn enumerate_natural(
    src: &Presheaf,
    dst: &Presheaf,
    allowed: Option<&dyn Fn(ObjectId, usize) -> Vec<usize>>,
    meter: &mut Meter,
) -> Result<Vec<Vec<usize>>> {
    if !src.same_base(dst) {
        return Err(ToposError::BaseMismatch);
    }
    let base = src.base();
    let mut offset = Vec::with_capacity(base.object_count());
    let mut owner = Vec::new();
    for c in base.objects() {
        offset.push(owner.len());
        owner.extend((0..src.size(c)).map(|x| (c, x)));
    }
    let n = owner.len();

    // forced[k]: (earlier element z, morphism) with element k = z.phi, so
    // value(k) = value(z).phi. checks[k]: (earlier element x, morphism) with
    // x = k.phi, so value(x) must equal value(k).phi.
    let mut forced: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for phi in base.morphisms() {
        if base.is_identity(phi) {
            continue;
        }
        let (c, c2) = (base.src(phi), base.dst(phi));
        for z in 0..src.size(c2) {
            let kz = offset[c2.0] + z;
            let kx = offset[c.0] + src.act(phi, z);
            if kz < kx {
                forced[kx].push((kz, phi.0));
            } else {
                checks[kz].push((kx, phi.0));
            }
        }
    }

    let candidates: Vec<Vec<usize>> = owner
        .iter()
        .map(|&(c, x)| match allowed {
            Some(f) => f(c, x),
            None => (0..dst.size(c)).collect(),
        })
        .collect();

    let mut results = Vec::new();
    let mut value = vec![usize::MAX; n];
    search(
        0,
        &mut value,
        &forced,
        &checks,
        &candidates,
        dst,
        meter,
        &mut results,
    )?;
    Ok(results)
}

#[allow(clippy::too_many_arguments)]
fn search(
    k: usize,
    value: &mut [usize],
    forced: &[Vec<(usize, usize)>],
    checks: &[Vec<(usize, usize)>],
    candidates: &[Vec<usize>],
    dst: &Presheaf,
    meter: &mut Meter,
    results: &mut Vec<Vec<usize>>,
) -> Result<()> {
    if k == value.len() {
        meter.tick(1)?;
        results.push(value.to_vec());
        return Ok(());
    }
    let consistent = |v: usize, value: &[usize]| {
        forced[k]
            .iter()
            .all(|&(z, phi)| dst.act(MorphismId(phi), value[z]) == v)
            && checks[k].iter().all(|&(x, phi)| {
                let vx = if x == k { v } else { value[x] };
                dst.act(MorphismId(phi), v) == vx
            })
    };
    if let Some(&(z, phi)) = forced[k].first() {
        let v = dst.act(MorphismId(phi), value[z]);
        meter.tick(1)?;
        if candidates[k].binary_search(&v).is_ok() && consistent(v, value) {
            value[k] = v;
            search(
                k + 1,
                value,
                forced,
                checks,
                candidates,
                dst,
                meter,
                results,
            )?;
        }
        value[k] = usize::MAX;
        return Ok(());
    }
    for &v in &candidates[k] {
        meter.tick(1)?;
        if consistent(v, value) {
            value[k] = v;
            search(
                k + 1,
                value,
                forced,
                checks,
                candidates,
                dst,
                meter,
                results,
            )?;
        }
    }
    value[k] = usize::MAX;
    Ok(())
}

pub(crate) fn unflatten(src: &Presheaf, flat: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(src.sizes().len());
    let mut at = 0;
    for &n in src.sizes() {
        out.push(flat[at..at + n].to_vec());
        at += n;
    }
    out
}

/// Every natural transformation `f -> g`, in lexicographic order of the
/// flattened components, without duplicates.
pub fn hom_set(f: &Presheaf, g: &Presheaf, budget: Budget) -> Result<Vec<PresheafMorphism>> {
    let mut meter = Meter::new("hom_set", budget.limit);
    let flat = enumerate_natural(f, g, None, &mut meter)?;
    Ok(flat
        .iter()
        .map(|v| PresheafMorphism::new_unchecked(f.clone(), g.clone(), unflatten(f, v)))
        .collect())
}

/// Morphisms `x -> y` in the slice over their common base object.
pub fn slice_hom_set(
    x: &SliceObject,
    y: &SliceObject,
    budget: Budget,
) -> Result<Vec<PresheafMorphism>> {
    if x.over() != y.over() {
        return Err(ToposError::Mismatch(
            "slice objects over different objects".into(),
        ));
    }
    let (xt, yt) = (x.total(), y.total());
    let allowed = |c: ObjectId, e: usize| {
        let target = x.proj.apply(c, e);
        (0..yt.size(c))
            .filter(|&t| y.proj.apply(c, t) == target)
            .collect::<Vec<_>>()
    };
    let mut meter = Meter::new("slice_hom_set", budget.limit);
    let flat = enumerate_natural(xt, yt, Some(&allowed), &mut meter)?;
    Ok(flat
        .iter()
        .map(|v| PresheafMorphism::new_unchecked(xt.clone(), yt.clone(), unflatten(xt, v)))
        .collect())
}
