//! Seeded generation of random bases, presheaves and morphisms.
//!
//! Instance `k` of a stream depends only on the seed, the bounds and `k`, so
//! streams are reproducible and instances can be generated in parallel.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::fincat::{validate_category, FinCategory, MorphismId, MorphismInfo, ObjectId};
use crate::presheaf::{hom_set, terminal, Budget, Presheaf, PresheafMorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_objects: usize,
    pub max_morphisms: usize,
    pub max_carrier: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_objects: 2,
            max_morphisms: 6,
            max_carrier: 3,
        }
    }
}

/// Data every check draws on: four presheaves and morphisms
/// `f: a -> c`, `g: b -> c`, `h: d -> b`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub base: Arc<FinCategory>,
    pub a: Presheaf,
    pub b: Presheaf,
    pub c: Presheaf,
    pub d: Presheaf,
    pub f: PresheafMorphism,
    pub g: PresheafMorphism,
    pub h: PresheafMorphism,
}

impl Instance {
    pub fn objects(&self) -> [&Presheaf; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Build an instance, choosing `f`, `g`, `h` as the first morphisms of
    /// their hom-sets. Returns `None` if one of the hom-sets is empty.
    pub fn first_maps(
        id: &str,
        a: Presheaf,
        b: Presheaf,
        c: Presheaf,
        d: Presheaf,
    ) -> Option<Instance> {
        let budget = Budget::default();
        let first = |x: &Presheaf, y: &Presheaf| {
            hom_set(x, y, budget)
                .ok()
                .and_then(|v| v.into_iter().next())
        };
        let f = first(&a, &c)?;
        let g = first(&b, &c)?;
        let h = first(&d, &b)?;
        Some(Instance {
            id: id.to_string(),
            base: a.base_arc().clone(),
            a,
            b,
            c,
            d,
            f,
            g,
            h,
        })
    }
}

#[derive(Clone, Debug)]
pub struct InstanceGenerator {
    pub seed: u64,
    pub bounds: Bounds,
}

impl InstanceGenerator {
    pub fn new(seed: u64, bounds: Bounds) -> Self {
        InstanceGenerator { seed, bounds }
    }

    fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// The `index`-th instance of the stream.
    pub fn instance(&self, index: u64) -> Instance {
        let mut rng = self.rng(index);
        let base = Arc::new(random_category(&mut rng, self.bounds));
        let n = self.bounds.max_carrier;
        let a = random_presheaf(&mut rng, &base, n);
        let mut c = random_presheaf(&mut rng, &base, n);
        let f = match random_map(&mut rng, &a, &c) {
            Some(f) => f,
            None => {
                c = terminal(base.clone());
                random_map(&mut rng, &a, &c).expect("maps into the terminal presheaf")
            }
        };
        let (b, g) = random_source(&mut rng, &base, n, &c);
        let (d, h) = random_source(&mut rng, &base, n, &b);
        Instance {
            id: format!("gen-{}-{index}", self.seed),
            base,
            a,
            b,
            c,
            d,
            f,
            g,
            h,
        }
    }

    pub fn instances(&self, count: u64) -> Vec<Instance> {
        use rayon::prelude::*;
        (0..count)
            .into_par_iter()
            .map(|i| self.instance(i))
            .collect()
    }
}

/// A random presheaf with a morphism into `target`; falls back to `target`
/// itself with its identity.
fn random_source(
    rng: &mut ChaCha8Rng,
    base: &Arc<FinCategory>,
    max_carrier: usize,
    target: &Presheaf,
) -> (Presheaf, PresheafMorphism) {
    for _ in 0..4 {
        let p = random_presheaf(rng, base, max_carrier);
        if let Some(m) = random_map(rng, &p, target) {
            return (p, m);
        }
    }
    (target.clone(), PresheafMorphism::identity(target))
}

fn random_map(rng: &mut ChaCha8Rng, a: &Presheaf, b: &Presheaf) -> Option<PresheafMorphism> {
    let homs = hom_set(a, b, Budget::default()).ok()?;
    homs.choose(rng).cloned()
}

/// A random category within the bounds, found by randomized backtracking
/// over composition tables.
pub fn random_category(rng: &mut ChaCha8Rng, bounds: Bounds) -> FinCategory {
    loop {
        let n = rng.gen_range(1..=bounds.max_objects.max(1));
        let spare = bounds.max_morphisms.saturating_sub(n);
        let extra = rng.gen_range(0..=spare);
        // Non-identity morphisms as (src, dst) pairs.
        let arrows: Vec<(usize, usize)> = (0..extra)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect();
        if let Some(cat) = fill_composition(rng, n, &arrows) {
            return cat;
        }
    }
}

fn fill_composition(
    rng: &mut ChaCha8Rng,
    n: usize,
    arrows: &[(usize, usize)],
) -> Option<FinCategory> {
    // Morphism ids: identities 0..n, then the arrows.
    let total = n + arrows.len();
    let ends: Vec<(usize, usize)> = (0..n)
        .map(|o| (o, o))
        .chain(arrows.iter().copied())
        .collect();
    let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; total]; total];
    for (f, &(s, d)) in ends.iter().enumerate() {
        table[d][f] = Some(f);
        table[f][s] = Some(f);
    }
    let hom = |x: usize, y: usize| {
        (0..total)
            .filter(|&m| ends[m] == (x, y))
            .collect::<Vec<_>>()
    };
    let mut slots = Vec::new();
    for g in n..total {
        for f in n..total {
            if ends[g].0 == ends[f].1 {
                slots.push((g, f));
            }
        }
    }
    let mut options = Vec::with_capacity(slots.len());
    for &(g, f) in &slots {
        let mut o = hom(ends[f].0, ends[g].1);
        if o.is_empty() {
            return None;
        }
        o.shuffle(rng);
        options.push(o);
    }
    let mut steps = 0usize;
    if !assign(0, &slots, &options, &mut table, &ends, &mut steps) {
        return None;
    }
    let objects: Vec<String> = (0..n).map(|o| format!("o{o}")).collect();
    let morphisms: Vec<MorphismInfo> = ends
        .iter()
        .enumerate()
        .map(|(m, &(s, d))| MorphismInfo {
            name: if m < n {
                format!("id_o{m}")
            } else {
                format!("m{}", m - n)
            },
            src: ObjectId(s),
            dst: ObjectId(d),
        })
        .collect();
    let compose = table
        .iter()
        .map(|row| row.iter().map(|e| e.map(MorphismId)).collect())
        .collect();
    let cat = FinCategory::from_parts(
        objects,
        morphisms,
        (0..n).map(MorphismId).collect(),
        compose,
    );
    validate_category(&cat).is_valid().then_some(cat)
}

/// Assign composites slot by slot, checking every associativity triple as
/// soon as its entries are known.
fn assign(
    k: usize,
    slots: &[(usize, usize)],
    options: &[Vec<usize>],
    table: &mut [Vec<Option<usize>>],
    ends: &[(usize, usize)],
    steps: &mut usize,
) -> bool {
    if k == slots.len() {
        return true;
    }
    let (g, f) = slots[k];
    for &v in &options[k] {
        *steps += 1;
        if *steps > 20_000 {
            return false;
        }
        table[g][f] = Some(v);
        if associative_so_far(table, ends) && assign(k + 1, slots, options, table, ends, steps) {
            return true;
        }
    }
    table[g][f] = None;
    false
}

fn associative_so_far(table: &[Vec<Option<usize>>], ends: &[(usize, usize)]) -> bool {
    let total = ends.len();
    for f in 0..total {
        for g in 0..total {
            let Some(gf) = table[g][f] else { continue };
            for h in 0..total {
                if ends[h].0 != ends[g].1 {
                    continue;
                }
                let (Some(hg), Some(h_gf)) = (table[h][g], table[h][gf]) else {
                    continue;
                };
                if let Some(hg_f) = table[hg][f] {
                    if hg_f != h_gf {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// A random presheaf with every carrier of size at most `max_carrier`.
pub fn random_presheaf(
    rng: &mut ChaCha8Rng,
    base: &Arc<FinCategory>,
    max_carrier: usize,
) -> Presheaf {
    loop {
        let sizes: Vec<usize> = base
            .objects()
            .map(|_| rng.gen_range(0..=max_carrier))
            .collect();
        if let Some(p) = fill_action(rng, base, sizes) {
            return p;
        }
    }
}

fn fill_action(
    rng: &mut ChaCha8Rng,
    base: &Arc<FinCategory>,
    sizes: Vec<usize>,
) -> Option<Presheaf> {
    let mut action: Vec<Vec<usize>> = base
        .morphisms()
        .map(|m| {
            if base.is_identity(m) {
                (0..sizes[base.dst(m).0]).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    // Entries to fill: (morphism, element of the carrier at its codomain).
    let mut slots = Vec::new();
    for m in base.morphisms().filter(|&m| !base.is_identity(m)) {
        let (s, d) = (base.src(m), base.dst(m));
        if sizes[d.0] > 0 && sizes[s.0] == 0 {
            return None;
        }
        action[m.0] = vec![usize::MAX; sizes[d.0]];
        for x in 0..sizes[d.0] {
            slots.push((m, x));
        }
    }
    let options: Vec<Vec<usize>> = slots
        .iter()
        .map(|&(m, _)| {
            let mut o: Vec<usize> = (0..sizes[base.src(m).0]).collect();
            o.shuffle(rng);
            o
        })
        .collect();
    let mut steps = 0usize;
    if !fill_slot(0, &slots, &options, &mut action, base, &mut steps) {
        return None;
    }
    let p = Presheaf::new(base.clone(), sizes, action).ok()?;
    Some(p)
}

fn fill_slot(
    k: usize,
    slots: &[(MorphismId, usize)],
    options: &[Vec<usize>],
    action: &mut [Vec<usize>],
    base: &FinCategory,
    steps: &mut usize,
) -> bool {
    if k == slots.len() {
        return true;
    }
    let (m, x) = slots[k];
    for &v in &options[k] {
        *steps += 1;
        if *steps > 20_000 {
            return false;
        }
        action[m.0][x] = v;
        if functorial_so_far(action, base) && fill_slot(k + 1, slots, options, action, base, steps)
        {
            return true;
        }
    }
    action[m.0][x] = usize::MAX;
    false
}

/// `x.(g . f) = (x.g).f` wherever all three entries are known.
fn functorial_so_far(action: &[Vec<usize>], base: &FinCategory) -> bool {
    for f in base.morphisms() {
        for &g in base.arrows_out_of(base.dst(f)) {
            let gf = base.comp(g, f);
            for x in 0..action[g.0].len() {
                let xg = action[g.0][x];
                let whole = action[gf.0][x];
                if xg == usize::MAX || whole == usize::MAX {
                    continue;
                }
                let step = action[f.0][xg];
                if step != usize::MAX && step != whole {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let gen = InstanceGenerator::new(0, Bounds::default());
        for i in 0..20 {
            let (x, y) = (gen.instance(i), gen.instance(i));
            assert_eq!(*x.base, *y.base);
            assert_eq!(
                x.objects().map(|p| p.clone()),
                y.objects().map(|p| p.clone())
            );
            assert_eq!((x.f, x.g, x.h), (y.f, y.g, y.h));
        }
    }

    #[test]
    fn generated_structures_are_valid_and_bounded() {
        let bounds = Bounds {
            max_objects: 3,
            max_morphisms: 8,
            max_carrier: 4,
        };
        let gen = InstanceGenerator::new(7, bounds);
        for i in 0..40 {
            let inst = gen.instance(i);
            assert!(inst.base.validate().is_valid());
            assert!(inst.base.object_count() <= 3 && inst.base.morphism_count() <= 8);
            for p in inst.objects() {
                assert!(p.violations().is_empty());
                assert!(p.sizes().iter().all(|&n| n <= 4));
            }
            assert!(inst.f.is_natural() && inst.g.is_natural() && inst.h.is_natural());
        }
    }

    #[test]
    fn one_object_bound_gives_monoids() {
        let bounds = Bounds {
            max_objects: 1,
            max_morphisms: 4,
            max_carrier: 3,
        };
        let gen = InstanceGenerator::new(0, bounds);
        assert!((0..20).all(|i| gen.instance(i).base.object_count() == 1));
    }
}
