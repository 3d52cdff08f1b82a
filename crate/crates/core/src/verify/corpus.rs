//! Curated bases and exhaustive lists of small presheaves up to isomorphism.

use std::collections::HashSet;
use std::sync::Arc;

use crate::fincat::{FinCategory, MorphismId};
use crate::presheaf::{omega, product, Budget, Presheaf};

use super::generate::{Bounds, Instance, InstanceGenerator};

/// The terminal, arrow and graph bases, with their names.
pub fn curated_bases() -> Vec<(&'static str, Arc<FinCategory>)> {
    vec![
        ("terminal", Arc::new(FinCategory::terminal())),
        ("arrow", Arc::new(FinCategory::arrow())),
        ("graph", Arc::new(FinCategory::graph())),
    ]
}

/// Every presheaf on `base` with carrier sizes given by `sizes`.
pub fn presheaves_with_sizes(base: &Arc<FinCategory>, sizes: &[usize]) -> Vec<Presheaf> {
    let arrows: Vec<MorphismId> = base.morphisms().filter(|&m| !base.is_identity(m)).collect();
    if arrows
        .iter()
        .any(|&m| sizes[base.dst(m).0] > 0 && sizes[base.src(m).0] == 0)
    {
        return Vec::new();
    }
    let mut action: Vec<Vec<usize>> = base
        .morphisms()
        .map(|m| {
            if base.is_identity(m) {
                (0..sizes[base.dst(m).0]).collect()
            } else {
                vec![0; sizes[base.dst(m).0]]
            }
        })
        .collect();
    let slots: Vec<(MorphismId, usize)> = arrows
        .iter()
        .flat_map(|&m| (0..sizes[base.dst(m).0]).map(move |x| (m, x)))
        .collect();
    let mut out = Vec::new();
    loop {
        if let Ok(p) = Presheaf::new(base.clone(), sizes.to_vec(), action.clone()) {
            out.push(p);
        }
        // Odometer over the slots, last slot fastest.
        let mut k = slots.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            let (m, x) = slots[k];
            action[m.0][x] += 1;
            if action[m.0][x] < sizes[base.src(m).0] {
                break;
            }
            action[m.0][x] = 0;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// The lexicographically least action table among all relabelings.
fn canonical_form(p: &Presheaf) -> Vec<Vec<usize>> {
    let base = p.base();
    let perms: Vec<Vec<Vec<usize>>> = base.objects().map(|c| permutations(p.size(c))).collect();
    let mut choice = vec![0usize; perms.len()];
    let mut best: Option<Vec<Vec<usize>>> = None;
    loop {
        let sigma: Vec<&Vec<usize>> = choice
            .iter()
            .enumerate()
            .map(|(c, &i)| &perms[c][i])
            .collect();
        let table: Vec<Vec<usize>> = base
            .morphisms()
            .map(|m| {
                let (s, d) = (base.src(m).0, base.dst(m).0);
                let mut row = vec![0; p.size(base.dst(m))];
                for (x, &y) in p.action(m).iter().enumerate() {
                    row[sigma[d][x]] = sigma[s][y];
                }
                row
            })
            .collect();
        if best.as_ref().is_none_or(|b| table < *b) {
            best = Some(table);
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return best.expect("at least one relabeling");
            }
            choice[k] += 1;
            if choice[k] < perms[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// One presheaf from each isomorphism class with every carrier of size at
/// most `max_carrier` and total size at most `max_total`, ordered by size
/// vector and then by action table.
pub fn presheaves_up_to_iso(
    base: &Arc<FinCategory>,
    max_carrier: usize,
    max_total: usize,
) -> Vec<Presheaf> {
    let n = base.object_count();
    let mut size_vectors = vec![Vec::new()];
    for _ in 0..n {
        size_vectors = size_vectors
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                (0..=max_carrier).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .filter(|v| v.iter().sum::<usize>() <= max_total)
            .collect();
    }
    size_vectors.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for sizes in size_vectors {
        for p in presheaves_with_sizes(base, &sizes) {
            if seen.insert((sizes.clone(), canonical_form(&p))) {
                out.push(p);
            }
        }
    }
    out
}

/// Instances over the curated bases: every ordered pair `(a, b)` of small
/// presheaves, with `c` the subobject classifier and `d = b x a`.
pub fn curated_instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for (name, base) in curated_bases() {
        let o = omega(base.clone(), Budget::default())
            .expect("omega of a curated base")
            .omega;
        let small = presheaves_up_to_iso(&base, 2, 2);
        for (i, a) in small.iter().enumerate() {
            for (j, b) in small.iter().enumerate() {
                let d = product(b, a, Budget::default())
                    .expect("small product")
                    .object;
                let id = format!("{name}-{i}-{j}");
                out.push(
                    Instance::first_maps(&id, a.clone(), b.clone(), o.clone(), d)
                        .expect("maps into omega"),
                );
            }
        }
    }
    out
}

/// Curated instances followed by `count` generated ones.
pub fn standard_instances(seed: u64, bounds: Bounds, count: u64) -> Vec<Instance> {
    let mut out = curated_instances();
    out.extend(InstanceGenerator::new(seed, bounds).instances(count));
    out
}
