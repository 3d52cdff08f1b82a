//! Hom-set enumeration against a brute-force scan of all componentwise
//! functions, and exponentials against their pointwise description.

use std::collections::BTreeSet;
use std::sync::Arc;

use itertools::Itertools;
use proptest::prelude::*;
use topos_core::fincat::FinCategory;
use topos_core::presheaf::{
    exponential, hom_set, product, slice_hom_set, yoneda, Budget, Presheaf, PresheafMorphism,
    SliceObject,
};
use topos_core::verify::corpus::presheaves_up_to_iso;
use topos_core::verify::{Bounds, InstanceGenerator};

type Components = Vec<Vec<usize>>;

/// Every natural transformation, found by trying every function at every
/// object.
fn brute_homs(a: &Presheaf, b: &Presheaf) -> BTreeSet<Components> {
    let base = a.base();
    let per_object: Vec<Vec<Vec<usize>>> = base
        .objects()
        .map(|c| {
            let (n, m) = (a.size(c), b.size(c));
            if n == 0 {
                return vec![Vec::new()];
            }
            (0..n).map(|_| 0..m).multi_cartesian_product().collect()
        })
        .collect();
    per_object
        .into_iter()
        .multi_cartesian_product()
        .filter(|comps| PresheafMorphism::new(a.clone(), b.clone(), comps.clone()).is_ok())
        .collect()
}

fn as_set(homs: &[PresheafMorphism]) -> BTreeSet<Components> {
    homs.iter().map(|h| h.components().to_vec()).collect()
}

fn small_presheaves() -> Vec<Presheaf> {
    let mut out = Vec::new();
    for base in [
        FinCategory::terminal(),
        FinCategory::arrow(),
        FinCategory::graph(),
    ] {
        out.extend(presheaves_up_to_iso(&Arc::new(base), 2, 3));
    }
    out
}

#[test]
fn hom_sets_match_brute_force_on_small_presheaves() {
    let all = small_presheaves();
    let mut pairs = 0;
    for a in &all {
        for b in all.iter().filter(|b| b.same_base(a)) {
            let homs = hom_set(a, b, Budget::default()).unwrap();
            assert_eq!(as_set(&homs), brute_homs(a, b));
            assert_eq!(homs.len(), as_set(&homs).len(), "duplicates in hom-set");
            pairs += 1;
        }
    }
    assert_eq!(pairs, 94);
}

#[test]
fn hom_sets_are_listed_in_lexicographic_order() {
    let all = small_presheaves();
    for a in &all {
        for b in all.iter().filter(|b| b.same_base(a)) {
            let listed: Vec<Components> = hom_set(a, b, Budget::default())
                .unwrap()
                .iter()
                .map(|h| h.components().to_vec())
                .collect();
            let flat: Vec<Vec<usize>> = listed.iter().map(|c| c.concat()).collect();
            assert!(flat.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn slice_hom_sets_filter_the_hom_set() {
    let base = Arc::new(FinCategory::graph());
    let all = presheaves_up_to_iso(&base, 2, 3);
    for over in &all {
        for x in all
            .iter()
            .flat_map(|t| hom_set(t, over, Budget::default()).unwrap())
            .take(12)
        {
            for y in all
                .iter()
                .flat_map(|t| hom_set(t, over, Budget::default()).unwrap())
                .take(12)
            {
                let got = slice_hom_set(
                    &SliceObject::new(x.clone()),
                    &SliceObject::new(y.clone()),
                    Budget::default(),
                )
                .unwrap();
                let expected: BTreeSet<Components> = hom_set(x.src(), y.src(), Budget::default())
                    .unwrap()
                    .into_iter()
                    .filter(|h| y.compose(h).unwrap() == x)
                    .map(|h| h.components().to_vec())
                    .collect();
                assert_eq!(as_set(&got), expected);
            }
        }
    }
}

#[test]
fn a_small_budget_is_reported() {
    let base = Arc::new(FinCategory::terminal());
    let set = |n: usize| Presheaf::new(base.clone(), vec![n], vec![(0..n).collect()]).unwrap();
    let err = hom_set(&set(6), &set(6), Budget::new(100)).unwrap_err();
    assert!(err.is_budget());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_hom_sets_match_brute_force(seed in 0u64..1_000, index in 0u64..64) {
        let bounds = Bounds { max_objects: 2, max_morphisms: 4, max_carrier: 2 };
        let inst = InstanceGenerator::new(seed, bounds).instance(index);
        for (x, y) in [(&inst.a, &inst.b), (&inst.b, &inst.c), (&inst.d, &inst.a)] {
            let homs = hom_set(x, y, Budget::default()).unwrap();
            prop_assert_eq!(as_set(&homs), brute_homs(x, y));
        }
    }

    #[test]
    fn exponential_carriers_count_maps_from_representables(seed in 0u64..1_000, index in 0u64..64) {
        let bounds = Bounds { max_objects: 2, max_morphisms: 4, max_carrier: 2 };
        let inst = InstanceGenerator::new(seed, bounds).instance(index);
        let exp = exponential(&inst.a, &inst.b, Budget::default()).unwrap();
        prop_assert!(exp.object.violations().is_empty());
        prop_assert!(exp.eval.is_natural());
        for c in inst.base.objects() {
            let probe = product(&yoneda(inst.base.clone(), c), &inst.a, Budget::default()).unwrap();
            let count = hom_set(&probe.object, &inst.b, Budget::default()).unwrap().len();
            prop_assert_eq!(exp.size_at(c), count);
        }
    }

    #[test]
    fn exponential_transpose_is_a_bijection(seed in 0u64..1_000, index in 0u64..64) {
        let bounds = Bounds { max_objects: 2, max_morphisms: 4, max_carrier: 2 };
        let inst = InstanceGenerator::new(seed, bounds).instance(index);
        let exp = exponential(&inst.a, &inst.b, Budget::default()).unwrap();
        let prod = product(&inst.c, &inst.a, Budget::default()).unwrap();
        let maps = hom_set(&prod.object, &inst.b, Budget::default()).unwrap();
        let curried = hom_set(&inst.c, &exp.object, Budget::default()).unwrap();
        prop_assert_eq!(maps.len(), curried.len());
        for k in maps.iter().take(8) {
            let t = exp.transpose(&inst.c, k, Budget::default()).unwrap();
            prop_assert!(t.is_natural());
            // eval . (t x id) = k
            let along = exp.eval_domain.mediate(&t.compose(&prod.p1).unwrap(), &prod.p2).unwrap();
            prop_assert_eq!(&exp.eval.compose(&along).unwrap(), k);
        }
    }
}
