//! Loading, error reporting and canonical printing of workspace files.

use proptest::prelude::*;
use topos_cli::workspace::{
    parse_workspace, print_workspace, Config, NamedBase, NamedMorphism, NamedPresheaf, NamedSub,
    Workspace,
};
use topos_core::fincat::validate_category;
use topos_core::verify::oracle::image;
use topos_core::verify::{Bounds, InstanceGenerator};

const GRAPH: &str = include_str!("../workspaces/graphs.topos");

#[test]
fn graph_workspace_loads_and_validates() {
    let ws = parse_workspace(GRAPH).unwrap();
    let base = ws.base("graph").unwrap();
    assert!(validate_category(base).is_valid());
    assert_eq!(base.object_count(), 2);
    assert_eq!(base.morphism_count(), 4);
    let names: Vec<&str> = ws.presheaves.iter().map(|p| p.name.as_str()).collect();
    assert_eq!(names, ["edge", "node", "loop"]);
    assert!(ws
        .presheaves
        .iter()
        .all(|p| p.presheaf.violations().is_empty()));
    assert!(ws.morphism("squash").unwrap().is_natural());
    assert_eq!(ws.sub("ends").unwrap().count(), 2);
}

#[test]
fn empty_file_is_an_empty_workspace() {
    assert_eq!(parse_workspace("").unwrap(), Workspace::default());
    assert_eq!(print_workspace(&Workspace::default()), "");
}

#[test]
fn non_associative_tables_name_the_triple() {
    // (e . e) . e = f . e = f but e . (e . e) = e . f = e
    let text = "\
base bad
  objects X
  arrow e : X -> X
  arrow f : X -> X
  compose e e = f
  compose f f = f
  compose e f = e
  compose f e = f
";
    let errs = parse_workspace(text).unwrap_err();
    assert!(!errs.is_empty());
    assert!(errs.iter().all(|e| e.line == 1 && e.column == 1));
    assert!(
        errs.iter()
            .any(|e| e.message.contains("associativity fails for (")),
        "{errs:?}"
    );
}

#[test]
fn every_problem_is_reported_with_its_position() {
    let text = "\
base g
  objects A B
  arrow f : A -> C
  arrow k A -> B

presheaf p on g
  size A x

bogus section
  at A 0
morphism m : p -> q
";
    let errs = parse_workspace(text).unwrap_err();
    let positions: Vec<(usize, usize)> = errs.iter().map(|e| (e.line, e.column)).collect();
    assert_eq!(
        positions,
        vec![(3, 18), (4, 11), (6, 15), (9, 1), (11, 14), (11, 19)],
        "{errs:?}"
    );
    assert!(errs[0].message.contains("unknown object `C`"));
    assert!(errs[1].message.contains("expected `:`"));
    assert!(errs[3].message.contains("unknown section"));
}

#[test]
fn undeclared_and_duplicate_names_are_rejected() {
    let dup = "presheaf p on graph\n  size V 1\n\npresheaf p on graph\n  size V 2\n";
    let errs = parse_workspace(dup).unwrap_err();
    assert_eq!((errs[0].line, errs[0].column), (4, 10));

    let late = "morphism m : p -> p\n  at V 0\n\npresheaf p on graph\n  size V 1\n";
    let errs = parse_workspace(late).unwrap_err();
    assert!(errs[0].message.contains("unknown presheaf `p`"));
}

#[test]
fn invariant_violations_are_load_errors() {
    let unnatural = format!("{GRAPH}\nmorphism bad : loop -> edge\n  at V 0\n  at E 0\n");
    let errs = parse_workspace(&unnatural).unwrap_err();
    assert_eq!(errs.len(), 1);
    assert!(errs[0].message.contains("bad"), "{errs:?}");

    let open = format!("{GRAPH}\nsub half of edge\n  at E 0\n  at V 0\n");
    let errs = parse_workspace(&open).unwrap_err();
    assert!(errs[0].message.contains("half"), "{errs:?}");

    let missing = "presheaf p on graph\n  size V 1\n  size E 1\n  act s 0\n";
    let errs = parse_workspace(missing).unwrap_err();
    assert!(errs[0].message.contains("missing `act t`"), "{errs:?}");
}

#[test]
fn composites_may_be_identities() {
    let text = "\
base retract
  objects A B
  arrow i : A -> B
  arrow r : B -> A
  arrow e : B -> B
  compose r i = id_A
  compose i r = e
  compose e e = e
  compose e i = i
  compose r e = r
";
    let ws = parse_workspace(text).unwrap();
    let printed = print_workspace(&ws);
    assert!(printed.contains("compose r i = id_A"));
    assert_eq!(parse_workspace(&printed).unwrap(), ws);
}

fn generated_workspace(seed: u64, index: u64, config: Config) -> Workspace {
    let bounds = Bounds {
        max_objects: 3,
        max_morphisms: 6,
        max_carrier: 3,
    };
    let inst = InstanceGenerator::new(seed, bounds).instance(index);
    let named = |name: &str, p: &topos_core::presheaf::Presheaf| NamedPresheaf {
        name: name.into(),
        base: "base".into(),
        presheaf: p.clone(),
    };
    let arrow = |name: &str, src: &str, dst: &str, m: &topos_core::presheaf::PresheafMorphism| {
        NamedMorphism {
            name: name.into(),
            src: src.into(),
            dst: dst.into(),
            morphism: m.clone(),
        }
    };
    Workspace {
        config,
        bases: vec![NamedBase {
            name: "base".into(),
            category: inst.base.clone(),
        }],
        presheaves: vec![
            named("a", &inst.a),
            named("b", &inst.b),
            named("c", &inst.c),
            named("d", &inst.d),
        ],
        morphisms: vec![
            arrow("f", "a", "c", &inst.f),
            arrow("g", "b", "c", &inst.g),
            arrow("h", "d", "b", &inst.h),
        ],
        subs: vec![NamedSub {
            name: "im_f".into(),
            ambient: "c".into(),
            sub: image(&inst.f),
        }],
    }
}

fn config() -> impl Strategy<Value = Config> {
    (
        proptest::option::of(any::<u64>()),
        proptest::option::of(0usize..10),
        proptest::option::of(0usize..10),
        proptest::option::of(0usize..10),
        proptest::option::of(any::<u64>()),
        proptest::option::of(0u64..1000),
    )
        .prop_map(
            |(seed, max_objects, max_morphisms, max_carrier, budget, instances)| Config {
                seed,
                max_objects,
                max_morphisms,
                max_carrier,
                budget,
                instances,
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn print_then_parse_round_trips(seed in 0u64..10_000, index in 0u64..64, config in config()) {
        let ws = generated_workspace(seed, index, config);
        let printed = print_workspace(&ws);
        let reparsed = parse_workspace(&printed).map_err(|e| TestCaseError::fail(format!("{e:?}\n{printed}")))?;
        prop_assert_eq!(&reparsed, &ws);
        prop_assert_eq!(print_workspace(&reparsed), printed);
    }
}
