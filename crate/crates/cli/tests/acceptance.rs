//! Release gate. Each test prints one `PASS` or `FAIL` line for its criterion
//! and then asserts it.

use std::collections::HashSet;
use std::io::Write;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use topos_core::derived::{binary_coproduct, copair, initial_object, IsoWitness, SubobjectJoins};
use topos_core::fincat::FinCategory;
use topos_core::lcc::{LccContext, UnnaturalPushforward};
use topos_core::presheaf::{omega, yoneda, Budget, Presheaf};
use topos_core::sublattice::SubPresheaf;
use topos_core::verify::audit::{audit_derived_source, DERIVED_SOURCE};
use topos_core::verify::corpus::{
    curated_bases, curated_instances, presheaves_up_to_iso, standard_instances,
};
use topos_core::verify::oracle::{brute_subobjects, describe};
use topos_core::verify::{native_coproduct_oracle, run_suite, Bounds, CheckId, Verdict};

/// Outcome of one criterion: a summary on success, the first problem found
/// otherwise.
type Outcome = Result<String, String>;

fn gate(number: u32, title: &str, started: Instant, outcome: Outcome) {
    let secs = started.elapsed().as_secs_f64();
    let line = match &outcome {
        Ok(summary) => format!("criterion {number} PASS {title}: {summary} ({secs:.1}s)"),
        Err(problem) => format!("criterion {number} FAIL {title}: {problem} ({secs:.1}s)"),
    };
    // Written to the raw stream so the line shows up without --nocapture.
    let _ = writeln!(std::io::stderr(), "{line}");
    if let Err(problem) = outcome {
        panic!("criterion {number} failed: {problem}");
    }
}

fn ctx() -> LccContext {
    LccContext::presheaf(Budget::default())
}

/// Every presheaf with all carriers of size at most 3, up to isomorphism.
fn corpus(base: &Arc<FinCategory>) -> Vec<Presheaf> {
    presheaves_up_to_iso(base, 3, 3 * base.object_count())
}

macro_rules! check {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn e(err: topos_core::ToposError) -> String {
    format!("error: {err}")
}

#[test]
fn criterion_1_law_suite() {
    let started = Instant::now();
    let outcome = (|| {
        let generated = 200;
        let instances = standard_instances(0, Bounds::default(), generated);
        let curated = curated_instances().len();
        check!(
            instances.len() as u64 == curated as u64 + generated,
            "expected {generated} generated instances"
        );
        let results = run_suite(&ctx(), CheckId::ALL, &instances, false);
        check!(
            results.len() == CheckId::ALL.len() * instances.len(),
            "missing results"
        );
        if let Some(bad) = results.iter().find(|r| r.verdict != Verdict::Pass) {
            return Err(format!(
                "{} on {} is {}: {}",
                bad.check,
                bad.instance,
                bad.verdict.as_str(),
                bad.witness.as_deref().unwrap_or("")
            ));
        }
        Ok(format!(
            "{} checks x {} instances ({curated} curated + {generated} generated, seed 0, bounds 2/6/3) all pass",
            CheckId::ALL.len(),
            instances.len()
        ))
    })();
    gate(1, "law suite", started, outcome);
}

#[test]
fn criterion_2_omega_cardinalities() {
    let started = Instant::now();
    let outcome = (|| {
        let pinned: [(&str, &[usize]); 3] =
            [("terminal", &[2]), ("arrow", &[2, 3]), ("graph", &[2, 5])];
        let mut seen = Vec::new();
        for (name, base) in curated_bases() {
            let om = omega(base.clone(), Budget::default()).map_err(e)?;
            // sieves on c are the subobjects of the representable y(c)
            let sieves: Vec<usize> = base
                .objects()
                .map(|c| brute_subobjects(&yoneda(base.clone(), c)).map(|s| s.len()))
                .collect::<Result<_, _>>()
                .map_err(e)?;
            check!(
                om.omega.sizes() == sieves.as_slice(),
                "{name}: Omega has {:?}, sieves give {sieves:?}",
                om.omega.sizes()
            );
            let expected = pinned
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, s)| *s)
                .ok_or("unpinned base")?;
            check!(
                sieves == expected,
                "{name}: sieve counts {sieves:?}, pinned {expected:?}"
            );
            seen.push(format!("{name} {}", describe(&om.omega)));
        }
        Ok(seen.join(", "))
    })();
    gate(2, "Omega cardinalities", started, outcome);
}

#[test]
fn criterion_3_derived_coproduct_is_native() {
    let started = Instant::now();
    let outcome = (|| {
        let ctx = ctx();
        let mut pairs = 0usize;
        let mut targets = 0usize;
        for (name, base) in curated_bases() {
            let all = corpus(&base);
            // |hom(P, X)| for every P in the corpus and every X
            let counts: Vec<Vec<usize>> = all
                .iter()
                .map(|p| {
                    all.iter()
                        .map(|x| ctx.hom_set(p, x).map(|h| h.len()))
                        .collect::<Result<_, _>>()
                })
                .collect::<Result<_, _>>()
                .map_err(e)?;
            for (i, a) in all.iter().enumerate() {
                for (j, b) in all.iter().enumerate() {
                    let at = || format!("{name} A=({}) B=({})", describe(a), describe(b));
                    let data = binary_coproduct(&ctx, a, b)
                        .map_err(|err| format!("{}: {}", at(), e(err)))?;
                    let native = native_coproduct_oracle(a, b).map_err(e)?;

                    // the case split of the derived injections over the disjoint union
                    let from_native = native.copair(&data.inl, &data.inr).map_err(e)?;
                    let iso = IsoWitness::of(&ctx, &from_native)
                        .map_err(|err| format!("{}: {}", at(), e(err)))?;
                    check!(
                        iso.backward.compose(&data.inl).map_err(e)? == native.inl
                            && iso.backward.compose(&data.inr).map_err(e)? == native.inr,
                        "{}: iso does not respect the injections",
                        at()
                    );

                    let meet = ctx.pullback(&data.inl, &data.inr).map_err(e)?;
                    check!(
                        meet.object.total_size() == 0,
                        "{}: injections meet in {}",
                        at(),
                        describe(&meet.object)
                    );
                    for x in &all {
                        check!(
                            ctx.hom_set(&meet.object, x).map_err(e)?.len() == 1,
                            "{}: injection pullback is not initial",
                            at()
                        );
                    }

                    for (k, x) in all.iter().enumerate() {
                        let homs = ctx
                            .hom_set(&data.object, x)
                            .map_err(|err| format!("{} X=({}): {}", at(), describe(x), e(err)))?;
                        check!(
                            homs.len() == counts[i][k] * counts[j][k],
                            "{}: |hom(C, X)| = {} but |hom(A, X)| x |hom(B, X)| = {} for X=({})",
                            at(),
                            homs.len(),
                            counts[i][k] * counts[j][k],
                            describe(x)
                        );
                        let mut restrictions = HashSet::with_capacity(homs.len());
                        for h in &homs {
                            let key = (
                                ctx.compose(h, &data.inl).map_err(e)?.components().to_vec(),
                                ctx.compose(h, &data.inr).map_err(e)?.components().to_vec(),
                            );
                            check!(
                                restrictions.insert(key),
                                "{}: two maps C -> ({}) agree on both summands",
                                at(),
                                describe(x)
                            );
                        }
                        targets += 1;
                    }
                    // copair inverts the restriction map
                    for x in all.iter().take(3) {
                        let fs = ctx.hom_set(a, x).map_err(e)?;
                        let gs = ctx.hom_set(b, x).map_err(e)?;
                        if let (Some(f), Some(g)) = (fs.last(), gs.last()) {
                            let h = copair(&ctx, &data, f, g).map_err(e)?;
                            check!(
                                &ctx.compose(&h, &data.inl).map_err(e)? == f
                                    && &ctx.compose(&h, &data.inr).map_err(e)? == g,
                                "{}: copair does not restrict to its arguments",
                                at()
                            );
                        }
                    }
                    pairs += 1;
                }
            }
        }
        Ok(format!("{pairs} pairs over terminal/arrow/graph with carriers <= 3, bijection checked against {targets} targets"))
    })();
    gate(3, "derived coproduct equals native", started, outcome);
}

#[test]
fn criterion_4_initial_object() {
    let started = Instant::now();
    let outcome = (|| {
        let ctx = ctx();
        let mut summary = Vec::new();
        for (name, base) in curated_bases() {
            let zero = initial_object(&ctx, &base).map_err(e)?.object;
            check!(
                zero.sizes().iter().all(|&n| n == 0),
                "{name}: 0 has carriers {}",
                describe(&zero)
            );
            let all = corpus(&base);
            let om = omega(base.clone(), Budget::default()).map_err(e)?.omega;

            for a in &all {
                let n = ctx.hom_set(&zero, a).map_err(e)?.len();
                check!(n == 1, "{name}: |hom(0, {})| = {n}", describe(a));
                for h in ctx.hom_set(a, &zero).map_err(e)? {
                    check!(
                        ctx.inverse(&h).is_some(),
                        "{name}: a map ({}) -> 0 is not invertible",
                        describe(a)
                    );
                }
            }
            let subs_brute = brute_subobjects(&zero).map_err(e)?.len();
            let subs_omega = ctx.hom_set(&zero, &om).map_err(e)?.len();
            check!(
                subs_brute == 1 && subs_omega == 1,
                "{name}: |Sub(0)| = {subs_brute} (brute), {subs_omega} (Omega)"
            );

            // the three characterizations agree on every corpus object
            let mut initial_count = 0;
            for i in &all {
                let initial = all
                    .iter()
                    .map(|a| ctx.hom_set(i, a).map(|h| h.len() == 1))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(e)?
                    .into_iter()
                    .all(|b| b);
                let mut slice_trivial = true;
                for x in &all {
                    for h in ctx.hom_set(x, i).map_err(e)? {
                        slice_trivial &= ctx.inverse(&h).is_some();
                    }
                }
                let sub_trivial = ctx.hom_set(i, &om).map_err(e)?.len() == 1;
                check!(
                    initial == slice_trivial && slice_trivial == sub_trivial,
                    "{name}: ({}) initial={initial} slice-trivial={slice_trivial} Sub-trivial={sub_trivial}",
                    describe(i)
                );
                initial_count += initial as usize;
            }
            check!(
                initial_count == 1,
                "{name}: {initial_count} initial objects in the corpus"
            );
            summary.push(format!("{name} ({} objects)", all.len()));
        }
        Ok(format!(
            "0 is empty, initial, strict, and Sub(0) = 1 against {}",
            summary.join(", ")
        ))
    })();
    gate(4, "initial object", started, outcome);
}

fn union(u: &SubPresheaf, v: &SubPresheaf) -> SubPresheaf {
    let selection = u
        .selection()
        .iter()
        .zip(v.selection())
        .map(|(x, y)| x.iter().zip(y).map(|(a, b)| *a || *b).collect())
        .collect();
    SubPresheaf::from_selection(u.ambient().clone(), selection)
        .expect("unions are restriction-closed")
}

#[test]
fn criterion_5_join_is_union() {
    let started = Instant::now();
    let outcome = (|| {
        let ctx = ctx();
        let mut pairs = 0usize;
        for (name, base) in curated_bases() {
            for a in corpus(&base) {
                let subs = brute_subobjects(&a).map_err(e)?;
                let joins = SubobjectJoins::new(&ctx, &a).map_err(e)?;
                for u in &subs {
                    for v in &subs {
                        let j = joins.join(&ctx, u, v).map_err(e)?;
                        check!(
                            j == union(u, v),
                            "{name} A=({}): join differs from union",
                            describe(&a)
                        );
                        for w in &subs {
                            let bounds =
                                ctx.sub_leq(u, w).map_err(e)? && ctx.sub_leq(v, w).map_err(e)?;
                            check!(
                                bounds == ctx.sub_leq(&j, w).map_err(e)?,
                                "{name} A=({}): join is not the least upper bound",
                                describe(&a)
                            );
                        }
                        pairs += 1;
                    }
                }
            }
        }
        Ok(format!(
            "{pairs} subobject pairs, each scanned against every W"
        ))
    })();
    gate(5, "join equals union", started, outcome);
}

#[test]
fn criterion_6_non_circularity() {
    let started = Instant::now();
    let outcome = (|| {
        let problems = audit_derived_source(DERIVED_SOURCE);
        check!(
            problems.is_empty(),
            "derived layer audit: {}",
            problems.join("; ")
        );

        let broken = LccContext::restrict(Arc::new(UnnaturalPushforward), Budget::default());
        let instances = standard_instances(0, Bounds::default(), 200);
        let checks = [
            CheckId::BcRight,
            CheckId::MonoRefl,
            CheckId::CoprodNativeIso,
        ];
        let results = run_suite(&broken, &checks, &instances, false);
        let caught: Vec<_> = results
            .iter()
            .filter(|r| {
                r.verdict == Verdict::Fail && r.witness.as_deref().is_some_and(|w| !w.is_empty())
            })
            .collect();
        check!(
            !caught.is_empty(),
            "the unnatural dependent product went unnoticed"
        );
        let mut by_check: Vec<String> = checks
            .iter()
            .map(|c| format!("{c} {}", caught.iter().filter(|r| r.check == *c).count()))
            .collect();
        by_check.sort();
        Ok(format!(
            "audit clean; broken dependent products fail [{}], first witness: {} on {}",
            by_check.join(", "),
            caught[0].check,
            caught[0].instance
        ))
    })();
    gate(6, "non-circularity", started, outcome);
}

#[test]
fn criterion_7_determinism() {
    let started = Instant::now();
    let outcome = (|| {
        let run = || {
            let out = Command::new(env!("CARGO_BIN_EXE_topos"))
                .args(["--seed", "0", "verify", "--suite", "all"])
                .output()
                .map_err(|err| err.to_string())?;
            check!(
                out.status.code() == Some(0),
                "verify exited with {:?}",
                out.status.code()
            );
            Ok(out.stdout)
        };
        let first = run()?;
        let second = run()?;
        check!(first == second, "the two reports differ");
        Ok(format!(
            "two `verify --suite all` reports are byte-identical ({} bytes)",
            first.len()
        ))
    })();
    gate(7, "determinism", started, outcome);
}
