//! The law catalog: each check states a property that holds in every finite
//! presheaf topos and tests it on concrete instances through an
//! [`LccContext`].

pub mod audit;
mod checks;
pub mod corpus;
pub mod generate;
pub mod oracle;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::lcc::LccContext;

pub use generate::{Bounds, Instance, InstanceGenerator};
pub use oracle::{native_coproduct_oracle, NativeCoproduct};

macro_rules! catalog {
    ($($variant:ident => $name:literal, $statement:literal;)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum CheckId {
            $($variant,)*
        }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(CheckId::$variant => $name,)*
                }
            }

            /// The property the check tests, in one paragraph.
            pub fn statement(self) -> &'static str {
                match self {
                    $(CheckId::$variant => $statement,)*
                }
            }
        }
    };
}

catalog! {
    BcLeft => "BC_left",
        "For a pullback square P = A x_C B with f: A -> C and g: B -> C, and x over B, the canonical map p1_! p2^* x -> f^* g_! x is an isomorphism over A.";
    BcRight => "BC_right",
        "For the same square, the mate f^* g_* x -> p1_* p2^* x, obtained by transposing p2^*(counit) across p1^* -| p1_*, is an isomorphism.";
    ExpPullback => "EXP_PULLBACK",
        "Pulling back along f: A -> C commutes with exponentials in the slice: f^*(y^x) -> (f^*y)^(f^*x), computed as the Beck-Chevalley map followed by the dependent product of the reassociation isomorphism, is invertible.";
    MonoPbTrivial => "MONO_PB_TRIVIAL",
        "For a monomorphism m: U -> A and any f: B -> U, the square with sides id_B, f, m . f and m is a pullback.";
    MonoCorefl => "MONO_COREFL",
        "For a monomorphism m, the unit x -> m^* m_! x of m_! -| m^* is an isomorphism.";
    MonoRefl => "MONO_REFL",
        "For a monomorphism m, the counit m^* m_* x -> x of m^* -| m_* is an isomorphism.";
    SubtermEquiv => "SUBTERM_EQUIV",
        "Subterminal objects with maps in both directions are isomorphic: all such maps are mutually inverse.";
    SectionMono => "SECTION_MONO",
        "If e . m = id then m is a monomorphism.";
    IscontrSubterm => "ISCONTR_SUBTERM",
        "isContr(A) = A_!(pi_* delta_A) is subterminal.";
    IscontrTerm => "ISCONTR_TERM",
        "isContr(A) is the maximal subobject of 1 exactly when A is terminal.";
    IscontrPb => "ISCONTR_PB",
        "For objects A and B, pulling isContr(A) back to B gives isContr of B x A -> B in Sub(B).";
    OmegaUTerminal => "OMEGA_U_TERMINAL",
        "The domain of tt: U -> Omega is terminal, and maps A -> Omega correspond bijectively to subobjects of A via pullback of tt.";
    NotRetract => "NOT_RETRACT",
        "If e . m = id with m: A -> B, then forall_e U <= m^* U for every U in Sub(B).";
    SubJoinLaws => "SUB_JOIN_LAWS",
        "forall_{pi_1} pi_2^* tt is the least subobject and the implication formula computes least upper bounds; both agree with the pointwise empty set and union.";
    InitialEquiv => "INITIAL_EQUIV",
        "For an object I the following agree: I is initial, every object over I is terminal in the slice, Sub(I) has one element. The derived 0 satisfies all three.";
    DisjEmb => "DISJ_EMB",
        "The partial map classifier A-bar = tt_*(A -> 1) receives monomorphisms from A and from 1 whose pullback is initial, with the expected carrier sizes.";
    CoverContr => "COVER_CONTR",
        "If U v V = 1 in Sub(1) and A becomes terminal over U and over V, then A is terminal.";
    CoprodUniv => "COPROD_UNIV",
        "The derived coproduct C of A and B induces a bijection hom(C, X) -> hom(A, X) x hom(B, X), and copair finds the unique preimage.";
    CoprodNativeIso => "COPROD_NATIVE_ISO",
        "The derived coproduct is isomorphic to the pointwise disjoint union, compatibly with the injections.";
    Descent => "DESCENT",
        "For x over A + B, the coproduct of the restrictions to A and B maps isomorphically onto x, and hom-sets over A + B are products of hom-sets over A and over B.";
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckId::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown check id `{s}`"))
    }
}

impl Serialize for CheckId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    BudgetExceeded,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::BudgetExceeded => "budget-exceeded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: CheckId,
    pub instance: String,
    pub verdict: Verdict,
    /// What went wrong, for failures and budget overruns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_us: Option<u64>,
}

fn evaluate(ctx: &LccContext, check: CheckId, inst: &Instance, timings: bool) -> CheckResult {
    let start = Instant::now();
    let outcome = checks::run(ctx, check, inst);
    let elapsed_us = timings.then(|| start.elapsed().as_micros() as u64);
    let (verdict, witness) = match outcome {
        Ok(None) => (Verdict::Pass, None),
        Ok(Some(w)) => (Verdict::Fail, Some(w)),
        Err(e) if e.is_budget() => (Verdict::BudgetExceeded, Some(e.to_string())),
        Err(e) => (Verdict::Fail, Some(format!("error: {e}"))),
    };
    CheckResult {
        check,
        instance: inst.id.clone(),
        verdict,
        witness,
        elapsed_us,
    }
}

/// One result per instance, in instance order.
pub fn run_check(
    ctx: &LccContext,
    check: CheckId,
    instances: &[Instance],
    timings: bool,
) -> Vec<CheckResult> {
    instances
        .par_iter()
        .map(|inst| evaluate(ctx, check, inst, timings))
        .collect()
}

/// Every requested check on every instance, sorted by check id and then by
/// position in `instances`.
pub fn run_suite(
    ctx: &LccContext,
    checks: &[CheckId],
    instances: &[Instance],
    timings: bool,
) -> Vec<CheckResult> {
    let mut ids: Vec<CheckId> = checks.to_vec();
    ids.sort_by_key(|c| c.as_str());
    ids.dedup();
    let jobs: Vec<(usize, usize)> = (0..ids.len())
        .flat_map(|c| (0..instances.len()).map(move |i| (c, i)))
        .collect();
    let mut results: Vec<((usize, usize), CheckResult)> = jobs
        .par_iter()
        .map(|&(c, i)| ((c, i), evaluate(ctx, ids[c], &instances[i], timings)))
        .collect();
    results.sort_by_key(|(k, _)| *k);
    results.into_iter().map(|(_, r)| r).collect()
}

/// `fail` if anything failed, otherwise `budget-exceeded` if anything ran out
/// of budget, otherwise `pass`.
pub fn aggregate(results: &[CheckResult]) -> Verdict {
    if results.iter().any(|r| r.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if results.iter().any(|r| r.verdict == Verdict::BudgetExceeded) {
        Verdict::BudgetExceeded
    } else {
        Verdict::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_ids_round_trip() {
        assert_eq!(CheckId::ALL.len(), 20);
        for &c in CheckId::ALL {
            assert_eq!(c.as_str().parse::<CheckId>().unwrap(), c);
        }
        assert!("NOPE".parse::<CheckId>().is_err());
    }

    #[test]
    fn aggregate_prefers_failure() {
        let r = |verdict| CheckResult {
            check: CheckId::BcLeft,
            instance: "i".into(),
            verdict,
            witness: None,
            elapsed_us: None,
        };
        assert_eq!(
            aggregate(&[r(Verdict::Pass), r(Verdict::BudgetExceeded)]),
            Verdict::BudgetExceeded
        );
        assert_eq!(
            aggregate(&[r(Verdict::Fail), r(Verdict::BudgetExceeded)]),
            Verdict::Fail
        );
        assert_eq!(aggregate(&[]), Verdict::Pass);
    }
}
