//! Command dispatch and the report document.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;
use topos_core::derived::{binary_coproduct, copair, initial_object, IsoWitness};
use topos_core::fincat::FinCategory;
use topos_core::lcc::{
    LccContext, PresheafTopos, ToposBackend, UnnaturalHoms, UnnaturalPushforward,
};
use topos_core::presheaf::{Budget, Presheaf, PresheafMorphism};
use topos_core::verify::corpus::standard_instances;
use topos_core::verify::{
    aggregate, native_coproduct_oracle, run_suite, Bounds, CheckId, CheckResult, Verdict,
};
use topos_core::ToposError;

use crate::workspace::{builtin_base, Config, ParseError, Workspace};

pub const TOOL: &str = "topos";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_INSTANCES: u64 = 200;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{}", render_parse_errors(.0))]
    Parse(Vec<ParseError>),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn render_parse_errors(errors: &[ParseError]) -> String {
    errors
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    #[default]
    Presheaf,
    /// Dependent products that ignore naturality. For negative controls.
    UnnaturalPushforward,
    /// Hom-sets that include non-natural families. For negative controls.
    UnnaturalHoms,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Presheaf => "presheaf",
            Backend::UnnaturalPushforward => "unnatural-pushforward",
            Backend::UnnaturalHoms => "unnatural-homs",
        }
    }

    pub fn context(self, budget: Budget) -> LccContext {
        let backend: Arc<dyn ToposBackend> = match self {
            Backend::Presheaf => Arc::new(PresheafTopos),
            Backend::UnnaturalPushforward => Arc::new(UnnaturalPushforward),
            Backend::UnnaturalHoms => Arc::new(UnnaturalHoms),
        };
        LccContext::restrict(backend, budget)
    }
}

/// Settings given on the command line. They take precedence over the
/// workspace `config` section.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub max_objects: Option<usize>,
    pub max_morphisms: Option<usize>,
    pub max_carrier: Option<usize>,
    pub budget: Option<u64>,
    pub instances: Option<u64>,
    pub backend: Option<Backend>,
    pub timings: bool,
}

/// The effective configuration, echoed in every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Settings {
    pub seed: u64,
    pub max_objects: usize,
    pub max_morphisms: usize,
    pub max_carrier: usize,
    pub budget: u64,
    pub instances: u64,
    pub backend: Backend,
    #[serde(skip)]
    pub timings: bool,
}

impl Settings {
    pub fn resolve(flags: &Overrides, config: &Config) -> Self {
        let bounds = Bounds::default();
        Settings {
            seed: flags.seed.or(config.seed).unwrap_or(DEFAULT_SEED),
            max_objects: flags
                .max_objects
                .or(config.max_objects)
                .unwrap_or(bounds.max_objects),
            max_morphisms: flags
                .max_morphisms
                .or(config.max_morphisms)
                .unwrap_or(bounds.max_morphisms),
            max_carrier: flags
                .max_carrier
                .or(config.max_carrier)
                .unwrap_or(bounds.max_carrier),
            budget: flags
                .budget
                .or(config.budget)
                .unwrap_or(Budget::default().limit),
            instances: flags
                .instances
                .or(config.instances)
                .unwrap_or(DEFAULT_INSTANCES),
            backend: flags.backend.unwrap_or_default(),
            timings: flags.timings,
        }
    }

    pub fn bounds(&self) -> Bounds {
        Bounds {
            max_objects: self.max_objects,
            max_morphisms: self.max_morphisms,
            max_carrier: self.max_carrier,
        }
    }

    pub fn context(&self) -> LccContext {
        self.backend.context(Budget::new(self.budget))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    DeriveInitial {
        base: String,
    },
    DeriveCoproduct {
        a: String,
        b: String,
    },
    DeriveCopair {
        a: String,
        b: String,
        f: String,
        g: String,
    },
    /// `all`, or a list of check ids.
    Verify {
        suite: Vec<String>,
    },
    Explain {
        check: String,
    },
    Validate,
}

impl Command {
    pub fn words(&self) -> Vec<String> {
        match self {
            Command::DeriveInitial { base } => vec!["derive-initial".into(), base.clone()],
            Command::DeriveCoproduct { a, b } => {
                vec!["derive-coproduct".into(), a.clone(), b.clone()]
            }
            Command::DeriveCopair { a, b, f, g } => {
                vec![
                    "derive-copair".into(),
                    a.clone(),
                    b.clone(),
                    f.clone(),
                    g.clone(),
                ]
            }
            Command::Verify { suite } => {
                let mut w = vec!["verify".to_string(), "--suite".to_string()];
                w.extend(suite.iter().cloned());
                w
            }
            Command::Explain { check } => vec!["explain".into(), check.clone()],
            Command::Validate => vec!["validate".into()],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    BudgetExceeded,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::BudgetExceeded => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::BudgetExceeded => "budget-exceeded",
        }
    }
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Fail => Status::Fail,
            Verdict::BudgetExceeded => Status::BudgetExceeded,
        }
    }
}

/// Exit code for input errors.
pub const EXIT_INPUT: i32 = 3;

/// Carrier size of a presheaf at one object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Carrier {
    pub object: String,
    pub size: usize,
}

/// A morphism as its components, one entry per base object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Components {
    pub object: String,
    pub images: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub forward: Vec<Components>,
    pub backward: Vec<Components>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Details {
    Initial {
        base: String,
        carriers: Vec<Carrier>,
        /// Inclusion into the terminal presheaf.
        inclusion: Vec<Components>,
    },
    Coproduct {
        left: String,
        right: String,
        carriers: Vec<Carrier>,
        inl: Vec<Components>,
        inr: Vec<Components>,
        /// An isomorphism to the pointwise disjoint union, compatible with
        /// both injections.
        native_iso: IsoReport,
        injections_disjoint: bool,
    },
    Copair {
        left: String,
        right: String,
        f: String,
        g: String,
        carriers: Vec<Carrier>,
        copair: Vec<Components>,
        commutes: bool,
    },
    Verify {
        instances: usize,
        summary: Vec<CheckSummary>,
        results: Vec<CheckResult>,
    },
    Explain {
        check: CheckId,
        statement: &'static str,
    },
    Validate {
        bases: Vec<String>,
        presheaves: Vec<String>,
        morphisms: Vec<String>,
        subs: Vec<String>,
    },
    Error {
        error: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub check: CheckId,
    pub pass: usize,
    pub fail: usize,
    pub budget_exceeded: usize,
}

/// The document every command produces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub config: Settings,
    pub status: Status,
    pub result: Details,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        crate::text::render(self)
    }
}

fn carriers(p: &Presheaf) -> Vec<Carrier> {
    let base = p.base();
    base.objects()
        .map(|c| Carrier {
            object: base.object_name(c).to_string(),
            size: p.size(c),
        })
        .collect()
}

fn components(f: &PresheafMorphism) -> Vec<Components> {
    let base = f.src().base();
    base.objects()
        .map(|c| Components {
            object: base.object_name(c).to_string(),
            images: f.component(c).to_vec(),
        })
        .collect()
}

fn lookup_base(ws: &Workspace, name: &str) -> Result<Arc<FinCategory>, InputError> {
    ws.base(name)
        .cloned()
        .or_else(|| builtin_base(name).map(Arc::new))
        .ok_or_else(|| InputError::Unknown {
            kind: "base",
            name: name.to_string(),
        })
}

fn lookup_presheaf<'a>(ws: &'a Workspace, name: &str) -> Result<&'a Presheaf, InputError> {
    ws.presheaf(name).ok_or_else(|| InputError::Unknown {
        kind: "presheaf",
        name: name.to_string(),
    })
}

fn lookup_morphism<'a>(ws: &'a Workspace, name: &str) -> Result<&'a PresheafMorphism, InputError> {
    ws.morphism(name).ok_or_else(|| InputError::Unknown {
        kind: "morphism",
        name: name.to_string(),
    })
}

/// A failed derivation: budget overruns keep their own status.
fn derivation_error(e: ToposError) -> (Status, Details) {
    let status = if e.is_budget() {
        Status::BudgetExceeded
    } else {
        Status::Fail
    };
    (
        status,
        Details::Error {
            error: e.to_string(),
        },
    )
}

fn parse_suite(suite: &[String]) -> Result<Vec<CheckId>, InputError> {
    if suite.is_empty() {
        return Err(InputError::Invalid(
            "`--suite` needs `all` or at least one check id".into(),
        ));
    }
    if suite.iter().any(|s| s == "all") {
        if suite.len() > 1 {
            return Err(InputError::Invalid(
                "`all` cannot be combined with check ids".into(),
            ));
        }
        return Ok(CheckId::ALL.to_vec());
    }
    suite
        .iter()
        .map(|s| s.parse::<CheckId>().map_err(InputError::Invalid))
        .collect()
}

fn summarize(checks: &[CheckId], results: &[CheckResult]) -> Vec<CheckSummary> {
    let mut ids = checks.to_vec();
    ids.sort_by_key(|c| c.as_str());
    ids.dedup();
    ids.into_iter()
        .map(|check| {
            let of = |v: Verdict| {
                results
                    .iter()
                    .filter(|r| r.check == check && r.verdict == v)
                    .count()
            };
            CheckSummary {
                check,
                pass: of(Verdict::Pass),
                fail: of(Verdict::Fail),
                budget_exceeded: of(Verdict::BudgetExceeded),
            }
        })
        .collect()
}

fn derive_coproduct(
    ctx: &LccContext,
    a: &Presheaf,
    b: &Presheaf,
    names: (&str, &str),
) -> (Status, Details) {
    let data = match binary_coproduct(ctx, a, b) {
        Ok(d) => d,
        Err(e) => return derivation_error(e),
    };
    let native = match native_coproduct_oracle(a, b) {
        Ok(n) => n,
        Err(e) => return derivation_error(e),
    };
    // The case split of the derived injections over the disjoint union; its
    // inverse restricts to the native injections.
    let from_native = native.copair(&data.inl, &data.inr);
    let iso = match from_native.and_then(|h| IsoWitness::of(ctx, &h)) {
        Ok(w) => IsoWitness {
            forward: w.backward,
            backward: w.forward,
        },
        Err(e) => return derivation_error(e),
    };
    let details = Details::Coproduct {
        left: names.0.to_string(),
        right: names.1.to_string(),
        carriers: carriers(&data.object),
        inl: components(&data.inl),
        inr: components(&data.inr),
        native_iso: IsoReport {
            forward: components(&iso.forward),
            backward: components(&iso.backward),
        },
        injections_disjoint: data.disjointness.pullback.object.is_empty(),
    };
    (Status::Pass, details)
}

/// Run one command against a loaded workspace. Input errors (unknown names,
/// mismatched declarations) are returned as `Err`; everything else becomes a
/// report.
pub fn run(command: &Command, ws: &Workspace, settings: &Settings) -> Result<Report, InputError> {
    let ctx = settings.context();
    let (status, result) = match command {
        Command::DeriveInitial { base } => {
            let cat = lookup_base(ws, base)?;
            match initial_object(&ctx, &cat) {
                Ok(init) => (
                    Status::Pass,
                    Details::Initial {
                        base: base.clone(),
                        carriers: carriers(&init.object),
                        inclusion: components(&init.inclusion),
                    },
                ),
                Err(e) => derivation_error(e),
            }
        }
        Command::DeriveCoproduct { a, b } => {
            let (pa, pb) = (lookup_presheaf(ws, a)?, lookup_presheaf(ws, b)?);
            if !pa.same_base(pb) {
                return Err(InputError::Invalid(format!(
                    "`{a}` and `{b}` live over different bases"
                )));
            }
            derive_coproduct(&ctx, pa, pb, (a, b))
        }
        Command::DeriveCopair { a, b, f, g } => {
            let (pa, pb) = (lookup_presheaf(ws, a)?, lookup_presheaf(ws, b)?);
            let (mf, mg) = (lookup_morphism(ws, f)?, lookup_morphism(ws, g)?);
            if mf.src() != pa || mg.src() != pb {
                return Err(InputError::Invalid(format!(
                    "expected `{f}` out of `{a}` and `{g}` out of `{b}`"
                )));
            }
            if mf.dst() != mg.dst() {
                return Err(InputError::Invalid(format!(
                    "`{f}` and `{g}` have different targets"
                )));
            }
            let outcome = binary_coproduct(&ctx, pa, pb).and_then(|data| {
                let h = copair(&ctx, &data, mf, mg)?;
                let commutes =
                    &ctx.compose(&h, &data.inl)? == mf && &ctx.compose(&h, &data.inr)? == mg;
                Ok((data, h, commutes))
            });
            match outcome {
                Ok((data, h, commutes)) => (
                    if commutes { Status::Pass } else { Status::Fail },
                    Details::Copair {
                        left: a.clone(),
                        right: b.clone(),
                        f: f.clone(),
                        g: g.clone(),
                        carriers: carriers(&data.object),
                        copair: components(&h),
                        commutes,
                    },
                ),
                Err(e) => derivation_error(e),
            }
        }
        Command::Verify { suite } => {
            let checks = parse_suite(suite)?;
            let instances =
                standard_instances(settings.seed, settings.bounds(), settings.instances);
            let results = run_suite(&ctx, &checks, &instances, settings.timings);
            (
                aggregate(&results).into(),
                Details::Verify {
                    instances: instances.len(),
                    summary: summarize(&checks, &results),
                    results,
                },
            )
        }
        Command::Explain { check } => {
            let id: CheckId = check.parse().map_err(InputError::Invalid)?;
            (
                Status::Pass,
                Details::Explain {
                    check: id,
                    statement: id.statement(),
                },
            )
        }
        Command::Validate => (
            Status::Pass,
            Details::Validate {
                bases: ws.bases.iter().map(|b| b.name.clone()).collect(),
                presheaves: ws.presheaves.iter().map(|p| p.name.clone()).collect(),
                morphisms: ws.morphisms.iter().map(|m| m.name.clone()).collect(),
                subs: ws.subs.iter().map(|s| s.name.clone()).collect(),
            },
        ),
    };
    Ok(Report {
        tool: TOOL,
        version: VERSION,
        command: command.words(),
        config: settings.clone(),
        status,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workspace::parse_workspace;

    const GRAPHS: &str = "\
presheaf edge on graph
  size V 2
  size E 1
  act s 0
  act t 1

presheaf node on graph
  size V 1
";

    fn graphs() -> Workspace {
        let text = format!(
            "base graph\n  objects V E\n  arrow s : V -> E\n  arrow t : V -> E\n\n{GRAPHS}"
        );
        parse_workspace(&text).unwrap()
    }

    fn settings() -> Settings {
        Settings::resolve(&Overrides::default(), &Config::default())
    }

    #[test]
    fn flags_override_workspace_config() {
        let config = Config {
            seed: Some(5),
            budget: Some(10),
            ..Config::default()
        };
        let flags = Overrides {
            seed: Some(9),
            ..Overrides::default()
        };
        let s = Settings::resolve(&flags, &config);
        assert_eq!((s.seed, s.budget, s.instances), (9, 10, DEFAULT_INSTANCES));
        assert_eq!(s.bounds(), Bounds::default());
    }

    #[test]
    fn coproduct_of_an_edge_and_a_node() {
        let report = run(
            &Command::DeriveCoproduct {
                a: "edge".into(),
                b: "node".into(),
            },
            &graphs(),
            &settings(),
        )
        .unwrap();
        assert_eq!(report.status, Status::Pass);
        let Details::Coproduct {
            carriers,
            injections_disjoint,
            native_iso,
            ..
        } = &report.result
        else {
            panic!("{report:?}")
        };
        assert_eq!(
            carriers.iter().map(|c| c.size).collect::<Vec<_>>(),
            vec![3, 1]
        );
        assert!(injections_disjoint);
        assert_eq!(native_iso.forward.len(), 2);
    }

    #[test]
    fn initial_object_over_the_terminal_base_is_empty() {
        let report = run(
            &Command::DeriveInitial {
                base: "terminal".into(),
            },
            &Workspace::default(),
            &settings(),
        )
        .unwrap();
        let Details::Initial { carriers, .. } = &report.result else {
            panic!()
        };
        assert_eq!(
            carriers,
            &vec![Carrier {
                object: "*".into(),
                size: 0
            }]
        );
    }

    #[test]
    fn unknown_names_are_input_errors() {
        let err = run(
            &Command::DeriveInitial {
                base: "nope".into(),
            },
            &Workspace::default(),
            &settings(),
        )
        .unwrap_err();
        assert_eq!(err.to_string(), "unknown base `nope`");
        let err = run(
            &Command::Explain {
                check: "NOPE".into(),
            },
            &Workspace::default(),
            &settings(),
        )
        .unwrap_err();
        assert!(matches!(err, InputError::Invalid(_)));
        let err = run(
            &Command::Verify {
                suite: vec!["all".into(), "BC_left".into()],
            },
            &Workspace::default(),
            &settings(),
        )
        .unwrap_err();
        assert!(matches!(err, InputError::Invalid(_)));
    }

    #[test]
    fn budget_overruns_get_their_own_status() {
        let mut s = settings();
        s.budget = 3;
        let report = run(
            &Command::DeriveCoproduct {
                a: "edge".into(),
                b: "node".into(),
            },
            &graphs(),
            &s,
        )
        .unwrap();
        assert_eq!(report.status, Status::BudgetExceeded);
        assert_eq!(report.exit_code(), 2);
    }

    #[test]
    fn report_keys_come_in_a_fixed_order() {
        let report = run(
            &Command::Explain {
                check: "DESCENT".into(),
            },
            &Workspace::default(),
            &settings(),
        )
        .unwrap();
        let json = report.to_json();
        let at = |k: &str| json.find(&format!("\"{k}\"")).unwrap();
        assert!(at("tool") < at("version") && at("version") < at("command"));
        assert!(
            at("command") < at("config")
                && at("config") < at("status")
                && at("status") < at("result")
        );
    }
}
