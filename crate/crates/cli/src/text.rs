//! Plain-text rendering of reports.

use std::fmt::Write as _;

use topos_core::verify::Verdict;

use crate::run::{Carrier, Components, Details, Report};

fn sizes(carriers: &[Carrier]) -> String {
    carriers
        .iter()
        .map(|c| format!("{}:{}", c.object, c.size))
        .collect::<Vec<_>>()
        .join(" ")
}

fn map(components: &[Components]) -> String {
    components
        .iter()
        .map(|c| {
            format!(
                "{}[{}]",
                c.object,
                c.images
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render(report: &Report) -> String {
    let mut out = String::new();
    let c = &report.config;
    let _ = writeln!(
        out,
        "{} {}: {}",
        report.tool,
        report.version,
        report.command.join(" ")
    );
    let _ = writeln!(
        out,
        "config: seed {} objects<={} morphisms<={} carrier<={} budget {} instances {} backend {}",
        c.seed,
        c.max_objects,
        c.max_morphisms,
        c.max_carrier,
        c.budget,
        c.instances,
        c.backend.as_str()
    );
    match &report.result {
        Details::Initial {
            base,
            carriers,
            inclusion,
        } => {
            let _ = writeln!(out, "initial object over {base}: {}", sizes(carriers));
            let _ = writeln!(out, "inclusion into 1: {}", map(inclusion));
        }
        Details::Coproduct {
            left,
            right,
            carriers,
            inl,
            inr,
            native_iso,
            injections_disjoint,
        } => {
            let _ = writeln!(out, "{left} + {right}: {}", sizes(carriers));
            let _ = writeln!(out, "inl: {}", map(inl));
            let _ = writeln!(out, "inr: {}", map(inr));
            let _ = writeln!(out, "to disjoint union: {}", map(&native_iso.forward));
            let _ = writeln!(out, "from disjoint union: {}", map(&native_iso.backward));
            let _ = writeln!(out, "injections disjoint: {injections_disjoint}");
        }
        Details::Copair {
            left,
            right,
            f,
            g,
            carriers,
            copair,
            commutes,
        } => {
            let _ = writeln!(out, "[{f}, {g}] : {left} + {right} ({})", sizes(carriers));
            let _ = writeln!(out, "components: {}", map(copair));
            let _ = writeln!(out, "commutes with injections: {commutes}");
        }
        Details::Verify {
            instances,
            summary,
            results,
        } => {
            let _ = writeln!(out, "{instances} instances");
            for s in summary {
                let _ = writeln!(
                    out,
                    "{:<20} pass {:>4}  fail {:>4}  budget {:>4}",
                    s.check.as_str(),
                    s.pass,
                    s.fail,
                    s.budget_exceeded
                );
            }
            for r in results.iter().filter(|r| r.verdict != Verdict::Pass) {
                let _ = writeln!(
                    out,
                    "{} {} on {}: {}",
                    r.verdict.as_str(),
                    r.check,
                    r.instance,
                    r.witness.as_deref().unwrap_or("")
                );
            }
            if results.iter().any(|r| r.elapsed_us.is_some()) {
                let total: u64 = results.iter().filter_map(|r| r.elapsed_us).sum();
                let _ = writeln!(out, "check time: {} us", total);
            }
        }
        Details::Explain { check, statement } => {
            let _ = writeln!(out, "{check}: {statement}");
        }
        Details::Validate {
            bases,
            presheaves,
            morphisms,
            subs,
        } => {
            for (kind, names) in [
                ("bases", bases),
                ("presheaves", presheaves),
                ("morphisms", morphisms),
                ("subs", subs),
            ] {
                let _ = writeln!(out, "{kind}: {}", names.join(" "));
            }
        }
        Details::Error { error } => {
            let _ = writeln!(out, "error: {error}");
        }
    }
    let _ = writeln!(out, "status: {}", report.status.as_str());
    out
}
