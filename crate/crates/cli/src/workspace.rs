//! The workspace file format.
//!
//! A workspace is a sequence of sections. A section starts with an unindented
//! header line; its body lines are indented. `#` starts a comment. Tokens are
//! separated by whitespace.
//!
//! ```text
//! config
//!   seed 0
//!   max-carrier 3
//!
//! base graph
//!   objects V E
//!   arrow s : V -> E
//!   arrow t : V -> E
//!
//! presheaf edge on graph
//!   size V 2
//!   size E 1
//!   act s 0
//!   act t 1
//!
//! morphism collapse : edge -> edge
//!   at V 0 0
//!   at E 0
//!
//! sub ends of edge
//!   at V 0 1
//! ```
//!
//! `act m x...` lists, for each element of the carrier at the codomain of
//! `m`, its restriction along `m`. `compose g f = h` records `g . f = h` for
//! non-identity arrows; `h` may be `id_X`. Names must be declared before use.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use thiserror::Error;
use topos_core::fincat::{FinCategory, MorphismId, ObjectId};
use topos_core::presheaf::{Presheaf, PresheafMorphism};
use topos_core::sublattice::SubPresheaf;

/// Bases available without a declaration, unless a workspace base of the same
/// name shadows them.
pub fn builtin_base(name: &str) -> Option<FinCategory> {
    match name {
        "terminal" => Some(FinCategory::terminal()),
        "arrow" => Some(FinCategory::arrow()),
        "graph" => Some(FinCategory::graph()),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Check settings stored in the workspace. Unset keys fall back to the
/// command line or to defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Config {
    pub seed: Option<u64>,
    pub max_objects: Option<usize>,
    pub max_morphisms: Option<usize>,
    pub max_carrier: Option<usize>,
    pub budget: Option<u64>,
    pub instances: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedBase {
    pub name: String,
    pub category: Arc<FinCategory>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedPresheaf {
    pub name: String,
    pub base: String,
    pub presheaf: Presheaf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedMorphism {
    pub name: String,
    pub src: String,
    pub dst: String,
    pub morphism: PresheafMorphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedSub {
    pub name: String,
    pub ambient: String,
    pub sub: SubPresheaf,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Workspace {
    pub config: Config,
    pub bases: Vec<NamedBase>,
    pub presheaves: Vec<NamedPresheaf>,
    pub morphisms: Vec<NamedMorphism>,
    pub subs: Vec<NamedSub>,
}

impl Workspace {
    pub fn base(&self, name: &str) -> Option<&Arc<FinCategory>> {
        self.bases
            .iter()
            .find(|b| b.name == name)
            .map(|b| &b.category)
    }

    pub fn presheaf(&self, name: &str) -> Option<&Presheaf> {
        self.presheaves
            .iter()
            .find(|p| p.name == name)
            .map(|p| &p.presheaf)
    }

    pub fn morphism(&self, name: &str) -> Option<&PresheafMorphism> {
        self.morphisms
            .iter()
            .find(|m| m.name == name)
            .map(|m| &m.morphism)
    }

    pub fn sub(&self, name: &str) -> Option<&SubPresheaf> {
        self.subs.iter().find(|s| s.name == name).map(|s| &s.sub)
    }

    pub fn is_empty(&self) -> bool {
        *self == Workspace::default()
    }
}

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let mut column = 0;
    let mut start_column = 0;
    for (i, ch) in code.char_indices() {
        column += 1;
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &code[s..i],
                    column: start_column,
                });
            }
        } else if start.is_none() {
            start = Some(i);
            start_column = column;
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &code[s..],
            column: start_column,
        });
    }
    out
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\''))
        && !matches!(s, ":" | "->" | "=")
}

struct Parser {
    errors: Vec<ParseError>,
    ws: Workspace,
    names: HashMap<String, (usize, usize)>,
}

impl Parser {
    fn error(&mut self, line: usize, column: usize, message: impl Into<String>) {
        self.errors.push(ParseError {
            line,
            column,
            message: message.into(),
        });
    }

    /// Claim a top-level name. Bases, presheaves, morphisms and subobjects
    /// share one namespace.
    fn claim(&mut self, line: usize, tok: Token) -> bool {
        if !valid_name(tok.text) {
            self.error(line, tok.column, format!("invalid name `{}`", tok.text));
            return false;
        }
        if let Some(&(l, _)) = self.names.get(tok.text) {
            self.error(
                line,
                tok.column,
                format!("`{}` is already declared on line {l}", tok.text),
            );
            return false;
        }
        self.names.insert(tok.text.to_string(), (line, tok.column));
        true
    }
}

/// The section whose body is being read.
enum Section<'a> {
    None,
    Config,
    Base(BaseDraft<'a>),
    Presheaf(PresheafDraft),
    Morphism(MorphismDraft),
    Sub(SubDraft),
    /// A header that failed to parse; its body is skipped.
    Broken,
}

struct BaseDraft<'a> {
    name: &'a str,
    line: usize,
    objects: Vec<String>,
    arrows: Vec<(String, ObjectId, ObjectId)>,
    composites: HashMap<(usize, usize), usize>,
    builder: topos_core::fincat::CategoryBuilder,
    valid: bool,
}

struct PresheafDraft {
    name: String,
    base_name: String,
    base: Arc<FinCategory>,
    line: usize,
    sizes: Vec<Option<usize>>,
    acts: Vec<Option<(Vec<usize>, usize)>>,
    valid: bool,
}

struct MorphismDraft {
    name: String,
    src_name: String,
    dst_name: String,
    src: Presheaf,
    dst: Presheaf,
    line: usize,
    components: Vec<Option<Vec<usize>>>,
    valid: bool,
}

struct SubDraft {
    name: String,
    ambient_name: String,
    ambient: Presheaf,
    line: usize,
    elements: Vec<Option<Vec<usize>>>,
    valid: bool,
}

fn parse_number<T: std::str::FromStr>(p: &mut Parser, line: usize, tok: Token) -> Option<T> {
    match tok.text.parse() {
        Ok(v) => Some(v),
        Err(_) => {
            p.error(
                line,
                tok.column,
                format!("expected a non-negative integer, found `{}`", tok.text),
            );
            None
        }
    }
}

/// Match a line against a usage pattern such as `arrow NAME : SOURCE -> TARGET`.
/// Uppercase words stand for any token; the others must appear literally.
/// Reports the first mismatch.
fn shape(p: &mut Parser, line: usize, toks: &[Token], usage: &str, eol: usize) -> bool {
    let pattern: Vec<&str> = usage.split_whitespace().collect();
    for (i, want) in pattern.iter().enumerate() {
        let placeholder = want.chars().all(|c| c.is_ascii_uppercase());
        match toks.get(i) {
            None => {
                p.error(line, eol, format!("expected `{usage}`"));
                return false;
            }
            Some(t) if !placeholder && t.text != *want => {
                p.error(
                    line,
                    t.column,
                    format!("expected `{want}`, found `{}` in `{usage}`", t.text),
                );
                return false;
            }
            Some(_) => {}
        }
    }
    if let Some(t) = toks.get(pattern.len()) {
        p.error(
            line,
            t.column,
            format!("unexpected `{}` after `{usage}`", t.text),
        );
        return false;
    }
    true
}

fn end_column(raw: &str) -> usize {
    raw.split('#')
        .next()
        .unwrap_or("")
        .trim_end()
        .chars()
        .count()
        + 1
}

/// Parse and validate a workspace. Either every declaration is valid or the
/// full list of problems is returned.
pub fn parse_workspace(text: &str) -> Result<Workspace, Vec<ParseError>> {
    let mut p = Parser {
        errors: Vec::new(),
        ws: Workspace::default(),
        names: HashMap::new(),
    };
    let mut section = Section::None;
    let lines: Vec<&str> = text.lines().collect();
    for (i, raw) in lines.iter().enumerate() {
        let line = i + 1;
        let toks = tokenize(raw);
        if toks.is_empty() {
            continue;
        }
        let indented = raw.starts_with(char::is_whitespace);
        if !indented {
            finish(&mut p, std::mem::replace(&mut section, Section::None));
            section = header(&mut p, line, &toks, end_column(raw));
        } else {
            body(&mut p, &mut section, line, &toks, end_column(raw));
        }
    }
    finish(&mut p, section);
    if p.errors.is_empty() {
        Ok(p.ws)
    } else {
        p.errors.sort_by_key(|e| (e.line, e.column));
        Err(p.errors)
    }
}

fn header<'a>(p: &mut Parser, line: usize, toks: &[Token<'a>], eol: usize) -> Section<'a> {
    match toks[0].text {
        "config" => {
            if shape(p, line, toks, "config", eol) {
                Section::Config
            } else {
                Section::Broken
            }
        }
        "base" => {
            if !shape(p, line, toks, "base NAME", eol) || !p.claim(line, toks[1]) {
                return Section::Broken;
            }
            Section::Base(BaseDraft {
                name: toks[1].text,
                line,
                objects: Vec::new(),
                arrows: Vec::new(),
                composites: HashMap::new(),
                builder: FinCategory::builder(),
                valid: true,
            })
        }
        "presheaf" => {
            if !shape(p, line, toks, "presheaf NAME on BASE", eol) {
                return Section::Broken;
            }
            let Some(base) =
                p.ws.base(toks[3].text)
                    .cloned()
                    .or_else(|| builtin_base(toks[3].text).map(Arc::new))
            else {
                p.error(
                    line,
                    toks[3].column,
                    format!("unknown base `{}`", toks[3].text),
                );
                return Section::Broken;
            };
            if !p.claim(line, toks[1]) {
                return Section::Broken;
            }
            Section::Presheaf(PresheafDraft {
                name: toks[1].text.to_string(),
                base_name: toks[3].text.to_string(),
                sizes: vec![None; base.object_count()],
                acts: vec![None; base.morphism_count()],
                base,
                line,
                valid: true,
            })
        }
        "morphism" => {
            if !shape(p, line, toks, "morphism NAME : SOURCE -> TARGET", eol) {
                return Section::Broken;
            }
            let lookup = |p: &mut Parser, t: Token| {
                let found = p.ws.presheaf(t.text).cloned();
                if found.is_none() {
                    p.error(line, t.column, format!("unknown presheaf `{}`", t.text));
                }
                found
            };
            let (Some(src), Some(dst)) = (lookup(p, toks[3]), lookup(p, toks[5])) else {
                return Section::Broken;
            };
            if !src.same_base(&dst) {
                p.error(
                    line,
                    toks[5].column,
                    "source and target live over different bases",
                );
                return Section::Broken;
            }
            if !p.claim(line, toks[1]) {
                return Section::Broken;
            }
            let n = src.base().object_count();
            Section::Morphism(MorphismDraft {
                name: toks[1].text.to_string(),
                src_name: toks[3].text.to_string(),
                dst_name: toks[5].text.to_string(),
                src,
                dst,
                line,
                components: vec![None; n],
                valid: true,
            })
        }
        "sub" => {
            if !shape(p, line, toks, "sub NAME of PRESHEAF", eol) {
                return Section::Broken;
            }
            let Some(ambient) = p.ws.presheaf(toks[3].text).cloned() else {
                p.error(
                    line,
                    toks[3].column,
                    format!("unknown presheaf `{}`", toks[3].text),
                );
                return Section::Broken;
            };
            if !p.claim(line, toks[1]) {
                return Section::Broken;
            }
            let n = ambient.base().object_count();
            Section::Sub(SubDraft {
                name: toks[1].text.to_string(),
                ambient_name: toks[3].text.to_string(),
                ambient,
                line,
                elements: vec![None; n],
                valid: true,
            })
        }
        other => {
            p.error(
                line,
                toks[0].column,
                format!(
                    "unknown section `{other}`; expected base, presheaf, morphism, sub or config"
                ),
            );
            Section::Broken
        }
    }
}

fn object_of(p: &mut Parser, base: &FinCategory, line: usize, tok: Token) -> Option<ObjectId> {
    let found = base.object_by_name(tok.text);
    if found.is_none() {
        p.error(line, tok.column, format!("unknown object `{}`", tok.text));
    }
    found
}

/// Elements listed after the first two tokens, each below `bound`.
fn elements(
    p: &mut Parser,
    line: usize,
    toks: &[Token],
    bound: usize,
    what: &str,
) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(toks.len());
    let mut ok = true;
    for &t in toks {
        match parse_number::<usize>(p, line, t) {
            Some(x) if x < bound => out.push(x),
            Some(x) => {
                p.error(
                    line,
                    t.column,
                    format!("element {x} is out of range: {what} has {bound} elements"),
                );
                ok = false;
            }
            None => ok = false,
        }
    }
    ok.then_some(out)
}

fn body(p: &mut Parser, section: &mut Section, line: usize, toks: &[Token], eol: usize) {
    let key = toks[0];
    match section {
        Section::Broken => {}
        Section::None => p.error(line, key.column, "indented line outside of a section"),
        Section::Config => {
            if toks.len() != 2 {
                p.error(
                    line,
                    toks.get(2).map_or(eol, |t| t.column),
                    format!("expected `{} VALUE`", key.text),
                );
                return;
            }
            let value = toks[1];
            let cfg = &mut p.ws.config;
            let slot_taken = match key.text {
                "seed" => cfg.seed.is_some(),
                "max-objects" => cfg.max_objects.is_some(),
                "max-morphisms" => cfg.max_morphisms.is_some(),
                "max-carrier" => cfg.max_carrier.is_some(),
                "budget" => cfg.budget.is_some(),
                "instances" => cfg.instances.is_some(),
                other => {
                    p.error(line, key.column, format!("unknown config key `{other}`"));
                    return;
                }
            };
            if slot_taken {
                p.error(line, key.column, format!("`{}` is set twice", key.text));
                return;
            }
            match key.text {
                "seed" => p.ws.config.seed = parse_number(p, line, value),
                "max-objects" => p.ws.config.max_objects = parse_number(p, line, value),
                "max-morphisms" => p.ws.config.max_morphisms = parse_number(p, line, value),
                "max-carrier" => p.ws.config.max_carrier = parse_number(p, line, value),
                "budget" => p.ws.config.budget = parse_number(p, line, value),
                _ => p.ws.config.instances = parse_number(p, line, value),
            }
        }
        Section::Base(d) => base_line(p, d, line, toks, eol),
        Section::Presheaf(d) => {
            let base = d.base.clone();
            match key.text {
                "size" => {
                    if toks.len() != 3 {
                        p.error(
                            line,
                            toks.get(3).map_or(eol, |t| t.column),
                            "expected `size OBJECT N`",
                        );
                        d.valid = false;
                        return;
                    }
                    let (Some(c), Some(n)) = (
                        object_of(p, &base, line, toks[1]),
                        parse_number(p, line, toks[2]),
                    ) else {
                        d.valid = false;
                        return;
                    };
                    if d.sizes[c.0].is_some() {
                        p.error(
                            line,
                            toks[1].column,
                            format!("size of `{}` is given twice", toks[1].text),
                        );
                        d.valid = false;
                    }
                    d.sizes[c.0] = Some(n);
                }
                "act" => {
                    let Some(t) = toks.get(1) else {
                        p.error(line, eol, "expected `act ARROW x...`");
                        d.valid = false;
                        return;
                    };
                    let Some(m) = base
                        .morphism_by_name(t.text)
                        .filter(|&m| !base.is_identity(m))
                    else {
                        p.error(line, t.column, format!("unknown arrow `{}`", t.text));
                        d.valid = false;
                        return;
                    };
                    if d.acts[m.0].is_some() {
                        p.error(
                            line,
                            t.column,
                            format!("action of `{}` is given twice", t.text),
                        );
                        d.valid = false;
                        return;
                    }
                    // Bounds are checked once all sizes are known.
                    let mut vals = Vec::new();
                    for &tok in &toks[2..] {
                        match parse_number::<usize>(p, line, tok) {
                            Some(x) => vals.push(x),
                            None => d.valid = false,
                        }
                    }
                    d.acts[m.0] = Some((vals, line));
                }
                other => {
                    p.error(
                        line,
                        key.column,
                        format!("unknown presheaf entry `{other}`; expected size or act"),
                    );
                    d.valid = false;
                }
            }
        }
        Section::Morphism(d) => {
            let base = d.src.base_arc().clone();
            let Some(c) = at_line(p, &base, line, toks, eol) else {
                d.valid = false;
                return;
            };
            if d.components[c.0].is_some() {
                p.error(
                    line,
                    toks[1].column,
                    format!("component at `{}` is given twice", toks[1].text),
                );
                d.valid = false;
                return;
            }
            if toks.len() - 2 != d.src.size(c) {
                p.error(
                    line,
                    toks[1].column,
                    format!(
                        "component at `{}` needs {} entries, found {}",
                        toks[1].text,
                        d.src.size(c),
                        toks.len() - 2
                    ),
                );
                d.valid = false;
                return;
            }
            let bound = d.dst.size(c);
            match elements(
                p,
                line,
                &toks[2..],
                bound,
                &format!("the target at `{}`", toks[1].text),
            ) {
                Some(v) => d.components[c.0] = Some(v),
                None => d.valid = false,
            }
        }
        Section::Sub(d) => {
            let base = d.ambient.base_arc().clone();
            let Some(c) = at_line(p, &base, line, toks, eol) else {
                d.valid = false;
                return;
            };
            if d.elements[c.0].is_some() {
                p.error(
                    line,
                    toks[1].column,
                    format!("elements at `{}` are given twice", toks[1].text),
                );
                d.valid = false;
                return;
            }
            let bound = d.ambient.size(c);
            match elements(
                p,
                line,
                &toks[2..],
                bound,
                &format!("the carrier at `{}`", toks[1].text),
            ) {
                Some(v) => d.elements[c.0] = Some(v),
                None => d.valid = false,
            }
        }
    }
}

fn at_line(
    p: &mut Parser,
    base: &FinCategory,
    line: usize,
    toks: &[Token],
    eol: usize,
) -> Option<ObjectId> {
    if toks[0].text != "at" {
        p.error(
            line,
            toks[0].column,
            format!(
                "unknown entry `{}`; expected `at OBJECT x...`",
                toks[0].text
            ),
        );
        return None;
    }
    let Some(&t) = toks.get(1) else {
        p.error(line, eol, "expected `at OBJECT x...`");
        return None;
    };
    object_of(p, base, line, t)
}

fn base_line(p: &mut Parser, d: &mut BaseDraft, line: usize, toks: &[Token], eol: usize) {
    let key = toks[0];
    match key.text {
        "objects" | "object" => {
            if toks.len() < 2 {
                p.error(line, eol, "expected `objects NAME...`");
                d.valid = false;
            }
            for &t in &toks[1..] {
                if !valid_name(t.text) {
                    p.error(line, t.column, format!("invalid name `{}`", t.text));
                    d.valid = false;
                } else if d.objects.iter().any(|o| o == t.text) {
                    p.error(
                        line,
                        t.column,
                        format!("object `{}` is declared twice", t.text),
                    );
                    d.valid = false;
                } else if !d.arrows.is_empty() {
                    p.error(line, t.column, "objects must be declared before arrows");
                    d.valid = false;
                } else {
                    d.objects.push(t.text.to_string());
                    d.builder.object(t.text);
                }
            }
        }
        "arrow" => {
            if !shape(p, line, toks, "arrow NAME : SOURCE -> TARGET", eol) {
                d.valid = false;
                return;
            }
            let name = toks[1];
            if !valid_name(name.text) || name.text.starts_with("id_") {
                p.error(
                    line,
                    name.column,
                    format!("invalid arrow name `{}`", name.text),
                );
                d.valid = false;
                return;
            }
            if d.arrows.iter().any(|a| a.0 == name.text) {
                p.error(
                    line,
                    name.column,
                    format!("arrow `{}` is declared twice", name.text),
                );
                d.valid = false;
                return;
            }
            let find = |t: Token| d.objects.iter().position(|o| o == t.text).map(ObjectId);
            let (src, dst) = (find(toks[3]), find(toks[5]));
            for (found, t) in [(src, toks[3]), (dst, toks[5])] {
                if found.is_none() {
                    p.error(line, t.column, format!("unknown object `{}`", t.text));
                    d.valid = false;
                }
            }
            if let (Some(s), Some(t)) = (src, dst) {
                d.arrows.push((name.text.to_string(), s, t));
                d.builder.morphism(name.text, s, t);
            }
        }
        "compose" => {
            if !shape(p, line, toks, "compose G F = H", eol) {
                d.valid = false;
                return;
            }
            let arrow = |t: Token| d.arrows.iter().position(|a| a.0 == t.text);
            let (g, f) = (arrow(toks[1]), arrow(toks[2]));
            for (found, t) in [(g, toks[1]), (f, toks[2])] {
                if found.is_none() {
                    let msg = if t.text.starts_with("id_") {
                        "composites with identities are implicit".to_string()
                    } else {
                        format!("unknown arrow `{}`", t.text)
                    };
                    p.error(line, t.column, msg);
                    d.valid = false;
                }
            }
            let (Some(g), Some(f)) = (g, f) else { return };
            if d.composites.insert((g, f), line).is_some() {
                p.error(
                    line,
                    toks[1].column,
                    format!(
                        "composite {} . {} is given twice",
                        toks[1].text, toks[2].text
                    ),
                );
                d.valid = false;
                return;
            }
            let h = toks[4];
            if let Some(obj) = h
                .text
                .strip_prefix("id_")
                .filter(|o| d.objects.iter().any(|x| x == o))
            {
                let f_src = &d.objects[d.arrows[f].1 .0];
                if obj != f_src {
                    p.error(
                        line,
                        h.column,
                        format!(
                            "{} . {} would start at `{f_src}`, not `{obj}`",
                            toks[1].text, toks[2].text
                        ),
                    );
                    d.valid = false;
                    return;
                }
                d.builder.compose_to_identity(g, f);
            } else if let Some(h_idx) = arrow(h) {
                d.builder.compose(g, f, h_idx);
            } else {
                p.error(line, h.column, format!("unknown arrow `{}`", h.text));
                d.valid = false;
            }
        }
        other => {
            p.error(
                line,
                key.column,
                format!("unknown base entry `{other}`; expected objects, arrow or compose"),
            );
            d.valid = false;
        }
    }
}

fn finish(p: &mut Parser, section: Section) {
    match section {
        Section::None | Section::Config | Section::Broken => {}
        Section::Base(d) => {
            if !d.valid {
                return;
            }
            if d.objects.is_empty() {
                p.error(d.line, 1, format!("base `{}` has no objects", d.name));
                return;
            }
            match d.builder.build() {
                Ok(c) => p.ws.bases.push(NamedBase {
                    name: d.name.to_string(),
                    category: Arc::new(c),
                }),
                Err(report) => {
                    let raw = d.builder.build_unchecked();
                    for v in &report.violations {
                        p.error(
                            d.line,
                            1,
                            format!("base `{}`: {}", d.name, v.describe(&raw)),
                        );
                    }
                }
            }
        }
        Section::Presheaf(d) => {
            if !d.valid {
                return;
            }
            let base = &d.base;
            let sizes: Vec<usize> = d.sizes.iter().map(|s| s.unwrap_or(0)).collect();
            let mut action = Vec::with_capacity(base.morphism_count());
            let mut ok = true;
            for m in base.morphisms() {
                let need = sizes[base.dst(m).0];
                let bound = sizes[base.src(m).0];
                if base.is_identity(m) {
                    action.push((0..need).collect());
                    continue;
                }
                let name = base.morphism_name(m);
                match &d.acts[m.0] {
                    None if need == 0 => action.push(Vec::new()),
                    None => {
                        p.error(
                            d.line,
                            1,
                            format!("presheaf `{}`: missing `act {name}`", d.name),
                        );
                        ok = false;
                    }
                    Some((vals, line)) => {
                        if vals.len() != need {
                            p.error(
                                *line,
                                1,
                                format!("`act {name}` needs {need} entries, found {}", vals.len()),
                            );
                            ok = false;
                        } else if let Some(&x) = vals.iter().find(|&&x| x >= bound) {
                            let obj = base.object_name(base.src(m));
                            p.error(
                                *line,
                                1,
                                format!(
                                    "element {x} is out of range: `{obj}` has {bound} elements"
                                ),
                            );
                            ok = false;
                        } else {
                            action.push(vals.clone());
                        }
                    }
                }
            }
            if !ok {
                return;
            }
            match Presheaf::new(base.clone(), sizes, action) {
                Ok(presheaf) => p.ws.presheaves.push(NamedPresheaf {
                    name: d.name,
                    base: d.base_name,
                    presheaf,
                }),
                Err(e) => p.error(d.line, 1, format!("presheaf `{}`: {e}", d.name)),
            }
        }
        Section::Morphism(d) => {
            if !d.valid {
                return;
            }
            let base = d.src.base_arc().clone();
            let mut comps = Vec::with_capacity(base.object_count());
            for c in base.objects() {
                match &d.components[c.0] {
                    Some(v) => comps.push(v.clone()),
                    None if d.src.size(c) == 0 => comps.push(Vec::new()),
                    None => {
                        p.error(
                            d.line,
                            1,
                            format!(
                                "morphism `{}`: missing `at {}`",
                                d.name,
                                base.object_name(c)
                            ),
                        );
                        return;
                    }
                }
            }
            match PresheafMorphism::new(d.src, d.dst, comps) {
                Ok(morphism) => p.ws.morphisms.push(NamedMorphism {
                    name: d.name,
                    src: d.src_name,
                    dst: d.dst_name,
                    morphism,
                }),
                Err(e) => p.error(d.line, 1, format!("morphism `{}`: {e}", d.name)),
            }
        }
        Section::Sub(d) => {
            if !d.valid {
                return;
            }
            let elements: Vec<Vec<usize>> = d
                .elements
                .into_iter()
                .map(Option::unwrap_or_default)
                .collect();
            match SubPresheaf::from_elements(d.ambient, &elements) {
                Ok(sub) => p.ws.subs.push(NamedSub {
                    name: d.name,
                    ambient: d.ambient_name,
                    sub,
                }),
                Err(e) => p.error(d.line, 1, format!("sub `{}`: {e}", d.name)),
            }
        }
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn line(out: &mut String, words: &str) {
    out.push_str(words.trim_end());
    out.push('\n');
}

/// The canonical text of a workspace. Parsing it gives back an equal
/// workspace.
pub fn print_workspace(ws: &Workspace) -> String {
    let mut out = String::new();
    let mut first = true;
    let mut gap = |out: &mut String| {
        if !first {
            out.push('\n');
        }
        first = false;
    };
    let c = &ws.config;
    if *c != Config::default() {
        gap(&mut out);
        line(&mut out, "config");
        let entries: [(&str, Option<String>); 6] = [
            ("seed", c.seed.map(|v| v.to_string())),
            ("max-objects", c.max_objects.map(|v| v.to_string())),
            ("max-morphisms", c.max_morphisms.map(|v| v.to_string())),
            ("max-carrier", c.max_carrier.map(|v| v.to_string())),
            ("budget", c.budget.map(|v| v.to_string())),
            ("instances", c.instances.map(|v| v.to_string())),
        ];
        for (k, v) in entries {
            if let Some(v) = v {
                line(&mut out, &format!("  {k} {v}"));
            }
        }
    }
    for b in &ws.bases {
        gap(&mut out);
        let cat = &b.category;
        line(&mut out, &format!("base {}", b.name));
        line(
            &mut out,
            &format!(
                "  objects {}",
                join(cat.objects().map(|o| cat.object_name(o)))
            ),
        );
        let arrows: Vec<MorphismId> = cat.morphisms().filter(|&m| !cat.is_identity(m)).collect();
        for &m in &arrows {
            let _ = writeln!(
                out,
                "  arrow {} : {} -> {}",
                cat.morphism_name(m),
                cat.object_name(cat.src(m)),
                cat.object_name(cat.dst(m))
            );
        }
        for &g in &arrows {
            for &f in &arrows {
                if let Some(h) = cat.compose(g, f) {
                    let _ = writeln!(
                        out,
                        "  compose {} {} = {}",
                        cat.morphism_name(g),
                        cat.morphism_name(f),
                        cat.morphism_name(h)
                    );
                }
            }
        }
    }
    for p in &ws.presheaves {
        gap(&mut out);
        let base = p.presheaf.base();
        line(&mut out, &format!("presheaf {} on {}", p.name, p.base));
        for c in base.objects() {
            line(
                &mut out,
                &format!("  size {} {}", base.object_name(c), p.presheaf.size(c)),
            );
        }
        for m in base.morphisms().filter(|&m| !base.is_identity(m)) {
            line(
                &mut out,
                &format!(
                    "  act {} {}",
                    base.morphism_name(m),
                    join(p.presheaf.action(m))
                ),
            );
        }
    }
    for m in &ws.morphisms {
        gap(&mut out);
        let base = m.morphism.src().base();
        line(
            &mut out,
            &format!("morphism {} : {} -> {}", m.name, m.src, m.dst),
        );
        for c in base.objects() {
            line(
                &mut out,
                &format!(
                    "  at {} {}",
                    base.object_name(c),
                    join(m.morphism.component(c))
                ),
            );
        }
    }
    for s in &ws.subs {
        gap(&mut out);
        let base = s.sub.ambient().base();
        line(&mut out, &format!("sub {} of {}", s.name, s.ambient));
        for c in base.objects() {
            line(
                &mut out,
                &format!("  at {} {}", base.object_name(c), join(s.sub.elements(c))),
            );
        }
    }
    out
}
