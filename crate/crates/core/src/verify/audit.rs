//! A static audit of the derived layer's source: it may only import the
//! hypothesis-level interface and must not name pointwise constructions.

/// The source of the derived layer, as compiled into this crate.
pub const DERIVED_SOURCE: &str = include_str!("../derived.rs");

/// Paths the derived layer may import.
const ALLOWED_IMPORTS: &[&str] = &[
    "std::sync::Arc",
    "crate::error::Result",
    "crate::error::ToposError",
    "crate::fincat::FinCategory",
    "crate::lcc::LccContext",
    "crate::presheaf::Presheaf",
    "crate::presheaf::PresheafMorphism",
    "crate::presheaf::Pullback",
    "crate::presheaf::SliceObject",
    "crate::sublattice::SubPresheaf",
];

/// Identifiers that would compute an answer pointwise instead of deriving it.
const FORBIDDEN: &[&str] = &[
    "union",
    "::empty(",
    "oracle",
    "native",
    "from_selection",
    "from_elements",
    "Presheaf::new",
    "PresheafMorphism::new",
    "new_unchecked",
    ".selection(",
    ".contains(",
    ".components(",
    ".component(",
    ".apply(",
    ".act(",
    ".action(",
    ".sizes(",
    ".size(",
    "presheaf::",
    "sublattice::sub_",
    "verify::",
];

/// Expand `a::{b, c::{d, e}}` into `a::b`, `a::c::d`, `a::c::e`.
fn expand(prefix: &str, tree: &str, out: &mut Vec<String>) {
    let tree = tree.trim();
    match tree.find('{') {
        None => out.push(format!("{prefix}{tree}")),
        Some(open) => {
            let head = &tree[..open];
            let inner = &tree[open + 1..tree.rfind('}').unwrap_or(tree.len())];
            let mut depth = 0;
            let mut start = 0;
            for (i, ch) in inner.char_indices() {
                match ch {
                    '{' => depth += 1,
                    '}' => depth -= 1,
                    ',' if depth == 0 => {
                        expand(&format!("{prefix}{head}"), &inner[start..i], out);
                        start = i + 1;
                    }
                    _ => {}
                }
            }
            if !inner[start..].trim().is_empty() {
                expand(&format!("{prefix}{head}"), &inner[start..], out);
            }
        }
    }
}

/// The code outside `#[cfg(test)]`, with line comments removed.
fn library_code(source: &str) -> String {
    let code = source.split("#[cfg(test)]").next().unwrap_or(source);
    code.lines()
        .map(|l| l.split("//").next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Every imported path in `source`, fully expanded.
pub fn imports(source: &str) -> Vec<String> {
    let code = library_code(source);
    let mut out = Vec::new();
    let mut rest = code.as_str();
    while let Some(at) = rest.find("use ") {
        let at_line_start = at == 0 || rest[..at].ends_with('\n') || rest[..at].ends_with(' ');
        let tail = &rest[at + 4..];
        let end = tail.find(';').unwrap_or(tail.len());
        if at_line_start {
            let tree: String = tail[..end].chars().filter(|c| !c.is_whitespace()).collect();
            expand("", &tree, &mut out);
        }
        rest = &tail[end..];
    }
    out
}

/// Problems found in `source`, one line each. Empty when the audit passes.
pub fn audit_derived_source(source: &str) -> Vec<String> {
    let mut problems = Vec::new();
    for path in imports(source) {
        if !ALLOWED_IMPORTS.contains(&path.as_str()) {
            problems.push(format!("imports `{path}`"));
        }
    }
    let code = library_code(source);
    let body: String = code
        .lines()
        .filter(|l| !l.trim_start().starts_with("use "))
        .collect::<Vec<_>>()
        .join("\n");
    for token in FORBIDDEN {
        for (n, line) in body.lines().enumerate() {
            if line.contains(token) {
                problems.push(format!("line {}: mentions `{token}`", n + 1));
            }
        }
    }
    problems
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_layer_passes() {
        assert_eq!(audit_derived_source(DERIVED_SOURCE), Vec::<String>::new());
    }

    #[test]
    fn expands_nested_imports() {
        let got = imports("use crate::a::{B, c::{D, E}};\nuse std::sync::Arc;\n");
        assert_eq!(
            got,
            vec![
                "crate::a::B",
                "crate::a::c::D",
                "crate::a::c::E",
                "std::sync::Arc"
            ]
        );
    }

    #[test]
    fn flags_pointwise_code() {
        let src = "use crate::presheaf::hom_set;\nfn f(u: &S, v: &S) { u.union(v) }\n";
        let problems = audit_derived_source(src);
        assert!(problems.iter().any(|p| p.contains("hom_set")));
        assert!(problems.iter().any(|p| p.contains("union")));
    }
}
