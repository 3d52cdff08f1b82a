//! Finite categories given by explicit composition tables, functors between
//! them, and the category of elements of a presheaf.
//!
//! Objects and morphisms are addressed by dense ids. Identities are always
//! allocated first (one per object, in object order), so `MorphismId(c)` is
//! the identity on `ObjectId(c)` for categories built through
//! [`CategoryBuilder`].

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::presheaf::Presheaf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ObjectId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MorphismId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismInfo {
    pub name: String,
    pub src: ObjectId,
    pub dst: ObjectId,
}

const UNDEFINED: u32 = u32::MAX;

/// A finite category. Composition is a dense `|mor| x |mor|` table where
/// entry `(g, f)` holds `g . f`, or a sentinel when the pair is not
/// composable.
#[derive(Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<MorphismInfo>,
    identity: Vec<MorphismId>,
    compose: Vec<u32>,
    into: Vec<Vec<MorphismId>>,
    out_of: Vec<Vec<MorphismId>>,
    hom: Vec<Vec<MorphismId>>,
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("objects", &self.objects)
            .field("morphisms", &self.morphisms.len())
            .finish()
    }
}

impl FinCategory {
    /// Assemble a category from raw parts without checking any axiom.
    ///
    /// `compose[g][f]` is `Some(g . f)` or `None`. Use [`validate_category`]
    /// to find out whether the result is actually a category.
    pub fn from_parts(
        objects: Vec<String>,
        morphisms: Vec<MorphismInfo>,
        identity: Vec<MorphismId>,
        compose: Vec<Vec<Option<MorphismId>>>,
    ) -> Self {
        let n = morphisms.len();
        let mut table = vec![UNDEFINED; n * n];
        for (g, row) in compose.iter().enumerate().take(n) {
            for (f, entry) in row.iter().enumerate().take(n) {
                if let Some(h) = entry {
                    table[g * n + f] = h.0 as u32;
                }
            }
        }
        let no = objects.len();
        let mut into = vec![Vec::new(); no];
        let mut out_of = vec![Vec::new(); no];
        let mut hom = vec![Vec::new(); no * no];
        for (i, m) in morphisms.iter().enumerate() {
            if m.src.0 < no && m.dst.0 < no {
                into[m.dst.0].push(MorphismId(i));
                out_of[m.src.0].push(MorphismId(i));
                hom[m.src.0 * no + m.dst.0].push(MorphismId(i));
            }
        }
        FinCategory {
            objects,
            morphisms,
            identity,
            compose: table,
            into,
            out_of,
            hom,
        }
    }

    pub fn builder() -> CategoryBuilder {
        CategoryBuilder::default()
    }

    /// One object, one morphism.
    pub fn terminal() -> Self {
        let mut b = Self::builder();
        b.object("*");
        b.build().expect("terminal category")
    }

    /// Two objects `a`, `b` and a single arrow `u: a -> b`.
    pub fn arrow() -> Self {
        let mut b = Self::builder();
        let a = b.object("a");
        let bb = b.object("b");
        b.morphism("u", a, bb);
        b.build().expect("arrow category")
    }

    /// The base whose presheaves are directed multigraphs: objects `V`, `E`
    /// and two arrows `s, t: V -> E` (acting as source and target).
    pub fn graph() -> Self {
        let mut b = Self::builder();
        let v = b.object("V");
        let e = b.object("E");
        b.morphism("s", v, e);
        b.morphism("t", v, e);
        b.build().expect("graph base")
    }

    pub fn discrete(n: usize) -> Self {
        let mut b = Self::builder();
        for i in 0..n {
            b.object(&format!("o{i}"));
        }
        b.build().expect("discrete category")
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectId> + '_ {
        (0..self.objects.len()).map(ObjectId)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = MorphismId> + '_ {
        (0..self.morphisms.len()).map(MorphismId)
    }

    pub fn object_name(&self, c: ObjectId) -> &str {
        &self.objects[c.0]
    }

    pub fn morphism_name(&self, m: MorphismId) -> &str {
        &self.morphisms[m.0].name
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjectId> {
        self.objects.iter().position(|o| o == name).map(ObjectId)
    }

    pub fn morphism_by_name(&self, name: &str) -> Option<MorphismId> {
        self.morphisms
            .iter()
            .position(|m| m.name == name)
            .map(MorphismId)
    }

    pub fn info(&self, m: MorphismId) -> &MorphismInfo {
        &self.morphisms[m.0]
    }

    pub fn src(&self, m: MorphismId) -> ObjectId {
        self.morphisms[m.0].src
    }

    pub fn dst(&self, m: MorphismId) -> ObjectId {
        self.morphisms[m.0].dst
    }

    pub fn identity(&self, c: ObjectId) -> MorphismId {
        self.identity[c.0]
    }

    pub fn is_identity(&self, m: MorphismId) -> bool {
        self.identity.get(self.src(m).0) == Some(&m)
    }

    /// `g . f`, if defined.
    pub fn compose(&self, g: MorphismId, f: MorphismId) -> Option<MorphismId> {
        let n = self.morphisms.len();
        match self.compose[g.0 * n + f.0] {
            UNDEFINED => None,
            h => Some(MorphismId(h as usize)),
        }
    }

    /// `g . f` for a pair known to be composable.
    pub(crate) fn comp(&self, g: MorphismId, f: MorphismId) -> MorphismId {
        let n = self.morphisms.len();
        MorphismId(self.compose[g.0 * n + f.0] as usize)
    }

    /// Morphisms with codomain `c`, in id order.
    pub fn arrows_into(&self, c: ObjectId) -> &[MorphismId] {
        &self.into[c.0]
    }

    /// Morphisms with domain `c`, in id order.
    pub fn arrows_out_of(&self, c: ObjectId) -> &[MorphismId] {
        &self.out_of[c.0]
    }

    /// `hom(d, c)` in id order.
    pub fn hom(&self, d: ObjectId, c: ObjectId) -> &[MorphismId] {
        &self.hom[d.0 * self.objects.len() + c.0]
    }

    pub fn validate(&self) -> ValidationReport {
        validate_category(self)
    }
}

/// A violated category axiom together with the morphisms witnessing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MalformedTable {
        expected: usize,
        found: usize,
    },
    DanglingObject {
        morphism: MorphismId,
    },
    IdentityEndpoints {
        object: ObjectId,
        morphism: MorphismId,
    },
    MissingIdentity {
        object: ObjectId,
    },
    UndefinedComposite {
        g: MorphismId,
        f: MorphismId,
    },
    SpuriousComposite {
        g: MorphismId,
        f: MorphismId,
    },
    CompositeEndpoints {
        g: MorphismId,
        f: MorphismId,
        composite: MorphismId,
    },
    LeftIdentity {
        f: MorphismId,
    },
    RightIdentity {
        f: MorphismId,
    },
    Associativity {
        h: MorphismId,
        g: MorphismId,
        f: MorphismId,
    },
}

impl Violation {
    /// Human-readable form using the category's morphism names.
    pub fn describe(&self, c: &FinCategory) -> String {
        let m = |x: &MorphismId| {
            c.morphisms
                .get(x.0)
                .map(|i| i.name.clone())
                .unwrap_or_else(|| format!("#{}", x.0))
        };
        let o = |x: &ObjectId| {
            c.objects
                .get(x.0)
                .cloned()
                .unwrap_or_else(|| format!("#{}", x.0))
        };
        match self {
            Violation::MalformedTable { expected, found } => {
                format!("composition table has {found} entries, expected {expected}")
            }
            Violation::DanglingObject { morphism } => {
                format!("morphism {} refers to an unknown object", m(morphism))
            }
            Violation::IdentityEndpoints { object, morphism } => {
                format!(
                    "identity {} of {} is not an endomorphism of {}",
                    m(morphism),
                    o(object),
                    o(object)
                )
            }
            Violation::MissingIdentity { object } => {
                format!("object {} has no identity", o(object))
            }
            Violation::UndefinedComposite { g, f } => {
                format!("composite {} . {} is missing", m(g), m(f))
            }
            Violation::SpuriousComposite { g, f } => {
                format!(
                    "composite {} . {} is defined but the pair is not composable",
                    m(g),
                    m(f)
                )
            }
            Violation::CompositeEndpoints { g, f, composite } => format!(
                "composite {} . {} = {} has the wrong domain or codomain",
                m(g),
                m(f),
                m(composite)
            ),
            Violation::LeftIdentity { f } => {
                format!("identity law fails: id . {} != {}", m(f), m(f))
            }
            Violation::RightIdentity { f } => {
                format!("identity law fails: {} . id != {}", m(f), m(f))
            }
            Violation::Associativity { h, g, f } => format!(
                "associativity fails for ({}, {}, {}): {} . ({} . {}) != ({} . {}) . {}",
                m(h),
                m(g),
                m(f),
                m(h),
                m(g),
                m(f),
                m(h),
                m(g),
                m(f)
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check every category axiom. Violations are returned as data; the report is
/// empty iff `c` is a category.
pub fn validate_category(c: &FinCategory) -> ValidationReport {
    let mut out = Vec::new();
    let n = c.morphisms.len();
    let no = c.objects.len();
    if c.compose.len() != n * n {
        out.push(Violation::MalformedTable {
            expected: n * n,
            found: c.compose.len(),
        });
        return ValidationReport { violations: out };
    }
    let mut sane = true;
    for (i, m) in c.morphisms.iter().enumerate() {
        if m.src.0 >= no || m.dst.0 >= no {
            out.push(Violation::DanglingObject {
                morphism: MorphismId(i),
            });
            sane = false;
        }
    }
    for o in 0..no {
        match c.identity.get(o) {
            None => {
                out.push(Violation::MissingIdentity {
                    object: ObjectId(o),
                });
                sane = false;
            }
            Some(&id) if id.0 >= n => {
                out.push(Violation::MissingIdentity {
                    object: ObjectId(o),
                });
                sane = false;
            }
            Some(&id) => {
                let info = &c.morphisms[id.0];
                if info.src.0 != o || info.dst.0 != o {
                    out.push(Violation::IdentityEndpoints {
                        object: ObjectId(o),
                        morphism: id,
                    });
                }
            }
        }
    }
    if !sane {
        return ValidationReport { violations: out };
    }

    let mut total = true;
    for g in 0..n {
        for f in 0..n {
            let (gm, fm) = (MorphismId(g), MorphismId(f));
            let composable = c.dst(fm) == c.src(gm);
            match c.compose(gm, fm) {
                None if composable => {
                    out.push(Violation::UndefinedComposite { g: gm, f: fm });
                    total = false;
                }
                Some(_) if !composable => out.push(Violation::SpuriousComposite { g: gm, f: fm }),
                Some(h) if h.0 >= n || c.src(h) != c.src(fm) || c.dst(h) != c.dst(gm) => {
                    out.push(Violation::CompositeEndpoints {
                        g: gm,
                        f: fm,
                        composite: h,
                    });
                    total = false;
                }
                _ => {}
            }
        }
    }

    for f in c.morphisms() {
        let left = c.identity[c.dst(f).0];
        if c.compose(left, f) != Some(f) {
            out.push(Violation::LeftIdentity { f });
        }
        let right = c.identity[c.src(f).0];
        if c.compose(f, right) != Some(f) {
            out.push(Violation::RightIdentity { f });
        }
    }

    if total {
        for f in c.morphisms() {
            for &g in c.arrows_out_of(c.dst(f)) {
                for &h in c.arrows_out_of(c.dst(g)) {
                    let gf = c.comp(g, f);
                    let hg = c.comp(h, g);
                    if c.comp(h, gf) != c.comp(hg, f) {
                        out.push(Violation::Associativity { h, g, f });
                    }
                }
            }
        }
    }
    ValidationReport { violations: out }
}

/// Incremental construction of a category. Identities and their composites
/// are generated; every composable pair of non-identity morphisms must be
/// given with [`CategoryBuilder::compose`].
#[derive(Clone, Debug, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    arrows: Vec<(String, ObjectId, ObjectId)>,
    /// `(g, f, h)` with `h = None` meaning the identity on the domain of `f`.
    composites: Vec<(usize, usize, Option<usize>)>,
}

impl CategoryBuilder {
    pub fn object(&mut self, name: &str) -> ObjectId {
        self.objects.push(name.to_string());
        ObjectId(self.objects.len() - 1)
    }

    /// Declare a non-identity morphism. The returned id is final: identities
    /// occupy the first `object_count` ids.
    pub fn morphism(&mut self, name: &str, src: ObjectId, dst: ObjectId) -> usize {
        self.arrows.push((name.to_string(), src, dst));
        self.arrows.len() - 1
    }

    /// Record `g . f = h`, all three given as handles from [`Self::morphism`].
    pub fn compose(&mut self, g: usize, f: usize, h: usize) {
        self.composites.push((g, f, Some(h)));
    }

    /// Record that `g . f` is the identity on the domain of `f`.
    pub fn compose_to_identity(&mut self, g: usize, f: usize) {
        self.composites.push((g, f, None));
    }

    pub fn build(&self) -> Result<FinCategory, ValidationReport> {
        let raw = self.build_unchecked();
        let report = validate_category(&raw);
        if report.is_valid() {
            Ok(raw)
        } else {
            Err(report)
        }
    }

    pub fn build_unchecked(&self) -> FinCategory {
        let no = self.objects.len();
        let mut morphisms: Vec<MorphismInfo> = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| MorphismInfo {
                name: format!("id_{o}"),
                src: ObjectId(i),
                dst: ObjectId(i),
            })
            .collect();
        morphisms.extend(self.arrows.iter().map(|(name, s, d)| MorphismInfo {
            name: name.clone(),
            src: *s,
            dst: *d,
        }));
        let n = morphisms.len();
        let mut table = vec![vec![None; n]; n];
        for (f, info) in morphisms.iter().enumerate() {
            if info.src.0 < no && info.dst.0 < no {
                table[info.dst.0][f] = Some(MorphismId(f));
                table[f][info.src.0] = Some(MorphismId(f));
            }
        }
        let arrows = self.arrows.len();
        for &(g, f, h) in &self.composites {
            if g >= arrows || f >= arrows {
                continue;
            }
            match h {
                Some(h) if h < arrows => table[g + no][f + no] = Some(MorphismId(h + no)),
                None => table[g + no][f + no] = Some(MorphismId(self.arrows[f].1 .0)),
                _ => {}
            }
        }
        let identity = (0..no).map(MorphismId).collect();
        FinCategory::from_parts(self.objects.clone(), morphisms, identity, table)
    }
}

/// A functor between finite categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFunctor {
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    pub object_map: Vec<ObjectId>,
    pub morphism_map: Vec<MorphismId>,
}

impl FinFunctor {
    /// Every failure of the functor laws, as messages naming the witnesses.
    pub fn validate(&self) -> Vec<String> {
        let (s, t) = (&*self.source, &*self.target);
        let mut out = Vec::new();
        if self.object_map.len() != s.object_count()
            || self.morphism_map.len() != s.morphism_count()
        {
            out.push("object or morphism map has the wrong length".to_string());
            return out;
        }
        for m in s.morphisms() {
            let fm = self.morphism_map[m.0];
            if t.src(fm) != self.object_map[s.src(m).0] || t.dst(fm) != self.object_map[s.dst(m).0]
            {
                out.push(format!(
                    "{} is not sent to a morphism between the image objects",
                    s.morphism_name(m)
                ));
            }
        }
        for c in s.objects() {
            if self.morphism_map[s.identity(c).0] != t.identity(self.object_map[c.0]) {
                out.push(format!("identity of {} is not preserved", s.object_name(c)));
            }
        }
        for f in s.morphisms() {
            for &g in s.arrows_out_of(s.dst(f)) {
                let lhs = self.morphism_map[s.comp(g, f).0];
                let rhs = t.compose(self.morphism_map[g.0], self.morphism_map[f.0]);
                if Some(lhs) != rhs {
                    out.push(format!(
                        "composite {} . {} is not preserved",
                        s.morphism_name(g),
                        s.morphism_name(f)
                    ));
                }
            }
        }
        out
    }

    pub fn is_surjective_on_objects(&self) -> bool {
        let mut hit = vec![false; self.target.object_count()];
        for o in &self.object_map {
            hit[o.0] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

/// The category of elements of `p` together with its projection to the base.
///
/// Objects are pairs `(c, x)` with `x` in `p(c)`, ordered by `(c, x)`. For
/// each base morphism `phi: c -> c'` and each `x'` in `p(c')` there is one
/// morphism `(c, x'.phi) -> (c', x')`, ordered by `(phi, x')`.
pub fn category_of_elements(p: &Presheaf) -> (FinCategory, FinFunctor) {
    let base = p.base();
    let mut objects = Vec::new();
    let mut object_index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut object_map = Vec::new();
    for c in base.objects() {
        for x in 0..p.size(c) {
            object_index.insert((c.0, x), objects.len());
            objects.push(format!("{}:{}", base.object_name(c), x));
            object_map.push(c);
        }
    }
    let mut morphisms = Vec::new();
    let mut morphism_index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut morphism_map = Vec::new();
    for phi in base.morphisms() {
        let (c, c2) = (base.src(phi), base.dst(phi));
        for x2 in 0..p.size(c2) {
            let x = p.act(phi, x2);
            morphism_index.insert((phi.0, x2), morphisms.len());
            morphisms.push(MorphismInfo {
                name: format!("{}@{}", base.morphism_name(phi), x2),
                src: ObjectId(object_index[&(c.0, x)]),
                dst: ObjectId(object_index[&(c2.0, x2)]),
            });
            morphism_map.push(phi);
        }
    }
    let identity = base
        .objects()
        .flat_map(|c| (0..p.size(c)).map(move |x| (c, x)))
        .map(|(c, x)| MorphismId(morphism_index[&(base.identity(c).0, x)]))
        .collect();
    let n = morphisms.len();
    let mut table = vec![vec![None; n]; n];
    for phi in base.morphisms() {
        for x2 in 0..p.size(base.dst(phi)) {
            let f = morphism_index[&(phi.0, x2)];
            for &psi in base.arrows_out_of(base.dst(phi)) {
                for x3 in 0..p.size(base.dst(psi)) {
                    if p.act(psi, x3) == x2 {
                        let g = morphism_index[&(psi.0, x3)];
                        let h = morphism_index[&(base.comp(psi, phi).0, x3)];
                        table[g][f] = Some(MorphismId(h));
                    }
                }
            }
        }
    }
    let elements = FinCategory::from_parts(objects, morphisms, identity, table);
    let elements_arc = Arc::new(elements.clone());
    let projection = FinFunctor {
        source: elements_arc,
        target: p.base_arc().clone(),
        object_map,
        morphism_map,
    };
    (elements, projection)
}
