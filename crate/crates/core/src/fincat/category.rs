use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::ids::{MorId, ObjId};

/// A finite category given by total tables.
///
/// Identities are explicit morphisms named `1_<obj>`; the composition table
/// is expected to be defined exactly on composable pairs `(g, f)` with
/// `tgt f = src g`, and `compose(g, f)` looks up `g ∘ f`.  All laws are
/// decidable and [`FinCategory::validate`] checks them by exhaustive scan.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinCategory {
    objects: Vec<ObjId>,
    morphisms: BTreeMap<MorId, (ObjId, ObjId)>,
    identities: BTreeMap<ObjId, MorId>,
    comp: BTreeMap<(MorId, MorId), MorId>,
}

/// Errors raised while assembling a category from parts.
///
/// The builder only enforces referential integrity; the categorical laws are
/// the business of [`FinCategory::validate`], so that deliberately broken
/// tables can exist in memory for testing and reporting.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CategoryBuildError {
    #[error("duplicate object `{0}`")]
    DuplicateObject(ObjId),
    #[error("duplicate morphism `{0}`")]
    DuplicateMorphism(MorId),
    #[error("morphism `{mor}` refers to unknown object `{obj}`")]
    UnknownObject { mor: MorId, obj: ObjId },
    #[error("morphism name `{0}` is reserved for identities")]
    ReservedName(MorId),
    #[error("composite entry ({g} ∘ {f}) refers to unknown morphism `{missing}`")]
    UnknownMorphism { g: MorId, f: MorId, missing: MorId },
    #[error("composite entry ({g} ∘ {f}) duplicates an earlier entry")]
    DuplicateComposite { g: MorId, f: MorId },
    #[error("composite entry ({g} ∘ {f}) involves an identity; identity composites are implicit")]
    IdentityComposite { g: MorId, f: MorId },
}

/// A single law violation found when validating a category.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CategoryViolation {
    #[error("composable pair ({g} ∘ {f}) has no composite")]
    MissingComposite { g: MorId, f: MorId },
    #[error("pair ({g} ∘ {f}) is not composable but has a composite")]
    SpuriousComposite { g: MorId, f: MorId },
    #[error("composite {g} ∘ {f} = {result} has the wrong boundary (expected {src} → {tgt})")]
    CompositeTyping {
        g: MorId,
        f: MorId,
        result: MorId,
        src: ObjId,
        tgt: ObjId,
    },
    #[error("left unit law fails: 1 ∘ {f} = {got}")]
    LeftUnit { f: MorId, got: MorId },
    #[error("right unit law fails: {g} ∘ 1 = {got}")]
    RightUnit { g: MorId, got: MorId },
    #[error("associativity fails on ({h} ∘ {g}) ∘ {f}: {left} ≠ {right}")]
    Associativity {
        h: MorId,
        g: MorId,
        f: MorId,
        left: MorId,
        right: MorId,
    },
}

/// Outcome of an exhaustive law scan: empty means the laws hold.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report<T>(pub Vec<T>);

impl<T> Report<T> {
    pub fn is_ok(&self) -> bool {
        self.0.is_empty()
    }

    pub fn violations(&self) -> &[T] {
        &self.0
    }
}

impl<T: fmt::Display> fmt::Display for Report<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Incremental construction of a [`FinCategory`].
///
/// Identities are synthesized by [`CategoryBuilder::build`]; only
/// non-identity morphisms and their pairwise composites are supplied.
#[derive(Default, Debug, Clone)]
pub struct CategoryBuilder {
    objects: Vec<ObjId>,
    morphisms: Vec<(MorId, ObjId, ObjId)>,
    composites: Vec<(MorId, MorId, MorId)>,
}

impl CategoryBuilder {
    pub fn object(&mut self, obj: impl Into<ObjId>) -> &mut Self {
        self.objects.push(obj.into());
        self
    }

    pub fn morphism(
        &mut self,
        mor: impl Into<MorId>,
        src: impl Into<ObjId>,
        tgt: impl Into<ObjId>,
    ) -> &mut Self {
        self.morphisms.push((mor.into(), src.into(), tgt.into()));
        self
    }

    /// Record `g ∘ f = result` for non-identity `g`, `f`.
    pub fn composite(
        &mut self,
        g: impl Into<MorId>,
        f: impl Into<MorId>,
        result: impl Into<MorId>,
    ) -> &mut Self {
        self.composites.push((g.into(), f.into(), result.into()));
        self
    }

    pub fn build(&self) -> Result<FinCategory, CategoryBuildError> {
        let mut objects = Vec::new();
        let mut seen = BTreeSet::new();
        for o in &self.objects {
            if !seen.insert(o.clone()) {
                return Err(CategoryBuildError::DuplicateObject(o.clone()));
            }
            objects.push(o.clone());
        }

        let mut identities = BTreeMap::new();
        let mut morphisms = BTreeMap::new();
        for o in &objects {
            let id = MorId::identity_of(o);
            morphisms.insert(id.clone(), (o.clone(), o.clone()));
            identities.insert(o.clone(), id);
        }

        for (m, src, tgt) in &self.morphisms {
            if identities.values().any(|id| id == m) || m.as_str().starts_with("1_") {
                return Err(CategoryBuildError::ReservedName(m.clone()));
            }
            for obj in [src, tgt] {
                if !seen.contains(obj) {
                    return Err(CategoryBuildError::UnknownObject {
                        mor: m.clone(),
                        obj: obj.clone(),
                    });
                }
            }
            if morphisms
                .insert(m.clone(), (src.clone(), tgt.clone()))
                .is_some()
            {
                return Err(CategoryBuildError::DuplicateMorphism(m.clone()));
            }
        }

        let is_identity = |m: &MorId| identities.values().any(|id| id == m);
        let mut comp = BTreeMap::new();
        for (g, f, r) in &self.composites {
            for m in [g, f, r] {
                if !morphisms.contains_key(m) {
                    return Err(CategoryBuildError::UnknownMorphism {
                        g: g.clone(),
                        f: f.clone(),
                        missing: m.clone(),
                    });
                }
            }
            if is_identity(g) || is_identity(f) {
                return Err(CategoryBuildError::IdentityComposite {
                    g: g.clone(),
                    f: f.clone(),
                });
            }
            if comp
                .insert((g.clone(), f.clone()), r.clone())
                .is_some()
            {
                return Err(CategoryBuildError::DuplicateComposite {
                    g: g.clone(),
                    f: f.clone(),
                });
            }
        }

        // Unit composites are implicit in the builder but explicit in the
        // table, so that `compose` is a single lookup.
        let morphism_list: Vec<(MorId, ObjId, ObjId)> = morphisms
            .iter()
            .map(|(m, (s, t))| (m.clone(), s.clone(), t.clone()))
            .collect();
        for (m, src, tgt) in &morphism_list {
            comp.insert((m.clone(), identities[src].clone()), m.clone());
            comp.insert((identities[tgt].clone(), m.clone()), m.clone());
        }

        Ok(FinCategory {
            objects,
            morphisms,
            identities,
            comp,
        })
    }
}

impl FinCategory {
    pub fn builder() -> CategoryBuilder {
        CategoryBuilder::default()
    }

    /// The category with no objects.
    pub fn empty() -> Arc<FinCategory> {
        Arc::new(CategoryBuilder::default().build().expect("empty category"))
    }

    pub fn objects(&self) -> &[ObjId] {
        &self.objects
    }

    pub fn has_object(&self, o: &ObjId) -> bool {
        self.objects.contains(o)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    /// All morphisms (identities included) in identifier order.
    pub fn morphisms(&self) -> impl Iterator<Item = &MorId> {
        self.morphisms.keys()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn has_morphism(&self, m: &MorId) -> bool {
        self.morphisms.contains_key(m)
    }

    pub fn non_identity_morphisms(&self) -> impl Iterator<Item = &MorId> {
        self.morphisms.keys().filter(|m| !self.is_identity(m))
    }

    pub fn src(&self, m: &MorId) -> &ObjId {
        &self.morphisms[m].0
    }

    pub fn tgt(&self, m: &MorId) -> &ObjId {
        &self.morphisms[m].1
    }

    pub fn identity(&self, o: &ObjId) -> &MorId {
        &self.identities[o]
    }

    pub fn is_identity(&self, m: &MorId) -> bool {
        let (s, t) = &self.morphisms[m];
        s == t && self.identities.get(s) == Some(m)
    }

    /// `g ∘ f`, if the pair is composable and the table has an entry.
    pub fn compose(&self, g: &MorId, f: &MorId) -> Option<&MorId> {
        self.comp.get(&(g.clone(), f.clone()))
    }

    /// `g ∘ f` on a category that has passed validation.
    pub fn comp(&self, g: &MorId, f: &MorId) -> &MorId {
        self.compose(g, f)
            .unwrap_or_else(|| panic!("no composite {g} ∘ {f} in a supposedly valid category"))
    }

    /// Compose a non-empty path `path[n-1] ∘ ... ∘ path[0]`.
    pub fn comp_path(&self, path: &[&MorId]) -> MorId {
        let mut acc = path[0].clone();
        for m in &path[1..] {
            acc = self.comp(m, &acc).clone();
        }
        acc
    }

    /// Morphisms from `x` to `y`, in identifier order.
    pub fn hom(&self, x: &ObjId, y: &ObjId) -> Vec<&MorId> {
        self.morphisms
            .iter()
            .filter(|(_, (s, t))| s == x && t == y)
            .map(|(m, _)| m)
            .collect()
    }

    pub fn morphisms_from(&self, x: &ObjId) -> Vec<&MorId> {
        self.morphisms
            .iter()
            .filter(|(_, (s, _))| s == x)
            .map(|(m, _)| m)
            .collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.morphisms.len() == self.objects.len()
    }

    /// Connected components of the underlying undirected graph, each sorted,
    /// listed in order of their smallest object.
    pub fn connected_components(&self) -> Vec<Vec<ObjId>> {
        let mut parent: BTreeMap<&ObjId, &ObjId> =
            self.objects.iter().map(|o| (o, o)).collect();
        fn find<'a>(parent: &BTreeMap<&'a ObjId, &'a ObjId>, mut x: &'a ObjId) -> &'a ObjId {
            while parent[x] != x {
                x = parent[x];
            }
            x
        }
        for (s, t) in self.morphisms.values() {
            let (rs, rt) = (find(&parent, s), find(&parent, t));
            if rs != rt {
                let (lo, hi) = if rs < rt { (rs, rt) } else { (rt, rs) };
                parent.insert(hi, lo);
            }
        }
        let mut groups: BTreeMap<&ObjId, Vec<ObjId>> = BTreeMap::new();
        for o in &self.objects {
            groups.entry(find(&parent, o)).or_default().push(o.clone());
        }
        groups.into_values().collect()
    }

    /// Exhaustively check totality, typing, unit and associativity laws.
    pub fn validate(&self) -> Report<CategoryViolation> {
        let mut out = Vec::new();
        for (g, (gs, _)) in &self.morphisms {
            for (f, (_, ft)) in &self.morphisms {
                let entry = self.comp.get(&(g.clone(), f.clone()));
                if ft != gs {
                    if entry.is_some() {
                        out.push(CategoryViolation::SpuriousComposite {
                            g: g.clone(),
                            f: f.clone(),
                        });
                    }
                    continue;
                }
                let Some(r) = entry else {
                    out.push(CategoryViolation::MissingComposite {
                        g: g.clone(),
                        f: f.clone(),
                    });
                    continue;
                };
                let (fs, gt) = (self.src(f).clone(), self.tgt(g).clone());
                if self.src(r) != &fs || self.tgt(r) != &gt {
                    out.push(CategoryViolation::CompositeTyping {
                        g: g.clone(),
                        f: f.clone(),
                        result: r.clone(),
                        src: fs,
                        tgt: gt,
                    });
                }
                if self.is_identity(g) && r != f {
                    out.push(CategoryViolation::LeftUnit {
                        f: f.clone(),
                        got: r.clone(),
                    });
                }
                if self.is_identity(f) && r != g {
                    out.push(CategoryViolation::RightUnit {
                        g: g.clone(),
                        got: r.clone(),
                    });
                }
            }
        }

        // Associativity over composable triples only; anything reported above
        // already disqualifies the table.
        if out.is_empty() {
            let mors: Vec<&MorId> = self.morphisms.keys().collect();
            for f in &mors {
                for g in &mors {
                    if self.src(g) != self.tgt(f) {
                        continue;
                    }
                    let gf = self.comp(g, f).clone();
                    for h in &mors {
                        if self.src(h) != self.tgt(g) {
                            continue;
                        }
                        let hg = self.comp(h, g);
                        let left = self.comp(h, &gf);
                        let right = self.comp(&hg.clone(), f);
                        if left != right {
                            out.push(CategoryViolation::Associativity {
                                h: (*h).clone(),
                                g: (*g).clone(),
                                f: (*f).clone(),
                                left: left.clone(),
                                right: right.clone(),
                            });
                        }
                    }
                }
            }
        }
        Report(out)
    }

    /// Replace a composite entry, bypassing the builder.  Only useful for
    /// constructing deliberately broken tables in tests.
    pub fn corrupt_composite(&mut self, g: &MorId, f: &MorId, result: MorId) {
        self.comp.insert((g.clone(), f.clone()), result);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::catalog;

    #[test]
    fn ordinal_three_is_valid() {
        let three = catalog::three();
        assert!(three.validate().is_ok());
        assert_eq!(three.object_count(), 3);
        assert_eq!(three.morphism_count(), 6);
        let c = three.comp(&"12".into(), &"01".into());
        assert_eq!(c, &MorId::new("02"));
    }

    #[test]
    fn corrupted_composite_is_reported() {
        let mut bad = (*catalog::three()).clone();
        bad.corrupt_composite(&"12".into(), &"01".into(), "01".into());
        let report = bad.validate();
        assert!(!report.is_ok());
        assert!(matches!(
            report.violations()[0],
            CategoryViolation::CompositeTyping { .. }
        ));
    }

    #[test]
    fn missing_composite_is_reported() {
        let cat = FinCategory::builder()
            .object("a")
            .object("b")
            .object("c")
            .morphism("f", "a", "b")
            .morphism("g", "b", "c")
            .build()
            .unwrap();
        let report = cat.validate();
        assert_eq!(
            report.violations(),
            &[CategoryViolation::MissingComposite {
                g: "g".into(),
                f: "f".into()
            }]
        );
    }

    #[test]
    fn builder_rejects_reserved_names() {
        let err = FinCategory::builder()
            .object("a")
            .morphism("1_a", "a", "a")
            .build()
            .unwrap_err();
        assert!(matches!(err, CategoryBuildError::ReservedName(_)));
    }

    #[test]
    fn non_twisted_fixture_is_valid() {
        let cat = catalog::non_twisted();
        assert!(cat.validate().is_ok());
        assert_eq!(cat.morphism_count(), 6);
        assert_eq!(
            cat.comp(&"u".into(), &"e".into()),
            &MorId::new("w"),
        );
    }

    #[test]
    fn components_of_disconnected_category() {
        let cat = catalog::disc_two();
        assert_eq!(
            cat.connected_components(),
            vec![vec![ObjId::new("0")], vec![ObjId::new("1")]]
        );
        assert!(catalog::three().connected_components().len() == 1);
    }

    #[test]
    fn empty_category_is_valid() {
        let e = FinCategory::empty();
        assert!(e.validate().is_ok());
        assert_eq!(e.object_count(), 0);
        assert!(e.is_discrete());
    }
}
