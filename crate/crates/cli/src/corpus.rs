//! Deterministic corpora of finite categories and everything derived from
//! them: all functors between corpus categories, all split coreflection and
//! lens structures on those functors, and all commuting squares from a
//! twisted coreflection to a lens.
//!
//! Three base modes: `catalog` (the seven fixture categories), `exhaustive`
//! (every category within the requested bounds, one per renaming class, in
//! a fixed generation order), and `random` (seed-reproducible thin
//! categories drawn from random reachability relations).  A [`SizeGuard`]
//! bounds every enumeration: bounds that structurally exceed the guard are
//! an error; individual searches whose estimate exceeds the guard's search
//! budget are skipped; and each layer of the corpus fills in deterministic
//! order and stops at the budget, so corpora degrade gracefully instead of
//! exploding.  (Without the layer cap even modest bounds blow up: three
//! objects and five arrows admit hundreds of renaming classes and upwards
//! of a million derived squares.)  The guard can be overridden globally
//! through the `CATLIFT_SIZE_GUARD` environment variable
//! (`objects,morphisms,search`).
//!
//! Identical specs produce identical artifact identifiers, run to run.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use catlift_core::coreflections::{is_twisted, SplitCoreflection};
use catlift_core::fincat::{
    bex, disc_two, enumerate_functors, functor_search_estimate, non_twisted, one, three, two,
    two_lifts, FinCategory, FinFunctor, MorId, ObjId, SizeGuard, SizeLimitExceeded,
};
use catlift_core::lenses::{enumerate_lens_structures, DeltaLens};

/// Environment variable overriding the global enumeration bounds, in the
/// form `objects,morphisms,search` (e.g. `3,8,20000000`).
pub const GUARD_ENV_VAR: &str = "CATLIFT_SIZE_GUARD";

/// Search budget used by the self-test suites and as the default for
/// corpus-backed commands.  Deliberately much smaller than the library's
/// default guard: the suites sweep entire derived layers of a corpus, and
/// this budget keeps the whole battery within interactive time while still
/// admitting several hundred functors.
pub const SUITE_MAX_SEARCH: u64 = 512;

/// The guard the suites run under: default structural caps, tight budget.
pub fn suite_guard() -> SizeGuard {
    SizeGuard {
        max_search: SUITE_MAX_SEARCH,
        ..SizeGuard::default()
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("malformed {GUARD_ENV_VAR} `{value}`: expected `objects,morphisms,search`")]
pub struct GuardParseError {
    pub value: String,
}

/// The guard in force: `CATLIFT_SIZE_GUARD` when set, the suite guard
/// otherwise.
pub fn active_guard() -> Result<SizeGuard, GuardParseError> {
    match std::env::var(GUARD_ENV_VAR) {
        Ok(value) => parse_guard(&value).ok_or(GuardParseError { value }),
        Err(_) => Ok(suite_guard()),
    }
}

fn parse_guard(value: &str) -> Option<SizeGuard> {
    let mut parts = value.split(',').map(str::trim);
    let max_objects = parts.next()?.parse().ok()?;
    let max_morphisms = parts.next()?.parse().ok()?;
    let max_search = parts.next()?.parse().ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some(SizeGuard {
        max_objects,
        max_morphisms,
        max_search,
    })
}

// ---------------------------------------------------------------------------
// Specs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusMode {
    Catalog,
    Exhaustive,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    pub max_objects: usize,
    pub max_nonidentity_morphisms: usize,
    pub seed: u64,
    pub mode: CorpusMode,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("corpus bounds must be positive (got {objects} objects, {morphisms} morphisms)")]
    Bounds { objects: usize, morphisms: usize },
    #[error(transparent)]
    Size(#[from] SizeLimitExceeded),
}

impl CorpusSpec {
    /// Catalog mode ignores the bounds; the other modes require positive
    /// bounds that fit inside the guard's structural caps.
    fn admit(&self, guard: &SizeGuard) -> Result<(), CorpusError> {
        if self.mode == CorpusMode::Catalog {
            return Ok(());
        }
        if self.max_objects == 0 || self.max_nonidentity_morphisms == 0 {
            return Err(CorpusError::Bounds {
                objects: self.max_objects,
                morphisms: self.max_nonidentity_morphisms,
            });
        }
        if self.max_objects > guard.max_objects {
            return Err(SizeLimitExceeded {
                what: "objects",
                actual: self.max_objects as u64,
                limit: guard.max_objects as u64,
            }
            .into());
        }
        let worst_total = self.max_objects + self.max_nonidentity_morphisms;
        if worst_total > guard.max_morphisms {
            return Err(SizeLimitExceeded {
                what: "morphisms",
                actual: worst_total as u64,
                limit: guard.max_morphisms as u64,
            }
            .into());
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct NamedCategory {
    pub name: String,
    pub category: Arc<FinCategory>,
}

#[derive(Debug, Clone)]
pub struct NamedFunctor {
    pub name: String,
    /// Indices into [`Corpus::categories`].
    pub dom: usize,
    pub cod: usize,
    pub functor: FinFunctor,
}

#[derive(Debug, Clone)]
pub struct NamedCoreflection {
    pub name: String,
    /// Index into [`Corpus::functors`] of the underlying left adjoint.
    pub functor: usize,
    pub twisted: bool,
    pub coreflection: SplitCoreflection,
}

#[derive(Debug, Clone)]
pub struct NamedLens {
    pub name: String,
    /// Index into [`Corpus::functors`] of the underlying functor.
    pub functor: usize,
    pub lens: DeltaLens,
}

/// A commuting square from a twisted coreflection to a lens: `top` runs
/// between the domains, `bottom` between the codomains, and
/// `lens.f ∘ top = bottom ∘ coreflection.f`.
#[derive(Debug, Clone)]
pub struct CorpusSquare {
    pub name: String,
    /// Index into [`Corpus::coreflections`] (always a twisted entry).
    pub coreflection: usize,
    /// Index into [`Corpus::lenses`].
    pub lens: usize,
    pub top: FinFunctor,
    pub bottom: FinFunctor,
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub categories: Vec<NamedCategory>,
    pub functors: Vec<NamedFunctor>,
    pub coreflections: Vec<NamedCoreflection>,
    pub lenses: Vec<NamedLens>,
    pub squares: Vec<CorpusSquare>,
}

impl Corpus {
    pub fn summary(&self) -> String {
        format!(
            "{} categories, {} functors, {} coreflections ({} twisted), {} lenses, {} squares",
            self.categories.len(),
            self.functors.len(),
            self.coreflections.len(),
            self.coreflections.iter().filter(|c| c.twisted).count(),
            self.lenses.len(),
            self.squares.len(),
        )
    }
}

/// Generate the corpus a spec describes: base categories per the mode
/// (exhaustive mode keeps one representative per renaming class; the other
/// modes are taken verbatim), then every derived layer within the guard.
pub fn generate_corpus(spec: &CorpusSpec, guard: &SizeGuard) -> Result<Corpus, CorpusError> {
    spec.admit(guard)?;
    let base = match spec.mode {
        CorpusMode::Catalog => catalog_categories(),
        CorpusMode::Exhaustive => {
            let mut classes = dedupe(exhaustive_categories(spec, guard));
            classes.truncate(layer_cap(guard));
            name_all("x", classes)
        }
        CorpusMode::Random => name_all("r", random_categories(spec)),
    };
    Ok(derive_layers(base, guard))
}

/// How many artifacts one corpus layer may hold: the guard's search budget
/// doubles as the per-layer cardinality cap.
fn layer_cap(guard: &SizeGuard) -> usize {
    usize::try_from(guard.max_search).unwrap_or(usize::MAX)
}

/// The corpus the acceptance suites sweep: the catalog fixtures followed by
/// the exhaustive enumeration at 3 objects / 5 non-identity morphisms, with
/// all derived layers.  The pools are concatenated as-is: a fixture that
/// happens to rename an enumerated category stays alongside it.
pub fn acceptance_corpus(guard: &SizeGuard) -> Result<Corpus, CorpusError> {
    let spec = CorpusSpec {
        max_objects: 3,
        max_nonidentity_morphisms: 5,
        seed: 0,
        mode: CorpusMode::Exhaustive,
    };
    spec.admit(guard)?;
    let mut base = catalog_categories();
    let mut classes = dedupe(exhaustive_categories(&spec, guard));
    classes.truncate(layer_cap(guard).saturating_sub(base.len()));
    base.extend(name_all("x", classes));
    Ok(derive_layers(base, guard))
}

fn catalog_categories() -> Vec<NamedCategory> {
    [
        ("one", one()),
        ("two", two()),
        ("three", three()),
        ("disc_two", disc_two()),
        ("non_twisted", non_twisted()),
        ("two_lifts", two_lifts()),
        ("bex", bex()),
    ]
    .into_iter()
    .map(|(name, category)| NamedCategory {
        name: name.to_string(),
        category,
    })
    .collect()
}

fn name_all(prefix: &str, cats: Vec<Arc<FinCategory>>) -> Vec<NamedCategory> {
    cats.into_iter()
        .enumerate()
        .map(|(i, category)| NamedCategory {
            name: format!("{prefix}{i:03}"),
            category,
        })
        .collect()
}

/// Drop later categories that only rename earlier ones.
fn dedupe(cats: Vec<Arc<FinCategory>>) -> Vec<Arc<FinCategory>> {
    let mut seen = BTreeSet::new();
    cats.into_iter()
        .filter(|cat| seen.insert(canonical_key(cat)))
        .collect()
}

// ---------------------------------------------------------------------------
// Derived layers
// ---------------------------------------------------------------------------

/// Memoized functor enumeration between corpus categories, by index pair.
/// `None` marks a pair outside the guard (too large structurally, or a
/// search estimate over budget) — those pairs are skipped, not errors.
pub(crate) struct FunctorCache<'a> {
    categories: &'a [NamedCategory],
    guard: &'a SizeGuard,
    memo: BTreeMap<(usize, usize), Option<Arc<Vec<FinFunctor>>>>,
}

impl<'a> FunctorCache<'a> {
    pub(crate) fn new(categories: &'a [NamedCategory], guard: &'a SizeGuard) -> Self {
        FunctorCache {
            categories,
            guard,
            memo: BTreeMap::new(),
        }
    }

    pub(crate) fn estimate(&self, a: usize, b: usize) -> u64 {
        functor_search_estimate(&self.categories[a].category, &self.categories[b].category)
    }

    pub(crate) fn between(&mut self, a: usize, b: usize) -> Option<Arc<Vec<FinFunctor>>> {
        let guard = self.guard;
        let categories = self.categories;
        self.memo
            .entry((a, b))
            .or_insert_with(|| {
                let ca = &categories[a].category;
                let cb = &categories[b].category;
                if guard.admit_category(ca).is_err() || guard.admit_category(cb).is_err() {
                    return None;
                }
                enumerate_functors(ca, cb, guard).ok().map(Arc::new)
            })
            .clone()
    }
}

fn derive_layers(categories: Vec<NamedCategory>, guard: &SizeGuard) -> Corpus {
    let mut cache = FunctorCache::new(&categories, guard);
    let cap = layer_cap(guard);

    // Pairs in expanding-frontier order — every pair among the first k
    // categories before any pair involving the (k+1)-st — so a capped layer
    // still covers the early categories densely instead of draining the cap
    // on functors out of the very first category.
    let mut pair_order = Vec::with_capacity(categories.len() * categories.len());
    for k in 0..categories.len() {
        for i in 0..=k {
            pair_order.push((i, k));
        }
        for j in (0..k).rev() {
            pair_order.push((k, j));
        }
    }

    let mut functors = Vec::new();
    'functors: for &(ai, bi) in &pair_order {
        let Some(found) = cache.between(ai, bi) else {
            continue;
        };
        for functor in found.iter() {
            if functors.len() == cap {
                break 'functors;
            }
            functors.push(NamedFunctor {
                name: format!(
                    "fun{:04}_{}_to_{}",
                    functors.len(),
                    categories[ai].name,
                    categories[bi].name
                ),
                dom: ai,
                cod: bi,
                functor: functor.clone(),
            });
        }
    }

    let mut coreflections = Vec::new();
    'coreflections: for (fi, nf) in functors.iter().enumerate() {
        // Right adjoint candidates go backwards: codomain to domain.
        let Some(qs) = cache.between(nf.cod, nf.dom) else {
            continue;
        };
        for q in qs.iter() {
            for coreflection in coreflections_over(&nf.functor, q, guard) {
                if coreflections.len() == cap {
                    break 'coreflections;
                }
                coreflections.push(NamedCoreflection {
                    name: format!("coref{:03}_on_{}", coreflections.len(), nf.name),
                    functor: fi,
                    twisted: is_twisted(&coreflection).is_twisted(),
                    coreflection,
                });
            }
        }
    }

    let mut lenses = Vec::new();
    'lenses: for (fi, nf) in functors.iter().enumerate() {
        let Ok(found) = enumerate_lens_structures(&nf.functor, guard) else {
            continue;
        };
        for lens in found.structures.expect("enumeration materializes structures") {
            if lenses.len() == cap {
                break 'lenses;
            }
            lenses.push(NamedLens {
                name: format!("lens{:03}_on_{}", lenses.len(), nf.name),
                functor: fi,
                lens,
            });
        }
    }

    // Square sources diagonally, so a capped layer draws on many
    // coreflection/lens combinations rather than exhausting the first
    // coreflection against everything.
    let mut square_pairs = Vec::with_capacity(coreflections.len() * lenses.len());
    for sum in 0..coreflections.len().saturating_add(lenses.len()) {
        for ti in 0..coreflections.len().min(sum + 1) {
            let li = sum - ti;
            if li < lenses.len() {
                square_pairs.push((ti, li));
            }
        }
    }

    let mut squares = Vec::new();
    'squares: for &(ti, li) in &square_pairs {
        let nt = &coreflections[ti];
        if !nt.twisted {
            continue;
        }
        let t = &nt.coreflection;
        let (t_dom, t_cod) = (functors[nt.functor].dom, functors[nt.functor].cod);
        {
            let nl = &lenses[li];
            let l = &nl.lens;
            let (l_dom, l_cod) = (functors[nl.functor].dom, functors[nl.functor].cod);
            // The whole commuting-pair search is one search: guard its product.
            let product = cache
                .estimate(t_dom, l_dom)
                .saturating_mul(cache.estimate(t_cod, l_cod));
            if guard.admit_search(product).is_err() {
                continue;
            }
            let (Some(tops), Some(bottoms)) =
                (cache.between(t_dom, l_dom), cache.between(t_cod, l_cod))
            else {
                continue;
            };
            let via_corefs: Vec<FinFunctor> = bottoms
                .iter()
                .map(|bottom| {
                    FinFunctor::compose(bottom, t.f())
                        .expect("bottom leaves the coreflection codomain")
                })
                .collect();
            for top in tops.iter() {
                let via_lens =
                    FinFunctor::compose(l.f(), top).expect("top lands in the lens domain");
                for (bottom, via_coref) in bottoms.iter().zip(&via_corefs) {
                    if via_lens == *via_coref {
                        if squares.len() == cap {
                            break 'squares;
                        }
                        squares.push(CorpusSquare {
                            name: format!("sq{:05}", squares.len()),
                            coreflection: ti,
                            lens: li,
                            top: top.clone(),
                            bottom: bottom.clone(),
                        });
                    }
                }
            }
        }
    }

    Corpus {
        categories,
        functors,
        coreflections,
        lenses,
        squares,
    }
}

/// All split coreflection structures on `f`: right adjoints `q` with
/// `q ∘ f = 1` found by functor search, then every counit table drawn from
/// the hom-sets `X(fqx, x)`, kept when the coreflection laws hold.
pub fn enumerate_coreflection_structures(
    f: &FinFunctor,
    guard: &SizeGuard,
) -> Result<Vec<SplitCoreflection>, SizeLimitExceeded> {
    let qs = enumerate_functors(f.cod(), f.dom(), guard)?;
    let mut out = Vec::new();
    for q in &qs {
        out.extend(try_coreflections_over(f, q, guard)?);
    }
    Ok(out)
}

/// The structures for one candidate right adjoint, or nothing when the
/// counit search for this `q` is over budget (the corpus path skips it).
fn coreflections_over(f: &FinFunctor, q: &FinFunctor, guard: &SizeGuard) -> Vec<SplitCoreflection> {
    try_coreflections_over(f, q, guard).unwrap_or_default()
}

fn try_coreflections_over(
    f: &FinFunctor,
    q: &FinFunctor,
    guard: &SizeGuard,
) -> Result<Vec<SplitCoreflection>, SizeLimitExceeded> {
    let x = f.cod();
    let qf = FinFunctor::compose(q, f).expect("q leaves the codomain of f");
    if !qf.is_identity_functor() {
        return Ok(Vec::new());
    }
    let objects: Vec<&ObjId> = x.objects().iter().collect();
    let candidates: Vec<Vec<&MorId>> = objects
        .iter()
        .map(|ob| x.hom(f.apply_obj(q.apply_obj(ob)), ob))
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return Ok(Vec::new());
    }
    let estimate = candidates
        .iter()
        .fold(1u64, |acc, c| acc.saturating_mul(c.len() as u64));
    guard.admit_search(estimate)?;

    let mut out = Vec::new();
    let mut digits = vec![0usize; objects.len()];
    loop {
        let counit: BTreeMap<ObjId, MorId> = objects
            .iter()
            .zip(&digits)
            .zip(&candidates)
            .map(|((ob, &i), cands)| ((*ob).clone(), cands[i].clone()))
            .collect();
        if let Ok(s) = SplitCoreflection::new(f.clone(), q.clone(), counit) {
            if s.check().is_ok() {
                out.push(s);
            }
        }
        let mut pos = objects.len();
        loop {
            if pos == 0 {
                digits.clear();
                break;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < candidates[pos].len() {
                break;
            }
            digits[pos] = 0;
        }
        if digits.is_empty() {
            break;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration up to renaming
// ---------------------------------------------------------------------------

/// A composition value: the identity forced by the pair's endpoints, or a
/// non-identity arrow by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Comp {
    Identity,
    Arrow(usize),
}

struct Shape {
    objects: usize,
    /// `(src, tgt)` object indices per arrow, kept lexicographically sorted
    /// so each endpoint multiset is visited once.
    arrows: Vec<(usize, usize)>,
}

fn exhaustive_categories(spec: &CorpusSpec, guard: &SizeGuard) -> Vec<Arc<FinCategory>> {
    let mut out = Vec::new();
    for n in 1..=spec.max_objects {
        for m in 0..=spec.max_nonidentity_morphisms {
            for arrows in endpoint_multisets(n, m) {
                let shape = Shape { objects: n, arrows };
                composition_tables(&shape, guard, &mut out);
            }
        }
    }
    out
}

/// All nondecreasing length-`m` sequences of `(src, tgt)` pairs over `n`
/// objects.
fn endpoint_multisets(n: usize, m: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(m);
    fn go(
        pairs: &[(usize, usize)],
        from: usize,
        left: usize,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if left == 0 {
            out.push(current.clone());
            return;
        }
        for i in from..pairs.len() {
            current.push(pairs[i]);
            go(pairs, i, left - 1, current, out);
            current.pop();
        }
    }
    go(&pairs, 0, m, &mut current, &mut out);
    out
}

/// Fill in every associative composition table over a shape, skipping the
/// whole shape when the table search estimate exceeds the guard's budget.
fn composition_tables(shape: &Shape, guard: &SizeGuard, out: &mut Vec<Arc<FinCategory>>) {
    let m = shape.arrows.len();
    let mut pairs = Vec::new(); // composable (g, f): f then g
    for g in 0..m {
        for f in 0..m {
            if shape.arrows[f].1 == shape.arrows[g].0 {
                pairs.push((g, f));
            }
        }
    }
    let mut candidates: Vec<Vec<Comp>> = Vec::with_capacity(pairs.len());
    for &(g, f) in &pairs {
        let (src, tgt) = (shape.arrows[f].0, shape.arrows[g].1);
        let mut cs = Vec::new();
        if src == tgt {
            cs.push(Comp::Identity);
        }
        cs.extend(
            (0..m)
                .filter(|&h| shape.arrows[h] == (src, tgt))
                .map(Comp::Arrow),
        );
        if cs.is_empty() {
            return; // some composite has nowhere to land: no categories here
        }
        candidates.push(cs);
    }
    let estimate = candidates
        .iter()
        .fold(1u64, |acc, c| acc.saturating_mul(c.len() as u64));
    if guard.admit_search(estimate).is_err() {
        return; // shape skipped: its table search is over budget
    }

    let mut triples = Vec::new(); // composable (h, g, f)
    for h in 0..m {
        for g in 0..m {
            for f in 0..m {
                if shape.arrows[f].1 == shape.arrows[g].0 && shape.arrows[g].1 == shape.arrows[h].0
                {
                    triples.push((h, g, f));
                }
            }
        }
    }

    let mut table: BTreeMap<(usize, usize), Comp> = BTreeMap::new();
    search_tables(shape, &pairs, &candidates, &triples, 0, &mut table, out);
}

#[allow(clippy::too_many_arguments)]
fn search_tables(
    shape: &Shape,
    pairs: &[(usize, usize)],
    candidates: &[Vec<Comp>],
    triples: &[(usize, usize, usize)],
    pos: usize,
    table: &mut BTreeMap<(usize, usize), Comp>,
    out: &mut Vec<Arc<FinCategory>>,
) {
    if pos == pairs.len() {
        out.push(realize(shape, table));
        return;
    }
    for &value in &candidates[pos] {
        table.insert(pairs[pos], value);
        if associativity_holds_so_far(triples, table) {
            search_tables(shape, pairs, candidates, triples, pos + 1, table, out);
        }
    }
    table.remove(&pairs[pos]);
}

/// Check every triple whose relevant entries are already assigned; unknown
/// entries leave a triple undecided, never failing.
fn associativity_holds_so_far(
    triples: &[(usize, usize, usize)],
    table: &BTreeMap<(usize, usize), Comp>,
) -> bool {
    for &(h, g, f) in triples {
        let Some(&gf) = table.get(&(g, f)) else {
            continue;
        };
        let Some(&hg) = table.get(&(h, g)) else {
            continue;
        };
        let left = match gf {
            Comp::Identity => Some(Comp::Arrow(h)),
            Comp::Arrow(x) => table.get(&(h, x)).copied(),
        };
        let right = match hg {
            Comp::Identity => Some(Comp::Arrow(f)),
            Comp::Arrow(y) => table.get(&(y, f)).copied(),
        };
        if let (Some(l), Some(r)) = (left, right) {
            if l != r {
                return false;
            }
        }
    }
    true
}

fn realize(shape: &Shape, table: &BTreeMap<(usize, usize), Comp>) -> Arc<FinCategory> {
    let mut b = FinCategory::builder();
    for i in 0..shape.objects {
        b.object(format!("x{i}"));
    }
    for (j, (s, t)) in shape.arrows.iter().enumerate() {
        b.morphism(format!("m{j}"), format!("x{s}"), format!("x{t}"));
    }
    for (&(g, f), &value) in table {
        let result = match value {
            Comp::Identity => format!("1_x{}", shape.arrows[f].0),
            Comp::Arrow(h) => format!("m{h}"),
        };
        b.composite(format!("m{g}"), format!("m{f}"), result);
    }
    let cat = b.build().expect("searched table is closed and associative");
    debug_assert!(cat.validate().is_ok(), "searched table validates");
    Arc::new(cat)
}

// ---------------------------------------------------------------------------
// Canonical form under renaming
// ---------------------------------------------------------------------------

/// A string invariant under renaming of objects and morphisms: the minimum
/// over all object permutations and endpoint-respecting arrow relabelings
/// of the serialized shape and table.  Two categories get the same key
/// exactly when one is a renaming of the other.
fn canonical_key(cat: &FinCategory) -> String {
    let objects: Vec<&ObjId> = cat.objects().iter().collect();
    let n = objects.len();
    let obj_index: BTreeMap<&ObjId, usize> =
        objects.iter().enumerate().map(|(i, o)| (*o, i)).collect();
    let arrows: Vec<(usize, usize)> = cat
        .non_identity_morphisms()
        .map(|mor| (obj_index[cat.src(mor)], obj_index[cat.tgt(mor)]))
        .collect();
    let names: Vec<&MorId> = cat.non_identity_morphisms().collect();
    let arrow_index: BTreeMap<&MorId, usize> =
        names.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut table: Vec<((usize, usize), Comp)> = Vec::new();
    for (gi, g) in names.iter().enumerate() {
        for (fi, f) in names.iter().enumerate() {
            if arrows[fi].1 == arrows[gi].0 {
                let c = cat.comp(g, f);
                let value = if cat.is_identity(c) {
                    Comp::Identity
                } else {
                    Comp::Arrow(arrow_index[c])
                };
                table.push(((gi, fi), value));
            }
        }
    }

    let mut best: Option<String> = None;
    for operm in (0..n).permutations(n) {
        // Arrows keep endpoint groups under renaming; relabeling may only
        // permute arrows within a group.
        let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (j, &(s, t)) in arrows.iter().enumerate() {
            groups.entry((operm[s], operm[t])).or_default().push(j);
        }
        let group_orders: Vec<Vec<Vec<usize>>> = groups
            .values()
            .map(|ids| ids.iter().copied().permutations(ids.len()).collect())
            .collect();
        let mut order_choices = group_orders
            .iter()
            .map(|orders| orders.iter())
            .multi_cartesian_product();
        // No arrows: the product above is empty, but there is still the
        // one (empty) relabeling to serialize.
        let mut none_ran = true;
        loop {
            let choice = order_choices.next();
            if choice.is_none() && !none_ran {
                break;
            }
            let order: Vec<usize> = match &choice {
                Some(parts) => parts.iter().flat_map(|p| p.iter().copied()).collect(),
                None => Vec::new(),
            };
            none_ran = false;
            let mut new_of_old = vec![0usize; order.len()];
            for (new, &old) in order.iter().enumerate() {
                new_of_old[old] = new;
            }
            let mut entries: Vec<((usize, usize), Comp)> = table
                .iter()
                .map(|&((g, f), v)| {
                    let value = match v {
                        Comp::Identity => Comp::Identity,
                        Comp::Arrow(h) => Comp::Arrow(new_of_old[h]),
                    };
                    ((new_of_old[g], new_of_old[f]), value)
                })
                .collect();
            entries.sort_unstable();
            let endpoints: Vec<(usize, usize)> = order
                .iter()
                .map(|&old| (operm[arrows[old].0], operm[arrows[old].1]))
                .collect();
            let key = format!("{n};{endpoints:?};{entries:?}");
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
            if choice.is_none() {
                break;
            }
        }
    }
    best.expect("at least one relabeling exists")
}

// ---------------------------------------------------------------------------
// Random thin categories
// ---------------------------------------------------------------------------

/// How many categories random mode draws per spec.
pub const RANDOM_DRAWS: usize = 12;

/// Seed-reproducible thin categories: a random reachability relation,
/// closed reflexively and transitively, gives a preorder whose non-identity
/// arrows are the related distinct pairs.  Draws whose closure exceeds the
/// morphism bound are rejected and retried; a stubborn slot falls back to
/// the one-object category.
fn random_categories(spec: &CorpusSpec) -> Vec<Arc<FinCategory>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut cats = Vec::with_capacity(RANDOM_DRAWS);
    for _ in 0..RANDOM_DRAWS {
        let mut drawn = None;
        for _attempt in 0..64 {
            let n = rng.random_range(1..=spec.max_objects);
            let mut rel = vec![vec![false; n]; n];
            for row in rel.iter_mut() {
                for entry in row.iter_mut() {
                    *entry = rng.random_bool(0.4);
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if rel[i][k] && rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
            let related: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| i != j && rel[i][j])
                .collect();
            if related.len() > spec.max_nonidentity_morphisms {
                continue;
            }
            drawn = Some(thin_category(n, &related));
            break;
        }
        cats.push(drawn.unwrap_or_else(|| {
            Arc::new(
                FinCategory::builder()
                    .object("x0")
                    .build()
                    .expect("one object, no arrows"),
            )
        }));
    }
    cats
}

fn thin_category(n: usize, related: &[(usize, usize)]) -> Arc<FinCategory> {
    let mut b = FinCategory::builder();
    for i in 0..n {
        b.object(format!("x{i}"));
    }
    for &(i, j) in related {
        b.morphism(format!("a{i}_{j}"), format!("x{i}"), format!("x{j}"));
    }
    for &(i, j) in related {
        for &(j2, k) in related {
            if j == j2 {
                let result = if i == k {
                    format!("1_x{i}")
                } else {
                    format!("a{i}_{k}")
                };
                b.composite(format!("a{j}_{k}"), format!("a{i}_{j}"), result);
            }
        }
    }
    Arc::new(b.build().expect("transitive closures are thin categories"))
}
