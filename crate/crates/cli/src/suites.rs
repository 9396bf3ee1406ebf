//! The self-test battery behind `catlift selftest`.
//!
//! Each suite sweeps the shared corpus (the catalog fixtures plus every
//! exhaustively generated category within the default bounds, together
//! with the functor, coreflection, lens, and square layers derived from
//! them) and verifies one family of laws end to end.  Suites report how
//! many individual checks ran, how many instances the size guard made
//! them skip, and a witness string for every failure.
//!
//! Brute-force passes (uniqueness of universal arrows, of orthogonal
//! diagonals, and the algebra correspondences) re-enumerate candidate
//! functors from scratch and compare against the constructed answer, so
//! they run under a widened search budget; instances whose candidate
//! space still exceeds it are counted as skipped, never silently dropped.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use catlift_core::awfs::{
    algebra_to_lens, coalgebra_to_twisted, cofree_coref_universal, factorize,
    free_lens_universal, lens_to_algebra, lift, twisted_to_coalgebra, EfFactorization,
    LiftStrategy,
};
use catlift_core::coreflections::{
    compose_coreflections, fixtures as coref_fixtures, is_coref_cell, is_twisted,
    split_to_twisted, TwistedCoreflection,
};
use catlift_core::fincat::{
    bang, comprehensive_factorize, delta, enumerate_functors, functor_search_estimate,
    orthogonal_lift, three, FinFunctor, MorId, SizeGuard,
};
use catlift_core::lenses::{
    compose_lenses, enumerate_generated_structures, enumerate_lens_structures,
    fixtures as lens_fixtures, is_lens_cell, GeneratedVariant,
};

use crate::corpus::{
    acceptance_corpus, active_guard, enumerate_coreflection_structures, Corpus, FunctorCache,
};
use crate::docs::{document_from_str, document_to_string, DocError, LoadedDocument, SquareDocument};

/// Suite numbers and names, in execution order.
pub const SUITES: [(usize, &str); 11] = [
    (1, "factorisation"),
    (2, "twistedness"),
    (3, "lift-strategies"),
    (4, "lift-naturality"),
    (5, "universal-arrows"),
    (6, "structure-enumeration"),
    (7, "fixtures"),
    (8, "comprehensive-factorisation"),
    (9, "algebra-correspondence"),
    (10, "orthogonality"),
    (11, "documents"),
];

/// How widely the brute-force passes may search relative to the corpus
/// guard.  They enumerate candidate functors over derived categories
/// (`Ef` and friends), whose searches are larger than anything the corpus
/// itself runs, so they get more room; anything beyond it is skipped.
const BRUTE_BUDGET_FACTOR: u64 = 200;

fn brute_guard(guard: &SizeGuard) -> SizeGuard {
    SizeGuard {
        max_search: guard.max_search.saturating_mul(BRUTE_BUDGET_FACTOR),
        ..*guard
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub number: usize,
    pub name: &'static str,
    /// Individual law checks that ran.
    pub checked: usize,
    /// Instances skipped because a search estimate exceeded the budget.
    pub skipped: usize,
    pub failures: Vec<String>,
    pub millis: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary_line(&self) -> String {
        format!(
            "suite {:02} {:<28} {}  ({} checks, {} skipped, {} ms)",
            self.number,
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checked,
            self.skipped,
            self.millis,
        )
    }
}

#[derive(Default)]
struct Tally {
    checked: usize,
    skipped: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(witness());
        }
    }

    fn fail(&mut self, witness: String) {
        self.checked += 1;
        self.failures.push(witness);
    }

    fn skip(&mut self) {
        self.skipped += 1;
    }
}

// ---------------------------------------------------------------------------
// Corpus sharing
// ---------------------------------------------------------------------------

static CORPUS_CACHE: Mutex<Option<(SizeGuard, Arc<Corpus>)>> = Mutex::new(None);

/// The corpus all suites share, rebuilt only when the guard changes.
pub fn shared_corpus(guard: &SizeGuard) -> Result<Arc<Corpus>, String> {
    let mut slot = CORPUS_CACHE.lock().expect("corpus cache lock");
    if let Some((cached_guard, corpus)) = slot.as_ref() {
        if cached_guard == guard {
            return Ok(corpus.clone());
        }
    }
    let corpus = Arc::new(acceptance_corpus(guard).map_err(|e| e.to_string())?);
    *slot = Some((*guard, corpus.clone()));
    Ok(corpus)
}

/// Run every suite in order under the active guard.
pub fn run_all() -> Result<Vec<SuiteReport>, String> {
    let guard = active_guard().map_err(|e| e.to_string())?;
    let corpus = shared_corpus(&guard)?;
    Ok(SUITES
        .iter()
        .map(|&(number, name)| run_suite_inner(number, name, &corpus, &guard))
        .collect())
}

/// Run a single suite, addressed by name or number.
pub fn run_named(suite: &str) -> Result<SuiteReport, String> {
    let wanted = SUITES
        .iter()
        .copied()
        .find(|&(number, name)| name == suite || number.to_string() == suite)
        .ok_or_else(|| {
            let known = SUITES.iter().map(|&(_, n)| n).collect::<Vec<_>>().join(", ");
            format!("unknown suite `{suite}`; known suites: {known}")
        })?;
    let guard = active_guard().map_err(|e| e.to_string())?;
    let corpus = shared_corpus(&guard)?;
    Ok(run_suite_inner(wanted.0, wanted.1, &corpus, &guard))
}

fn run_suite_inner(
    number: usize,
    name: &'static str,
    corpus: &Corpus,
    guard: &SizeGuard,
) -> SuiteReport {
    let start = Instant::now();
    let mut tally = Tally::default();
    match number {
        1 => factorisation(corpus, guard, &mut tally),
        2 => twistedness(corpus, guard, &mut tally),
        3 => lift_strategies(corpus, guard, &mut tally),
        4 => lift_naturality(corpus, guard, &mut tally),
        5 => universal_arrows(corpus, guard, &mut tally),
        6 => structure_enumeration(corpus, guard, &mut tally),
        7 => fixtures(corpus, guard, &mut tally),
        8 => comprehensive_factorisation(corpus, guard, &mut tally),
        9 => algebra_correspondence(corpus, guard, &mut tally),
        10 => orthogonality(corpus, guard, &mut tally),
        11 => documents(corpus, guard, &mut tally),
        _ => tally.fail(format!("suite {number} does not exist")),
    }
    SuiteReport {
        number,
        name,
        checked: tally.checked,
        skipped: tally.skipped,
        failures: tally.failures,
        millis: start.elapsed().as_millis(),
    }
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

/// The twisted upgrade of every corpus coreflection that admits one,
/// indexed like `corpus.coreflections`.
fn twisted_coreflections(corpus: &Corpus) -> Vec<Option<TwistedCoreflection>> {
    corpus
        .coreflections
        .iter()
        .map(|nc| TwistedCoreflection::try_new(nc.coreflection.clone()).ok())
        .collect()
}

/// Category indices (into `corpus.categories`) of a functor layer entry.
fn functor_cats(corpus: &Corpus, functor_index: usize) -> (usize, usize) {
    let nf = &corpus.functors[functor_index];
    (nf.dom, nf.cod)
}

/// A comparable key for a functor: its object and morphism tables.
type FunctorKey = (
    BTreeMap<catlift_core::fincat::ObjId, catlift_core::fincat::ObjId>,
    BTreeMap<MorId, MorId>,
);

fn functor_key(f: &FinFunctor) -> FunctorKey {
    (f.obj_map().clone(), f.mor_map().clone())
}

// ---------------------------------------------------------------------------
// Suite 1: factorisation
// ---------------------------------------------------------------------------

/// Every corpus functor factors as `Rf ∘ Lf = f` with a lawful twisted
/// coreflection on the left and a lawful lens on the right, and the
/// right adjoint `Sf` retracts `Lf`.
fn factorisation(corpus: &Corpus, _guard: &SizeGuard, t: &mut Tally) {
    for nf in &corpus.functors {
        let ff = factorize(&nf.functor);
        match FinFunctor::compose(ff.rf(), ff.lf()) {
            Ok(recomposed) => t.check(recomposed == nf.functor, || {
                format!("{}: Rf∘Lf differs from the original functor", nf.name)
            }),
            Err(e) => t.fail(format!("{}: Rf and Lf do not compose: {e}", nf.name)),
        }
        t.check(ff.coref().coref().check().is_ok(), || {
            format!("{}: the left part is not a lawful coreflection", nf.name)
        });
        t.check(ff.lens().check().is_ok(), || {
            format!("{}: the right part is not a lawful lens", nf.name)
        });
        t.check(ff.lf() == ff.coref().coref().f(), || {
            format!("{}: Lf is not the coreflection's underlying functor", nf.name)
        });
        t.check(ff.rf() == ff.lens().f(), || {
            format!("{}: Rf is not the lens's underlying functor", nf.name)
        });
        t.check(ff.sf() == ff.coref().coref().q(), || {
            format!("{}: Sf is not the coreflection's right adjoint", nf.name)
        });
        match FinFunctor::compose(ff.sf(), ff.lf()) {
            Ok(unit) => t.check(unit.is_identity_functor(), || {
                format!("{}: Sf∘Lf is not the identity", nf.name)
            }),
            Err(e) => t.fail(format!("{}: Sf and Lf do not compose: {e}", nf.name)),
        }
    }
}

// ---------------------------------------------------------------------------
// Suite 2: twistedness
// ---------------------------------------------------------------------------

/// The direct twistedness check agrees with the pushout comparison on
/// every corpus coreflection and on the named fixtures: a split
/// coreflection is twisted exactly when its comparison into the pushout
/// replacement is an isomorphism, and the replacement itself is always
/// twisted.
fn twistedness(corpus: &Corpus, _guard: &SizeGuard, t: &mut Tally) {
    let fixture_corefs = [
        ("delta1_coreflection", coref_fixtures::delta1_coreflection()),
        ("delta2_coreflection", coref_fixtures::delta2_coreflection()),
        ("bex_coreflection", coref_fixtures::bex_coreflection()),
        (
            "non_twisted_coreflection",
            coref_fixtures::non_twisted_coreflection(),
        ),
    ];
    let everything = corpus
        .coreflections
        .iter()
        .map(|nc| (nc.name.as_str(), &nc.coreflection))
        .chain(fixture_corefs.iter().map(|(n, c)| (*n, c)));
    for (name, coref) in everything {
        let outcome = is_twisted(coref);
        let replacement = split_to_twisted(coref);
        t.check(outcome.is_twisted() == replacement.is_iso, || {
            format!("{name}: the direct twistedness check disagrees with the pushout comparison")
        });
        t.check(
            is_twisted(replacement.twisted.coref()).is_twisted(),
            || format!("{name}: the pushout replacement is not itself twisted"),
        );
    }
}

// ---------------------------------------------------------------------------
// Suite 3: lift strategies
// ---------------------------------------------------------------------------

/// On every corpus square, the formula lift and the universal lift agree
/// and both triangles commute.
fn lift_strategies(corpus: &Corpus, _guard: &SizeGuard, t: &mut Tally) {
    let twisted = twisted_coreflections(corpus);
    for sq in &corpus.squares {
        let Some(tw) = &twisted[sq.coreflection] else {
            t.fail(format!(
                "{}: the square's coreflection is not twisted",
                sq.name
            ));
            continue;
        };
        let lens = &corpus.lenses[sq.lens].lens;
        let formula = lift(tw, lens, &sq.top, &sq.bottom, LiftStrategy::Formula);
        let universal = lift(tw, lens, &sq.top, &sq.bottom, LiftStrategy::Universal);
        let (formula, universal) = match (formula, universal) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                t.fail(format!("{}: lifting failed: {e}", sq.name));
                continue;
            }
        };
        t.check(formula.j == universal.j, || {
            format!("{}: the formula and universal lifts disagree", sq.name)
        });
        match FinFunctor::compose(&formula.j, tw.coref().f()) {
            Ok(upper) => t.check(upper == sq.top, || {
                format!("{}: j∘f is not the top leg", sq.name)
            }),
            Err(e) => t.fail(format!("{}: j∘f does not compose: {e}", sq.name)),
        }
        match FinFunctor::compose(lens.f(), &formula.j) {
            Ok(lower) => t.check(lower == sq.bottom, || {
                format!("{}: g∘j is not the bottom leg", sq.name)
            }),
            Err(e) => t.fail(format!("{}: g∘j does not compose: {e}", sq.name)),
        }
    }
}

// ---------------------------------------------------------------------------
// Suite 4: lift naturality
// ---------------------------------------------------------------------------

/// The lifting operation is natural in both boundaries and compatible
/// with both compositions: shifting a corpus square along a lens cell or
/// a coreflection cell shifts its lift accordingly, and lifting against
/// a composite lens (or from a composite coreflection) equals the nested
/// two-step lift.
fn lift_naturality(corpus: &Corpus, guard: &SizeGuard, t: &mut Tally) {
    let twisted = twisted_coreflections(corpus);
    let mut cache = FunctorCache::new(&corpus.categories, guard);

    // The formula lift of each corpus square, shared by every sub-check.
    let base: Vec<Option<FinFunctor>> = corpus
        .squares
        .iter()
        .map(|sq| {
            twisted[sq.coreflection].as_ref().and_then(|tw| {
                lift(
                    tw,
                    &corpus.lenses[sq.lens].lens,
                    &sq.top,
                    &sq.bottom,
                    LiftStrategy::Formula,
                )
                .ok()
                .map(|r| r.j)
            })
        })
        .collect();

    horizontal_lens_naturality(corpus, guard, &twisted, &mut cache, &base, t);
    horizontal_coref_naturality(corpus, guard, &twisted, &mut cache, &base, t);
    vertical_lens_compatibility(corpus, guard, &twisted, &mut cache, t);
    vertical_coref_compatibility(corpus, guard, &twisted, &mut cache, t);
}

/// Φ(T, L′, p∘h, q∘k) = p ∘ Φ(T, L, h, k) for every lens cell (p, q): L → L′.
fn horizontal_lens_naturality(
    corpus: &Corpus,
    guard: &SizeGuard,
    twisted: &[Option<TwistedCoreflection>],
    cache: &mut FunctorCache,
    base: &[Option<FinFunctor>],
    t: &mut Tally,
) {
    // Group squares by their lens so each candidate cell is enumerated once.
    let mut squares_by_lens: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, sq) in corpus.squares.iter().enumerate() {
        squares_by_lens.entry(sq.lens).or_default().push(i);
    }

    for (&li, square_indices) in &squares_by_lens {
        let from = &corpus.lenses[li];
        let (fd, fc) = functor_cats(corpus, from.functor);
        for to in &corpus.lenses {
            let (td, tc) = functor_cats(corpus, to.functor);
            let estimate = cache.estimate(fd, td).saturating_mul(cache.estimate(fc, tc));
            if guard.admit_search(estimate).is_err() {
                t.skip();
                continue;
            }
            let (Some(ps), Some(qs)) = (cache.between(fd, td), cache.between(fc, tc)) else {
                t.skip();
                continue;
            };
            for p in ps.iter() {
                for q in qs.iter() {
                    if !is_lens_cell(p, q, &from.lens, &to.lens).unwrap_or(false) {
                        continue;
                    }
                    for &si in square_indices {
                        let sq = &corpus.squares[si];
                        let (Some(tw), Some(base_j)) = (&twisted[sq.coreflection], &base[si])
                        else {
                            continue;
                        };
                        let (Ok(shifted_top), Ok(shifted_bottom)) = (
                            FinFunctor::compose(p, &sq.top),
                            FinFunctor::compose(q, &sq.bottom),
                        ) else {
                            t.fail(format!("{}: cell composition failed", sq.name));
                            continue;
                        };
                        match lift(
                            tw,
                            &to.lens,
                            &shifted_top,
                            &shifted_bottom,
                            LiftStrategy::Formula,
                        ) {
                            Ok(shifted) => {
                                let expected = FinFunctor::compose(p, base_j);
                                t.check(
                                    expected.as_ref() == Ok(&shifted.j),
                                    || {
                                        format!(
                                            "{}: shifting along a lens cell into {} breaks naturality",
                                            sq.name, to.name
                                        )
                                    },
                                );
                            }
                            Err(e) => t.fail(format!(
                                "{}: lift along a lens cell into {} failed: {e}",
                                sq.name, to.name
                            )),
                        }
                    }
                }
            }
        }
    }
}

/// Φ(T′, L, h∘r, k∘s) = Φ(T, L, h, k) ∘ s for every coreflection cell
/// (r, s): T′ → T.
fn horizontal_coref_naturality(
    corpus: &Corpus,
    guard: &SizeGuard,
    twisted: &[Option<TwistedCoreflection>],
    cache: &mut FunctorCache,
    base: &[Option<FinFunctor>],
    t: &mut Tally,
) {
    let mut squares_by_coref: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, sq) in corpus.squares.iter().enumerate() {
        squares_by_coref.entry(sq.coreflection).or_default().push(i);
    }

    for (&ci, square_indices) in &squares_by_coref {
        let into = &corpus.coreflections[ci];
        let (id, ic) = functor_cats(corpus, into.functor);
        for (c2i, from) in corpus.coreflections.iter().enumerate() {
            // The source coreflection must itself be twisted to lift from.
            let Some(from_tw) = &twisted[c2i] else { continue };
            let (fd, fc) = functor_cats(corpus, from.functor);
            let estimate = cache.estimate(fd, id).saturating_mul(cache.estimate(fc, ic));
            if guard.admit_search(estimate).is_err() {
                t.skip();
                continue;
            }
            let (Some(rs), Some(ss)) = (cache.between(fd, id), cache.between(fc, ic)) else {
                t.skip();
                continue;
            };
            for r in rs.iter() {
                for s in ss.iter() {
                    if !is_coref_cell(r, s, &from.coreflection, &into.coreflection)
                        .unwrap_or(false)
                    {
                        continue;
                    }
                    for &si in square_indices {
                        let sq = &corpus.squares[si];
                        let Some(base_j) = &base[si] else { continue };
                        let lens = &corpus.lenses[sq.lens].lens;
                        let (Ok(shifted_top), Ok(shifted_bottom)) = (
                            FinFunctor::compose(&sq.top, r),
                            FinFunctor::compose(&sq.bottom, s),
                        ) else {
                            t.fail(format!("{}: cell composition failed", sq.name));
                            continue;
                        };
                        match lift(
                            from_tw,
                            lens,
                            &shifted_top,
                            &shifted_bottom,
                            LiftStrategy::Formula,
                        ) {
                            Ok(shifted) => {
                                let expected = FinFunctor::compose(base_j, s);
                                t.check(
                                    expected.as_ref() == Ok(&shifted.j),
                                    || {
                                        format!(
                                            "{}: shifting along a coreflection cell from {} breaks naturality",
                                            sq.name, from.name
                                        )
                                    },
                                );
                            }
                            Err(e) => t.fail(format!(
                                "{}: lift along a coreflection cell from {} failed: {e}",
                                sq.name, from.name
                            )),
                        }
                    }
                }
            }
        }
    }
}

/// Φ(T, L₂∘L₁, h, k) = Φ(T, L₁, h, Φ(T, L₂, f₁∘h, k)) on every guarded
/// square from a corpus twisted coreflection to a composable corpus lens
/// pair.
fn vertical_lens_compatibility(
    corpus: &Corpus,
    guard: &SizeGuard,
    twisted: &[Option<TwistedCoreflection>],
    cache: &mut FunctorCache,
    t: &mut Tally,
) {
    for first in &corpus.lenses {
        let (c1, c2) = functor_cats(corpus, first.functor);
        for second in &corpus.lenses {
            let (s_dom, c3) = functor_cats(corpus, second.functor);
            if c2 != s_dom {
                continue;
            }
            let composite = match compose_lenses(&first.lens, &second.lens) {
                Ok(l) => l,
                Err(e) => {
                    t.fail(format!(
                        "{} then {}: composable lenses failed to compose: {e}",
                        first.name, second.name
                    ));
                    continue;
                }
            };
            for (ci, nc) in corpus.coreflections.iter().enumerate() {
                let Some(tw) = &twisted[ci] else { continue };
                let (tdom, tcod) = functor_cats(corpus, nc.functor);
                let estimate = cache
                    .estimate(tdom, c1)
                    .saturating_mul(cache.estimate(tcod, c3));
                if guard.admit_search(estimate).is_err() {
                    t.skip();
                    continue;
                }
                let (Some(hs), Some(ks)) = (cache.between(tdom, c1), cache.between(tcod, c3))
                else {
                    t.skip();
                    continue;
                };
                for h in hs.iter() {
                    let Ok(down) = FinFunctor::compose(composite.f(), h) else {
                        continue;
                    };
                    let Ok(inner_top) = FinFunctor::compose(first.lens.f(), h) else {
                        continue;
                    };
                    for k in ks.iter() {
                        let frame = FinFunctor::compose(k, tw.coref().f());
                        if frame.as_ref() != Ok(&down) {
                            continue;
                        }
                        let direct =
                            lift(tw, &composite, h, k, LiftStrategy::Formula).map(|r| r.j);
                        let nested = lift(tw, &second.lens, &inner_top, k, LiftStrategy::Formula)
                            .and_then(|inner| {
                                lift(tw, &first.lens, h, &inner.j, LiftStrategy::Formula)
                            })
                            .map(|r| r.j);
                        match (direct, nested) {
                            (Ok(a), Ok(b)) => t.check(a == b, || {
                                format!(
                                    "{} then {} under {}: the composite-lens lift differs from the nested lifts",
                                    first.name, second.name, nc.name
                                )
                            }),
                            (Err(e), _) | (_, Err(e)) => t.fail(format!(
                                "{} then {} under {}: lifting failed: {e}",
                                first.name, second.name, nc.name
                            )),
                        }
                    }
                }
            }
        }
    }
}

/// Φ(T₂∘T₁, L, h, k) = Φ(T₂, L, Φ(T₁, L, h, k∘f₂), k) on every guarded
/// square from a composable corpus twisted coreflection pair to a corpus
/// lens.
fn vertical_coref_compatibility(
    corpus: &Corpus,
    guard: &SizeGuard,
    twisted: &[Option<TwistedCoreflection>],
    cache: &mut FunctorCache,
    t: &mut Tally,
) {
    for (c1i, first) in corpus.coreflections.iter().enumerate() {
        let Some(first_tw) = &twisted[c1i] else { continue };
        let (x, y) = functor_cats(corpus, first.functor);
        for (c2i, second) in corpus.coreflections.iter().enumerate() {
            let Some(second_tw) = &twisted[c2i] else { continue };
            let (s_dom, z) = functor_cats(corpus, second.functor);
            if y != s_dom {
                continue;
            }
            let composite = match compose_coreflections(&first.coreflection, &second.coreflection)
            {
                Ok(c) => c,
                Err(e) => {
                    t.fail(format!(
                        "{} then {}: composable coreflections failed to compose: {e}",
                        first.name, second.name
                    ));
                    continue;
                }
            };
            // Twisted coreflections are closed under composition.
            let composite_tw = match TwistedCoreflection::try_new(composite) {
                Ok(tw) => tw,
                Err(fail) => {
                    t.fail(format!(
                        "{} then {}: the composite of twisted coreflections is not twisted (fails at {})",
                        first.name, second.name, fail.u
                    ));
                    continue;
                }
            };
            for nl in &corpus.lenses {
                let (c, d) = functor_cats(corpus, nl.functor);
                let estimate = cache.estimate(x, c).saturating_mul(cache.estimate(z, d));
                if guard.admit_search(estimate).is_err() {
                    t.skip();
                    continue;
                }
                let (Some(hs), Some(ks)) = (cache.between(x, c), cache.between(z, d)) else {
                    t.skip();
                    continue;
                };
                for h in hs.iter() {
                    let Ok(down) = FinFunctor::compose(nl.lens.f(), h) else {
                        continue;
                    };
                    for k in ks.iter() {
                        let frame = FinFunctor::compose(k, composite_tw.coref().f());
                        if frame.as_ref() != Ok(&down) {
                            continue;
                        }
                        let Ok(inner_bottom) = FinFunctor::compose(k, second_tw.coref().f())
                        else {
                            continue;
                        };
                        let direct =
                            lift(&composite_tw, &nl.lens, h, k, LiftStrategy::Formula).map(|r| r.j);
                        let nested =
                            lift(first_tw, &nl.lens, h, &inner_bottom, LiftStrategy::Formula)
                                .and_then(|inner| {
                                    lift(second_tw, &nl.lens, &inner.j, k, LiftStrategy::Formula)
                                })
                                .map(|r| r.j);
                        match (direct, nested) {
                            (Ok(a), Ok(b)) => t.check(a == b, || {
                                format!(
                                    "{} then {} against {}: the composite-coreflection lift differs from the nested lifts",
                                    first.name, second.name, nl.name
                                )
                            }),
                            (Err(e), _) | (_, Err(e)) => t.fail(format!(
                                "{} then {} against {}: lifting failed: {e}",
                                first.name, second.name, nl.name
                            )),
                        }
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Suite 5: universal arrows
// ---------------------------------------------------------------------------

/// On every corpus square, the free universal arrow out of `Ef` and the
/// cofree universal arrow into `Eg` satisfy their defining equations and
/// are the unique brute-force solutions wherever the candidate space fits
/// the widened budget.
fn universal_arrows(corpus: &Corpus, guard: &SizeGuard, t: &mut Tally) {
    let brute = brute_guard(guard);
    let twisted = twisted_coreflections(corpus);
    let mut factorizations: BTreeMap<usize, EfFactorization> = BTreeMap::new();

    for sq in &corpus.squares {
        let coref = &corpus.coreflections[sq.coreflection];
        let lens = &corpus.lenses[sq.lens];

        // Free side: factor the coreflection's underlying functor and map
        // out of Ef into the lens.
        let ff = factorizations
            .entry(coref.functor)
            .or_insert_with(|| factorize(&corpus.functors[coref.functor].functor));
        match free_lens_universal(ff, &lens.lens, &sq.top, &sq.bottom) {
            Ok((_, j)) => {
                match FinFunctor::compose(&j, ff.lf()) {
                    Ok(through) => t.check(through == sq.top, || {
                        format!("{}: the free arrow does not restrict to the top leg", sq.name)
                    }),
                    Err(e) => t.fail(format!("{}: j∘Lf does not compose: {e}", sq.name)),
                }
                t.check(
                    is_lens_cell(&j, &sq.bottom, ff.lens(), &lens.lens).unwrap_or(false),
                    || format!("{}: the free arrow is not a lens cell", sq.name),
                );
                let estimate = functor_search_estimate(ff.ef(), lens.lens.f().dom());
                if brute.admit_search(estimate).is_ok() {
                    let candidates = enumerate_functors(ff.ef(), lens.lens.f().dom(), &brute)
                        .unwrap_or_default();
                    let solutions: Vec<&FinFunctor> = candidates
                        .iter()
                        .filter(|c| {
                            FinFunctor::compose(c, ff.lf())
                                .map(|through| through == sq.top)
                                .unwrap_or(false)
                                && is_lens_cell(c, &sq.bottom, ff.lens(), &lens.lens)
                                    .unwrap_or(false)
                        })
                        .collect();
                    t.check(solutions.len() == 1 && *solutions[0] == j, || {
                        format!(
                            "{}: the free arrow is not the unique brute-force solution ({} found)",
                            sq.name,
                            solutions.len()
                        )
                    });
                } else {
                    t.skip();
                }
            }
            Err(e) => t.fail(format!("{}: the free universal arrow failed: {e}", sq.name)),
        }

        // Cofree side: factor the lens's underlying functor and map into Eg
        // from the twisted coreflection.
        let Some(tw) = &twisted[sq.coreflection] else {
            t.fail(format!("{}: the square's coreflection is not twisted", sq.name));
            continue;
        };
        let fg = factorizations
            .entry(lens.functor)
            .or_insert_with(|| factorize(&corpus.functors[lens.functor].functor));
        match cofree_coref_universal(tw, fg, &sq.top, &sq.bottom) {
            Ok((_, j)) => {
                match FinFunctor::compose(fg.rf(), &j) {
                    Ok(through) => t.check(through == sq.bottom, || {
                        format!(
                            "{}: the cofree arrow does not project to the bottom leg",
                            sq.name
                        )
                    }),
                    Err(e) => t.fail(format!("{}: Rg∘j does not compose: {e}", sq.name)),
                }
                t.check(
                    is_coref_cell(&sq.top, &j, tw.coref(), fg.coref().coref()).unwrap_or(false),
                    || format!("{}: the cofree arrow is not a coreflection cell", sq.name),
                );
                let estimate = functor_search_estimate(tw.coref().cod(), fg.ef());
                if brute.admit_search(estimate).is_ok() {
                    let candidates =
                        enumerate_functors(tw.coref().cod(), fg.ef(), &brute).unwrap_or_default();
                    let solutions: Vec<&FinFunctor> = candidates
                        .iter()
                        .filter(|c| {
                            FinFunctor::compose(fg.rf(), c)
                                .map(|through| through == sq.bottom)
                                .unwrap_or(false)
                                && is_coref_cell(&sq.top, c, tw.coref(), fg.coref().coref())
                                    .unwrap_or(false)
                        })
                        .collect();
                    t.check(solutions.len() == 1 && *solutions[0] == j, || {
                        format!(
                            "{}: the cofree arrow is not the unique brute-force solution ({} found)",
                            sq.name,
                            solutions.len()
                        )
                    });
                } else {
                    t.skip();
                }
            }
            Err(e) => t.fail(format!("{}: the cofree universal arrow failed: {e}", sq.name)),
        }
    }
}

// ---------------------------------------------------------------------------
// Suite 6: structure enumeration
// ---------------------------------------------------------------------------

/// Generated-structure search agrees with direct lens-structure search on
/// every corpus functor; the discrete-opfibration variant finds exactly
/// one structure on discrete opfibrations and none elsewhere; the split
/// variant selects exactly the split opfibrations.
fn structure_enumeration(corpus: &Corpus, guard: &SizeGuard, t: &mut Tally) {
    for nf in &corpus.functors {
        let direct = match enumerate_lens_structures(&nf.functor, guard) {
            Ok(d) => d,
            Err(_) => {
                t.skip();
                continue;
            }
        };
        let direct_tables: BTreeSet<_> = direct
            .structures
            .as_deref()
            .unwrap_or(&[])
            .iter()
            .map(|l| l.lifts().clone())
            .collect();

        match enumerate_generated_structures(&nf.functor, GeneratedVariant::Lens, guard) {
            Ok(generated) => {
                t.check(generated.count == direct.count, || {
                    format!(
                        "{}: generated lens search found {} structures, direct search {}",
                        nf.name, generated.count, direct.count
                    )
                });
                let generated_tables: BTreeSet<_> = generated
                    .structures
                    .as_deref()
                    .unwrap_or(&[])
                    .iter()
                    .map(|l| l.lifts().clone())
                    .collect();
                t.check(generated_tables == direct_tables, || {
                    format!(
                        "{}: generated and direct lens searches return different lift tables",
                        nf.name
                    )
                });
            }
            Err(e) => t.fail(format!("{}: generated lens search failed: {e}", nf.name)),
        }

        match enumerate_generated_structures(&nf.functor, GeneratedVariant::Dopf, guard) {
            Ok(generated) => {
                let expected = usize::from(nf.functor.classify().discrete_opfibration);
                t.check(generated.count == expected, || {
                    format!(
                        "{}: discrete-opfibration search found {} structures, expected {}",
                        nf.name, generated.count, expected
                    )
                });
            }
            Err(_) => t.skip(),
        }

        match enumerate_generated_structures(&nf.functor, GeneratedVariant::Sopf, guard) {
            Ok(generated) => {
                let got: BTreeSet<_> = generated
                    .structures
                    .as_deref()
                    .unwrap_or(&[])
                    .iter()
                    .map(|l| l.lifts().clone())
                    .collect();
                let expected: BTreeSet<_> = direct
                    .structures
                    .as_deref()
                    .unwrap_or(&[])
                    .iter()
                    .filter(|l| l.is_split_opfibration())
                    .map(|l| l.lifts().clone())
                    .collect();
                t.check(got == expected, || {
                    format!(
                        "{}: split-opfibration search does not select exactly the split opfibrations",
                        nf.name
                    )
                });
            }
            Err(_) => t.skip(),
        }
    }
}

// ---------------------------------------------------------------------------
// Suite 7: fixtures
// ---------------------------------------------------------------------------

/// Hand-checked facts about the named fixtures: the simplex inclusions
/// carry exactly one twisted coreflection structure each, the bex
/// coreflection is twisted, and the non-twisted fixture fails at `u`.
fn fixtures(_corpus: &Corpus, guard: &SizeGuard, t: &mut Tally) {
    for (label, f) in [("delta(2,2)", delta(2, 2)), ("delta(1,1)", delta(1, 1))] {
        match enumerate_coreflection_structures(&f, guard) {
            Ok(structures) => {
                let twisted_count = structures
                    .iter()
                    .filter(|s| is_twisted(s).is_twisted())
                    .count();
                t.check(twisted_count == 1, || {
                    format!(
                        "{label} carries {twisted_count} twisted coreflection structures, expected exactly 1"
                    )
                });
            }
            Err(e) => t.fail(format!("{label}: structure search exceeded the budget: {e}")),
        }
    }

    t.check(
        is_twisted(&coref_fixtures::bex_coreflection()).is_twisted(),
        || "the bex coreflection is not twisted".to_string(),
    );

    let outcome = is_twisted(&coref_fixtures::non_twisted_coreflection());
    match outcome.failure() {
        Some(failure) => t.check(failure.u == MorId::new("u"), || {
            format!(
                "the non-twisted fixture fails at {} instead of u",
                failure.u
            )
        }),
        None => t.fail("the non-twisted fixture passed the twistedness check".to_string()),
    }
}

// ---------------------------------------------------------------------------
// Suite 8: comprehensive factorisation
// ---------------------------------------------------------------------------

/// Every corpus functor factors as an initial functor followed by a
/// discrete opfibration, the parts compose back to the original, and the
/// factorisation's self-square has the identity as its unique orthogonal
/// diagonal.
fn comprehensive_factorisation(corpus: &Corpus, guard: &SizeGuard, t: &mut Tally) {
    let brute = brute_guard(guard);
    for nf in &corpus.functors {
        let cf = comprehensive_factorize(&nf.functor);
        t.check(cf.initial_part.classify().initial, || {
            format!("{}: the left part is not initial", nf.name)
        });
        t.check(cf.dopf_part.classify().discrete_opfibration, || {
            format!("{}: the right part is not a discrete opfibration", nf.name)
        });
        match FinFunctor::compose(&cf.dopf_part, &cf.initial_part) {
            Ok(recomposed) => t.check(recomposed == nf.functor, || {
                format!("{}: the parts do not compose back to the functor", nf.name)
            }),
            Err(e) => t.fail(format!("{}: the parts do not compose: {e}", nf.name)),
        }

        match orthogonal_lift(&cf.initial_part, &cf.dopf_part, &cf.initial_part, &cf.dopf_part) {
            Ok(diagonal) => {
                t.check(diagonal.is_identity_functor(), || {
                    format!("{}: the self-square diagonal is not the identity", nf.name)
                });
                let estimate = functor_search_estimate(&cf.middle, &cf.middle);
                if brute.admit_search(estimate).is_ok() {
                    let candidates =
                        enumerate_functors(&cf.middle, &cf.middle, &brute).unwrap_or_default();
                    let solutions = candidates
                        .iter()
                        .filter(|c| {
                            FinFunctor::compose(c, &cf.initial_part)
                                .map(|left| left == cf.initial_part)
                                .unwrap_or(false)
                                && FinFunctor::compose(&cf.dopf_part, c)
                                    .map(|right| right == cf.dopf_part)
                                    .unwrap_or(false)
                        })
                        .count();
                    t.check(solutions == 1, || {
                        format!(
                            "{}: the self-square has {} diagonals, expected exactly 1",
                            nf.name, solutions
                        )
                    });
                } else {
                    t.skip();
                }
            }
            Err(e) => t.fail(format!("{}: the self-square has no diagonal: {e}", nf.name)),
        }
    }
}

// ---------------------------------------------------------------------------
// Suite 9: algebra correspondence
// ---------------------------------------------------------------------------

/// The coalgebra and algebra presentations are mutually inverse with the
/// structures they package, and brute-force enumeration of structure
/// maps over `Ef` finds exactly the packaged ones.
fn algebra_correspondence(corpus: &Corpus, guard: &SizeGuard, t: &mut Tally) {
    let brute = brute_guard(guard);

    // Round trips on every corpus structure.
    for nc in corpus.coreflections.iter().filter(|nc| nc.twisted) {
        let tw = match TwistedCoreflection::try_new(nc.coreflection.clone()) {
            Ok(tw) => tw,
            Err(fail) => {
                t.fail(format!(
                    "{}: marked twisted but fails at {}",
                    nc.name, fail.u
                ));
                continue;
            }
        };
        let (_, beta) = twisted_to_coalgebra(&tw);
        match coalgebra_to_twisted(nc.coreflection.f(), &beta) {
            Ok(back) => t.check(
                back.coref().f() == nc.coreflection.f()
                    && back.coref().q() == nc.coreflection.q()
                    && back.coref().counit() == nc.coreflection.counit(),
                || format!("{}: the coalgebra round trip changed the coreflection", nc.name),
            ),
            Err(e) => t.fail(format!("{}: the coalgebra round trip failed: {e}", nc.name)),
        }
    }
    for nl in &corpus.lenses {
        let (_, alpha) = lens_to_algebra(&nl.lens);
        match algebra_to_lens(nl.lens.f(), &alpha) {
            Ok(back) => t.check(
                back.lifts() == nl.lens.lifts() && back.f() == nl.lens.f(),
                || format!("{}: the algebra round trip changed the lens", nl.name),
            ),
            Err(e) => t.fail(format!("{}: the algebra round trip failed: {e}", nl.name)),
        }
    }

    // Bijection with brute-force enumerated structure maps, per functor.
    for nf in &corpus.functors {
        let ff = factorize(&nf.functor);

        // Coalgebras β: B → Ef against twisted coreflection structures.
        let beta_estimate = functor_search_estimate(nf.functor.cod(), ff.ef());
        let structures = enumerate_coreflection_structures(&nf.functor, guard);
        match (&structures, brute.admit_search(beta_estimate)) {
            (Ok(structures), Ok(())) => {
                let enumerated: BTreeSet<FunctorKey> =
                    enumerate_functors(nf.functor.cod(), ff.ef(), &brute)
                        .unwrap_or_default()
                        .into_iter()
                        .filter(|beta| coalgebra_to_twisted(&nf.functor, beta).is_ok())
                        .map(|beta| functor_key(&beta))
                        .collect();
                let packaged: BTreeSet<FunctorKey> = structures
                    .iter()
                    .filter_map(|s| TwistedCoreflection::try_new(s.clone()).ok())
                    .map(|tw| functor_key(&twisted_to_coalgebra(&tw).1))
                    .collect();
                t.check(enumerated == packaged, || {
                    format!(
                        "{}: lawful coalgebras ({}) do not biject with twisted coreflection structures ({})",
                        nf.name,
                        enumerated.len(),
                        packaged.len()
                    )
                });
            }
            _ => t.skip(),
        }

        // Algebras α: Ef → A against lens structures.
        let alpha_estimate = functor_search_estimate(ff.ef(), nf.functor.dom());
        let lenses = enumerate_lens_structures(&nf.functor, guard);
        match (&lenses, brute.admit_search(alpha_estimate)) {
            (Ok(lenses), Ok(())) => {
                let enumerated: BTreeSet<FunctorKey> =
                    enumerate_functors(ff.ef(), nf.functor.dom(), &brute)
                        .unwrap_or_default()
                        .into_iter()
                        .filter(|alpha| algebra_to_lens(&nf.functor, alpha).is_ok())
                        .map(|alpha| functor_key(&alpha))
                        .collect();
                let packaged: BTreeSet<FunctorKey> = lenses
                    .structures
                    .as_deref()
                    .unwrap_or(&[])
                    .iter()
                    .map(|l| functor_key(&lens_to_algebra(l).1))
                    .collect();
                t.check(enumerated == packaged, || {
                    format!(
                        "{}: lawful algebras ({}) do not biject with lens structures ({})",
                        nf.name,
                        enumerated.len(),
                        packaged.len()
                    )
                });
            }
            _ => t.skip(),
        }
    }
}

// ---------------------------------------------------------------------------
// Suite 10: orthogonality
// ---------------------------------------------------------------------------

/// On every corpus square whose lens lives on a discrete opfibration, the
/// lifting operation returns the orthogonal lift of the underlying
/// functors, and that diagonal is unique.
fn orthogonality(corpus: &Corpus, guard: &SizeGuard, t: &mut Tally) {
    let brute = brute_guard(guard);
    let twisted = twisted_coreflections(corpus);
    for sq in &corpus.squares {
        let lens = &corpus.lenses[sq.lens];
        if !lens.lens.f().classify().discrete_opfibration {
            continue;
        }
        let Some(tw) = &twisted[sq.coreflection] else {
            t.fail(format!("{}: the square's coreflection is not twisted", sq.name));
            continue;
        };
        t.check(tw.coref().f().classify().initial, || {
            format!("{}: the coreflection's underlying functor is not initial", sq.name)
        });
        let lifted = lift(tw, &lens.lens, &sq.top, &sq.bottom, LiftStrategy::Both);
        let orthogonal = orthogonal_lift(tw.coref().f(), lens.lens.f(), &sq.top, &sq.bottom);
        match (lifted, orthogonal) {
            (Ok(lifted), Ok(diagonal)) => {
                t.check(lifted.j == diagonal, || {
                    format!(
                        "{}: the lifting operation disagrees with the orthogonal lift",
                        sq.name
                    )
                });
                let estimate = functor_search_estimate(tw.coref().cod(), lens.lens.f().dom());
                if brute.admit_search(estimate).is_ok() {
                    let candidates =
                        enumerate_functors(tw.coref().cod(), lens.lens.f().dom(), &brute)
                            .unwrap_or_default();
                    let solutions = candidates
                        .iter()
                        .filter(|c| {
                            FinFunctor::compose(c, tw.coref().f())
                                .map(|upper| upper == sq.top)
                                .unwrap_or(false)
                                && FinFunctor::compose(lens.lens.f(), c)
                                    .map(|lower| lower == sq.bottom)
                                    .unwrap_or(false)
                        })
                        .count();
                    t.check(solutions == 1, || {
                        format!(
                            "{}: the square has {} diagonals, expected exactly 1",
                            sq.name, solutions
                        )
                    });
                } else {
                    t.skip();
                }
            }
            (Err(e), _) => t.fail(format!("{}: the lifting operation failed: {e}", sq.name)),
            (_, Err(e)) => t.fail(format!("{}: the orthogonal lift failed: {e}", sq.name)),
        }
    }
}

// ---------------------------------------------------------------------------
// Suite 11: documents
// ---------------------------------------------------------------------------

/// Every document kind round-trips byte-stably through its JSON form, law
/// violations are reported as such, and foreign documents are rejected as
/// usage errors rather than law failures.
fn documents(_corpus: &Corpus, _guard: &SizeGuard, t: &mut Tally) {
    let square = SquareDocument {
        coref: coref_fixtures::delta2_coreflection(),
        lens: lens_fixtures::bang_lens(&three()),
        top: coref_fixtures::delta2_coreflection().f().clone(),
        bottom: bang(&three()),
    };
    let samples = [
        ("category", LoadedDocument::Category(three())),
        (
            "functor",
            LoadedDocument::Functor(catlift_core::fincat::sigma(1, 2)),
        ),
        (
            "lens",
            LoadedDocument::Lens(lens_fixtures::two_lifts_lens_left()),
        ),
        (
            "coreflection",
            LoadedDocument::Coreflection(coref_fixtures::bex_coreflection()),
        ),
        ("square", LoadedDocument::Square(Box::new(square))),
    ];
    for (kind, doc) in &samples {
        let first = document_to_string(doc);
        match document_from_str(&first, "selftest") {
            Ok(parsed) => {
                t.check(parsed.kind() == *kind, || {
                    format!("a {kind} document parsed back as {}", parsed.kind())
                });
                let second = document_to_string(&parsed);
                t.check(first == second, || {
                    format!("a {kind} document does not round-trip byte-stably")
                });
            }
            Err(e) => t.fail(format!("a saved {kind} document failed to parse: {e}")),
        }
    }

    // A retargeted composite is a law failure, with the witness named.
    let lawful = document_to_string(&LoadedDocument::Category(three()));
    let tampered = lawful.replace("\"=\": \"02\"", "\"=\": \"01\"");
    match document_from_str(&tampered, "selftest") {
        Err(e) if e.is_law_failure() => {
            t.check(e.to_string().contains("01"), || {
                "the law failure does not name its witness".to_string()
            });
        }
        Err(e) => t.fail(format!(
            "a tampered composite was rejected as a non-law error: {e}"
        )),
        Ok(_) => t.fail("a tampered composite was accepted".to_string()),
    }

    // Foreign schema versions and kinds are usage errors, not law failures.
    let foreign_version = lawful.replace("\"schema_version\": 1", "\"schema_version\": 99");
    match document_from_str(&foreign_version, "selftest") {
        Err(e) => t.check(!e.is_law_failure(), || {
            "a foreign schema version was misreported as a law failure".to_string()
        }),
        Ok(_) => t.fail("a foreign schema version was accepted".to_string()),
    }
    let foreign_kind = lawful.replace("\"kind\": \"category\"", "\"kind\": \"widget\"");
    match document_from_str(&foreign_kind, "selftest") {
        Err(e) => t.check(
            !e.is_law_failure() && matches!(e, DocError::UnknownKind { .. }),
            || "an unknown document kind was not rejected as such".to_string(),
        ),
        Ok(_) => t.fail("an unknown document kind was accepted".to_string()),
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_are_unique_and_ordered() {
        let names: BTreeSet<_> = SUITES.iter().map(|&(_, n)| n).collect();
        assert_eq!(names.len(), SUITES.len());
        let numbers: Vec<_> = SUITES.iter().map(|&(n, _)| n).collect();
        assert_eq!(numbers, (1..=11).collect::<Vec<_>>());
    }

    #[test]
    fn the_cheap_suites_pass() {
        for name in ["fixtures", "documents"] {
            let report = run_named(name).expect("suite runs");
            assert!(
                report.passed(),
                "suite {name} failed: {:?}",
                report.failures
            );
            assert!(report.checked > 0);
        }
    }

    #[test]
    fn unknown_suites_are_rejected_with_the_known_list() {
        let err = run_named("no-such-suite").unwrap_err();
        assert!(err.contains("unknown suite"));
        assert!(err.contains("factorisation"));
    }
}
