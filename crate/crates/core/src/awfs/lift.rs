use std::collections::BTreeMap;

use thiserror::Error;

use crate::coreflections::{split_to_twisted, TwistedCoreflection};
use crate::fincat::{
    boo_lift, discrete_of, orthogonal_lift, FinFunctor, PushoutSort,
};
use crate::lenses::{tabulator, DeltaLens};

use super::factorization::EfFactorization;

/// How to solve a lifting problem of a twisted coreflection against a
/// delta lens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftStrategy {
    /// Chase each morphism through the counit, the section table, and the
    /// chosen lens lifts.
    Formula,
    /// Reassemble the diagonal from the glueing presentation of the
    /// coreflection's codomain and the tabulator of the lens.
    Universal,
    /// Run both and insist they agree.
    Both,
}

/// Functors produced on the way through the universal construction.
#[derive(Debug, Clone)]
pub struct LiftIntermediates {
    /// The top functor lifted through the tabulator's first projection.
    pub h_hat: FinFunctor,
    /// The fibre sum mapped into the tabulator.
    pub ell: FinFunctor,
}

#[derive(Debug, Clone)]
pub struct LiftResult {
    /// The diagonal filler: `j ∘ f = h` and `g ∘ j = k`.
    pub j: FinFunctor,
    pub strategy: LiftStrategy,
    /// Present when the universal construction ran.
    pub intermediates: Option<LiftIntermediates>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LiftError {
    #[error("the square's functors do not share the required (co)domains")]
    ShapeMismatch,
    #[error("the square does not commute")]
    SquareDoesNotCommute,
}

/// Fill the square
///
/// ```text
///         h
///     A ─────→ C
///     │        │
///   f │        │ g
///     ↓        ↓
///     X ─────→ D
///         k
/// ```
///
/// where `f` carries the twisted coreflection `t` and `g` the lens, with a
/// diagonal `j: X → C` satisfying `j ∘ f = h` and `g ∘ j = k`.
pub fn lift(
    t: &TwistedCoreflection,
    lens: &DeltaLens,
    h: &FinFunctor,
    k: &FinFunctor,
    strategy: LiftStrategy,
) -> Result<LiftResult, LiftError> {
    let s = t.coref();
    if h.dom() != s.dom()
        || h.cod() != lens.dom()
        || k.dom() != s.cod()
        || k.cod() != lens.cod()
    {
        return Err(LiftError::ShapeMismatch);
    }
    let around_top = FinFunctor::compose(lens.f(), h).expect("shapes were just checked");
    let around_bottom = FinFunctor::compose(k, s.f()).expect("shapes were just checked");
    if around_top != around_bottom {
        return Err(LiftError::SquareDoesNotCommute);
    }

    let formula = matches!(strategy, LiftStrategy::Formula | LiftStrategy::Both)
        .then(|| lift_by_formula(t, lens, h, k));
    let universal = matches!(strategy, LiftStrategy::Universal | LiftStrategy::Both)
        .then(|| lift_by_universal(t, lens, h, k));

    let (j, intermediates) = match (formula, universal) {
        (Some(j), None) => (j, None),
        (None, Some((j, inter))) => (j, Some(inter)),
        (Some(jf), Some((ju, inter))) => {
            assert_eq!(jf, ju, "lift strategies disagree — this is a bug");
            (jf, Some(inter))
        }
        (None, None) => unreachable!("every strategy runs at least one construction"),
    };

    debug_assert!(j.validate().is_ok(), "{}", j.validate());
    debug_assert_eq!(&FinFunctor::compose(&j, s.f()).expect("triangle shapes"), h);
    debug_assert_eq!(&FinFunctor::compose(lens.f(), &j).expect("triangle shapes"), k);
    Ok(LiftResult {
        j,
        strategy,
        intermediates,
    })
}

/// Formula route.  On objects, `jx` closes the chosen lift of `k(ε_x)` at
/// `h(qx)`.  A morphism that `q` collapses is lifted directly; one that `q`
/// moves is rebuilt as lift-of-section, then `h(qu)`, then lift-of-counit.
fn lift_by_formula(
    t: &TwistedCoreflection,
    lens: &DeltaLens,
    h: &FinFunctor,
    k: &FinFunctor,
) -> FinFunctor {
    let s = t.coref();
    let x_cat = s.cod().clone();
    let c_cat = lens.dom().clone();

    let mut obj_map: BTreeMap<_, _> = BTreeMap::new();
    for x in x_cat.objects() {
        let start = h.apply_obj(s.q().apply_obj(x));
        let climbed = lens.lift(start, k.apply_mor(s.counit_at(x)));
        obj_map.insert(x.clone(), c_cat.tgt(climbed).clone());
    }

    let mut mor_map: BTreeMap<_, _> = BTreeMap::new();
    for u in x_cat.non_identity_morphisms() {
        let jx = &obj_map[x_cat.src(u)];
        let image = match t.qbar(u) {
            None => lens.lift(jx, k.apply_mor(u)).clone(),
            Some(qbar) => {
                let into_image = lens.lift(jx, k.apply_mor(qbar));
                let across = h.apply_mor(s.q().apply_mor(u));
                let y = x_cat.tgt(u);
                let out_of_image = lens.lift(
                    h.apply_obj(s.q().apply_obj(y)),
                    k.apply_mor(s.counit_at(y)),
                );
                c_cat.comp_path(&[into_image, across, out_of_image])
            }
        };
        mor_map.insert(u.clone(), image);
    }
    FinFunctor::from_parts(x_cat, c_cat, obj_map, mor_map).expect("formula lift is total")
}

/// Universal route.  Present the coreflection's codomain as the glueing of
/// its domain onto the fibre sum, send the fibres into the tabulator of the
/// lens by orthogonality, and read the diagonal off the glueing's sorts
/// through the comparison isomorphism.
fn lift_by_universal(
    t: &TwistedCoreflection,
    lens: &DeltaLens,
    h: &FinFunctor,
    k: &FinFunctor,
) -> (FinFunctor, LiftIntermediates) {
    let s = t.coref();
    let glued = split_to_twisted(s);
    debug_assert!(glued.is_iso);
    let tab = tabulator(lens);

    let (a0, iota) = discrete_of(s.dom());
    let top_points = FinFunctor::compose(h, &iota).expect("restriction to the points");
    let h_hat = boo_lift(&top_points, &tab.pi_a)
        .expect("the tabulator includes every object of the lens domain");

    let fib = glued.fibre_inclusion.dom().clone();
    let f0_objs = a0
        .objects()
        .iter()
        .map(|a| (a.clone(), s.f().apply_obj(a).clone()))
        .collect();
    let f0 = FinFunctor::from_parts(a0, fib, f0_objs, BTreeMap::new())
        .expect("the left adjoint lands in the fibre sum");
    let bottom = FinFunctor::compose(k, &glued.fibre_inclusion).expect("fibres under k");
    let ell = orthogonal_lift(&f0, &tab.pi_b, &h_hat, &bottom)
        .expect("counit components lift the fibres uniquely into the tabulator");
    let into_c = FinFunctor::compose(&tab.pi_a, &ell).expect("tabulator includes into the domain");

    let preimage: BTreeMap<_, _> = glued
        .comparison
        .mor_map()
        .iter()
        .map(|(mp, m)| (m, mp))
        .collect();

    let x_cat = s.cod().clone();
    let c_cat = lens.dom().clone();
    let obj_map: BTreeMap<_, _> = x_cat
        .objects()
        .iter()
        .map(|x| (x.clone(), into_c.apply_obj(x).clone()))
        .collect();
    let mut mor_map: BTreeMap<_, _> = BTreeMap::new();
    for m in x_cat.non_identity_morphisms() {
        let image = match &glued.pushout.sorts[preimage[m]] {
            PushoutSort::S1(fibre_mor) => into_c.apply_mor(fibre_mor).clone(),
            PushoutSort::S2 { u, w, v } => c_cat.comp_path(&[
                into_c.apply_mor(u),
                h.apply_mor(w),
                into_c.apply_mor(v),
            ]),
        };
        mor_map.insert(m.clone(), image);
    }
    let j = FinFunctor::from_parts(x_cat, c_cat, obj_map, mor_map)
        .expect("universal lift is total");
    (j, LiftIntermediates { h_hat, ell })
}

/// The action of a square on middle categories: for `(h, k): f → g` with
/// `g ∘ h = k ∘ f`, the functor `E(h, k): Ef → Eg` obtained by lifting
/// `(Lg ∘ h, k ∘ Rf)` against the coreflection of `f` and the lens of `g`.
/// Identity squares give identities and pasting gives composition.
pub fn e_of_square(
    h: &FinFunctor,
    k: &FinFunctor,
    ff: &EfFactorization,
    fg: &EfFactorization,
) -> Result<FinFunctor, LiftError> {
    let top = FinFunctor::compose(fg.lf(), h).map_err(|_| LiftError::ShapeMismatch)?;
    let bottom = FinFunctor::compose(k, ff.rf()).map_err(|_| LiftError::ShapeMismatch)?;
    Ok(lift(ff.coref(), fg.lens(), &top, &bottom, LiftStrategy::Formula)?.j)
}

/// Universal arrow out of a free lens: given a lens on `g: C → D` and a
/// square `(h, k): f → g`, the unique `j: Ef → C` with `j ∘ Lf = h` such
/// that `(j, k)` is a morphism of lenses.  Also returns the tabulator-valued
/// functor the construction routes through.
pub fn free_lens_universal(
    ff: &EfFactorization,
    lens: &DeltaLens,
    h: &FinFunctor,
    k: &FinFunctor,
) -> Result<(FinFunctor, FinFunctor), LiftError> {
    let bottom = FinFunctor::compose(k, ff.rf()).map_err(|_| LiftError::ShapeMismatch)?;
    let result = lift(ff.coref(), lens, h, &bottom, LiftStrategy::Universal)?;
    let inter = result.intermediates.expect("universal strategy keeps its intermediates");
    Ok((inter.ell, result.j))
}

/// Universal arrow into a cofree coreflection: given a twisted coreflection
/// on `f: A → X` and a square `(h, k): f → g`, the unique `j: X → Eg` with
/// `Rg ∘ j = k` such that `(h, j)` is a morphism of coreflections.  Also
/// returns the tabulator-valued functor the construction routes through.
pub fn cofree_coref_universal(
    t: &TwistedCoreflection,
    fg: &EfFactorization,
    h: &FinFunctor,
    k: &FinFunctor,
) -> Result<(FinFunctor, FinFunctor), LiftError> {
    let top = FinFunctor::compose(fg.lf(), h).map_err(|_| LiftError::ShapeMismatch)?;
    let result = lift(t, fg.lens(), &top, k, LiftStrategy::Universal)?;
    let inter = result.intermediates.expect("universal strategy keeps its intermediates");
    Ok((inter.ell, result.j))
}
