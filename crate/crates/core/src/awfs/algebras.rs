use std::collections::BTreeMap;

use thiserror::Error;

use crate::coreflections::{SplitCoreflection, TwistedCoreflection};
use crate::fincat::{FinFunctor, MorId, ObjId};
use crate::lenses::DeltaLens;

use super::factorization::{factorize, EfFactorization, EfMorSort};
use super::lift::e_of_square;
use super::names::{e1_mor, e2_mor};

/// Why a candidate `β: B → Ef` fails to be a coalgebra for the
/// factorisation of `f: A → B`.  Each law failure carries the first
/// morphism witnessing it.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CoalgebraError {
    #[error("expected a functor from the codomain into the middle category of the factorisation")]
    ShapeMismatch,
    #[error("not a section of the right half: {at} comes back as {image}")]
    NotASection { at: MorId, image: MorId },
    #[error("restriction along f disagrees with the left half at {at}: got {got}, want {want}")]
    LeftHalf { at: MorId, got: MorId, want: MorId },
    #[error(
        "comultiplication fails at {at}: the comparison gives {via_delta}, the induced square gives {via_square}"
    )]
    Comultiplication {
        at: MorId,
        via_delta: MorId,
        via_square: MorId,
    },
}

/// Why a candidate `α: Ef → A` fails to be an algebra for the
/// factorisation of `f: A → B`.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("expected a functor from the middle category of the factorisation into the domain")]
    ShapeMismatch,
    #[error("not a retraction of the left half: {at} comes back as {image}")]
    NotARetraction { at: MorId, image: MorId },
    #[error("projection along f disagrees with the right half at {at}: got {got}, want {want}")]
    RightHalf { at: MorId, got: MorId, want: MorId },
    #[error(
        "multiplication fails at {at}: the comparison gives {via_mu}, the induced square gives {via_square}"
    )]
    Multiplication {
        at: MorId,
        via_mu: MorId,
        via_square: MorId,
    },
}

/// Package a twisted coreflection on `f: A → B` as the coalgebra
/// `β: B → Ef` it corresponds to: an object goes to the pair of its
/// reflection and counit component, a fibre morphism rides along as a
/// vertical morphism, and a moved morphism crosses via its section.
pub fn twisted_to_coalgebra(t: &TwistedCoreflection) -> (EfFactorization, FinFunctor) {
    let s = t.coref();
    let ff = factorize(s.f());
    let x_cat = s.cod().clone();

    let obj_map: BTreeMap<ObjId, ObjId> = x_cat
        .objects()
        .iter()
        .map(|x| {
            let reflected = s.q().apply_obj(x);
            (x.clone(), ff.object_for(reflected, s.counit_at(x)).clone())
        })
        .collect();
    let mut mor_map: BTreeMap<MorId, MorId> = BTreeMap::new();
    for u in x_cat.non_identity_morphisms() {
        let x = x_cat.src(u);
        let y = x_cat.tgt(u);
        let qx = s.q().apply_obj(x);
        let image = match t.qbar(u) {
            None => e1_mor(qx, s.counit_at(x), s.counit_at(y), u),
            Some(section) => e2_mor(
                qx,
                s.counit_at(x),
                s.q().apply_obj(y),
                s.counit_at(y),
                section,
                s.q().apply_mor(u),
            ),
        };
        mor_map.insert(u.clone(), image);
    }
    let beta = FinFunctor::from_parts(x_cat, ff.ef().clone(), obj_map, mor_map)
        .expect("a twisted coreflection assembles a coalgebra");
    debug_assert!(beta.validate().is_ok(), "{}", beta.validate());
    (ff, beta)
}

/// Check the three coalgebra laws for `β: B → Ef` and, when they hold,
/// extract the twisted coreflection: the right adjoint is `Sf ∘ β` and the
/// counit at `x` is the second component of the pair `β(x)`.
pub fn coalgebra_to_twisted(
    f: &FinFunctor,
    beta: &FinFunctor,
) -> Result<TwistedCoreflection, CoalgebraError> {
    let ff = factorize(f);
    if beta.dom() != f.cod() || beta.cod() != ff.ef() {
        return Err(CoalgebraError::ShapeMismatch);
    }

    let round = FinFunctor::compose(ff.rf(), beta).expect("shapes were just checked");
    for m in f.cod().morphisms() {
        let image = round.apply_mor(m);
        if image != m {
            return Err(CoalgebraError::NotASection {
                at: m.clone(),
                image: image.clone(),
            });
        }
    }

    let restricted = FinFunctor::compose(beta, f).expect("shapes were just checked");
    for m in f.dom().morphisms() {
        let got = restricted.apply_mor(m);
        let want = ff.lf().apply_mor(m);
        if got != want {
            return Err(CoalgebraError::LeftHalf {
                at: m.clone(),
                got: got.clone(),
                want: want.clone(),
            });
        }
    }

    let via_delta = FinFunctor::compose(ff.delta(), beta).expect("comparison shapes");
    let id_a = FinFunctor::identity(f.dom().clone());
    let square = e_of_square(&id_a, beta, &ff, ff.lf_factorization())
        .expect("the section laws make the coalgebra square commute");
    let via_square = FinFunctor::compose(&square, beta).expect("comparison shapes");
    for m in f.cod().morphisms() {
        let lhs = via_delta.apply_mor(m);
        let rhs = via_square.apply_mor(m);
        if lhs != rhs {
            return Err(CoalgebraError::Comultiplication {
                at: m.clone(),
                via_delta: lhs.clone(),
                via_square: rhs.clone(),
            });
        }
    }

    let q = FinFunctor::compose(ff.sf(), beta).expect("shapes were just checked");
    let counit: BTreeMap<ObjId, MorId> = f
        .cod()
        .objects()
        .iter()
        .map(|x| {
            let (_, u) = ff.pair_of(beta.apply_obj(x));
            (x.clone(), u.clone())
        })
        .collect();
    let coref = SplitCoreflection::new(f.clone(), q, counit)
        .expect("the coalgebra laws shape the adjoint tables");
    debug_assert!(coref.check().is_ok(), "{}", coref.check());
    Ok(TwistedCoreflection::try_new(coref).expect("coalgebras induce twisted coreflections"))
}

/// Package a delta lens on `f: A → B` as the algebra `α: Ef → A` it
/// corresponds to: a pair goes to the target of its chosen lift, a
/// vertical morphism continues lifting from there, and a crossing composes
/// lift, crossing, lift.
pub fn lens_to_algebra(l: &DeltaLens) -> (EfFactorization, FinFunctor) {
    let f = l.f();
    let ff = factorize(f);
    let a_cat = f.dom().clone();

    let obj_map: BTreeMap<ObjId, ObjId> = ff
        .ef()
        .objects()
        .iter()
        .map(|x| {
            let (a, u) = ff.pair_of(x);
            (x.clone(), a_cat.tgt(l.lift(a, u)).clone())
        })
        .collect();
    let mut mor_map: BTreeMap<MorId, MorId> = BTreeMap::new();
    for m in ff.ef().non_identity_morphisms() {
        let image = match ff.sort_of(m) {
            EfMorSort::E1 { a, u1, v, .. } => {
                let landed = a_cat.tgt(l.lift(a, u1));
                l.lift(landed, v).clone()
            }
            EfMorSort::E2 {
                a1,
                u1,
                a2,
                u2,
                v,
                w,
            } => {
                let landed = a_cat.tgt(l.lift(a1, u1));
                let back = l.lift(landed, v);
                let forward = l.lift(a2, u2);
                a_cat.comp_path(&[back, w, forward])
            }
        };
        mor_map.insert(m.clone(), image);
    }
    let alpha = FinFunctor::from_parts(ff.ef().clone(), a_cat, obj_map, mor_map)
        .expect("a lens assembles an algebra");
    debug_assert!(alpha.validate().is_ok(), "{}", alpha.validate());
    (ff, alpha)
}

/// Check the three algebra laws for `α: Ef → A` and, when they hold,
/// extract the delta lens: the lift of `(a, u)` is the image of the counit
/// morphism `u: (a, 1_{fa}) → (a, u)`.
pub fn algebra_to_lens(f: &FinFunctor, alpha: &FinFunctor) -> Result<DeltaLens, AlgebraError> {
    let ff = factorize(f);
    if alpha.dom() != ff.ef() || alpha.cod() != f.dom() {
        return Err(AlgebraError::ShapeMismatch);
    }

    let round = FinFunctor::compose(alpha, ff.lf()).expect("shapes were just checked");
    for m in f.dom().morphisms() {
        let image = round.apply_mor(m);
        if image != m {
            return Err(AlgebraError::NotARetraction {
                at: m.clone(),
                image: image.clone(),
            });
        }
    }

    let projected = FinFunctor::compose(f, alpha).expect("shapes were just checked");
    for m in ff.ef().morphisms() {
        let got = projected.apply_mor(m);
        let want = ff.rf().apply_mor(m);
        if got != want {
            return Err(AlgebraError::RightHalf {
                at: m.clone(),
                got: got.clone(),
                want: want.clone(),
            });
        }
    }

    let via_mu = FinFunctor::compose(alpha, ff.mu()).expect("comparison shapes");
    let id_b = FinFunctor::identity(f.cod().clone());
    let square = e_of_square(alpha, &id_b, ff.rf_factorization(), &ff)
        .expect("the retraction laws make the algebra square commute");
    let via_square = FinFunctor::compose(alpha, &square).expect("comparison shapes");
    for m in ff.rf_factorization().ef().morphisms() {
        let lhs = via_mu.apply_mor(m);
        let rhs = via_square.apply_mor(m);
        if lhs != rhs {
            return Err(AlgebraError::Multiplication {
                at: m.clone(),
                via_mu: lhs.clone(),
                via_square: rhs.clone(),
            });
        }
    }

    let a_cat = f.dom();
    let b_cat = f.cod();
    let mut lifts: BTreeMap<(ObjId, MorId), MorId> = BTreeMap::new();
    for a in a_cat.objects() {
        let fa = f.apply_obj(a);
        for u in b_cat.morphisms_from(fa) {
            let value = if b_cat.is_identity(u) {
                a_cat.identity(a).clone()
            } else {
                alpha
                    .apply_mor(&e1_mor(a, b_cat.identity(fa), u, u))
                    .clone()
            };
            lifts.insert((a.clone(), u.clone()), value);
        }
    }
    let lens = DeltaLens::new(f.clone(), lifts).expect("the algebra laws shape the lift table");
    debug_assert!(lens.check().is_ok(), "{}", lens.check());
    Ok(lens)
}
