use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{DopfLiftError, FinCategory, FinFunctor, MorId, ObjId, Report};

/// A delta lens: a functor `f: A → B` together with a chosen lift
/// `lifts(a, u): a → a'` in `A` for every object `a` and every morphism
/// `u` out of `f a`.
///
/// The table is total on its index set by construction; the three lens
/// axioms are checked separately by [`DeltaLens::check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaLens {
    f: FinFunctor,
    lifts: BTreeMap<(ObjId, MorId), MorId>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LensBuildError {
    #[error("missing lift entry for ({a}, {u})")]
    MissingLift { a: ObjId, u: MorId },
    #[error("entry ({a}, {u}) is outside the lift index set")]
    SpuriousLift { a: ObjId, u: MorId },
    #[error("lift of ({a}, {u}) is `{lift}`, which is not a morphism of the domain")]
    UnknownLift { a: ObjId, u: MorId, lift: MorId },
    #[error("lift of ({a}, {u}) is `{lift}`, whose source is not {a}")]
    LiftSourceMismatch { a: ObjId, u: MorId, lift: MorId },
}

/// Violation of one of the three lens axioms.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LensViolation {
    #[error("lift of ({a}, {u}) is `{lift}`, which maps to `{image}` instead of `{u}`")]
    ProjectsWrongly {
        a: ObjId,
        u: MorId,
        lift: MorId,
        image: MorId,
    },
    #[error("lift of ({a}, identity) is `{found}`, not the identity")]
    IdentityLiftNotIdentity { a: ObjId, found: MorId },
    #[error(
        "lift of ({a}, {v}∘{u}) is `{composite_lift}` but the pasted lifts compose to `{pasted}`"
    )]
    LiftsDoNotPaste {
        a: ObjId,
        u: MorId,
        v: MorId,
        composite_lift: MorId,
        pasted: MorId,
    },
}

impl DeltaLens {
    /// Wrap a functor and a lift table, checking only the shape of the
    /// table (exact index set; each lift a domain morphism out of `a`).
    pub fn new(
        f: FinFunctor,
        lifts: BTreeMap<(ObjId, MorId), MorId>,
    ) -> Result<DeltaLens, LensBuildError> {
        let a_cat = f.dom();
        let b_cat = f.cod();
        for (a, u) in lifts.keys() {
            if !a_cat.has_object(a) || !b_cat.has_morphism(u) || b_cat.src(u) != f.apply_obj(a) {
                return Err(LensBuildError::SpuriousLift {
                    a: a.clone(),
                    u: u.clone(),
                });
            }
        }
        for a in a_cat.objects() {
            for u in b_cat.morphisms_from(f.apply_obj(a)) {
                let Some(lift) = lifts.get(&(a.clone(), u.clone())) else {
                    return Err(LensBuildError::MissingLift {
                        a: a.clone(),
                        u: u.clone(),
                    });
                };
                if !a_cat.has_morphism(lift) {
                    return Err(LensBuildError::UnknownLift {
                        a: a.clone(),
                        u: u.clone(),
                        lift: lift.clone(),
                    });
                }
                if a_cat.src(lift) != a {
                    return Err(LensBuildError::LiftSourceMismatch {
                        a: a.clone(),
                        u: u.clone(),
                        lift: lift.clone(),
                    });
                }
            }
        }
        Ok(DeltaLens { f, lifts })
    }

    /// The identity lens on a category: every morphism lifts to itself.
    pub fn identity(cat: Arc<FinCategory>) -> DeltaLens {
        let mut lifts = BTreeMap::new();
        for a in cat.objects() {
            for u in cat.morphisms_from(a) {
                lifts.insert((a.clone(), u.clone()), u.clone());
            }
        }
        DeltaLens {
            f: FinFunctor::identity(cat),
            lifts,
        }
    }

    pub fn f(&self) -> &FinFunctor {
        &self.f
    }

    pub fn dom(&self) -> &Arc<FinCategory> {
        self.f.dom()
    }

    pub fn cod(&self) -> &Arc<FinCategory> {
        self.f.cod()
    }

    pub fn lifts(&self) -> &BTreeMap<(ObjId, MorId), MorId> {
        &self.lifts
    }

    pub fn lift(&self, a: &ObjId, u: &MorId) -> &MorId {
        self.try_lift(a, u)
            .unwrap_or_else(|| panic!("no lift for ({a}, {u})"))
    }

    pub fn try_lift(&self, a: &ObjId, u: &MorId) -> Option<&MorId> {
        self.lifts.get(&(a.clone(), u.clone()))
    }

    /// Check the three lens axioms.  Pasting (the third axiom) is only
    /// scanned once every lift projects correctly, since its bookkeeping
    /// assumes well-typed lifts.
    pub fn check(&self) -> Report<LensViolation> {
        let a_cat = self.f.dom();
        let b_cat = self.f.cod();
        let mut violations = Vec::new();

        for ((a, u), lift) in &self.lifts {
            let image = self.f.apply_mor(lift);
            if image != u {
                violations.push(LensViolation::ProjectsWrongly {
                    a: a.clone(),
                    u: u.clone(),
                    lift: lift.clone(),
                    image: image.clone(),
                });
            }
        }
        for a in a_cat.objects() {
            let id = b_cat.identity(self.f.apply_obj(a));
            let found = &self.lifts[&(a.clone(), id.clone())];
            if !a_cat.is_identity(found) {
                violations.push(LensViolation::IdentityLiftNotIdentity {
                    a: a.clone(),
                    found: found.clone(),
                });
            }
        }
        if violations.is_empty() {
            for ((a, u), lift) in &self.lifts {
                let a2 = a_cat.tgt(lift);
                for v in b_cat.morphisms_from(b_cat.tgt(u)) {
                    let vu = b_cat.comp(v, u).clone();
                    let composite_lift = &self.lifts[&(a.clone(), vu)];
                    let pasted = a_cat.comp(&self.lifts[&(a2.clone(), v.clone())], lift);
                    if pasted != composite_lift {
                        violations.push(LensViolation::LiftsDoNotPaste {
                            a: a.clone(),
                            u: u.clone(),
                            v: v.clone(),
                            composite_lift: composite_lift.clone(),
                            pasted: pasted.clone(),
                        });
                    }
                }
            }
        }
        Report(violations)
    }

    /// Whether every chosen lift is opcartesian.
    pub fn is_split_opfibration(&self) -> bool {
        self.opcartesian_failure().is_none()
    }

    /// First chosen lift that fails to be opcartesian, in table order.
    pub fn opcartesian_failure(&self) -> Option<OpcartesianFailure> {
        let a_cat = self.f.dom();
        let b_cat = self.f.cod();
        for ((a, u), lift) in &self.lifts {
            let mid = a_cat.tgt(lift);
            for w_prime in a_cat.morphisms_from(a) {
                let fw = self.f.apply_mor(w_prime);
                for v in b_cat.hom(b_cat.tgt(u), self.f.apply_obj(a_cat.tgt(w_prime))) {
                    if b_cat.comp(v, u) != fw {
                        continue;
                    }
                    let solutions = a_cat
                        .hom(mid, a_cat.tgt(w_prime))
                        .into_iter()
                        .filter(|t| self.f.apply_mor(t) == v && a_cat.comp(t, lift) == w_prime)
                        .count();
                    if solutions != 1 {
                        return Some(OpcartesianFailure {
                            a: a.clone(),
                            u: u.clone(),
                            w_prime: w_prime.clone(),
                            solutions,
                        });
                    }
                }
            }
        }
        None
    }
}

/// A chosen lift that is not opcartesian: the morphism `w_prime` out of
/// `a` factors through `u` downstairs but admits `solutions ≠ 1` fillers
/// upstairs.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("lift of ({a}, {u}) is not opcartesian: {w_prime} admits {solutions} fillers")]
pub struct OpcartesianFailure {
    pub a: ObjId,
    pub u: MorId,
    pub w_prime: MorId,
    pub solutions: usize,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LensComposeError {
    #[error("lenses are not composable: the codomain of the first is not the domain of the second")]
    Mismatch,
}

/// Diagrammatic composite of `first: A ↛ B` and `then: B ↛ C`: the functor
/// is `then.f ∘ first.f` and a morphism `u` lifts by first lifting along
/// `then`, then lifting the result along `first`.
pub fn compose_lenses(first: &DeltaLens, then: &DeltaLens) -> Result<DeltaLens, LensComposeError> {
    if first.cod() != then.dom() {
        return Err(LensComposeError::Mismatch);
    }
    let f = FinFunctor::compose(then.f(), first.f()).map_err(|_| LensComposeError::Mismatch)?;
    let mut lifts = BTreeMap::new();
    for a in first.dom().objects() {
        let b = first.f().apply_obj(a);
        for u in then.cod().morphisms_from(f.apply_obj(a)) {
            let mid = then.lift(b, u);
            lifts.insert((a.clone(), u.clone()), first.lift(a, mid).clone());
        }
    }
    Ok(DeltaLens { f, lifts })
}

/// The unique lens structure on a discrete opfibration.
pub fn lens_from_dopf(f: &FinFunctor) -> Result<DeltaLens, DopfLiftError> {
    let mut lifts = BTreeMap::new();
    for a in f.dom().objects() {
        for u in f.cod().morphisms_from(f.apply_obj(a)) {
            lifts.insert((a.clone(), u.clone()), f.dopf_lift(a, u)?);
        }
    }
    Ok(DeltaLens {
        f: f.clone(),
        lifts,
    })
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LensCellError {
    #[error("the square is malformed: functor boundaries do not line up")]
    ShapeMismatch,
    #[error("the square does not commute")]
    SquareNotCommuting,
    #[error("lift preservation fails: {0}")]
    NotACell(CellFailure),
}

/// Witness that `(h, k)` fails to preserve a chosen lift.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("h maps the lift of ({a}, {u}) to `{via_h}` but the target lens lifts to `{expected}`")]
pub struct CellFailure {
    pub a: ObjId,
    pub u: MorId,
    pub via_h: MorId,
    pub expected: MorId,
}

/// First lift-preservation failure of the square `(h, k): from → to`,
/// after checking that the square commutes.
pub fn lens_cell_failure(
    h: &FinFunctor,
    k: &FinFunctor,
    from: &DeltaLens,
    to: &DeltaLens,
) -> Result<Option<CellFailure>, LensCellError> {
    if h.dom() != from.dom()
        || h.cod() != to.dom()
        || k.dom() != from.cod()
        || k.cod() != to.cod()
    {
        return Err(LensCellError::ShapeMismatch);
    }
    let left = FinFunctor::compose(k, from.f()).map_err(|_| LensCellError::ShapeMismatch)?;
    let right = FinFunctor::compose(to.f(), h).map_err(|_| LensCellError::ShapeMismatch)?;
    if left != right {
        return Err(LensCellError::SquareNotCommuting);
    }
    for ((a, u), lift) in from.lifts() {
        let via_h = h.apply_mor(lift);
        let expected = to.lift(h.apply_obj(a), k.apply_mor(u));
        if via_h != expected {
            return Ok(Some(CellFailure {
                a: a.clone(),
                u: u.clone(),
                via_h: via_h.clone(),
                expected: expected.clone(),
            }));
        }
    }
    Ok(None)
}

/// Whether `(h, k)` is a cell of lenses `from → to`.
pub fn is_lens_cell(
    h: &FinFunctor,
    k: &FinFunctor,
    from: &DeltaLens,
    to: &DeltaLens,
) -> Result<bool, LensCellError> {
    Ok(lens_cell_failure(h, k, from, to)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{bang, delta, one, two};
    use crate::lenses::fixtures;

    #[test]
    fn identity_lens_is_valid() {
        let l = DeltaLens::identity(two());
        assert!(l.check().is_ok());
        assert!(l.is_split_opfibration());
    }

    #[test]
    fn bang_lens_with_identity_lifts_is_valid() {
        let l = fixtures::bang_lens(&two());
        assert!(l.check().is_ok(), "{}", l.check());
    }

    #[test]
    fn bang_lens_with_wrong_identity_lift_fails() {
        let f = bang(&two());
        let mut lifts = BTreeMap::new();
        lifts.insert(("0".into(), "1_0".into()), "01".into());
        lifts.insert(("1".into(), "1_0".into()), "1_1".into());
        let l = DeltaLens::new(f, lifts).unwrap();
        let report = l.check();
        assert_eq!(
            report.violations(),
            &[LensViolation::IdentityLiftNotIdentity {
                a: "0".into(),
                found: "01".into(),
            }]
        );
    }

    #[test]
    fn composing_with_identity_changes_nothing() {
        let l = fixtures::two_lifts_lens_left();
        let pre = compose_lenses(&DeltaLens::identity(l.dom().clone()), &l).unwrap();
        let post = compose_lenses(&l, &DeltaLens::identity(l.cod().clone())).unwrap();
        assert_eq!(pre, l);
        assert_eq!(post, l);
    }

    #[test]
    fn dopf_lenses_compose_to_the_dopf_lens_of_the_composite() {
        let f1 = delta(0, 1);
        let f2 = delta(0, 2);
        let composite = FinFunctor::compose(&f2, &f1).unwrap();
        let composed = compose_lenses(&lens_from_dopf(&f1).unwrap(), &lens_from_dopf(&f2).unwrap())
            .unwrap();
        assert_eq!(composed, lens_from_dopf(&composite).unwrap());
        assert!(composed.check().is_ok());
    }

    #[test]
    fn composite_lift_formula_spot_check() {
        let left = fixtures::two_lifts_lens_left();
        let bang_lens = fixtures::bang_lens(&two());
        let composed = compose_lenses(&left, &bang_lens).unwrap();
        assert!(composed.check().is_ok());
        // Lifting the point's identity through ! gives identities in Two,
        // which lift to identities in TwoLifts.
        for a in composed.dom().objects() {
            let lift = composed.lift(a, &"1_0".into());
            assert!(composed.dom().is_identity(lift));
        }
    }

    #[test]
    fn lens_from_dopf_rejects_the_bang_functor() {
        let err = lens_from_dopf(&bang(&two())).unwrap_err();
        assert!(matches!(err, DopfLiftError::NonUnique { .. }));
    }

    #[test]
    fn dopf_lens_is_a_split_opfibration() {
        let l = lens_from_dopf(&delta(0, 1)).unwrap();
        assert!(l.check().is_ok());
        assert!(l.is_split_opfibration());
    }

    #[test]
    fn right_leaning_two_lifts_lens_is_not_a_split_opfibration() {
        let l = fixtures::two_lifts_lens_right();
        assert!(l.check().is_ok(), "{}", l.check());
        let failure = l.opcartesian_failure().unwrap();
        assert_eq!(
            failure,
            OpcartesianFailure {
                a: "a".into(),
                u: "01".into(),
                w_prime: "u1".into(),
                solutions: 0,
            }
        );
    }

    #[test]
    fn left_leaning_two_lifts_lens_is_a_split_opfibration() {
        let l = fixtures::two_lifts_lens_left();
        assert!(l.is_split_opfibration());
    }

    #[test]
    fn identity_cell_holds() {
        let l = fixtures::two_lifts_lens_left();
        let h = FinFunctor::identity(l.dom().clone());
        let k = FinFunctor::identity(l.cod().clone());
        assert!(is_lens_cell(&h, &k, &l, &l).unwrap());
    }

    #[test]
    fn lift_preservation_failure_is_witnessed() {
        // Compare the two lens structures on TwoLifts → Two through the
        // identity square: lifts of (a, 01) disagree.
        let left = fixtures::two_lifts_lens_left();
        let right = fixtures::two_lifts_lens_right();
        let h = FinFunctor::identity(left.dom().clone());
        let k = FinFunctor::identity(left.cod().clone());
        let failure = lens_cell_failure(&h, &k, &left, &right).unwrap().unwrap();
        assert_eq!(failure.a, "a".into());
        assert_eq!(failure.u, "01".into());
        assert_eq!(failure.via_h, "u1".into());
        assert_eq!(failure.expected, "u2".into());
    }

    #[test]
    fn non_commuting_square_is_rejected() {
        let l = fixtures::bang_lens(&two());
        let id1 = DeltaLens::identity(one());
        let h = bang(&two());
        // k: 1 → 1 is forced, but pairing with h: 2 → 1 on the wrong side
        // leaves the boundaries mismatched.
        let k = FinFunctor::identity(one());
        assert_eq!(
            lens_cell_failure(&h, &k, &id1, &l).unwrap_err(),
            LensCellError::ShapeMismatch
        );
    }

    #[test]
    fn spurious_and_missing_table_entries_are_rejected() {
        let f = bang(&two());
        let mut lifts = BTreeMap::new();
        lifts.insert(("0".into(), "1_0".into()), "1_0".into());
        assert!(matches!(
            DeltaLens::new(f.clone(), lifts.clone()).unwrap_err(),
            LensBuildError::MissingLift { .. }
        ));
        lifts.insert(("1".into(), "1_0".into()), "1_1".into());
        lifts.insert(("0".into(), "01".into()), "01".into());
        assert!(matches!(
            DeltaLens::new(f, lifts).unwrap_err(),
            LensBuildError::SpuriousLift { .. }
        ));
    }
}
