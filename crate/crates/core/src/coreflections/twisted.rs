/*! Twisted coreflections: the section-table definition, the correspondence
with initial functors out of discrete categories, stability under pullback,
and the pushout construction that yields the universal twisted replacement
of an arbitrary split coreflection. */

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{
    discrete_of, pullback, pushout_along_discrete, FinCategory, FinFunctor, MorId, ObjId,
    Pullback, Pushout, PushoutError, PushoutSort,
};

use super::coreflection::SplitCoreflection;

/// The table of sections `q̄u: x → fqx`, one per morphism `u: x → y` whose
/// image under the right adjoint is not an identity.  Each entry satisfies
/// `q̄u ∘ ε_x = 1_{fqx}` and `ε_y ∘ fq(u) ∘ q̄u = u`, and is the only
/// morphism in `hom(x, fqx)` doing so.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedWitness {
    qbar: BTreeMap<MorId, MorId>,
}

impl TwistedWitness {
    /// The section for `u`, if `u` has one recorded (identities and
    /// fibre morphisms do not).
    pub fn qbar(&self, u: &MorId) -> Option<&MorId> {
        self.qbar.get(u)
    }

    pub fn table(&self) -> &BTreeMap<MorId, MorId> {
        &self.qbar
    }
}

/// The first morphism at which the section search fails, together with how
/// many candidates satisfied both equations (twistedness needs exactly one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedFailure {
    pub u: MorId,
    pub candidates: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistedOutcome {
    Twisted(TwistedWitness),
    NotTwisted(TwistedFailure),
}

impl TwistedOutcome {
    pub fn is_twisted(&self) -> bool {
        matches!(self, TwistedOutcome::Twisted(_))
    }

    pub fn witness(&self) -> Option<&TwistedWitness> {
        match self {
            TwistedOutcome::Twisted(w) => Some(w),
            TwistedOutcome::NotTwisted(_) => None,
        }
    }

    pub fn failure(&self) -> Option<&TwistedFailure> {
        match self {
            TwistedOutcome::Twisted(_) => None,
            TwistedOutcome::NotTwisted(f) => Some(f),
        }
    }
}

/// Decide twistedness by exhaustive search: for every morphism `u` moved by
/// the right adjoint, scan `hom(x, fqx)` for morphisms satisfying both
/// section equations and demand exactly one hit.
pub fn is_twisted(s: &SplitCoreflection) -> TwistedOutcome {
    let a_cat = s.dom();
    let b_cat = s.cod();
    let mut qbar = BTreeMap::new();
    for u in b_cat.morphisms() {
        if a_cat.is_identity(s.q().apply_mor(u)) {
            continue;
        }
        let x = b_cat.src(u);
        let y = b_cat.tgt(u);
        let fqx = s.f().apply_obj(s.q().apply_obj(x));
        let fqu = s.f().apply_mor(s.q().apply_mor(u));
        let eps_x = s.counit_at(x);
        let eps_y = s.counit_at(y);
        let hits: Vec<&MorId> = b_cat
            .hom(x, fqx)
            .into_iter()
            .filter(|cand| {
                b_cat.comp(cand, eps_x) == b_cat.identity(fqx)
                    && &b_cat.comp_path(&[cand, fqu, eps_y]) == u
            })
            .collect();
        match hits.as_slice() {
            [only] => {
                qbar.insert(u.clone(), (*only).clone());
            }
            _ => {
                return TwistedOutcome::NotTwisted(TwistedFailure {
                    u: u.clone(),
                    candidates: hits.len(),
                })
            }
        }
    }
    TwistedOutcome::Twisted(TwistedWitness { qbar })
}

/// A split coreflection bundled with its verified section table, so that
/// later constructions never repeat the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedCoreflection {
    coref: SplitCoreflection,
    witness: TwistedWitness,
}

impl TwistedCoreflection {
    pub fn try_new(coref: SplitCoreflection) -> Result<TwistedCoreflection, TwistedFailure> {
        match is_twisted(&coref) {
            TwistedOutcome::Twisted(witness) => Ok(TwistedCoreflection { coref, witness }),
            TwistedOutcome::NotTwisted(failure) => Err(failure),
        }
    }

    pub fn coref(&self) -> &SplitCoreflection {
        &self.coref
    }

    pub fn witness(&self) -> &TwistedWitness {
        &self.witness
    }

    pub fn qbar(&self, u: &MorId) -> Option<&MorId> {
        self.witness.qbar(u)
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum InitialCorefError {
    #[error("the functor's domain is not discrete")]
    DomainNotDiscrete,
    #[error("nothing maps into `{over}`: the slice there is empty")]
    EmptySlice { over: ObjId },
    #[error("`{over}` sits under {count} slice objects; an initial functor from a discrete category needs exactly one")]
    AmbiguousSlice { over: ObjId, count: usize },
}

/// The canonical coreflection carried by an initial functor `f: A₀ → X`
/// from a discrete category: `q` sends `x` to the unique `a` admitting a
/// morphism `fa → x`, and the counit at `x` is that morphism.
pub fn coreflection_from_initial(
    f: &FinFunctor,
) -> Result<SplitCoreflection, InitialCorefError> {
    if !f.dom().is_discrete() {
        return Err(InitialCorefError::DomainNotDiscrete);
    }
    let a0 = f.dom().clone();
    let x_cat = f.cod().clone();
    let mut q_obj = BTreeMap::new();
    let mut counit = BTreeMap::new();
    for x in x_cat.objects() {
        let mut pairs = Vec::new();
        for a in a0.objects() {
            for u in x_cat.hom(f.apply_obj(a), x) {
                pairs.push((a.clone(), u.clone()));
            }
        }
        match pairs.len() {
            0 => return Err(InitialCorefError::EmptySlice { over: x.clone() }),
            1 => {
                let (a, u) = pairs.pop().expect("length one");
                q_obj.insert(x.clone(), a);
                counit.insert(x.clone(), u);
            }
            count => {
                return Err(InitialCorefError::AmbiguousSlice {
                    over: x.clone(),
                    count,
                })
            }
        }
    }
    let q_mor = x_cat
        .non_identity_morphisms()
        .map(|m| (m.clone(), MorId::identity_of(&q_obj[x_cat.src(m)])))
        .collect();
    let q = FinFunctor::from_parts(x_cat, a0, q_obj, q_mor)
        .expect("right adjoint built from verified slices");
    Ok(SplitCoreflection::new(f.clone(), q, counit)
        .expect("coreflection built from verified slices"))
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PullbackCorefError {
    #[error("the functor does not land in the coreflection's domain")]
    Mismatch,
}

/// A coreflection pulled back along a functor into its domain, together
/// with the pullback square it lives over.
#[derive(Debug)]
pub struct PulledBackCoreflection {
    /// The coreflection `D ↛ D ×_A B`.
    pub coref: SplitCoreflection,
    /// The square: `proj_left` is the new right adjoint, `proj_right` the
    /// codomain leg of the cell back into the original coreflection.
    pub pullback: Pullback,
}

/// Pull back `s: A ↛ B` along `k: D → A`.  The new left adjoint sends `d`
/// to `(d, fkd)`, the right adjoint is the left projection, and the counit
/// at `(d, b)` is `(1_d, ε_b)`.
pub fn pullback_coreflection(
    s: &SplitCoreflection,
    k: &FinFunctor,
) -> Result<PulledBackCoreflection, PullbackCorefError> {
    if k.cod() != s.dom() {
        return Err(PullbackCorefError::Mismatch);
    }
    let pb = pullback(k, s.q()).expect("k and q share a codomain");
    let p_cat = &pb.category;

    let pair_obj = |left: &ObjId, right: &ObjId| -> ObjId {
        p_cat
            .objects()
            .iter()
            .find(|o| pb.proj_left.apply_obj(o) == left && pb.proj_right.apply_obj(o) == right)
            .cloned()
            .expect("pullback holds every matching pair of objects")
    };
    let pair_mor = |left: &MorId, right: &MorId| -> MorId {
        p_cat
            .morphisms()
            .find(|m| pb.proj_left.apply_mor(m) == left && pb.proj_right.apply_mor(m) == right)
            .cloned()
            .expect("pullback holds every matching pair of morphisms")
    };

    let d_cat = k.dom().clone();
    let obj_map: BTreeMap<ObjId, ObjId> = d_cat
        .objects()
        .iter()
        .map(|d| (d.clone(), pair_obj(d, s.f().apply_obj(k.apply_obj(d)))))
        .collect();
    let mor_map: BTreeMap<MorId, MorId> = d_cat
        .non_identity_morphisms()
        .map(|m| {
            let image = s.f().apply_mor(k.apply_mor(m));
            (m.clone(), pair_mor(m, image))
        })
        .collect();
    let left_adjoint = FinFunctor::from_parts(d_cat, p_cat.clone(), obj_map, mor_map)
        .expect("pullback of a left adjoint");

    let counit = p_cat
        .objects()
        .iter()
        .map(|o| {
            let d = pb.proj_left.apply_obj(o);
            let b = pb.proj_right.apply_obj(o);
            let component = pair_mor(k.dom().identity(d), s.counit_at(b));
            (o.clone(), component)
        })
        .collect();

    let coref = SplitCoreflection::new(left_adjoint, pb.proj_left.clone(), counit)
        .expect("pullback coreflection is well-shaped");
    Ok(PulledBackCoreflection { coref, pullback: pb })
}

/// The sum of the fibres of the right adjoint: the wide subcategory of the
/// coreflection's codomain spanned by the morphisms that `q` sends to
/// identities, with the ambient names, plus its inclusion.
pub fn fibre_sum(s: &SplitCoreflection) -> (Arc<FinCategory>, FinFunctor) {
    let a_cat = s.dom();
    let b_cat = s.cod();
    let mut builder = FinCategory::builder();
    for o in b_cat.objects() {
        builder.object(o.clone());
    }
    let vertical: Vec<&MorId> = b_cat
        .non_identity_morphisms()
        .filter(|m| a_cat.is_identity(s.q().apply_mor(m)))
        .collect();
    for m in &vertical {
        builder.morphism((*m).clone(), b_cat.src(m).clone(), b_cat.tgt(m).clone());
    }
    for g in &vertical {
        for f in &vertical {
            if b_cat.src(g) == b_cat.tgt(f) {
                builder.composite((*g).clone(), (*f).clone(), b_cat.comp(g, f).clone());
            }
        }
    }
    let cat = Arc::new(builder.build().expect("fibres compose within fibres"));
    let obj_map = cat.objects().iter().map(|o| (o.clone(), o.clone())).collect();
    let mor_map = cat
        .non_identity_morphisms()
        .map(|m| (m.clone(), m.clone()))
        .collect();
    let inclusion = FinFunctor::from_parts(cat.clone(), b_cat.clone(), obj_map, mor_map)
        .expect("fibre sum includes into the ambient category");
    (cat, inclusion)
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TwistedFromPushoutError {
    #[error("the functor's domain is not the discrete category on the glueing category's objects")]
    WrongDomain,
    #[error("the functor is not initial from a discrete category: {0}")]
    NotInitial(InitialCorefError),
    #[error(transparent)]
    Pushout(PushoutError),
}

/// Glue a category `A` onto an initial functor `f: A₀ → X` (where `A₀` is
/// the discrete category on `A`'s objects) by pushing out along the
/// inclusion.  The result carries a canonical twisted coreflection
/// `A ↛ B`: the right adjoint collapses sort-S1 morphisms like the
/// discrete coreflection of `f` and extracts the middle component from
/// sort-S2 morphisms, and the section of `[u; w; v]` is `u`.
pub fn twisted_from_pushout(
    f: &FinFunctor,
    glue: &Arc<FinCategory>,
) -> Result<(TwistedCoreflection, Pushout), TwistedFromPushoutError> {
    let (a0, iota) = discrete_of(glue);
    if f.dom() != &a0 {
        return Err(TwistedFromPushoutError::WrongDomain);
    }
    let base = coreflection_from_initial(f).map_err(TwistedFromPushoutError::NotInitial)?;
    let po = pushout_along_discrete(f, &iota).map_err(TwistedFromPushoutError::Pushout)?;
    let b_cat = po.category.clone();

    let q_obj: BTreeMap<ObjId, ObjId> = b_cat
        .objects()
        .iter()
        .map(|x| (x.clone(), base.q().apply_obj(x).clone()))
        .collect();
    let q_mor: BTreeMap<MorId, MorId> = b_cat
        .non_identity_morphisms()
        .map(|m| {
            let image = match &po.sorts[m] {
                PushoutSort::S1(_) => MorId::identity_of(&q_obj[b_cat.src(m)]),
                PushoutSort::S2 { w, .. } => w.clone(),
            };
            (m.clone(), image)
        })
        .collect();
    let q = FinFunctor::from_parts(b_cat.clone(), glue.clone(), q_obj, q_mor)
        .expect("glued right adjoint");

    let counit = b_cat
        .objects()
        .iter()
        .map(|x| (x.clone(), po.pi.apply_mor(base.counit_at(x)).clone()))
        .collect();

    let coref = SplitCoreflection::new(po.f_prime.clone(), q, counit)
        .expect("glued coreflection is well-shaped");
    let twisted = TwistedCoreflection::try_new(coref)
        .expect("a coreflection glued from an initial functor is twisted");
    Ok((twisted, po))
}

/// The universal twisted replacement of a split coreflection, with the
/// comparison functor back to the original codomain.
#[derive(Debug)]
pub struct SplitToTwisted {
    /// The replacement `A ↛ B'`.
    pub twisted: TwistedCoreflection,
    /// `B' → B`: identity on objects and on fibre morphisms, and sends
    /// `[u; w; v]` to `v ∘ f(w) ∘ u`.
    pub comparison: FinFunctor,
    /// Whether the comparison is an isomorphism — equivalently, whether the
    /// input was already twisted.
    pub is_iso: bool,
    /// The glueing square behind the replacement.
    pub pushout: Pushout,
    /// Wide inclusion of the fibre sum `∑ q⁻¹{a} → B`.
    pub fibre_inclusion: FinFunctor,
}

/// Rebuild a split coreflection `s: A ↛ B` out of its fibre sum: restrict
/// the left adjoint to `A₀ → ∑ q⁻¹{a}`, glue `A` back on, and compare the
/// result with `B`.  The comparison is an isomorphism exactly when `s` is
/// twisted.
///
/// Expects `s` to pass [`SplitCoreflection::check`]; panics otherwise.
pub fn split_to_twisted(s: &SplitCoreflection) -> SplitToTwisted {
    let (fib, fibre_inclusion) = fibre_sum(s);
    let (a0, _) = discrete_of(s.dom());
    let obj_map: BTreeMap<ObjId, ObjId> = a0
        .objects()
        .iter()
        .map(|a| (a.clone(), s.f().apply_obj(a).clone()))
        .collect();
    let restricted = FinFunctor::from_parts(a0, fib, obj_map, BTreeMap::new())
        .expect("left adjoint restricts to the fibre sum");

    let (twisted, pushout) =
        twisted_from_pushout(&restricted, s.dom()).expect("a valid split coreflection glues");

    let b_prime = &pushout.category;
    let b_cat = s.cod();
    let comp_obj: BTreeMap<ObjId, ObjId> = b_prime
        .objects()
        .iter()
        .map(|o| (o.clone(), o.clone()))
        .collect();
    let comp_mor: BTreeMap<MorId, MorId> = b_prime
        .non_identity_morphisms()
        .map(|m| {
            let image = match &pushout.sorts[m] {
                PushoutSort::S1(original) => original.clone(),
                PushoutSort::S2 { u, w, v } => {
                    b_cat.comp_path(&[u, s.f().apply_mor(w), v])
                }
            };
            (m.clone(), image)
        })
        .collect();
    let comparison = FinFunctor::from_parts(b_prime.clone(), b_cat.clone(), comp_obj, comp_mor)
        .expect("comparison lands in the original codomain");
    debug_assert!(comparison.validate().is_ok(), "{}", comparison.validate());

    let class = comparison.classify();
    debug_assert!(class.identity_on_objects);
    SplitToTwisted {
        twisted,
        comparison,
        is_iso: class.isomorphism,
        pushout,
        fibre_inclusion,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coreflections::coreflection::{compose_coreflections, is_coref_cell};
    use crate::coreflections::fixtures::{
        bex_coreflection, delta1_coreflection, delta2_coreflection, non_twisted_coreflection,
    };
    use crate::fincat::oracle::are_isomorphic;
    use crate::fincat::{delta, disc_two, non_twisted, one, sigma, two, CategoryBuilder};

    fn fixtures() -> Vec<SplitCoreflection> {
        vec![
            delta1_coreflection(),
            delta2_coreflection(),
            bex_coreflection(),
            non_twisted_coreflection(),
        ]
    }

    #[test]
    fn delta2_is_twisted_with_trivial_sections() {
        let outcome = is_twisted(&delta2_coreflection());
        let witness = outcome.witness().expect("twisted");
        let expected = BTreeMap::from([
            (MorId::new("01"), MorId::new("1_0")),
            (MorId::new("02"), MorId::new("1_0")),
        ]);
        assert_eq!(witness.table(), &expected);
    }

    #[test]
    fn bex_is_twisted_through_the_retraction() {
        let outcome = is_twisted(&bex_coreflection());
        let witness = outcome.witness().expect("twisted");
        let expected = BTreeMap::from([
            (MorId::new("u"), MorId::new("r")),
            (MorId::new("us"), MorId::new("1_L")),
        ]);
        assert_eq!(witness.table(), &expected);
    }

    #[test]
    fn non_twisted_fails_at_u_with_no_candidates() {
        let s = non_twisted_coreflection();
        assert!(s.cod().hom(&"x".into(), &"a0".into()).is_empty());
        assert_eq!(
            is_twisted(&s),
            TwistedOutcome::NotTwisted(TwistedFailure {
                u: "u".into(),
                candidates: 0,
            })
        );
    }

    #[test]
    fn section_equations_hold_on_every_recorded_entry() {
        for s in fixtures() {
            let TwistedOutcome::Twisted(witness) = is_twisted(&s) else {
                continue;
            };
            let b = s.cod();
            for (u, qb) in witness.table() {
                let x = b.src(u);
                let y = b.tgt(u);
                let fqx = s.f().apply_obj(s.q().apply_obj(x));
                let fqu = s.f().apply_mor(s.q().apply_mor(u));
                assert_eq!(b.comp(qb, s.counit_at(x)), b.identity(fqx));
                assert_eq!(&b.comp_path(&[qb, fqu, s.counit_at(y)]), u);
            }
        }
    }

    #[test]
    fn moved_by_q_and_moved_by_fq_agree() {
        for s in fixtures() {
            let a = s.dom();
            let b = s.cod();
            for u in b.morphisms() {
                let qu = s.q().apply_mor(u);
                let fqu = s.f().apply_mor(qu);
                assert_eq!(a.is_identity(qu), b.is_identity(fqu), "at {u}");
            }
        }
    }

    #[test]
    fn discrete_domain_is_vacuously_twisted() {
        let s = coreflection_from_initial(&delta(1, 1)).unwrap();
        assert_eq!(s, delta1_coreflection());
        let outcome = is_twisted(&s);
        assert!(outcome.witness().expect("twisted").table().is_empty());
    }

    #[test]
    fn initial_functor_recovers_the_bex_counit() {
        // Restrict the Bex embedding to the fibre sum {L, M, R; s, r, sr}
        // and check the slice-derived counit picks the section s at M.
        let (fib, _) = fibre_sum(&bex_coreflection());
        let f = FinFunctor::from_parts(
            discrete_of(&two()).0,
            fib,
            BTreeMap::from([
                (ObjId::new("0"), ObjId::new("L")),
                (ObjId::new("1"), ObjId::new("R")),
            ]),
            BTreeMap::new(),
        )
        .unwrap();
        let s = coreflection_from_initial(&f).unwrap();
        assert!(s.check().is_ok(), "{}", s.check());
        assert_eq!(s.counit_at(&"M".into()), &MorId::new("s"));
        assert_eq!(s.q().apply_obj(&"M".into()), &ObjId::new("0"));
    }

    #[test]
    fn identity_on_a_discrete_category_gives_the_identity_coreflection() {
        let d = disc_two();
        let s = coreflection_from_initial(&FinFunctor::identity(d.clone())).unwrap();
        assert_eq!(s, SplitCoreflection::identity(&d));
    }

    #[test]
    fn double_cover_is_rejected_as_ambiguous() {
        let f = FinFunctor::from_parts(
            disc_two(),
            two(),
            BTreeMap::from([
                (ObjId::new("0"), ObjId::new("0")),
                (ObjId::new("1"), ObjId::new("0")),
            ]),
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(
            coreflection_from_initial(&f),
            Err(InitialCorefError::AmbiguousSlice {
                over: "0".into(),
                count: 2,
            })
        );
    }

    #[test]
    fn uncovered_object_is_rejected_as_empty() {
        let f = FinFunctor::from_parts(
            one(),
            disc_two(),
            BTreeMap::from([(ObjId::new("0"), ObjId::new("0"))]),
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(
            coreflection_from_initial(&f),
            Err(InitialCorefError::EmptySlice { over: "1".into() })
        );
    }

    #[test]
    fn non_discrete_domain_is_rejected() {
        assert_eq!(
            coreflection_from_initial(&delta(2, 2)),
            Err(InitialCorefError::DomainNotDiscrete)
        );
    }

    #[test]
    fn pullback_along_identity_is_an_isomorphic_copy() {
        let s = delta2_coreflection();
        let k = FinFunctor::identity(s.dom().clone());
        let pulled = pullback_coreflection(&s, &k).unwrap();
        assert!(pulled.coref.check().is_ok(), "{}", pulled.coref.check());
        assert!(are_isomorphic(&pulled.pullback.category, s.cod()));
    }

    #[test]
    fn pulled_back_coreflections_form_cells() {
        let cases: Vec<(SplitCoreflection, FinFunctor)> = vec![
            (delta2_coreflection(), delta(1, 1)),
            (delta2_coreflection(), sigma(1, 2)),
            (bex_coreflection(), delta(0, 1)),
            (non_twisted_coreflection(), FinFunctor::identity(two())),
        ];
        for (s, k) in cases {
            let pulled = pullback_coreflection(&s, &k).unwrap();
            assert!(pulled.coref.check().is_ok(), "{}", pulled.coref.check());
            assert_eq!(
                is_coref_cell(&k, &pulled.pullback.proj_right, &pulled.coref, &s),
                Ok(true)
            );
        }
    }

    #[test]
    fn pullback_along_the_discrete_inclusion_is_the_fibre_sum() {
        for s in fixtures() {
            let (_, iota) = discrete_of(s.dom());
            let pulled = pullback_coreflection(&s, &iota).unwrap();
            let (fib, inclusion) = fibre_sum(&s);
            assert!(are_isomorphic(&pulled.pullback.category, &fib));
            assert!(inclusion.validate().is_ok());
        }
    }

    #[test]
    fn pullback_rejects_a_functor_into_the_wrong_category() {
        let err = pullback_coreflection(&delta1_coreflection(), &delta(0, 2));
        assert!(matches!(err, Err(PullbackCorefError::Mismatch)));
    }

    #[test]
    fn glueing_the_arrow_onto_a_span_point() {
        // X = {x0 → x1} ⊔ {z} with f picking x0 and z; glueing 2 on adds
        // the formal composite [1_x0; 01; 1_z]: x0 → z.
        let x = Arc::new(
            CategoryBuilder::default()
                .object("x0")
                .object("x1")
                .object("z")
                .morphism("m", "x0", "x1")
                .build()
                .unwrap(),
        );
        let f = FinFunctor::from_parts(
            discrete_of(&two()).0,
            x,
            BTreeMap::from([
                (ObjId::new("0"), ObjId::new("x0")),
                (ObjId::new("1"), ObjId::new("z")),
            ]),
            BTreeMap::new(),
        )
        .unwrap();
        let (twisted, po) = twisted_from_pushout(&f, &two()).unwrap();
        assert_eq!(po.category.morphism_count(), 5);
        assert!(twisted.coref().check().is_ok(), "{}", twisted.coref().check());
        let glued = MorId::new("[1_x0;01;1_z]");
        assert_eq!(twisted.qbar(&glued), Some(&MorId::new("1_x0")));
        assert_eq!(twisted.coref().q().apply_mor(&glued), &MorId::new("01"));
        assert_eq!(twisted.coref().counit_at(&"x1".into()), &MorId::new("m"));
    }

    #[test]
    fn glueing_everything_discrete_changes_nothing() {
        let d = disc_two();
        let f = FinFunctor::identity(d.clone());
        let (twisted, _) = twisted_from_pushout(&f, &d).unwrap();
        assert_eq!(twisted.coref(), &SplitCoreflection::identity(&d));
    }

    #[test]
    fn sections_of_glued_morphisms_are_their_first_leg() {
        let (fib, _) = fibre_sum(&bex_coreflection());
        let f = FinFunctor::from_parts(
            discrete_of(&two()).0,
            fib,
            BTreeMap::from([
                (ObjId::new("0"), ObjId::new("L")),
                (ObjId::new("1"), ObjId::new("R")),
            ]),
            BTreeMap::new(),
        )
        .unwrap();
        let (twisted, po) = twisted_from_pushout(&f, &two()).unwrap();
        for (m, sort) in &po.sorts {
            if let PushoutSort::S2 { u, .. } = sort {
                assert_eq!(twisted.qbar(m), Some(u));
            }
        }
    }

    #[test]
    fn twisted_replacement_of_a_twisted_coreflection_is_isomorphic() {
        for s in [delta1_coreflection(), delta2_coreflection(), bex_coreflection()] {
            let result = split_to_twisted(&s);
            assert!(result.is_iso);
            assert!(result.comparison.classify().isomorphism);
            let h = FinFunctor::identity(s.dom().clone());
            assert_eq!(
                is_coref_cell(&h, &result.comparison, result.twisted.coref(), &s),
                Ok(true)
            );
        }
    }

    #[test]
    fn twisted_replacement_of_bex_has_eight_morphisms() {
        let result = split_to_twisted(&bex_coreflection());
        assert_eq!(result.pushout.category.morphism_count(), 8);
    }

    #[test]
    fn non_twisted_comparison_is_not_full() {
        let s = non_twisted_coreflection();
        let result = split_to_twisted(&s);
        assert!(!result.is_iso);
        let class = result.comparison.classify();
        assert!(class.identity_on_objects && !class.fully_faithful);
        // The missing preimage: hom(x, a1) is empty upstairs but holds u
        // downstairs.
        let b_prime = &result.pushout.category;
        assert!(b_prime.hom(&"x".into(), &"a1".into()).is_empty());
        assert_eq!(
            non_twisted().hom(&"x".into(), &"a1".into()),
            vec![&MorId::new("u")]
        );
    }

    #[test]
    fn comparison_iso_agrees_with_the_section_search() {
        for s in fixtures() {
            let result = split_to_twisted(&s);
            assert_eq!(result.is_iso, is_twisted(&s).is_twisted());
        }
    }

    #[test]
    fn twisted_replacement_is_idempotent() {
        for s in fixtures() {
            let once = split_to_twisted(&s);
            let again = split_to_twisted(once.twisted.coref());
            assert!(again.is_iso);
        }
    }

    #[test]
    fn twisted_coreflections_compose_to_twisted_coreflections() {
        let pairs = [
            (delta1_coreflection(), delta2_coreflection()),
            (delta1_coreflection(), bex_coreflection()),
        ];
        for (first, then) in pairs {
            assert!(is_twisted(&first).is_twisted());
            assert!(is_twisted(&then).is_twisted());
            let composite = compose_coreflections(&first, &then).unwrap();
            assert!(is_twisted(&composite).is_twisted());
        }
    }
}
