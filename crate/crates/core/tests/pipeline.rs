//! End-to-end walk through the public API: build a category by hand, run it
//! through every layer — classification, factorisation, lifting, the
//! (co)algebra correspondences, and the comprehensive factorisation — and
//! cross-check each stage against an independently computed expectation.

use std::collections::BTreeMap;
use std::sync::Arc;

use catlift_core::awfs::{
    algebra_to_lens, coalgebra_to_twisted, factorize, lens_to_algebra, lift, twisted_to_coalgebra,
    LiftStrategy,
};
use catlift_core::coreflections::{is_twisted, split_to_twisted, SplitCoreflection};
use catlift_core::fincat::{
    comprehensive_factorize, enumerate_functors, orthogonal_lift, FinCategory, FinFunctor,
    SizeGuard,
};
use catlift_core::lenses::{enumerate_lens_structures, lens_from_diagram, tabulator, DeltaLens};

/// A hand-rolled retract: `p, i` with `p ∘ i = 1` and the idempotent `e = i ∘ p`.
fn retract() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::builder()
            .object("base")
            .object("total")
            .morphism("i", "base", "total")
            .morphism("p", "total", "base")
            .morphism("e", "total", "total")
            .composite("p", "i", "1_base")
            .composite("i", "p", "e")
            .composite("e", "i", "i")
            .composite("p", "e", "p")
            .composite("e", "e", "e")
            .build()
            .expect("retract closes at five morphisms"),
    )
}

fn point() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::builder()
            .object("pt")
            .build()
            .expect("terminal category"),
    )
}

#[test]
fn a_retract_collapses_onto_its_base_through_every_layer() {
    let r = retract();
    assert!(r.validate().is_ok());

    // Collapse the retract onto the point.
    let collapse = FinFunctor::from_parts(
        r.clone(),
        point(),
        r.objects()
            .iter()
            .map(|o| (o.clone(), "pt".into()))
            .collect(),
        r.non_identity_morphisms()
            .map(|m| (m.clone(), "1_pt".into()))
            .collect(),
    )
    .expect("collapse is total");
    assert!(collapse.validate().is_ok());
    let class = collapse.classify();
    assert!(class.initial, "the retract is connected");
    assert!(!class.fully_faithful);

    // Factorise it and make sure the halves recompose.
    let fac = factorize(&collapse);
    assert_eq!(
        FinFunctor::compose(fac.rf(), fac.lf()).expect("halves compose"),
        collapse
    );
    assert!(fac.ef().validate().is_ok());
    assert!(fac.coref().coref().check().is_ok());
    assert!(fac.lens().check().is_ok());

    // Only the identity sits over the point, so the middle category has one
    // object per object of the retract and one crossing per morphism — a
    // copy of the retract.
    assert_eq!(fac.ef().object_count(), r.object_count());
    assert_eq!(fac.ef().morphism_count(), r.morphism_count());
}

#[test]
fn the_twisted_half_lifts_against_the_lens_half_in_both_styles() {
    let r = retract();
    let inclusion = FinFunctor::from_parts(
        point(),
        r.clone(),
        [("pt".into(), "base".into())].into_iter().collect(),
        BTreeMap::new(),
    )
    .expect("inclusion of the base point");

    let fac = factorize(&inclusion);

    // Lift the factorisation's own coreflection against its own lens: the
    // identity square must lift to the identity on the middle category.
    let id_mid = FinFunctor::identity(fac.ef().clone());
    let got = lift(
        fac.coref(),
        fac.lens(),
        fac.lf(),
        fac.rf(),
        LiftStrategy::Both,
    )
    .expect("the factorisation square lifts");
    assert_eq!(got.j, id_mid);

    // The coalgebra and algebra extracted from the factorisation invert.
    // The coalgebra lives over the factorisation of the left half itself,
    // so the extraction is keyed by `Lf`, not by the original inclusion.
    let twisted = fac.coref();
    let (_, beta) = twisted_to_coalgebra(twisted);
    let back = coalgebra_to_twisted(fac.lf(), &beta).expect("beta satisfies the coalgebra laws");
    assert_eq!(back.coref().f(), twisted.coref().f());
    assert_eq!(back.coref().q(), twisted.coref().q());
    assert_eq!(back.coref().counit(), twisted.coref().counit());

    let lens = fac.lens();
    let (_, alpha) = lens_to_algebra(lens);
    let lens_back =
        algebra_to_lens(lens.f(), &alpha).expect("alpha satisfies the algebra laws");
    assert_eq!(lens_back.lifts(), lens.lifts());
}

#[test]
fn twistedness_of_the_base_inclusion_matches_its_pushout_comparison() {
    let r = retract();
    let f = FinFunctor::from_parts(
        point(),
        r.clone(),
        [("pt".into(), "base".into())].into_iter().collect(),
        BTreeMap::new(),
    )
    .expect("inclusion of the base point");
    let q = FinFunctor::from_parts(
        r.clone(),
        point(),
        r.objects()
            .iter()
            .map(|o| (o.clone(), "pt".into()))
            .collect(),
        r.non_identity_morphisms()
            .map(|m| (m.clone(), "1_pt".into()))
            .collect(),
    )
    .expect("projection to the point");
    let counit: BTreeMap<_, _> = [
        ("base".into(), "1_base".into()),
        ("total".into(), "i".into()),
    ]
    .into_iter()
    .collect();
    let s = SplitCoreflection::new(f, q, counit).expect("adjunction data is well-shaped");
    assert!(s.check().is_ok());

    // `q` moves no morphism out of the fibre, so twistedness holds vacuously
    // and the glueing comparison must be invertible.
    let outcome = is_twisted(&s);
    let replaced = split_to_twisted(&s);
    assert_eq!(outcome.is_twisted(), replaced.is_iso);
    assert!(replaced.is_iso);

    // The catalog counterexample sits on the other side of the equivalence:
    // the section for `u` would need to live in an empty hom-set.
    let bad = catlift_core::coreflections::fixtures::non_twisted_coreflection();
    let bad_outcome = is_twisted(&bad);
    let bad_replaced = split_to_twisted(&bad);
    assert_eq!(bad_outcome.is_twisted(), bad_replaced.is_iso);
    assert!(!bad_replaced.is_iso);
    assert_eq!(bad_outcome.failure().expect("a witness").u, "u".into());
}

#[test]
fn comprehensive_and_lens_factorisations_cooperate_on_a_shared_square() {
    let r = retract();
    let collapse = FinFunctor::from_parts(
        r.clone(),
        point(),
        r.objects()
            .iter()
            .map(|o| (o.clone(), "pt".into()))
            .collect(),
        r.non_identity_morphisms()
            .map(|m| (m.clone(), "1_pt".into()))
            .collect(),
    )
    .expect("collapse is total");

    let cf = comprehensive_factorize(&collapse);
    assert!(cf.initial_part.classify().initial);
    assert!(cf.dopf_part.classify().discrete_opfibration);
    assert_eq!(
        FinFunctor::compose(&cf.dopf_part, &cf.initial_part).expect("parts compose"),
        collapse
    );

    // Lift the initial part against the dopf part of the same square and
    // confirm the answer is the unique diagonal.
    let ell = orthogonal_lift(&cf.initial_part, &cf.dopf_part, &cf.initial_part, &cf.dopf_part)
        .expect("the factorisation square has a diagonal");
    let guard = SizeGuard::default();
    let all = enumerate_functors(&cf.middle, &cf.middle, &guard).expect("middle is tiny");
    let diagonals: Vec<_> = all
        .into_iter()
        .filter(|c| {
            FinFunctor::compose(c, &cf.initial_part).as_ref() == Ok(&cf.initial_part)
                && FinFunctor::compose(&cf.dopf_part, c).as_ref() == Ok(&cf.dopf_part)
        })
        .collect();
    assert_eq!(diagonals, vec![ell]);
}

#[test]
fn tabulating_a_lens_and_reading_the_diagram_back_recovers_it() {
    let r = retract();
    // The collapse lens: everything lifts through the chosen section `i`.
    let collapse = FinFunctor::from_parts(
        r.clone(),
        point(),
        r.objects()
            .iter()
            .map(|o| (o.clone(), "pt".into()))
            .collect(),
        r.non_identity_morphisms()
            .map(|m| (m.clone(), "1_pt".into()))
            .collect(),
    )
    .expect("collapse is total");
    let structures = enumerate_lens_structures(&collapse, &SizeGuard::default())
        .expect("search space is tiny");
    // Every lift table over the point is forced to identities: exactly one.
    assert_eq!(structures.count, 1);
    let lens: DeltaLens = structures.structures.expect("structures retained")[0].clone();

    let tab = tabulator(&lens);
    assert!(tab.lambda.validate().is_ok());
    assert!(tab.pi_b.classify().discrete_opfibration);
    let again = lens_from_diagram(&tab.pi_a, lens.f()).expect("tabulator legs form a diagram");
    assert_eq!(again.lifts(), lens.lifts());
    assert_eq!(again.f(), lens.f());
}
