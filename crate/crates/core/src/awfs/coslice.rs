use std::collections::BTreeMap;
use std::sync::Arc;

use crate::fincat::{FinCategory, FinFunctor, MorId, ObjId};

use super::names::{e1_mor, pair_obj};

/// The sum of coslices `∑_{a} fa/B` of a functor `f: A₀ → B` out of a
/// discrete category, with its three legs.
///
/// Objects are pairs `(a, u: fa → b)` named `(a|u)`; a morphism
/// `(a, u₁) → (a, u₂)` is a morphism `v` of `B` with `v ∘ u₁ = u₂`, and
/// every morphism stays inside one summand.
#[derive(Debug)]
pub struct CosliceSum {
    pub category: Arc<FinCategory>,
    /// `a ↦ (a, 1_{fa})`; an initial functor, and the left adjoint of a
    /// split coreflection that projects each summand back onto `a`.
    pub inclusion: FinFunctor,
    /// First projection `(a, u) ↦ a`.
    pub to_domain: FinFunctor,
    /// Second projection `(a, u) ↦ tgt u`, `v ↦ v`; a discrete opfibration,
    /// and `to_codomain ∘ inclusion = f`.
    pub to_codomain: FinFunctor,
    /// The pair behind each object identifier.
    pub obj_pairs: BTreeMap<ObjId, (ObjId, MorId)>,
}

/// Build the coslice sum of `f`.  Panics if the domain of `f` is not
/// discrete; every caller first restricts to the discrete subcategory.
pub fn coslice_sum(f: &FinFunctor) -> CosliceSum {
    assert!(
        f.dom().is_discrete(),
        "coslice sum needs a discrete domain"
    );
    let a0 = f.dom().clone();
    let b_cat = f.cod().clone();

    let mut builder = FinCategory::builder();
    let mut obj_pairs: BTreeMap<ObjId, (ObjId, MorId)> = BTreeMap::new();
    for a in a0.objects() {
        for u in b_cat.morphisms_from(f.apply_obj(a)) {
            let name = pair_obj(a, u);
            builder.object(name.clone());
            obj_pairs.insert(name, (a.clone(), u.clone()));
        }
    }

    // (name, a, u1, u2, v) for each non-identity morphism.
    let mut entries: Vec<(MorId, ObjId, MorId, MorId, MorId)> = Vec::new();
    for (src_name, (a, u1)) in &obj_pairs {
        for v in b_cat.morphisms_from(b_cat.tgt(u1)) {
            if b_cat.is_identity(v) {
                continue;
            }
            let u2 = b_cat.comp(v, u1).clone();
            let name = e1_mor(a, u1, &u2, v);
            builder.morphism(name.clone(), src_name.clone(), pair_obj(a, &u2));
            entries.push((name, a.clone(), u1.clone(), u2, v.clone()));
        }
    }
    for (n1, a, u0, u1, v1) in &entries {
        for (n2, a2, u1b, u2, v2) in &entries {
            if a2 != a || u1b != u1 {
                continue;
            }
            let v3 = b_cat.comp(v2, v1).clone();
            let result = if b_cat.is_identity(&v3) {
                MorId::identity_of(&pair_obj(a, u0))
            } else {
                e1_mor(a, u0, u2, &v3)
            };
            builder.composite(n2.clone(), n1.clone(), result);
        }
    }

    let category = Arc::new(builder.build().expect("coslice sum category"));
    debug_assert!(category.validate().is_ok(), "{}", category.validate());

    let incl_obj: BTreeMap<ObjId, ObjId> = a0
        .objects()
        .iter()
        .map(|a| (a.clone(), pair_obj(a, b_cat.identity(f.apply_obj(a)))))
        .collect();
    let inclusion = FinFunctor::from_parts(a0.clone(), category.clone(), incl_obj, BTreeMap::new())
        .expect("coslice inclusion");

    let dom_obj: BTreeMap<ObjId, ObjId> = obj_pairs
        .iter()
        .map(|(name, (a, _))| (name.clone(), a.clone()))
        .collect();
    let dom_mor: BTreeMap<MorId, MorId> = entries
        .iter()
        .map(|(name, a, ..)| (name.clone(), a0.identity(a).clone()))
        .collect();
    let to_domain = FinFunctor::from_parts(category.clone(), a0, dom_obj, dom_mor)
        .expect("coslice first projection");

    let cod_obj: BTreeMap<ObjId, ObjId> = obj_pairs
        .iter()
        .map(|(name, (_, u))| (name.clone(), b_cat.tgt(u).clone()))
        .collect();
    let cod_mor: BTreeMap<MorId, MorId> = entries
        .iter()
        .map(|(name, _, _, _, v)| (name.clone(), v.clone()))
        .collect();
    let to_codomain = FinFunctor::from_parts(category.clone(), b_cat, cod_obj, cod_mor)
        .expect("coslice second projection");

    CosliceSum {
        category,
        inclusion,
        to_domain,
        to_codomain,
        obj_pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coreflections::{coreflection_from_initial, is_twisted};
    use crate::fincat::oracle::are_isomorphic;
    use crate::fincat::{bang, delta, disc_two, discrete_of, sigma, three, two};

    #[test]
    fn coslice_of_the_bottom_object_is_the_arrow() {
        let cs = coslice_sum(&delta(1, 1));
        assert!(are_isomorphic(&cs.category, &two()));
        let names: Vec<_> = cs.category.objects().iter().map(|o| o.to_string()).collect();
        assert_eq!(names, vec!["(0|01)", "(0|1_0)"]);
        let mors: Vec<_> = cs
            .category
            .non_identity_morphisms()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(mors, vec!["e1(0;1_0;01;01)"]);
    }

    #[test]
    fn coslice_of_the_top_object_is_a_point() {
        let cs = coslice_sum(&delta(0, 1));
        assert_eq!(cs.category.object_count(), 1);
        assert!(cs.category.is_discrete());
    }

    #[test]
    fn legs_recover_the_functor() {
        for f in [delta(1, 1), delta(0, 1), bang(&disc_two())] {
            let cs = coslice_sum(&f);
            assert_eq!(FinFunctor::compose(&cs.to_codomain, &cs.inclusion).unwrap(), f);
            assert_eq!(
                FinFunctor::compose(&cs.to_domain, &cs.inclusion).unwrap(),
                FinFunctor::identity(f.dom().clone())
            );
        }
    }

    #[test]
    fn second_projection_is_a_discrete_opfibration() {
        let (_, iota) = discrete_of(&three());
        let fp = FinFunctor::compose(&sigma(1, 2), &iota).unwrap();
        let cs = coslice_sum(&fp);
        assert_eq!(cs.category.object_count(), 4);
        assert_eq!(cs.category.non_identity_morphisms().count(), 1);
        assert!(cs.to_codomain.classify().discrete_opfibration);
        assert!(cs.inclusion.classify().initial);
    }

    #[test]
    fn collapsing_two_points_keeps_the_summands_apart() {
        let cs = coslice_sum(&bang(&disc_two()));
        assert!(are_isomorphic(&cs.category, &disc_two()));
        assert!(cs.obj_pairs.contains_key(&ObjId::new("(0|1_0)")));
        assert!(cs.obj_pairs.contains_key(&ObjId::new("(1|1_0)")));
    }

    #[test]
    fn identity_on_a_discrete_category_gives_isomorphism_legs() {
        let cs = coslice_sum(&FinFunctor::identity(disc_two()));
        assert!(cs.inclusion.classify().isomorphism);
        assert!(cs.to_domain.classify().isomorphism);
        assert!(cs.to_codomain.classify().isomorphism);
    }

    #[test]
    fn inclusion_carries_a_vacuously_twisted_coreflection() {
        let cs = coslice_sum(&delta(1, 1));
        let coref = coreflection_from_initial(&cs.inclusion).unwrap();
        assert!(coref.check().is_ok());
        let outcome = is_twisted(&coref);
        assert!(outcome.witness().unwrap().table().is_empty());
    }

    #[test]
    #[should_panic(expected = "discrete domain")]
    fn non_discrete_domain_is_rejected() {
        coslice_sum(&sigma(1, 2));
    }
}
