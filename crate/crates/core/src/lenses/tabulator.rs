use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{DopfLiftError, FinCategory, FinFunctor, MorId, ObjId};

use super::lens::{lens_cell_failure, DeltaLens, LensCellError};

/// The tabulator of a lens: the wide subcategory `Λ` of the domain spanned
/// by the chosen lifts, with its two projection legs.
#[derive(Debug, Clone)]
pub struct Tabulator {
    pub lambda: Arc<FinCategory>,
    /// Identity-on-objects inclusion `Λ → A`.
    pub pi_a: FinFunctor,
    /// `f ∘ pi_a : Λ → B`; a discrete opfibration.
    pub pi_b: FinFunctor,
}

/// Carve the chosen lifts out of the lens's domain.  The lift axioms make
/// the lift set contain all identities and close under composition, so
/// this is a genuine wide subcategory.
pub fn tabulator(l: &DeltaLens) -> Tabulator {
    let a_cat = l.dom();
    let mut builder = FinCategory::builder();
    for o in a_cat.objects() {
        builder.object(o.clone());
    }
    let chosen: Vec<&MorId> = l
        .lifts()
        .values()
        .filter(|m| !a_cat.is_identity(m))
        .collect();
    for m in &chosen {
        builder.morphism((*m).clone(), a_cat.src(m).clone(), a_cat.tgt(m).clone());
    }
    for m1 in &chosen {
        for m2 in &chosen {
            if a_cat.tgt(m1) != a_cat.src(m2) {
                continue;
            }
            let c = a_cat.comp(m2, m1).clone();
            debug_assert!(
                a_cat.is_identity(&c) || chosen.contains(&&c),
                "lift set not closed under composition at {m2}∘{m1}"
            );
            builder.composite((*m2).clone(), (*m1).clone(), c);
        }
    }
    let lambda = Arc::new(builder.build().expect("tabulator subcategory"));

    let obj_map: BTreeMap<ObjId, ObjId> = a_cat
        .objects()
        .iter()
        .map(|o| (o.clone(), o.clone()))
        .collect();
    let mor_map: BTreeMap<MorId, MorId> = chosen.iter().map(|m| ((*m).clone(), (*m).clone())).collect();
    let pi_a = FinFunctor::from_parts(lambda.clone(), a_cat.clone(), obj_map, mor_map)
        .expect("tabulator inclusion");
    let pi_b = FinFunctor::compose(l.f(), &pi_a).expect("tabulator projection");
    Tabulator { lambda, pi_a, pi_b }
}

/// The unique functor `j: X → Λ` through which a cell
/// `(h, k): identity lens on X → L` factors, with `pi_a ∘ j = h`.
pub fn induce_into_tabulator(
    l: &DeltaLens,
    h: &FinFunctor,
    k: &FinFunctor,
) -> Result<FinFunctor, LensCellError> {
    let x_cat = h.dom();
    let identity_lens = DeltaLens::identity(x_cat.clone());
    if let Some(failure) = lens_cell_failure(h, k, &identity_lens, l)? {
        return Err(LensCellError::NotACell(failure));
    }
    let tab = tabulator(l);
    let mor_map: BTreeMap<MorId, MorId> = x_cat
        .non_identity_morphisms()
        .map(|m| (m.clone(), h.apply_mor(m).clone()))
        .collect();
    let j = FinFunctor::from_parts(x_cat.clone(), tab.lambda, h.obj_map().clone(), mor_map)
        .expect("cell image lands in the tabulator");
    Ok(j)
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DiagramLensError {
    #[error("the two functors are not composable")]
    Composability,
    #[error("the left leg is not bijective on objects")]
    NotBijectiveOnObjects,
    #[error("the composite is not a discrete opfibration: {0}")]
    NotDiscreteOpfibration(DopfLiftError),
}

/// Lens induced by a diagram `X --psi--> A --f--> B` in which `psi` is
/// bijective on objects and `f∘psi` is a discrete opfibration: the lift
/// of `(a, u)` is the image under `psi` of the unique `f∘psi`-lift of `u`
/// at `psi⁻¹(a)`.
pub fn lens_from_diagram(psi: &FinFunctor, f: &FinFunctor) -> Result<DeltaLens, DiagramLensError> {
    if psi.cod() != f.dom() {
        return Err(DiagramLensError::Composability);
    }
    if !psi.classify().bijective_on_objects {
        return Err(DiagramLensError::NotBijectiveOnObjects);
    }
    let down = FinFunctor::compose(f, psi).map_err(|_| DiagramLensError::Composability)?;
    let inverse: BTreeMap<ObjId, ObjId> = psi
        .obj_map()
        .iter()
        .map(|(x, a)| (a.clone(), x.clone()))
        .collect();
    let mut lifts = BTreeMap::new();
    for a in f.dom().objects() {
        let x = &inverse[a];
        for u in f.cod().morphisms_from(f.apply_obj(a)) {
            let t = down
                .dopf_lift(x, u)
                .map_err(DiagramLensError::NotDiscreteOpfibration)?;
            lifts.insert((a.clone(), u.clone()), psi.apply_mor(&t).clone());
        }
    }
    DeltaLens::new(f.clone(), lifts).map_err(|_| DiagramLensError::Composability)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{delta, disc_two, two};
    use crate::lenses::fixtures;
    use crate::lenses::lens::lens_from_dopf;

    #[test]
    fn tabulator_of_identity_lens_is_the_category() {
        let l = DeltaLens::identity(two());
        let tab = tabulator(&l);
        assert_eq!(*tab.lambda, *two());
        assert!(tab.pi_a.is_identity_functor());
    }

    #[test]
    fn tabulator_of_dopf_lens_is_isomorphic_to_the_domain() {
        let l = lens_from_dopf(&delta(0, 1)).unwrap();
        let tab = tabulator(&l);
        assert!(tab.pi_a.classify().isomorphism);
        assert!(tab.pi_b.classify().discrete_opfibration);
    }

    #[test]
    fn tabulator_of_bang_lens_is_discrete() {
        let l = fixtures::bang_lens(&two());
        let tab = tabulator(&l);
        assert!(tab.lambda.is_discrete());
        assert_eq!(*tab.lambda, *disc_two());
    }

    #[test]
    fn tabulator_legs_form_a_cell() {
        let l = fixtures::two_lifts_lens_left();
        let tab = tabulator(&l);
        let from = DeltaLens::identity(tab.lambda.clone());
        assert!(super::super::lens::is_lens_cell(&tab.pi_a, &tab.pi_b, &from, &l).unwrap());
        assert!(tab.pi_b.classify().discrete_opfibration);
    }

    #[test]
    fn induced_functor_from_the_tabulator_legs_is_the_identity() {
        let l = fixtures::two_lifts_lens_right();
        let tab = tabulator(&l);
        let j = induce_into_tabulator(&l, &tab.pi_a, &tab.pi_b).unwrap();
        assert!(j.is_identity_functor());
    }

    #[test]
    fn induced_functor_agrees_with_brute_force() {
        let l = fixtures::two_lifts_lens_left();
        let tab = tabulator(&l);
        // A cell from the point into the lens: pick the object b upstairs
        // and its identity downstairs.
        let x = crate::fincat::one();
        let h = FinFunctor::from_parts(
            x.clone(),
            l.dom().clone(),
            [("0".into(), "b".into())].into(),
            BTreeMap::new(),
        )
        .unwrap();
        let k = FinFunctor::compose(l.f(), &h).unwrap();
        let j = induce_into_tabulator(&l, &h, &k).unwrap();
        assert_eq!(FinFunctor::compose(&tab.pi_a, &j).unwrap(), h);
        // Brute force: j is the only functor X → Λ whose legs restore (h, k).
        let all = crate::fincat::enumerate_functors(&x, &tab.lambda, &Default::default()).unwrap();
        let matching: Vec<_> = all
            .into_iter()
            .filter(|cand| {
                FinFunctor::compose(&tab.pi_a, cand).as_ref() == Ok(&h)
                    && FinFunctor::compose(&tab.pi_b, cand).as_ref() == Ok(&k)
            })
            .collect();
        assert_eq!(matching, vec![j]);
    }

    #[test]
    fn non_cell_square_is_rejected() {
        let l = fixtures::two_lifts_lens_right();
        // h sends the free arrow to u1, but the lens lifts 01 to u2.
        let h = FinFunctor::from_parts(
            two(),
            l.dom().clone(),
            [("0".into(), "a".into()), ("1".into(), "b".into())].into(),
            [("01".into(), "u1".into())].into(),
        )
        .unwrap();
        let k = FinFunctor::compose(l.f(), &h).unwrap();
        let err = induce_into_tabulator(&l, &h, &k).unwrap_err();
        assert!(matches!(err, LensCellError::NotACell(_)));
    }

    #[test]
    fn diagram_with_identity_left_leg_recovers_the_dopf_lens() {
        let f = delta(0, 1);
        let psi = FinFunctor::identity(f.dom().clone());
        let l = lens_from_diagram(&psi, &f).unwrap();
        assert_eq!(l, lens_from_dopf(&f).unwrap());
    }

    #[test]
    fn tabulator_legs_round_trip_through_lens_from_diagram() {
        for l in [
            fixtures::two_lifts_lens_left(),
            fixtures::two_lifts_lens_right(),
            fixtures::bang_lens(&two()),
            DeltaLens::identity(two()),
        ] {
            let tab = tabulator(&l);
            let back = lens_from_diagram(&tab.pi_a, l.f()).unwrap();
            assert_eq!(back, l, "tabulator legs must recover the lens");
        }
    }

    #[test]
    fn diagram_round_trip_induces_an_isomorphism() {
        let l = fixtures::two_lifts_lens_left();
        let tab = tabulator(&l);
        let j = induce_into_tabulator(&l, &tab.pi_a, &tab.pi_b).unwrap();
        assert!(j.classify().isomorphism);
    }

    #[test]
    fn diagram_with_non_dopf_composite_is_rejected() {
        let psi = FinFunctor::identity(two());
        let f = crate::fincat::bang(&two());
        assert!(matches!(
            lens_from_diagram(&psi, &f).unwrap_err(),
            DiagramLensError::NotDiscreteOpfibration(_)
        ));
    }

    #[test]
    fn diagram_with_non_boo_left_leg_is_rejected() {
        let psi = delta(0, 1);
        let f = delta(0, 2);
        assert_eq!(
            lens_from_diagram(&psi, &f).unwrap_err(),
            DiagramLensError::NotBijectiveOnObjects
        );
    }
}
