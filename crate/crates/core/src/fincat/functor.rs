use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use super::category::{FinCategory, Report};
use super::constructions::comma_category;
use super::ids::{MorId, ObjId};

/// A functor between finite categories, as total object and morphism maps.
///
/// The boundary categories are shared behind [`Arc`]; equality of functors
/// compares the underlying tables structurally.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinFunctor {
    dom: Arc<FinCategory>,
    cod: Arc<FinCategory>,
    obj_map: BTreeMap<ObjId, ObjId>,
    mor_map: BTreeMap<MorId, MorId>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FunctorBuildError {
    #[error("object `{0}` of the domain has no image")]
    MissingObject(ObjId),
    #[error("morphism `{0}` of the domain has no image")]
    MissingMorphism(MorId),
    #[error("image `{image}` of object `{obj}` is not in the codomain")]
    UnknownObjectImage { obj: ObjId, image: ObjId },
    #[error("image `{image}` of morphism `{mor}` is not in the codomain")]
    UnknownMorphismImage { mor: MorId, image: MorId },
    #[error("map mentions `{0}`, which is not in the domain")]
    SpuriousEntry(String),
    #[error("functors are not composable: codomain of the first differs from domain of the second")]
    NotComposable,
}

/// A single functor-law violation.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FunctorViolation {
    #[error("morphism `{mor}` has image `{image}` with the wrong source (expected `{expected}`)")]
    SourceMismatch {
        mor: MorId,
        image: MorId,
        expected: ObjId,
    },
    #[error("morphism `{mor}` has image `{image}` with the wrong target (expected `{expected}`)")]
    TargetMismatch {
        mor: MorId,
        image: MorId,
        expected: ObjId,
    },
    #[error("identity on `{obj}` is not sent to an identity")]
    IdentityNotPreserved { obj: ObjId },
    #[error("composite {g} ∘ {f} is not preserved: image of composite is `{got}`, composite of images is `{want}`")]
    CompositeNotPreserved {
        g: MorId,
        f: MorId,
        got: MorId,
        want: MorId,
    },
}

/// Classification flags computed by [`FinFunctor::classify`].
///
/// `isomorphism` holds exactly when the functor is fully faithful and
/// bijective on objects, in which case an inverse functor exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FunctorClass {
    pub fully_faithful: bool,
    pub bijective_on_objects: bool,
    pub identity_on_objects: bool,
    pub initial: bool,
    pub discrete_opfibration: bool,
    pub isomorphism: bool,
}

impl FinFunctor {
    /// Assemble a functor, checking totality and referential integrity.
    /// Law checking is separate; see [`FinFunctor::validate`].
    pub fn new(
        dom: Arc<FinCategory>,
        cod: Arc<FinCategory>,
        obj_map: BTreeMap<ObjId, ObjId>,
        mor_map: BTreeMap<MorId, MorId>,
    ) -> Result<Self, FunctorBuildError> {
        for o in dom.objects() {
            match obj_map.get(o) {
                None => return Err(FunctorBuildError::MissingObject(o.clone())),
                Some(im) if !cod.has_object(im) => {
                    return Err(FunctorBuildError::UnknownObjectImage {
                        obj: o.clone(),
                        image: im.clone(),
                    })
                }
                _ => {}
            }
        }
        for o in obj_map.keys() {
            if !dom.has_object(o) {
                return Err(FunctorBuildError::SpuriousEntry(o.to_string()));
            }
        }
        for m in dom.morphisms() {
            match mor_map.get(m) {
                None => return Err(FunctorBuildError::MissingMorphism(m.clone())),
                Some(im) if !cod.has_morphism(im) => {
                    return Err(FunctorBuildError::UnknownMorphismImage {
                        mor: m.clone(),
                        image: im.clone(),
                    })
                }
                _ => {}
            }
        }
        for m in mor_map.keys() {
            if !dom.has_morphism(m) {
                return Err(FunctorBuildError::SpuriousEntry(m.to_string()));
            }
        }
        Ok(FinFunctor {
            dom,
            cod,
            obj_map,
            mor_map,
        })
    }

    /// Build from an object map and the images of non-identity morphisms;
    /// identities are sent to identities.
    pub fn from_parts(
        dom: Arc<FinCategory>,
        cod: Arc<FinCategory>,
        obj_map: BTreeMap<ObjId, ObjId>,
        non_id_mor_map: BTreeMap<MorId, MorId>,
    ) -> Result<Self, FunctorBuildError> {
        let mut mor_map = non_id_mor_map;
        for o in dom.objects() {
            let image = obj_map
                .get(o)
                .ok_or_else(|| FunctorBuildError::MissingObject(o.clone()))?;
            if !cod.has_object(image) {
                return Err(FunctorBuildError::UnknownObjectImage {
                    obj: o.clone(),
                    image: image.clone(),
                });
            }
            mor_map.insert(
                dom.identity(o).clone(),
                cod.identity(image).clone(),
            );
        }
        FinFunctor::new(dom, cod, obj_map, mor_map)
    }

    pub fn identity(cat: Arc<FinCategory>) -> Self {
        let obj_map = cat.objects().iter().map(|o| (o.clone(), o.clone())).collect();
        let mor_map = cat.morphisms().map(|m| (m.clone(), m.clone())).collect();
        FinFunctor {
            dom: cat.clone(),
            cod: cat,
            obj_map,
            mor_map,
        }
    }

    /// `g ∘ f` (first `f`, then `g`).
    pub fn compose(g: &FinFunctor, f: &FinFunctor) -> Result<FinFunctor, FunctorBuildError> {
        if f.cod() != g.dom() {
            return Err(FunctorBuildError::NotComposable);
        }
        let obj_map = f
            .obj_map
            .iter()
            .map(|(o, im)| (o.clone(), g.obj_map[im].clone()))
            .collect();
        let mor_map = f
            .mor_map
            .iter()
            .map(|(m, im)| (m.clone(), g.mor_map[im].clone()))
            .collect();
        Ok(FinFunctor {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            obj_map,
            mor_map,
        })
    }

    pub fn dom(&self) -> &Arc<FinCategory> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinCategory> {
        &self.cod
    }

    pub fn apply_obj(&self, o: &ObjId) -> &ObjId {
        &self.obj_map[o]
    }

    pub fn apply_mor(&self, m: &MorId) -> &MorId {
        &self.mor_map[m]
    }

    pub fn obj_map(&self) -> &BTreeMap<ObjId, ObjId> {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &BTreeMap<MorId, MorId> {
        &self.mor_map
    }

    pub fn is_identity_functor(&self) -> bool {
        self.dom == self.cod
            && self.obj_map.iter().all(|(a, b)| a == b)
            && self.mor_map.iter().all(|(a, b)| a == b)
    }

    /// Check preservation of boundaries, identities and composites.
    pub fn validate(&self) -> Report<FunctorViolation> {
        let mut out = Vec::new();
        for (m, im) in &self.mor_map {
            let want_src = self.apply_obj(self.dom.src(m));
            let want_tgt = self.apply_obj(self.dom.tgt(m));
            if self.cod.src(im) != want_src {
                out.push(FunctorViolation::SourceMismatch {
                    mor: m.clone(),
                    image: im.clone(),
                    expected: want_src.clone(),
                });
            }
            if self.cod.tgt(im) != want_tgt {
                out.push(FunctorViolation::TargetMismatch {
                    mor: m.clone(),
                    image: im.clone(),
                    expected: want_tgt.clone(),
                });
            }
        }
        for o in self.dom.objects() {
            let id = self.dom.identity(o);
            if self.apply_mor(id) != self.cod.identity(self.apply_obj(o)) {
                out.push(FunctorViolation::IdentityNotPreserved { obj: o.clone() });
            }
        }
        if out.is_empty() {
            let mors: Vec<&MorId> = self.dom.morphisms().collect();
            for f in &mors {
                for g in &mors {
                    if self.dom.src(g) != self.dom.tgt(f) {
                        continue;
                    }
                    let got = self.apply_mor(self.dom.comp(g, f)).clone();
                    let want = self
                        .cod
                        .comp(self.apply_mor(g), self.apply_mor(f))
                        .clone();
                    if got != want {
                        out.push(FunctorViolation::CompositeNotPreserved {
                            g: (*g).clone(),
                            f: (*f).clone(),
                            got,
                            want,
                        });
                    }
                }
            }
        }
        Report(out)
    }

    /// Compute all classification flags by exhaustive scan.
    pub fn classify(&self) -> FunctorClass {
        let dom = &self.dom;
        let cod = &self.cod;

        let mut fully_faithful = true;
        'ff: for x in dom.objects() {
            for y in dom.objects() {
                let image_hom = cod.hom(self.apply_obj(x), self.apply_obj(y));
                let hom = dom.hom(x, y);
                // The map hom(x,y) → hom(Fx,Fy) must be a bijection.
                let mut images: Vec<&MorId> = hom.iter().map(|m| self.apply_mor(m)).collect();
                images.sort();
                images.dedup();
                if images.len() != hom.len() || images.len() != image_hom.len() {
                    fully_faithful = false;
                    break 'ff;
                }
            }
        }

        let mut images: Vec<&ObjId> = self.obj_map.values().collect();
        images.sort();
        images.dedup();
        let surjective = images.len() == cod.object_count();
        let injective = {
            let mut v: Vec<&ObjId> = self.obj_map.values().collect();
            v.sort();
            let before = v.len();
            v.dedup();
            v.len() == before
        };
        let bijective_on_objects = surjective && injective;
        let identity_on_objects =
            bijective_on_objects && self.obj_map.iter().all(|(a, b)| a == b);

        let mut initial = true;
        for b in cod.objects() {
            let comma = comma_category(self, b);
            if comma.category.object_count() == 0
                || comma.category.connected_components().len() != 1
            {
                initial = false;
                break;
            }
        }

        let mut discrete_opfibration = true;
        'dopf: for a in dom.objects() {
            let fa = self.apply_obj(a);
            for u in cod.morphisms_from(fa) {
                let lifts: Vec<&MorId> = dom
                    .morphisms_from(a)
                    .into_iter()
                    .filter(|w| self.apply_mor(w) == u)
                    .collect();
                if lifts.len() != 1 {
                    discrete_opfibration = false;
                    break 'dopf;
                }
            }
        }

        FunctorClass {
            fully_faithful,
            bijective_on_objects,
            identity_on_objects,
            initial,
            discrete_opfibration,
            isomorphism: fully_faithful && bijective_on_objects,
        }
    }

    /// The unique morphism out of `a` over `u`, when this functor is a
    /// discrete opfibration at that index.
    pub fn dopf_lift(&self, a: &ObjId, u: &MorId) -> Result<MorId, DopfLiftError> {
        let mut found: Vec<MorId> = Vec::new();
        for w in self.dom.morphisms_from(a) {
            if self.apply_mor(w) == u {
                found.push(w.clone());
            }
        }
        match found.len() {
            1 => Ok(found.pop().unwrap()),
            0 => Err(DopfLiftError::NotFound {
                obj: a.clone(),
                over: u.clone(),
            }),
            _ => Err(DopfLiftError::NonUnique {
                obj: a.clone(),
                over: u.clone(),
                first: found[0].clone(),
                second: found[1].clone(),
            }),
        }
    }
}

/// Failure of a unique-lift search against a would-be discrete opfibration.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DopfLiftError {
    #[error("no morphism out of `{obj}` over `{over}`")]
    NotFound { obj: ObjId, over: MorId },
    #[error("more than one morphism out of `{obj}` over `{over}`: `{first}`, `{second}`")]
    NonUnique {
        obj: ObjId,
        over: MorId,
        first: MorId,
        second: MorId,
    },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::catalog;

    #[test]
    fn delta_one_classification() {
        // 1 → 2 picking the bottom object.
        let d1 = catalog::delta(1, 1);
        assert!(d1.validate().is_ok());
        let class = d1.classify();
        assert!(class.fully_faithful);
        assert!(!class.bijective_on_objects);
        assert!(class.initial);
        assert!(!class.discrete_opfibration);
        assert!(!class.isomorphism);
    }

    #[test]
    fn discrete_inclusion_classification() {
        let (_, iota) = crate::fincat::discrete_of(&catalog::two());
        let class = iota.classify();
        assert!(class.bijective_on_objects);
        assert!(class.identity_on_objects);
        assert!(!class.fully_faithful);
        assert!(!class.initial);
    }

    #[test]
    fn bang_classification() {
        let bang = catalog::bang(&catalog::two());
        let class = bang.classify();
        assert!(!class.fully_faithful);
        assert!(!class.discrete_opfibration);
        assert!(class.initial);
    }

    #[test]
    fn delta_zero_is_discrete_opfibration() {
        // 1 → 2 picking the top object.
        let d0 = catalog::delta(0, 1);
        let class = d0.classify();
        assert!(class.discrete_opfibration);
        assert!(class.fully_faithful);
        assert!(!class.initial);
    }

    #[test]
    fn arrow_to_identity_with_separated_endpoints_is_invalid() {
        let two = catalog::two();
        let obj_map: BTreeMap<ObjId, ObjId> =
            [("0".into(), "0".into()), ("1".into(), "1".into())].into();
        let mor_map: BTreeMap<MorId, MorId> = [("01".into(), "1_0".into())].into();
        let f = FinFunctor::from_parts(two.clone(), two, obj_map, mor_map).unwrap();
        let report = f.validate();
        assert!(report
            .violations()
            .iter()
            .any(|v| matches!(v, FunctorViolation::TargetMismatch { .. })));
    }

    #[test]
    fn identity_preservation_violation_is_reported() {
        let two = catalog::two();
        let obj_map: BTreeMap<ObjId, ObjId> =
            [("0".into(), "0".into()), ("1".into(), "1".into())].into();
        let mor_map: BTreeMap<MorId, MorId> = [
            (MorId::new("1_0"), MorId::new("1_0")),
            (MorId::new("1_1"), MorId::new("1_1")),
            (MorId::new("01"), MorId::new("01")),
        ]
        .into();
        let mut broken = mor_map.clone();
        broken.insert(MorId::new("1_0"), MorId::new("01"));
        let f = FinFunctor::new(two.clone(), two.clone(), obj_map.clone(), broken).unwrap();
        let report = f.validate();
        assert!(!report.is_ok());

        let ok = FinFunctor::new(two.clone(), two, obj_map, mor_map).unwrap();
        assert!(ok.validate().is_ok());
        assert!(ok.is_identity_functor());
    }

    #[test]
    fn sigma_after_delta_is_identity() {
        let d2 = catalog::delta(2, 2);
        let s1 = catalog::sigma(1, 2);
        let comp = FinFunctor::compose(&s1, &d2).unwrap();
        assert!(comp.is_identity_functor());
    }
}
