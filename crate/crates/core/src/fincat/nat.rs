use std::collections::BTreeMap;

use thiserror::Error;

use super::category::Report;
use super::functor::FinFunctor;
use super::ids::{MorId, ObjId};

/// A natural transformation between parallel functors, as a table of
/// components.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NatTrans {
    dom: FinFunctor,
    cod: FinFunctor,
    components: BTreeMap<ObjId, MorId>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum NatViolation {
    #[error("functors are not parallel")]
    NotParallel,
    #[error("object `{0}` has no component")]
    MissingComponent(ObjId),
    #[error("component table mentions `{0}`, which is not in the domain category")]
    SpuriousComponent(ObjId),
    #[error("component at `{obj}` is `{got}`, which is not a morphism F{obj} → G{obj}")]
    ComponentTyping { obj: ObjId, got: MorId },
    #[error("naturality fails at `{mor}`")]
    NotNatural { mor: MorId },
}

impl NatTrans {
    pub fn new(dom: FinFunctor, cod: FinFunctor, components: BTreeMap<ObjId, MorId>) -> Self {
        NatTrans {
            dom,
            cod,
            components,
        }
    }

    pub fn dom(&self) -> &FinFunctor {
        &self.dom
    }

    pub fn cod(&self) -> &FinFunctor {
        &self.cod
    }

    pub fn component(&self, o: &ObjId) -> &MorId {
        &self.components[o]
    }

    pub fn components(&self) -> &BTreeMap<ObjId, MorId> {
        &self.components
    }

    pub fn validate(&self) -> Report<NatViolation> {
        let mut out = Vec::new();
        if self.dom.dom() != self.cod.dom() || self.dom.cod() != self.cod.cod() {
            out.push(NatViolation::NotParallel);
            return Report(out);
        }
        let base = self.dom.dom();
        let target = self.dom.cod();
        for o in base.objects() {
            match self.components.get(o) {
                None => out.push(NatViolation::MissingComponent(o.clone())),
                Some(c) => {
                    if !target.has_morphism(c)
                        || target.src(c) != self.dom.apply_obj(o)
                        || target.tgt(c) != self.cod.apply_obj(o)
                    {
                        out.push(NatViolation::ComponentTyping {
                            obj: o.clone(),
                            got: c.clone(),
                        });
                    }
                }
            }
        }
        for o in self.components.keys() {
            if !base.has_object(o) {
                out.push(NatViolation::SpuriousComponent(o.clone()));
            }
        }
        if !out.is_empty() {
            return Report(out);
        }
        for m in base.morphisms() {
            let (x, y) = (base.src(m), base.tgt(m));
            let left = target.comp(&self.components[y].clone(), self.dom.apply_mor(m));
            let right = target.comp(self.cod.apply_mor(m), &self.components[x].clone());
            if left != right {
                out.push(NatViolation::NotNatural { mor: m.clone() });
            }
        }
        Report(out)
    }
}
