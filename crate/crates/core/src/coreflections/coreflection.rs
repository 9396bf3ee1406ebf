/*! Split coreflections presented as tables: the left adjoint `f: A → B`,
the right adjoint `q: B → A`, and the counit `ε: fq ⇒ 1_B`, subject to
`qf = 1_A`, `q·ε = 1_q`, and `ε·f = 1_f`. */

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{FinCategory, FinFunctor, MorId, NatTrans, NatViolation, ObjId, Report};

/// A split coreflection `A ↛ B`: a left adjoint `f` with an identity unit,
/// its right adjoint `q`, and the counit `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCoreflection {
    f: FinFunctor,
    q: FinFunctor,
    eps: NatTrans,
}

/// Structural rejection: the tables do not even have the right shape.
/// Equational failures are reported by [`SplitCoreflection::check`] instead.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CorefBuildError {
    #[error("the right adjoint does not run opposite the left adjoint")]
    AdjointsNotOpposed,
    #[error("no counit component at `{0}`")]
    MissingCounit(ObjId),
    #[error("counit component at `{at}` is `{component}`, which the codomain category lacks")]
    UnknownCounit { at: ObjId, component: MorId },
    #[error("counit table mentions `{0}`, which is not an object of the codomain")]
    SpuriousCounit(ObjId),
}

/// One failed coreflection law, with the place it failed.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CorefViolation {
    #[error("q(f({obj})) = {via}, not {obj}")]
    RoundTripObject { obj: ObjId, via: ObjId },
    #[error("q(f({mor})) = {via}, not {mor}")]
    RoundTripMorphism { mor: MorId, via: MorId },
    #[error("counit is not natural: {0}")]
    Counit(NatViolation),
    #[error("q(ε_{at}) = {image} is not an identity")]
    CounitImageNotIdentity { at: ObjId, image: MorId },
    #[error("ε at the image of `{obj}` is `{component}`, not an identity")]
    CounitAtImage { obj: ObjId, component: MorId },
}

impl SplitCoreflection {
    /// Assemble a coreflection from its three tables.  Only shapes are
    /// checked here; run [`check`](Self::check) for the laws.
    pub fn new(
        f: FinFunctor,
        q: FinFunctor,
        counit: BTreeMap<ObjId, MorId>,
    ) -> Result<SplitCoreflection, CorefBuildError> {
        if q.dom() != f.cod() || q.cod() != f.dom() {
            return Err(CorefBuildError::AdjointsNotOpposed);
        }
        let b_cat = f.cod().clone();
        for x in b_cat.objects() {
            match counit.get(x) {
                None => return Err(CorefBuildError::MissingCounit(x.clone())),
                Some(c) if !b_cat.has_morphism(c) => {
                    return Err(CorefBuildError::UnknownCounit {
                        at: x.clone(),
                        component: c.clone(),
                    })
                }
                _ => {}
            }
        }
        if let Some(x) = counit.keys().find(|x| !b_cat.has_object(x)) {
            return Err(CorefBuildError::SpuriousCounit(x.clone()));
        }
        let fq = FinFunctor::compose(&f, &q).expect("adjoint shapes were just checked");
        let eps = NatTrans::new(fq, FinFunctor::identity(b_cat), counit);
        Ok(SplitCoreflection { f, q, eps })
    }

    /// The identity coreflection on `cat`.
    pub fn identity(cat: &Arc<FinCategory>) -> SplitCoreflection {
        let id = FinFunctor::identity(cat.clone());
        let counit = cat
            .objects()
            .iter()
            .map(|o| (o.clone(), cat.identity(o).clone()))
            .collect();
        SplitCoreflection::new(id.clone(), id, counit).expect("identity coreflection")
    }

    pub fn f(&self) -> &FinFunctor {
        &self.f
    }

    pub fn q(&self) -> &FinFunctor {
        &self.q
    }

    pub fn counit(&self) -> &NatTrans {
        &self.eps
    }

    pub fn counit_at(&self, x: &ObjId) -> &MorId {
        self.eps.component(x)
    }

    /// The domain of the left adjoint.
    pub fn dom(&self) -> &Arc<FinCategory> {
        self.f.dom()
    }

    /// The codomain of the left adjoint.
    pub fn cod(&self) -> &Arc<FinCategory> {
        self.f.cod()
    }

    /// Scan all four laws: `qf = 1`, counit naturality, `q·ε = 1_q`, and
    /// `ε·f = 1_f`.
    pub fn check(&self) -> Report<CorefViolation> {
        let mut out = Vec::new();
        let a_cat = self.f.dom();
        let b_cat = self.f.cod();
        for o in a_cat.objects() {
            let via = self.q.apply_obj(self.f.apply_obj(o));
            if via != o {
                out.push(CorefViolation::RoundTripObject {
                    obj: o.clone(),
                    via: via.clone(),
                });
            }
        }
        for m in a_cat.morphisms() {
            let via = self.q.apply_mor(self.f.apply_mor(m));
            if via != m {
                out.push(CorefViolation::RoundTripMorphism {
                    mor: m.clone(),
                    via: via.clone(),
                });
            }
        }
        for v in self.eps.validate().violations() {
            out.push(CorefViolation::Counit(v.clone()));
        }
        for x in b_cat.objects() {
            let image = self.q.apply_mor(self.eps.component(x));
            if !a_cat.is_identity(image) {
                out.push(CorefViolation::CounitImageNotIdentity {
                    at: x.clone(),
                    image: image.clone(),
                });
            }
        }
        for o in a_cat.objects() {
            let component = self.eps.component(self.f.apply_obj(o));
            if !b_cat.is_identity(component) {
                out.push(CorefViolation::CounitAtImage {
                    obj: o.clone(),
                    component: component.clone(),
                });
            }
        }
        Report(out)
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CorefComposeError {
    #[error("coreflections are not composable")]
    Mismatch,
}

/// Compose `first: A ↛ B` with `then: B ↛ C`.  The composite counit at `x`
/// is `ζ_x ∘ g(ε_{px})`, where `(g, p, ζ)` is the second coreflection.
pub fn compose_coreflections(
    first: &SplitCoreflection,
    then: &SplitCoreflection,
) -> Result<SplitCoreflection, CorefComposeError> {
    if first.cod() != then.dom() {
        return Err(CorefComposeError::Mismatch);
    }
    let f = FinFunctor::compose(then.f(), first.f()).expect("composability was checked");
    let q = FinFunctor::compose(first.q(), then.q()).expect("composability was checked");
    let c_cat = then.cod();
    let counit = c_cat
        .objects()
        .iter()
        .map(|x| {
            let px = then.q().apply_obj(x);
            let g_eps = then.f().apply_mor(first.counit_at(px));
            (x.clone(), c_cat.comp(then.counit_at(x), g_eps).clone())
        })
        .collect();
    Ok(SplitCoreflection::new(f, q, counit).expect("composite coreflection is well-shaped"))
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CorefCellError {
    #[error("the functors do not frame a square between the two coreflections")]
    ShapeMismatch,
}

/// Why a commuting frame `(h, k)` fails to be a cell of coreflections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorefCellFailure {
    /// `k ∘ f₁ ≠ f₂ ∘ h` at this domain morphism.
    LeftAdjointSquare { mor: MorId },
    /// `h ∘ q₁ ≠ q₂ ∘ k` at this codomain morphism.
    RightAdjointSquare { mor: MorId },
    /// `k(ε_x) ≠ ζ_{kx}`.
    Counit { at: ObjId, via_k: MorId, expected: MorId },
}

/// First reason `(h, k)` is not a cell `from → to`, or `None` if it is one.
///
/// `h` runs between the domains and `k` between the codomains; the cell
/// equations are `k f₁ = f₂ h`, `h q₁ = q₂ k`, and `k·ε = ζ·k`.
pub fn coref_cell_failure(
    h: &FinFunctor,
    k: &FinFunctor,
    from: &SplitCoreflection,
    to: &SplitCoreflection,
) -> Result<Option<CorefCellFailure>, CorefCellError> {
    if h.dom() != from.dom()
        || h.cod() != to.dom()
        || k.dom() != from.cod()
        || k.cod() != to.cod()
    {
        return Err(CorefCellError::ShapeMismatch);
    }
    let kf = FinFunctor::compose(k, from.f()).expect("shapes were checked");
    let fh = FinFunctor::compose(to.f(), h).expect("shapes were checked");
    if let Some(m) = from.dom().morphisms().find(|m| kf.apply_mor(m) != fh.apply_mor(m)) {
        return Ok(Some(CorefCellFailure::LeftAdjointSquare { mor: m.clone() }));
    }
    let hq = FinFunctor::compose(h, from.q()).expect("shapes were checked");
    let qk = FinFunctor::compose(to.q(), k).expect("shapes were checked");
    if let Some(m) = from.cod().morphisms().find(|m| hq.apply_mor(m) != qk.apply_mor(m)) {
        return Ok(Some(CorefCellFailure::RightAdjointSquare { mor: m.clone() }));
    }
    for x in from.cod().objects() {
        let via_k = k.apply_mor(from.counit_at(x));
        let expected = to.counit_at(k.apply_obj(x));
        if via_k != expected {
            return Ok(Some(CorefCellFailure::Counit {
                at: x.clone(),
                via_k: via_k.clone(),
                expected: expected.clone(),
            }));
        }
    }
    Ok(None)
}

/// Whether `(h, k)` satisfies all three cell equations.
pub fn is_coref_cell(
    h: &FinFunctor,
    k: &FinFunctor,
    from: &SplitCoreflection,
    to: &SplitCoreflection,
) -> Result<bool, CorefCellError> {
    coref_cell_failure(h, k, from, to).map(|found| found.is_none())
}
