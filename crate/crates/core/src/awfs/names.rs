use crate::fincat::{MorId, ObjId};

/// Object identifier for the pair `(a, u: fa → b)`.
pub(super) fn pair_obj(a: &ObjId, u: &MorId) -> ObjId {
    ObjId::new(format!("({a}|{u})"))
}

/// Identifier of the vertical morphism `v: (a, u₁) → (a, u₂)`, keyed by the
/// full quadruple so that distinct `v` over the same boundary stay distinct.
pub(super) fn e1_mor(a: &ObjId, u1: &MorId, u2: &MorId, v: &MorId) -> MorId {
    MorId::new(format!("e1({a};{u1};{u2};{v})"))
}

/// Identifier of the crossing morphism `(v, w): (a₁, u₁) → (a₂, u₂)`.
pub(super) fn e2_mor(
    a1: &ObjId,
    u1: &MorId,
    a2: &ObjId,
    u2: &MorId,
    v: &MorId,
    w: &MorId,
) -> MorId {
    MorId::new(format!("e2({a1};{u1};{a2};{u2};{v};{w})"))
}
