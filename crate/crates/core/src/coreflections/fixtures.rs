/*! Coreflection fixtures over the catalog categories, with fixed tables
used as frozen expected values across the test suites. */

use std::collections::BTreeMap;

use crate::fincat::{bang, bex, delta, non_twisted, sigma, two, FinFunctor, MorId, ObjId};

use super::coreflection::SplitCoreflection;

/// `1 ↛ 2`: the bottom object is coreflective, with counit `01` at the top.
pub fn delta1_coreflection() -> SplitCoreflection {
    let counit = BTreeMap::from([
        (ObjId::new("0"), MorId::new("1_0")),
        (ObjId::new("1"), MorId::new("01")),
    ]);
    SplitCoreflection::new(delta(1, 1), bang(&two()), counit).expect("delta1 coreflection")
}

/// `2 ↛ 3`: the face `δ2` with right adjoint `σ1` and counit `12` at the top.
pub fn delta2_coreflection() -> SplitCoreflection {
    let counit = BTreeMap::from([
        (ObjId::new("0"), MorId::new("1_0")),
        (ObjId::new("1"), MorId::new("1_1")),
        (ObjId::new("2"), MorId::new("12")),
    ]);
    SplitCoreflection::new(delta(2, 2), sigma(1, 2), counit).expect("delta2 coreflection")
}

/// `2 ↛ Bex`: the full embedding at `L, R`.  The right adjoint collapses the
/// idempotent component onto `L`, and the counit at `M` is the section `s`.
pub fn bex_coreflection() -> SplitCoreflection {
    let b = bex();
    let f = FinFunctor::from_parts(
        two(),
        b.clone(),
        BTreeMap::from([
            (ObjId::new("0"), ObjId::new("L")),
            (ObjId::new("1"), ObjId::new("R")),
        ]),
        BTreeMap::from([(MorId::new("01"), MorId::new("us"))]),
    )
    .expect("embedding of 2 at L, R");
    let q = FinFunctor::from_parts(
        b,
        two(),
        BTreeMap::from([
            (ObjId::new("L"), ObjId::new("0")),
            (ObjId::new("M"), ObjId::new("0")),
            (ObjId::new("R"), ObjId::new("1")),
        ]),
        BTreeMap::from([
            (MorId::new("s"), MorId::new("1_0")),
            (MorId::new("r"), MorId::new("1_0")),
            (MorId::new("sr"), MorId::new("1_0")),
            (MorId::new("u"), MorId::new("01")),
            (MorId::new("us"), MorId::new("01")),
        ]),
    )
    .expect("retraction of Bex onto 2");
    let counit = BTreeMap::from([
        (ObjId::new("L"), MorId::new("1_L")),
        (ObjId::new("M"), MorId::new("s")),
        (ObjId::new("R"), MorId::new("1_R")),
    ]);
    SplitCoreflection::new(f, q, counit).expect("bex coreflection")
}

/// `2 ↛ NonTwisted`: a valid split coreflection that is not twisted — the
/// section for `u: x → a1` would have to live in the empty `hom(x, a0)`.
pub fn non_twisted_coreflection() -> SplitCoreflection {
    let b = non_twisted();
    let f = FinFunctor::from_parts(
        two(),
        b.clone(),
        BTreeMap::from([
            (ObjId::new("0"), ObjId::new("a0")),
            (ObjId::new("1"), ObjId::new("a1")),
        ]),
        BTreeMap::from([(MorId::new("01"), MorId::new("w"))]),
    )
    .expect("embedding of 2 at a0, a1");
    let q = FinFunctor::from_parts(
        b,
        two(),
        BTreeMap::from([
            (ObjId::new("a0"), ObjId::new("0")),
            (ObjId::new("a1"), ObjId::new("1")),
            (ObjId::new("x"), ObjId::new("0")),
        ]),
        BTreeMap::from([
            (MorId::new("w"), MorId::new("01")),
            (MorId::new("e"), MorId::new("1_0")),
            (MorId::new("u"), MorId::new("01")),
        ]),
    )
    .expect("retraction of NonTwisted onto 2");
    let counit = BTreeMap::from([
        (ObjId::new("a0"), MorId::new("1_a0")),
        (ObjId::new("a1"), MorId::new("1_a1")),
        (ObjId::new("x"), MorId::new("e")),
    ]);
    SplitCoreflection::new(f, q, counit).expect("non-twisted coreflection")
}
