//! Small lens fixtures shared by tests across the crate.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::fincat::{bang, two, two_lifts, FinCategory, FinFunctor};

use super::lens::DeltaLens;

/// The projection `TwoLifts → Two` collapsing `b` and `c` over the target.
pub fn two_lifts_to_two() -> FinFunctor {
    FinFunctor::from_parts(
        two_lifts(),
        two(),
        [
            ("a".into(), "0".into()),
            ("b".into(), "1".into()),
            ("c".into(), "1".into()),
        ]
        .into(),
        [
            ("u1".into(), "01".into()),
            ("u2".into(), "01".into()),
            ("v".into(), "1_1".into()),
        ]
        .into(),
    )
    .expect("projection functor")
}

fn two_lifts_lens(choice: &str) -> DeltaLens {
    let mut lifts = BTreeMap::new();
    lifts.insert(("a".into(), "1_0".into()), "1_a".into());
    lifts.insert(("a".into(), "01".into()), choice.into());
    lifts.insert(("b".into(), "1_1".into()), "1_b".into());
    lifts.insert(("c".into(), "1_1".into()), "1_c".into());
    DeltaLens::new(two_lifts_to_two(), lifts).expect("fixture lift table")
}

/// The lens structure on `TwoLifts → Two` choosing `u1` over `01`; a
/// split opfibration.
pub fn two_lifts_lens_left() -> DeltaLens {
    two_lifts_lens("u1")
}

/// The lens structure on `TwoLifts → Two` choosing `u2` over `01`; not a
/// split opfibration.
pub fn two_lifts_lens_right() -> DeltaLens {
    two_lifts_lens("u2")
}

/// The unique lens structure on `!: C → 1`: all lifts are identities.
pub fn bang_lens(cat: &Arc<FinCategory>) -> DeltaLens {
    let f = bang(cat);
    let point = f.cod().clone();
    let star = &point.objects()[0];
    let id = point.identity(star).clone();
    let lifts: BTreeMap<_, _> = cat
        .objects()
        .iter()
        .map(|a| ((a.clone(), id.clone()), cat.identity(a).clone()))
        .collect();
    DeltaLens::new(f, lifts).expect("identity lift table")
}
