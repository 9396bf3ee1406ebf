/*! Fixture categories and standard functors used throughout the crate and
its test suites.  Every constructor returns a fresh value with fixed,
deterministic identifiers. */

use std::collections::BTreeMap;
use std::sync::Arc;

use super::category::FinCategory;
use super::functor::FinFunctor;
use super::ids::{MorId, ObjId};

/// The finite ordinal `n` as a category: objects `0 … n-1`, one morphism
/// `ij` for each `i < j`.
pub fn ordinal(n: usize) -> Arc<FinCategory> {
    let mut b = FinCategory::builder();
    for i in 0..n {
        b.object(i.to_string());
    }
    for i in 0..n {
        for j in (i + 1)..n {
            b.morphism(format!("{i}{j}"), i.to_string(), j.to_string());
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                b.composite(format!("{j}{k}"), format!("{i}{j}"), format!("{i}{k}"));
            }
        }
    }
    Arc::new(b.build().expect("ordinal"))
}

/// The terminal category.
pub fn one() -> Arc<FinCategory> {
    ordinal(1)
}

/// The arrow category `0 → 1`.
pub fn two() -> Arc<FinCategory> {
    ordinal(2)
}

/// The ordinal `3`, with composite `02 = 12 ∘ 01`.
pub fn three() -> Arc<FinCategory> {
    ordinal(3)
}

/// Two objects, no non-identity morphisms.
pub fn disc_two() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::builder()
            .object("0")
            .object("1")
            .build()
            .expect("disc_two"),
    )
}

/// Three objects `a0, a1, x` with `w: a0 → a1`, `e: a0 → x`, `u: x → a1`
/// and `u ∘ e = w`.  Carries a split coreflection under `2` that is not
/// twisted: the required witness for `u` would live in the empty hom-set
/// `hom(x, a0)`.
pub fn non_twisted() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::builder()
            .object("a0")
            .object("a1")
            .object("x")
            .morphism("w", "a0", "a1")
            .morphism("e", "a0", "x")
            .morphism("u", "x", "a1")
            .composite("u", "e", "w")
            .build()
            .expect("non_twisted"),
    )
}

/// Three objects `a, b, c` with `u1: a → b`, `u2: a → c`, `v: b → c` and
/// `v ∘ u1 = u2`: the functor to `2` collapsing `b, c` admits two lens
/// structures, and the `u2` choice is not opcartesian.
pub fn two_lifts() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::builder()
            .object("a")
            .object("b")
            .object("c")
            .morphism("u1", "a", "b")
            .morphism("u2", "a", "c")
            .morphism("v", "b", "c")
            .composite("v", "u1", "u2")
            .build()
            .expect("two_lifts"),
    )
}

/// Objects `L, M, R`; generators `s: L → M`, `r: M → L`, `u: M → R`;
/// relations `r ∘ s = 1_L` and `u ∘ s ∘ r = u`.  The second relation closes
/// the category at eight morphisms (`s, r, u`, the idempotent `sr: M → M`,
/// `us: L → R`, and three identities) and makes the full embedding of `2`
/// at `L, R` a twisted coreflection.
pub fn bex() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::builder()
            .object("L")
            .object("M")
            .object("R")
            .morphism("s", "L", "M")
            .morphism("r", "M", "L")
            .morphism("u", "M", "R")
            .morphism("sr", "M", "M")
            .morphism("us", "L", "R")
            .composite("r", "s", "1_L")
            .composite("s", "r", "sr")
            .composite("u", "s", "us")
            .composite("sr", "sr", "sr")
            .composite("r", "sr", "r")
            .composite("sr", "s", "s")
            .composite("u", "sr", "u")
            .composite("us", "r", "u")
            .build()
            .expect("bex"),
    )
}

/// The face map `δ_i: ordinal(n) → ordinal(n+1)` skipping object `i`.
pub fn delta(i: usize, n: usize) -> FinFunctor {
    assert!(i <= n, "face index out of range");
    let dom = ordinal(n);
    let cod = ordinal(n + 1);
    let shift = |j: usize| if j < i { j } else { j + 1 };
    let obj_map: BTreeMap<ObjId, ObjId> = (0..n)
        .map(|j| (ObjId::new(j.to_string()), ObjId::new(shift(j).to_string())))
        .collect();
    let mut mor_map = BTreeMap::new();
    for j in 0..n {
        for k in (j + 1)..n {
            mor_map.insert(
                MorId::new(format!("{j}{k}")),
                MorId::new(format!("{}{}", shift(j), shift(k))),
            );
        }
    }
    FinFunctor::from_parts(dom, cod, obj_map, mor_map).expect("delta")
}

/// The degeneracy `σ_i: ordinal(n+1) → ordinal(n)` repeating object `i`.
pub fn sigma(i: usize, n: usize) -> FinFunctor {
    assert!(i <= n, "degeneracy index out of range");
    let dom = ordinal(n + 1);
    let cod = ordinal(n);
    let collapse = |j: usize| if j <= i { j } else { j - 1 };
    let obj_map: BTreeMap<ObjId, ObjId> = (0..n + 1)
        .map(|j| (ObjId::new(j.to_string()), ObjId::new(collapse(j).to_string())))
        .collect();
    let mut mor_map = BTreeMap::new();
    for j in 0..n + 1 {
        for k in (j + 1)..n + 1 {
            let (cj, ck) = (collapse(j), collapse(k));
            let image = if cj == ck {
                MorId::identity_of(&ObjId::new(cj.to_string()))
            } else {
                MorId::new(format!("{cj}{ck}"))
            };
            mor_map.insert(MorId::new(format!("{j}{k}")), image);
        }
    }
    FinFunctor::from_parts(dom, cod, obj_map, mor_map).expect("sigma")
}

/// The unique functor into the terminal category.
pub fn bang(cat: &Arc<FinCategory>) -> FinFunctor {
    let target = one();
    let obj_map: BTreeMap<ObjId, ObjId> = cat
        .objects()
        .iter()
        .map(|o| (o.clone(), ObjId::new("0")))
        .collect();
    let mor_map: BTreeMap<MorId, MorId> = cat
        .morphisms()
        .map(|m| (m.clone(), MorId::new("1_0")))
        .collect();
    FinFunctor::new(cat.clone(), target, obj_map, mor_map).expect("bang")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_categories_are_valid() {
        for cat in [
            one(),
            two(),
            three(),
            disc_two(),
            non_twisted(),
            two_lifts(),
            bex(),
        ] {
            assert!(cat.validate().is_ok(), "{:?}", cat.validate().to_string());
        }
    }

    #[test]
    fn bex_has_eight_morphisms_and_closes() {
        let bex = bex();
        assert_eq!(bex.morphism_count(), 8);
        // u ∘ s ∘ r = u: the composite of sr into u collapses.
        let usr = bex.comp(&"u".into(), &"sr".into());
        assert_eq!(usr, &MorId::new("u"));
        assert_eq!(bex.comp(&"r".into(), &"s".into()), &MorId::new("1_L"));
        // hom(L, R) is the single morphism us.
        assert_eq!(bex.hom(&"L".into(), &"R".into()), vec![&MorId::new("us")]);
    }

    #[test]
    fn face_and_degeneracy_maps_are_valid() {
        for f in [
            delta(0, 1),
            delta(1, 1),
            delta(0, 2),
            delta(1, 2),
            delta(2, 2),
            sigma(0, 1),
            sigma(1, 2),
            sigma(0, 2),
        ] {
            assert!(f.validate().is_ok());
        }
    }

    #[test]
    fn sigma_one_collapses_the_top() {
        let s = sigma(1, 2);
        assert_eq!(s.apply_obj(&"2".into()), &ObjId::new("1"));
        assert_eq!(s.apply_mor(&"12".into()), &MorId::new("1_1"));
        assert_eq!(s.apply_mor(&"02".into()), &MorId::new("01"));
    }

    #[test]
    fn bang_is_valid_on_catalog() {
        for cat in [two(), three(), bex()] {
            assert!(bang(&cat).validate().is_ok());
        }
    }
}
