//! Brute-force cross-checks used by tests: exhaustive searches that are
//! slower but independently convincing, against which the targeted
//! constructions are compared.

use std::sync::Arc;

use super::category::FinCategory;
use super::constructions::Pushout;
use super::enumerate::{enumerate_functors, SizeGuard};
use super::functor::FinFunctor;

fn oracle_guard() -> SizeGuard {
    SizeGuard {
        max_search: 200_000_000,
        ..SizeGuard::default()
    }
}

/// General isomorphism search by exhausting functors and classifying each.
pub fn find_isomorphism(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> Option<FinFunctor> {
    if a.object_count() != b.object_count() || a.morphism_count() != b.morphism_count() {
        return None;
    }
    enumerate_functors(a, b, &oracle_guard())
        .expect("oracle search within bounds")
        .into_iter()
        .find(|f| f.classify().isomorphism)
}

pub fn are_isomorphic(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Every diagonal of the square `(top, bottom): f → g`, i.e. every
/// `ℓ: cod f → dom g` with `ℓ∘f = top` and `g∘ℓ = bottom`.
pub fn square_fillers(
    f: &FinFunctor,
    g: &FinFunctor,
    top: &FinFunctor,
    bottom: &FinFunctor,
) -> Vec<FinFunctor> {
    enumerate_functors(f.cod(), g.dom(), &oracle_guard())
        .expect("oracle search within bounds")
        .into_iter()
        .filter(|ell| {
            FinFunctor::compose(ell, f).as_ref() == Ok(top)
                && FinFunctor::compose(g, ell).as_ref() == Ok(bottom)
        })
        .collect()
}

/// Every mediating functor out of a pushout for the cocone
/// `(from_a: A → Z, from_x: X → Z)`: all `m` with `m∘f′ = from_a` and
/// `m∘π = from_x`.
pub fn mediating_functors(
    po: &Pushout,
    from_a: &FinFunctor,
    from_x: &FinFunctor,
) -> Vec<FinFunctor> {
    assert_eq!(from_a.cod(), from_x.cod(), "cocone legs must share a codomain");
    enumerate_functors(&po.category, from_a.cod(), &oracle_guard())
        .expect("oracle search within bounds")
        .into_iter()
        .filter(|m| {
            FinFunctor::compose(m, &po.f_prime).as_ref() == Ok(from_a)
                && FinFunctor::compose(m, &po.pi).as_ref() == Ok(from_x)
        })
        .collect()
}
