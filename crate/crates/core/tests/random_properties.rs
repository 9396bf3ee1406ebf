//! Randomised law checks over thin categories.  A thin category is read off
//! a reflexive-transitive relation, so associativity is automatic and the
//! generator can't produce an invalid table; every functor between two such
//! categories is then enumerated and pushed through the constructions under
//! test.

use std::sync::Arc;

use proptest::prelude::*;

use catlift_core::awfs::factorize;
use catlift_core::fincat::{
    comprehensive_factorize, enumerate_functors, orthogonal_lift, FinCategory, FinFunctor,
    SizeGuard,
};
use catlift_core::lenses::{
    enumerate_generated_structures, enumerate_lens_structures, GeneratedVariant,
};

/// Thin category on `n` objects from an adjacency choice: close the edge
/// relation reflexively and transitively, take one arrow per related pair.
fn thin_category(n: usize, edges: &[bool]) -> Arc<FinCategory> {
    let mut rel = vec![vec![false; n]; n];
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && edges[i * n + j] {
                rel[i][j] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if rel[i][k] && rel[k][j] {
                    rel[i][j] = true;
                }
            }
        }
    }

    let mut b = FinCategory::builder();
    for i in 0..n {
        b.object(format!("t{i}"));
    }
    let arrow = |i: usize, j: usize| format!("a{i}{j}");
    for i in 0..n {
        for j in 0..n {
            if i != j && rel[i][j] {
                b.morphism(arrow(i, j), format!("t{i}"), format!("t{j}"));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j || !rel[i][j] {
                continue;
            }
            for k in 0..n {
                if j == k || !rel[j][k] {
                    continue;
                }
                let result = if i == k { format!("1_t{i}") } else { arrow(i, k) };
                b.composite(arrow(j, k), arrow(i, j), result);
            }
        }
    }
    Arc::new(b.build().expect("thin categories satisfy the laws"))
}

fn thin_categories() -> impl Strategy<Value = Arc<FinCategory>> {
    (1..=3usize, proptest::collection::vec(any::<bool>(), 9))
        .prop_map(|(n, edges)| thin_category(n, &edges))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn factorisation_recovers_every_functor_between_thin_categories(
        a in thin_categories(),
        b in thin_categories(),
    ) {
        let guard = SizeGuard::default();
        for f in enumerate_functors(&a, &b, &guard).expect("thin searches are small") {
            let fac = factorize(&f);
            prop_assert_eq!(
                &FinFunctor::compose(fac.rf(), fac.lf()).expect("halves compose"),
                &f
            );
            prop_assert!(fac.coref().coref().check().is_ok());
            prop_assert!(fac.lens().check().is_ok());
        }
    }

    #[test]
    fn generated_and_direct_lens_structures_agree_on_thin_functors(
        a in thin_categories(),
        b in thin_categories(),
    ) {
        let guard = SizeGuard::default();
        for f in enumerate_functors(&a, &b, &guard).expect("thin searches are small") {
            let direct = enumerate_lens_structures(&f, &guard)
                .expect("lift tables over thin categories are small");
            let generated = enumerate_generated_structures(&f, GeneratedVariant::Lens, &guard)
                .expect("lift tables over thin categories are small");
            let direct_tables: Vec<_> = direct
                .structures
                .as_deref()
                .expect("structures retained")
                .iter()
                .map(|l| l.lifts().clone())
                .collect();
            let generated_tables: Vec<_> = generated
                .structures
                .as_deref()
                .expect("structures retained")
                .iter()
                .map(|l| l.lifts().clone())
                .collect();
            prop_assert_eq!(direct_tables, generated_tables);

            let dopf = enumerate_generated_structures(&f, GeneratedVariant::Dopf, &guard)
                .expect("lift tables over thin categories are small");
            let expected = usize::from(f.classify().discrete_opfibration);
            prop_assert_eq!(dopf.count, expected);
        }
    }

    #[test]
    fn orthogonal_lift_fills_comprehensive_squares_uniquely(
        a in thin_categories(),
        b in thin_categories(),
    ) {
        let guard = SizeGuard::default();
        for f in enumerate_functors(&a, &b, &guard).expect("thin searches are small") {
            let cf = comprehensive_factorize(&f);
            prop_assert!(cf.initial_part.classify().initial);
            prop_assert!(cf.dopf_part.classify().discrete_opfibration);
            prop_assert_eq!(
                &FinFunctor::compose(&cf.dopf_part, &cf.initial_part).expect("parts compose"),
                &f
            );

            let ell = orthogonal_lift(&cf.initial_part, &cf.dopf_part, &cf.initial_part, &cf.dopf_part)
                .expect("the factorisation square has a diagonal");
            prop_assert!(ell.is_identity_functor());
            let fillers: Vec<_> = enumerate_functors(&cf.middle, &cf.middle, &guard)
                .expect("middle of a thin factorisation is small")
                .into_iter()
                .filter(|c| {
                    FinFunctor::compose(c, &cf.initial_part).as_ref() == Ok(&cf.initial_part)
                        && FinFunctor::compose(&cf.dopf_part, c).as_ref() == Ok(&cf.dopf_part)
                })
                .collect();
            prop_assert_eq!(fillers.len(), 1);
        }
    }
}
