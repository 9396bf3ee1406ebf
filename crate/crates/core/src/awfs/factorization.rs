use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::coreflections::{SplitCoreflection, TwistedCoreflection};
use crate::fincat::{discrete_of, FinCategory, FinFunctor, MorId, ObjId};
use crate::lenses::DeltaLens;

use super::coslice::{coslice_sum, CosliceSum};
use super::lift::{lift, LiftStrategy};
use super::names::{e1_mor, e2_mor, pair_obj};

/// Sort of a morphism of the middle category `Ef`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EfMorSort {
    /// `v: (a, u₁) → (a, u₂)` with `v ∘ u₁ = u₂`; stays inside the coslice
    /// summand of `a`.  Identities are recorded with `v` an identity.
    E1 { a: ObjId, u1: MorId, u2: MorId, v: MorId },
    /// `(v, w): (a₁, u₁) → (a₂, u₂)` with `v ∘ u₁ = 1_{fa₁}` a section of
    /// `u₁` and `w: a₁ → a₂` a non-identity morphism of the domain.
    E2 {
        a1: ObjId,
        u1: MorId,
        a2: ObjId,
        u2: MorId,
        v: MorId,
        w: MorId,
    },
}

/// The factorisation of `f: A → B` through its middle category `Ef`:
/// a twisted coreflection `Lf: A → Ef` (with right adjoint `Sf`) followed
/// by a delta lens on `Rf: Ef → B`, with `Rf ∘ Lf = f`.
///
/// Objects of `Ef` are pairs `(a, u: fa → b)`.  The factorisation also
/// carries the coslice sum over the objects of `A` and the comparison
/// `phi` from it, which is bijective on objects and whose composite with
/// `Rf` is a discrete opfibration.
#[derive(Debug)]
pub struct EfFactorization {
    f: FinFunctor,
    ef: Arc<FinCategory>,
    lf: FinFunctor,
    rf: FinFunctor,
    sf: FinFunctor,
    phi: FinFunctor,
    coslice: CosliceSum,
    coref: TwistedCoreflection,
    lens: DeltaLens,
    obj_pairs: BTreeMap<ObjId, (ObjId, MorId)>,
    pair_index: BTreeMap<(ObjId, MorId), ObjId>,
    sorts: BTreeMap<MorId, EfMorSort>,
    lf_fact: OnceLock<Box<EfFactorization>>,
    rf_fact: OnceLock<Box<EfFactorization>>,
    delta: OnceLock<FinFunctor>,
    mu: OnceLock<FinFunctor>,
}

impl EfFactorization {
    pub fn f(&self) -> &FinFunctor {
        &self.f
    }

    pub fn ef(&self) -> &Arc<FinCategory> {
        &self.ef
    }

    /// Left half `A → Ef`: `a ↦ (a, 1_{fa})`, carried by a twisted
    /// coreflection.
    pub fn lf(&self) -> &FinFunctor {
        &self.lf
    }

    /// Right half `Ef → B`: `(a, u) ↦ tgt u`, carried by a delta lens.
    pub fn rf(&self) -> &FinFunctor {
        &self.rf
    }

    /// Right adjoint `Ef → A` of the left half: `(a, u) ↦ a`.
    pub fn sf(&self) -> &FinFunctor {
        &self.sf
    }

    /// Comparison from the coslice sum, bijective on objects; composing it
    /// with `rf` gives the coslice sum's discrete opfibration leg.
    pub fn phi(&self) -> &FinFunctor {
        &self.phi
    }

    pub fn coslice(&self) -> &CosliceSum {
        &self.coslice
    }

    /// The twisted coreflection `(Lf ⊣ Sf, ε)` with `ε_{(a,u)}` the
    /// sort-E1 morphism `u: (a, 1_{fa}) → (a, u)`.
    pub fn coref(&self) -> &TwistedCoreflection {
        &self.coref
    }

    /// The delta lens on `Rf` whose lift of `((a, u), v)` is the sort-E1
    /// morphism `v: (a, u) → (a, v∘u)`.
    pub fn lens(&self) -> &DeltaLens {
        &self.lens
    }

    pub fn obj_pairs(&self) -> &BTreeMap<ObjId, (ObjId, MorId)> {
        &self.obj_pairs
    }

    pub fn sorts(&self) -> &BTreeMap<MorId, EfMorSort> {
        &self.sorts
    }

    /// The pair `(a, u)` behind an object of `Ef`.
    pub fn pair_of(&self, x: &ObjId) -> &(ObjId, MorId) {
        self.obj_pairs
            .get(x)
            .unwrap_or_else(|| panic!("no middle-category object named {x}"))
    }

    /// The object of `Ef` representing the pair `(a, u)`.
    pub fn object_for(&self, a: &ObjId, u: &MorId) -> &ObjId {
        self.pair_index
            .get(&(a.clone(), u.clone()))
            .unwrap_or_else(|| panic!("no middle-category object for ({a}, {u})"))
    }

    /// Sort of a morphism of `Ef` (identities included).
    pub fn sort_of(&self, m: &MorId) -> &EfMorSort {
        self.sorts
            .get(m)
            .unwrap_or_else(|| panic!("no middle-category morphism named {m}"))
    }

    /// The factorisation of the left half, memoised.
    pub fn lf_factorization(&self) -> &EfFactorization {
        self.lf_fact.get_or_init(|| Box::new(factorize(&self.lf)))
    }

    /// The factorisation of the right half, memoised.
    pub fn rf_factorization(&self) -> &EfFactorization {
        self.rf_fact.get_or_init(|| Box::new(factorize(&self.rf)))
    }

    /// Comultiplication comparison `Δ_f: Ef → E(Lf)`: the lift of the
    /// square `(L(Lf), 1_{Ef})` between the coreflection of `f` and the
    /// lens of the factorisation of `Lf`.  Satisfies `R(Lf) ∘ Δ_f = 1` and
    /// `Δ_f ∘ Lf = L(Lf)`.
    pub fn delta(&self) -> &FinFunctor {
        self.delta.get_or_init(|| {
            let inner = self.lf_factorization();
            let id = FinFunctor::identity(self.ef.clone());
            lift(&self.coref, inner.lens(), inner.lf(), &id, LiftStrategy::Formula)
                .expect("comultiplication square commutes")
                .j
        })
    }

    /// Multiplication comparison `μ_f: E(Rf) → Ef`: the lift of the square
    /// `(1_{Ef}, R(Rf))` between the coreflection of the factorisation of
    /// `Rf` and the lens of `f`.  Satisfies `μ_f ∘ L(Rf) = 1` and
    /// `Rf ∘ μ_f = R(Rf)`.
    pub fn mu(&self) -> &FinFunctor {
        self.mu.get_or_init(|| {
            let inner = self.rf_factorization();
            let id = FinFunctor::identity(self.ef.clone());
            lift(inner.coref(), &self.lens, &id, inner.rf(), LiftStrategy::Formula)
                .expect("multiplication square commutes")
                .j
        })
    }
}

/// Factor `f: A → B` as a twisted coreflection followed by a delta lens.
pub fn factorize(f: &FinFunctor) -> EfFactorization {
    let a_cat = f.dom().clone();
    let b_cat = f.cod().clone();

    let mut builder = FinCategory::builder();
    let mut obj_pairs: BTreeMap<ObjId, (ObjId, MorId)> = BTreeMap::new();
    let mut pair_index: BTreeMap<(ObjId, MorId), ObjId> = BTreeMap::new();
    for a in a_cat.objects() {
        for u in b_cat.morphisms_from(f.apply_obj(a)) {
            let name = pair_obj(a, u);
            builder.object(name.clone());
            obj_pairs.insert(name.clone(), (a.clone(), u.clone()));
            pair_index.insert((a.clone(), u.clone()), name);
        }
    }

    let mut sorts: BTreeMap<MorId, EfMorSort> = BTreeMap::new();
    for (name, (a, u)) in &obj_pairs {
        sorts.insert(
            MorId::identity_of(name),
            EfMorSort::E1 {
                a: a.clone(),
                u1: u.clone(),
                u2: u.clone(),
                v: b_cat.identity(b_cat.tgt(u)).clone(),
            },
        );
    }

    // (name, a, u1, u2, v)
    let mut e1: Vec<(MorId, ObjId, MorId, MorId, MorId)> = Vec::new();
    for (src_name, (a, u1)) in &obj_pairs {
        for v in b_cat.morphisms_from(b_cat.tgt(u1)) {
            if b_cat.is_identity(v) {
                continue;
            }
            let u2 = b_cat.comp(v, u1).clone();
            let name = e1_mor(a, u1, &u2, v);
            builder.morphism(name.clone(), src_name.clone(), pair_obj(a, &u2));
            sorts.insert(
                name.clone(),
                EfMorSort::E1 {
                    a: a.clone(),
                    u1: u1.clone(),
                    u2: u2.clone(),
                    v: v.clone(),
                },
            );
            e1.push((name, a.clone(), u1.clone(), u2, v.clone()));
        }
    }

    // (name, a1, u1, a2, u2, v, w)
    let mut e2: Vec<(MorId, ObjId, MorId, ObjId, MorId, MorId, MorId)> = Vec::new();
    for (src_name, (a1, u1)) in &obj_pairs {
        let fa1 = f.apply_obj(a1);
        for v in b_cat.hom(b_cat.tgt(u1), fa1) {
            if b_cat.comp(v, u1) != b_cat.identity(fa1) {
                continue;
            }
            for w in a_cat.non_identity_morphisms() {
                if a_cat.src(w) != a1 {
                    continue;
                }
                let a2 = a_cat.tgt(w);
                for u2 in b_cat.morphisms_from(f.apply_obj(a2)) {
                    let name = e2_mor(a1, u1, a2, u2, v, w);
                    builder.morphism(name.clone(), src_name.clone(), pair_obj(a2, u2));
                    sorts.insert(
                        name.clone(),
                        EfMorSort::E2 {
                            a1: a1.clone(),
                            u1: u1.clone(),
                            a2: a2.clone(),
                            u2: u2.clone(),
                            v: v.clone(),
                            w: w.clone(),
                        },
                    );
                    e2.push((
                        name,
                        a1.clone(),
                        u1.clone(),
                        a2.clone(),
                        u2.clone(),
                        v.clone(),
                        w.clone(),
                    ));
                }
            }
        }
    }

    // Vertical after vertical composes in B, inside the summand.
    for (n1, a, u0, u1, v1) in &e1 {
        for (n2, a2, u1b, u2, v2) in &e1 {
            if a2 != a || u1b != u1 {
                continue;
            }
            let v3 = b_cat.comp(v2, v1).clone();
            let result = if b_cat.is_identity(&v3) {
                MorId::identity_of(&pair_obj(a, u0))
            } else {
                e1_mor(a, u0, u2, &v3)
            };
            builder.composite(n2.clone(), n1.clone(), result);
        }
    }
    // A crossing absorbs a vertical on either side: before, into its
    // section slot; after, into the target datum.
    for (n1, a, u0, u1, v1) in &e1 {
        for (n2, a1, u1b, a2, u2, v, w) in &e2 {
            if a1 != a || u1b != u1 {
                continue;
            }
            let section = b_cat.comp(v, v1).clone();
            builder.composite(n2.clone(), n1.clone(), e2_mor(a, u0, a2, u2, &section, w));
        }
    }
    for (n1, a1, u1, a2, u2, v, w) in &e2 {
        for (n2, a, u2b, u3, _) in &e1 {
            if a != a2 || u2b != u2 {
                continue;
            }
            builder.composite(n2.clone(), n1.clone(), e2_mor(a1, u1, a2, u3, v, w));
        }
    }
    // Crossing after crossing: the middle collapses because the second
    // section cuts down the first target datum, leaving the legs of the
    // domain to compose.
    for (n1, a1, u1, a2, u2, v1, w1) in &e2 {
        for (n2, b1, u2b, a3, u3, _, w2) in &e2 {
            if b1 != a2 || u2b != u2 {
                continue;
            }
            let w3 = a_cat.comp(w2, w1).clone();
            let result = if a_cat.is_identity(&w3) {
                let vres = b_cat.comp(u3, v1).clone();
                if b_cat.is_identity(&vres) {
                    MorId::identity_of(&pair_obj(a1, u1))
                } else {
                    e1_mor(a1, u1, u3, &vres)
                }
            } else {
                e2_mor(a1, u1, a3, u3, v1, &w3)
            };
            builder.composite(n2.clone(), n1.clone(), result);
        }
    }

    let ef = Arc::new(builder.build().expect("middle category"));
    debug_assert!(ef.validate().is_ok(), "{}", ef.validate());

    let lf_obj: BTreeMap<ObjId, ObjId> = a_cat
        .objects()
        .iter()
        .map(|a| {
            let i = b_cat.identity(f.apply_obj(a));
            (a.clone(), pair_index[&(a.clone(), i.clone())].clone())
        })
        .collect();
    let lf_mor: BTreeMap<MorId, MorId> = a_cat
        .non_identity_morphisms()
        .map(|w| {
            let i1 = b_cat.identity(f.apply_obj(a_cat.src(w)));
            let i2 = b_cat.identity(f.apply_obj(a_cat.tgt(w)));
            (
                w.clone(),
                e2_mor(a_cat.src(w), i1, a_cat.tgt(w), i2, i1, w),
            )
        })
        .collect();
    let lf = FinFunctor::from_parts(a_cat.clone(), ef.clone(), lf_obj, lf_mor)
        .expect("left half of the factorisation");

    let rf_obj: BTreeMap<ObjId, ObjId> = obj_pairs
        .iter()
        .map(|(name, (_, u))| (name.clone(), b_cat.tgt(u).clone()))
        .collect();
    let mut rf_mor: BTreeMap<MorId, MorId> = BTreeMap::new();
    for (name, _, _, _, v) in &e1 {
        rf_mor.insert(name.clone(), v.clone());
    }
    for (name, _, _, _, u2, v, w) in &e2 {
        rf_mor.insert(name.clone(), b_cat.comp_path(&[v, f.apply_mor(w), u2]));
    }
    let rf = FinFunctor::from_parts(ef.clone(), b_cat.clone(), rf_obj, rf_mor)
        .expect("right half of the factorisation");
    debug_assert_eq!(FinFunctor::compose(&rf, &lf).unwrap(), *f);

    let sf_obj: BTreeMap<ObjId, ObjId> = obj_pairs
        .iter()
        .map(|(name, (a, _))| (name.clone(), a.clone()))
        .collect();
    let mut sf_mor: BTreeMap<MorId, MorId> = BTreeMap::new();
    for (name, a, ..) in &e1 {
        sf_mor.insert(name.clone(), a_cat.identity(a).clone());
    }
    for (name, _, _, _, _, _, w) in &e2 {
        sf_mor.insert(name.clone(), w.clone());
    }
    let sf = FinFunctor::from_parts(ef.clone(), a_cat.clone(), sf_obj, sf_mor)
        .expect("right adjoint of the left half");
    debug_assert!(lf.validate().is_ok(), "{}", lf.validate());
    debug_assert!(rf.validate().is_ok(), "{}", rf.validate());
    debug_assert!(sf.validate().is_ok(), "{}", sf.validate());

    let (_, iota) = discrete_of(&a_cat);
    let coslice = coslice_sum(&FinFunctor::compose(f, &iota).expect("discrete restriction"));
    let phi_obj: BTreeMap<ObjId, ObjId> = coslice
        .category
        .objects()
        .iter()
        .map(|o| (o.clone(), o.clone()))
        .collect();
    let phi_mor: BTreeMap<MorId, MorId> = coslice
        .category
        .non_identity_morphisms()
        .map(|m| (m.clone(), m.clone()))
        .collect();
    let phi = FinFunctor::from_parts(coslice.category.clone(), ef.clone(), phi_obj, phi_mor)
        .expect("coslice comparison");
    debug_assert!(phi.validate().is_ok(), "{}", phi.validate());

    let counit: BTreeMap<ObjId, MorId> = obj_pairs
        .iter()
        .map(|(name, (a, u))| {
            let component = if b_cat.is_identity(u) {
                MorId::identity_of(name)
            } else {
                e1_mor(a, b_cat.identity(f.apply_obj(a)), u, u)
            };
            (name.clone(), component)
        })
        .collect();
    let plain = SplitCoreflection::new(lf.clone(), sf.clone(), counit)
        .expect("factorisation coreflection is well-shaped");
    debug_assert!(plain.check().is_ok(), "{}", plain.check());
    let coref = TwistedCoreflection::try_new(plain)
        .expect("the left half of the factorisation is twisted");

    let mut lifts: BTreeMap<(ObjId, MorId), MorId> = BTreeMap::new();
    for (name, (a, u)) in &obj_pairs {
        for v in b_cat.morphisms_from(b_cat.tgt(u)) {
            let value = if b_cat.is_identity(v) {
                MorId::identity_of(name)
            } else {
                e1_mor(a, u, b_cat.comp(v, u), v)
            };
            lifts.insert((name.clone(), v.clone()), value);
        }
    }
    let lens =
        DeltaLens::new(rf.clone(), lifts).expect("factorisation lens is well-shaped");
    debug_assert!(lens.check().is_ok(), "{}", lens.check());

    EfFactorization {
        f: f.clone(),
        ef,
        lf,
        rf,
        sf,
        phi,
        coslice,
        coref,
        lens,
        obj_pairs,
        pair_index,
        sorts,
        lf_fact: OnceLock::new(),
        rf_fact: OnceLock::new(),
        delta: OnceLock::new(),
        mu: OnceLock::new(),
    }
}
