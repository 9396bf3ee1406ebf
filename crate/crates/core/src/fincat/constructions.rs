use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use super::category::FinCategory;
use super::functor::{DopfLiftError, FinFunctor};
use super::ids::{MorId, ObjId};

/// The discrete subcategory on the objects of `cat`, with its
/// identity-on-objects inclusion.
pub fn discrete_of(cat: &Arc<FinCategory>) -> (Arc<FinCategory>, FinFunctor) {
    let mut b = FinCategory::builder();
    for o in cat.objects() {
        b.object(o.clone());
    }
    let discrete = Arc::new(b.build().expect("discrete subcategory"));
    let obj_map: BTreeMap<ObjId, ObjId> = cat
        .objects()
        .iter()
        .map(|o| (o.clone(), o.clone()))
        .collect();
    let iota = FinFunctor::from_parts(discrete.clone(), cat.clone(), obj_map, BTreeMap::new())
        .expect("discrete inclusion");
    (discrete, iota)
}

/// The comma category `F/b`: objects are pairs `(a, u: Fa → b)` named
/// `(a|u)`, morphisms `(a,u) → (a',u')` are `w: a → a'` with `u' ∘ Fw = u`,
/// named `(w|u')`.
#[derive(Debug)]
pub struct Comma {
    pub category: Arc<FinCategory>,
    /// Projection to the domain of `F`, sending `(a|u)` to `a` and `(w|u')`
    /// to `w`.
    pub proj: FinFunctor,
    /// The pair behind each object identifier.
    pub obj_data: BTreeMap<ObjId, (ObjId, MorId)>,
}

pub fn comma_category(f: &FinFunctor, b: &ObjId) -> Comma {
    assert!(f.cod().has_object(b), "comma target must be in the codomain");
    let dom = f.dom().clone();
    let cod = f.cod().clone();

    let mut builder = FinCategory::builder();
    let mut obj_data = BTreeMap::new();
    let mut obj_proj = BTreeMap::new();
    let obj_name = |a: &ObjId, u: &MorId| ObjId::new(format!("({a}|{u})"));
    for a in dom.objects() {
        for u in cod.hom(f.apply_obj(a), b) {
            let name = obj_name(a, u);
            builder.object(name.clone());
            obj_data.insert(name.clone(), (a.clone(), u.clone()));
            obj_proj.insert(name, a.clone());
        }
    }

    // A morphism (w|u') is determined by w and the target slice morphism u';
    // its source is (src w, u' ∘ Fw).
    let mut mor_proj = BTreeMap::new();
    let mut entries: Vec<(MorId, ObjId, ObjId, MorId, MorId)> = Vec::new();
    for w in dom.non_identity_morphisms() {
        let (a, a2) = (dom.src(w), dom.tgt(w));
        for u2 in cod.hom(f.apply_obj(a2), b) {
            let u = cod.comp(u2, f.apply_mor(w)).clone();
            let name = MorId::new(format!("({w}|{u2})"));
            builder.morphism(name.clone(), obj_name(a, &u), obj_name(a2, u2));
            entries.push((name.clone(), obj_name(a, &u), obj_name(a2, u2), w.clone(), u2.clone()));
            mor_proj.insert(name, w.clone());
        }
    }

    // Composition: (w2|u3) ∘ (w1|u2) = (w2∘w1|u3), which is the identity at
    // the shared boundary object when w2∘w1 is an identity.
    for (n1, s1, t1, w1, _) in &entries {
        for (n2, s2, _, w2, u3) in &entries {
            if t1 != s2 {
                continue;
            }
            let w = dom.comp(w2, w1).clone();
            let result = if dom.is_identity(&w) {
                MorId::identity_of(s1)
            } else {
                MorId::new(format!("({w}|{u3})"))
            };
            builder.composite(n2.clone(), n1.clone(), result);
        }
    }

    let category = Arc::new(builder.build().expect("comma category"));
    for o in category.objects() {
        if !obj_proj.contains_key(o) {
            unreachable!("comma object without projection");
        }
    }
    let proj = FinFunctor::from_parts(category.clone(), dom, obj_proj, mor_proj)
        .expect("comma projection");
    Comma {
        category,
        proj,
        obj_data,
    }
}

/// Pullback of `f: A → C` against `g: B → C`: objects `(a|b)` with
/// `fa = gb`, morphisms `(m|n)` with `fm = gn`, and the two projections.
#[derive(Debug)]
pub struct Pullback {
    pub category: Arc<FinCategory>,
    pub proj_left: FinFunctor,
    pub proj_right: FinFunctor,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PullbackError {
    #[error("the functors do not share a codomain")]
    CodomainMismatch,
}

pub fn pullback(f: &FinFunctor, g: &FinFunctor) -> Result<Pullback, PullbackError> {
    if f.cod() != g.cod() {
        return Err(PullbackError::CodomainMismatch);
    }
    let (a_cat, b_cat) = (f.dom().clone(), g.dom().clone());
    let mut builder = FinCategory::builder();
    let obj_name = |a: &ObjId, b: &ObjId| ObjId::new(format!("({a}|{b})"));
    let mut proj_l_obj = BTreeMap::new();
    let mut proj_r_obj = BTreeMap::new();
    for a in a_cat.objects() {
        for b in b_cat.objects() {
            if f.apply_obj(a) == g.apply_obj(b) {
                let name = obj_name(a, b);
                builder.object(name.clone());
                proj_l_obj.insert(name.clone(), a.clone());
                proj_r_obj.insert(name, b.clone());
            }
        }
    }

    let mut pairs: Vec<(MorId, MorId, MorId)> = Vec::new();
    let mut proj_l_mor = BTreeMap::new();
    let mut proj_r_mor = BTreeMap::new();
    for m in a_cat.morphisms() {
        for n in b_cat.morphisms() {
            if a_cat.is_identity(m) && b_cat.is_identity(n) {
                continue;
            }
            if f.apply_mor(m) != g.apply_mor(n) {
                continue;
            }
            let name = MorId::new(format!("({m}|{n})"));
            builder.morphism(
                name.clone(),
                obj_name(a_cat.src(m), b_cat.src(n)),
                obj_name(a_cat.tgt(m), b_cat.tgt(n)),
            );
            pairs.push((name.clone(), m.clone(), n.clone()));
            proj_l_mor.insert(name.clone(), m.clone());
            proj_r_mor.insert(name, n.clone());
        }
    }

    for (n1, m1, k1) in &pairs {
        for (n2, m2, k2) in &pairs {
            if a_cat.tgt(m1) != a_cat.src(m2) || b_cat.tgt(k1) != b_cat.src(k2) {
                continue;
            }
            let m = a_cat.comp(m2, m1).clone();
            let k = b_cat.comp(k2, k1).clone();
            let result = if a_cat.is_identity(&m) && b_cat.is_identity(&k) {
                MorId::identity_of(&obj_name(a_cat.src(m1), b_cat.src(k1)))
            } else {
                MorId::new(format!("({m}|{k})"))
            };
            builder.composite(n2.clone(), n1.clone(), result);
        }
    }

    let category = Arc::new(builder.build().expect("pullback category"));
    let proj_left = FinFunctor::from_parts(category.clone(), a_cat, proj_l_obj, proj_l_mor)
        .expect("pullback left projection");
    let proj_right = FinFunctor::from_parts(category.clone(), b_cat, proj_r_obj, proj_r_mor)
        .expect("pullback right projection");
    Ok(Pullback {
        category,
        proj_left,
        proj_right,
    })
}

/// Sorts of morphisms in the special pushout: either a morphism of `X`, or
/// a formal triple `x → fa --w--> fa' → y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PushoutSort {
    S1(MorId),
    S2 { u: MorId, w: MorId, v: MorId },
}

/// Pushout of a fully faithful `f: A₀ → X` (discrete domain) along the
/// discrete inclusion `ι: A₀ → A`.
#[derive(Debug)]
pub struct Pushout {
    pub category: Arc<FinCategory>,
    /// `A → B`, sending a non-identity `w: a → a'` to `[1;w;1]`.
    pub f_prime: FinFunctor,
    /// `X → B`, identity on objects and on sort-S1 morphisms.
    pub pi: FinFunctor,
    /// Sort of every morphism of the pushout.
    pub sorts: BTreeMap<MorId, PushoutSort>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PushoutError {
    #[error("the two functors have different domains")]
    DomainMismatch,
    #[error("the domain of the span is not discrete")]
    DomainNotDiscrete,
    #[error("the inclusion is not identity-on-objects into its codomain")]
    NotDiscreteInclusion,
    #[error("the leg into `X` is not fully faithful")]
    NotFullyFaithful,
}

pub fn pushout_along_discrete(
    f: &FinFunctor,
    iota: &FinFunctor,
) -> Result<Pushout, PushoutError> {
    if f.dom() != iota.dom() {
        return Err(PushoutError::DomainMismatch);
    }
    if !f.dom().is_discrete() {
        return Err(PushoutError::DomainNotDiscrete);
    }
    let a_cat = iota.cod().clone();
    let x_cat = f.cod().clone();
    {
        let class = iota.classify();
        if !class.identity_on_objects || a_cat.object_count() != iota.dom().object_count() {
            return Err(PushoutError::NotDiscreteInclusion);
        }
    }
    if !f.classify().fully_faithful {
        return Err(PushoutError::NotFullyFaithful);
    }

    let mut builder = FinCategory::builder();
    for x in x_cat.objects() {
        builder.object(x.clone());
    }

    let mut sorts: BTreeMap<MorId, PushoutSort> = BTreeMap::new();
    for m in x_cat.morphisms() {
        if x_cat.is_identity(m) {
            sorts.insert(m.clone(), PushoutSort::S1(m.clone()));
            continue;
        }
        builder.morphism(m.clone(), x_cat.src(m).clone(), x_cat.tgt(m).clone());
        sorts.insert(m.clone(), PushoutSort::S1(m.clone()));
    }

    // Formal triples (u, w, v): u into the image of src w, v out of the
    // image of tgt w, w a non-identity morphism of A between objects of A₀.
    let s2_name = |u: &MorId, w: &MorId, v: &MorId| MorId::new(format!("[{u};{w};{v}]"));
    let mut s2: Vec<(MorId, MorId, MorId, MorId)> = Vec::new();
    for w in a_cat.non_identity_morphisms() {
        let fa = f.apply_obj(a_cat.src(w));
        let fa2 = f.apply_obj(a_cat.tgt(w));
        for x in x_cat.objects() {
            for u in x_cat.hom(x, fa) {
                for y in x_cat.objects() {
                    for v in x_cat.hom(fa2, y) {
                        let name = s2_name(u, w, v);
                        builder.morphism(name.clone(), x.clone(), y.clone());
                        s2.push((name.clone(), u.clone(), w.clone(), v.clone()));
                        sorts.insert(
                            name,
                            PushoutSort::S2 {
                                u: u.clone(),
                                w: w.clone(),
                                v: v.clone(),
                            },
                        );
                    }
                }
            }
        }
    }

    // S1 ∘ S1 is composition in X (identity-valued composites included:
    // the pushout shares X's objects, hence X's identity names).
    for m1 in x_cat.non_identity_morphisms() {
        for m2 in x_cat.non_identity_morphisms() {
            if x_cat.tgt(m1) != x_cat.src(m2) {
                continue;
            }
            builder.composite(m2.clone(), m1.clone(), x_cat.comp(m2, m1).clone());
        }
    }
    // S2 ∘ S1 and S1 ∘ S2 absorb into the u / v slots.
    for (name, u, w, v) in &s2 {
        for m in x_cat.non_identity_morphisms() {
            if x_cat.tgt(m) == x_cat.src(u) {
                let um = x_cat.comp(u, m).clone();
                builder.composite(name.clone(), m.clone(), s2_name(&um, w, v));
            }
            if x_cat.src(m) == x_cat.tgt(v) {
                let mv = x_cat.comp(m, v).clone();
                builder.composite(m.clone(), name.clone(), s2_name(u, w, &mv));
            }
        }
    }
    // S2 ∘ S2: full faithfulness of f from a discrete category forces the
    // inner composite to be an identity, so the middle legs compose in A.
    for (n1, u1, w1, v1) in &s2 {
        for (n2, u2, w2, v2) in &s2 {
            if x_cat.tgt(v1) != x_cat.src(u2) {
                continue;
            }
            let inner = x_cat.comp(u2, v1).clone();
            assert!(
                x_cat.is_identity(&inner),
                "pushout precondition breach: {u2} ∘ {v1} = {inner} is not an identity"
            );
            let w = a_cat.comp(w2, w1).clone();
            if a_cat.is_identity(&w) {
                // Collapse to sort S1 (possibly an identity of X).
                builder.composite(n2.clone(), n1.clone(), x_cat.comp(v2, u1).clone());
            } else {
                builder.composite(n2.clone(), n1.clone(), s2_name(u1, &w, v2));
            }
        }
    }

    let category = Arc::new(builder.build().expect("pushout category"));
    debug_assert!(category.validate().is_ok(), "{}", category.validate());

    let pi_obj: BTreeMap<ObjId, ObjId> = x_cat
        .objects()
        .iter()
        .map(|o| (o.clone(), o.clone()))
        .collect();
    let pi_mor: BTreeMap<MorId, MorId> = x_cat
        .non_identity_morphisms()
        .map(|m| (m.clone(), m.clone()))
        .collect();
    let pi = FinFunctor::from_parts(x_cat.clone(), category.clone(), pi_obj, pi_mor)
        .expect("pushout pi");

    let fp_obj: BTreeMap<ObjId, ObjId> = a_cat
        .objects()
        .iter()
        .map(|a| (a.clone(), f.apply_obj(a).clone()))
        .collect();
    let fp_mor: BTreeMap<MorId, MorId> = a_cat
        .non_identity_morphisms()
        .map(|w| {
            let fa = f.apply_obj(a_cat.src(w));
            let fa2 = f.apply_obj(a_cat.tgt(w));
            (
                w.clone(),
                s2_name(x_cat.identity(fa), w, x_cat.identity(fa2)),
            )
        })
        .collect();
    let f_prime = FinFunctor::from_parts(a_cat, category.clone(), fp_obj, fp_mor)
        .expect("pushout f_prime");

    Ok(Pushout {
        category,
        f_prime,
        pi,
        sorts,
    })
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BooLiftError {
    #[error("the functor lifted through is not bijective on objects")]
    NotBijectiveOnObjects,
    #[error("the source of the lift is not discrete")]
    SourceNotDiscrete,
    #[error("squares do not match: g and ψ∘ĝ differ at `{0}`")]
    Mismatch(ObjId),
}

/// Unique lift of `g: X₀ → B` (discrete `X₀`) through a bijective-on-objects
/// `psi: A → B`, so that `psi ∘ ĝ = g`.
pub fn boo_lift(g: &FinFunctor, psi: &FinFunctor) -> Result<FinFunctor, BooLiftError> {
    if !g.dom().is_discrete() {
        return Err(BooLiftError::SourceNotDiscrete);
    }
    if g.cod() != psi.cod() {
        return Err(BooLiftError::Mismatch(ObjId::new("<codomain>")));
    }
    if !psi.classify().bijective_on_objects {
        return Err(BooLiftError::NotBijectiveOnObjects);
    }
    let inverse: BTreeMap<ObjId, ObjId> = psi
        .obj_map()
        .iter()
        .map(|(a, b)| (b.clone(), a.clone()))
        .collect();
    let obj_map: BTreeMap<ObjId, ObjId> = g
        .dom()
        .objects()
        .iter()
        .map(|x| (x.clone(), inverse[g.apply_obj(x)].clone()))
        .collect();
    FinFunctor::from_parts(g.dom().clone(), psi.dom().clone(), obj_map, BTreeMap::new())
        .map_err(|_| BooLiftError::Mismatch(ObjId::new("<build>")))
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OrthogonalLiftError {
    #[error("the square does not commute")]
    SquareDoesNotCommute,
    #[error("no candidate lift at `{obj}` over `{over}` (is the right leg a discrete opfibration?)")]
    NotFound { obj: ObjId, over: MorId },
    #[error("lift at `{obj}` over `{over}` is not unique: `{first}`, `{second}`")]
    NonUnique {
        obj: ObjId,
        over: MorId,
        first: MorId,
        second: MorId,
    },
    #[error("comma category over `{0}` is empty (is the left leg initial?)")]
    EmptyComma(ObjId),
    #[error("lift is inconsistent at `{0}` (is the left leg initial?)")]
    Inconsistent(ObjId),
}

impl From<DopfLiftError> for OrthogonalLiftError {
    fn from(e: DopfLiftError) -> Self {
        match e {
            DopfLiftError::NotFound { obj, over } => OrthogonalLiftError::NotFound { obj, over },
            DopfLiftError::NonUnique {
                obj,
                over,
                first,
                second,
            } => OrthogonalLiftError::NonUnique {
                obj,
                over,
                first,
                second,
            },
        }
    }
}

/// The unique diagonal `ℓ: B → C` with `ℓ ∘ F = top` and `G ∘ ℓ = bottom`,
/// for `F: A → B` initial and `G: C → D` a discrete opfibration.
///
/// For each object `b`, any comma object `(a, u: Fa → b)` determines
/// `ℓb` as the target of the unique `G`-lift of `bottom u` at `top a`;
/// initiality makes the answer independent of the choice, which is checked
/// rather than assumed.
pub fn orthogonal_lift(
    f: &FinFunctor,
    g: &FinFunctor,
    top: &FinFunctor,
    bottom: &FinFunctor,
) -> Result<FinFunctor, OrthogonalLiftError> {
    let b_cat = f.cod().clone();
    let c_cat = g.dom().clone();
    if FinFunctor::compose(g, top).map_err(|_| OrthogonalLiftError::SquareDoesNotCommute)?
        != FinFunctor::compose(bottom, f).map_err(|_| OrthogonalLiftError::SquareDoesNotCommute)?
    {
        return Err(OrthogonalLiftError::SquareDoesNotCommute);
    }

    let mut obj_map: BTreeMap<ObjId, ObjId> = BTreeMap::new();
    for b in b_cat.objects() {
        let comma = comma_category(f, b);
        if comma.category.object_count() == 0 {
            return Err(OrthogonalLiftError::EmptyComma(b.clone()));
        }
        let mut answer: Option<ObjId> = None;
        for (a, u) in comma.obj_data.values() {
            let start = top.apply_obj(a);
            let lift = g.dopf_lift(start, bottom.apply_mor(u))?;
            let tgt = c_cat.tgt(&lift).clone();
            match &answer {
                None => answer = Some(tgt),
                Some(prev) if prev != &tgt => {
                    return Err(OrthogonalLiftError::Inconsistent(b.clone()))
                }
                _ => {}
            }
        }
        obj_map.insert(b.clone(), answer.expect("nonempty comma"));
    }

    let mut mor_map: BTreeMap<MorId, MorId> = BTreeMap::new();
    for v in b_cat.non_identity_morphisms() {
        let lb = &obj_map[b_cat.src(v)];
        let lift = g.dopf_lift(lb, bottom.apply_mor(v))?;
        if c_cat.tgt(&lift) != &obj_map[b_cat.tgt(v)] {
            return Err(OrthogonalLiftError::Inconsistent(b_cat.tgt(v).clone()));
        }
        mor_map.insert(v.clone(), lift);
    }

    let ell = FinFunctor::from_parts(b_cat, c_cat, obj_map, mor_map)
        .map_err(|_| OrthogonalLiftError::SquareDoesNotCommute)?;
    Ok(ell)
}

/// Factorisation of a functor as an initial functor followed by a discrete
/// opfibration.  The middle category has objects `(b|i)` where `i` indexes
/// a connected component of `f/b`, and morphisms `(v|i)` pushing component
/// `i` forward along `v`.
#[derive(Debug)]
pub struct ComprehensiveFactorization {
    pub initial_part: FinFunctor,
    pub middle: Arc<FinCategory>,
    pub dopf_part: FinFunctor,
}

pub fn comprehensive_factorize(f: &FinFunctor) -> ComprehensiveFactorization {
    let a_cat = f.dom().clone();
    let b_cat = f.cod().clone();

    // Component index of each comma object of f/b, for every b.
    let mut component_of: BTreeMap<ObjId, BTreeMap<(ObjId, MorId), usize>> = BTreeMap::new();
    let mut component_count: BTreeMap<ObjId, usize> = BTreeMap::new();
    for b in b_cat.objects() {
        let comma = comma_category(f, b);
        let comps = comma.category.connected_components();
        let mut table = BTreeMap::new();
        for (i, comp) in comps.iter().enumerate() {
            for o in comp {
                table.insert(comma.obj_data[o].clone(), i);
            }
        }
        component_count.insert(b.clone(), comps.len());
        component_of.insert(b.clone(), table);
    }

    let obj_name = |b: &ObjId, i: usize| ObjId::new(format!("({b}|{i})"));
    let mut builder = FinCategory::builder();
    let mut dopf_obj = BTreeMap::new();
    for b in b_cat.objects() {
        for i in 0..component_count[b] {
            let name = obj_name(b, i);
            builder.object(name.clone());
            dopf_obj.insert(name, b.clone());
        }
    }

    // v: b → b' sends a component of f/b into a component of f/b' by
    // postcomposition; empty commas contribute no objects and no morphisms.
    let push = |v: &MorId, i: usize| -> Option<usize> {
        let b = b_cat.src(v);
        let b2 = b_cat.tgt(v);
        let table = &component_of[b];
        let (a, u) = table.iter().find(|(_, j)| **j == i).map(|(k, _)| k)?.clone();
        let u2 = b_cat.comp(v, &u).clone();
        Some(component_of[b2][&(a, u2)])
    };

    let mut dopf_mor = BTreeMap::new();
    let mut entries: Vec<(MorId, MorId, usize, usize)> = Vec::new();
    for v in b_cat.non_identity_morphisms() {
        let b = b_cat.src(v);
        for i in 0..component_count[b] {
            let j = push(v, i).expect("component pushforward");
            let name = MorId::new(format!("({v}|{i})"));
            builder.morphism(name.clone(), obj_name(b, i), obj_name(b_cat.tgt(v), j));
            dopf_mor.insert(name.clone(), v.clone());
            entries.push((name, v.clone(), i, j));
        }
    }
    for (n1, v1, i1, j1) in &entries {
        for (n2, v2, i2, _) in &entries {
            if b_cat.tgt(v1) != b_cat.src(v2) || j1 != i2 {
                continue;
            }
            let v = b_cat.comp(v2, v1).clone();
            let result = if b_cat.is_identity(&v) {
                MorId::identity_of(&obj_name(b_cat.src(v1), *i1))
            } else {
                MorId::new(format!("({v}|{i1})"))
            };
            builder.composite(n2.clone(), n1.clone(), result);
        }
    }

    let middle = Arc::new(builder.build().expect("comprehensive middle"));
    let dopf_part = FinFunctor::from_parts(middle.clone(), b_cat.clone(), dopf_obj, dopf_mor)
        .expect("comprehensive dopf part");

    let mut init_obj = BTreeMap::new();
    for a in a_cat.objects() {
        let fa = f.apply_obj(a).clone();
        let i = component_of[&fa][&(a.clone(), b_cat.identity(&fa).clone())];
        init_obj.insert(a.clone(), obj_name(&fa, i));
    }
    let mut init_mor = BTreeMap::new();
    for w in a_cat.non_identity_morphisms() {
        let a = a_cat.src(w);
        let fa = f.apply_obj(a).clone();
        let i = component_of[&fa][&(a.clone(), b_cat.identity(&fa).clone())];
        let fw = f.apply_mor(w);
        if b_cat.is_identity(fw) {
            let image = middle.identity(&obj_name(&fa, i)).clone();
            init_mor.insert(w.clone(), image);
        } else {
            init_mor.insert(w.clone(), MorId::new(format!("({fw}|{i})")));
        }
    }
    let initial_part = FinFunctor::from_parts(a_cat, middle.clone(), init_obj, init_mor)
        .expect("comprehensive initial part");

    ComprehensiveFactorization {
        initial_part,
        middle,
        dopf_part,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::catalog;
    use crate::fincat::enumerate::{enumerate_functors, SizeGuard};

    #[test]
    fn comma_of_face_maps() {
        let d1 = catalog::delta(1, 1);
        for b in ["0", "1"] {
            let comma = comma_category(&d1, &b.into());
            assert_eq!(comma.category.object_count(), 1, "δ1/{b}");
            assert!(comma.category.validate().is_ok());
        }
    }

    #[test]
    fn comma_of_identity_on_two() {
        let id = FinFunctor::identity(catalog::two());
        let comma = comma_category(&id, &"1".into());
        assert_eq!(comma.category.object_count(), 2);
        assert_eq!(
            comma.category.morphism_count() - comma.category.object_count(),
            1,
            "one connecting morphism"
        );
        assert!(comma.category.validate().is_ok());
        assert!(comma.proj.validate().is_ok());
    }

    #[test]
    fn comma_of_bang_from_two() {
        let bang = catalog::bang(&catalog::two());
        let comma = comma_category(&bang, &"0".into());
        assert_eq!(comma.category.object_count(), 2);
        assert_eq!(comma.category.morphism_count(), 3);
    }

    #[test]
    fn pullback_of_identities_is_the_category() {
        let three = catalog::three();
        let id = FinFunctor::identity(three.clone());
        let pb = pullback(&id, &id).unwrap();
        assert!(pb.category.validate().is_ok());
        assert_eq!(pb.category.object_count(), 3);
        assert_eq!(pb.category.morphism_count(), 6);
        assert!(crate::fincat::oracle::find_isomorphism(&pb.category, &three).is_some());
    }

    #[test]
    fn pullback_of_disjoint_points_is_empty() {
        let d0 = catalog::delta(0, 1);
        let d1 = catalog::delta(1, 1);
        let pb = pullback(&d0, &d1).unwrap();
        assert_eq!(pb.category.object_count(), 0);
    }

    #[test]
    fn pushout_of_identity_recovers_the_category() {
        let (disc, iota) = discrete_of(&catalog::two());
        let f = FinFunctor::identity(disc.clone());
        let po = pushout_along_discrete(&f, &iota).unwrap();
        assert!(po.category.validate().is_ok());
        assert!(crate::fincat::oracle::find_isomorphism(&po.category, &catalog::two()).is_some());
        assert!(po.f_prime.validate().is_ok());
        assert!(po.pi.validate().is_ok());
    }

    #[test]
    fn pushout_reconstructs_bex() {
        // X = the idempotent-splitting pair L ⇄ M together with a detached
        // point R; pushing the inclusion of {L, R} out along ι into 2 glues
        // a formal arrow across and lands in the Bex category.
        let x = Arc::new(
            FinCategory::builder()
                .object("L")
                .object("M")
                .object("R")
                .morphism("s", "L", "M")
                .morphism("r", "M", "L")
                .morphism("sr", "M", "M")
                .composite("r", "s", "1_L")
                .composite("s", "r", "sr")
                .composite("sr", "sr", "sr")
                .composite("r", "sr", "r")
                .composite("sr", "s", "s")
                .build()
                .unwrap(),
        );
        let a = catalog::two();
        let (disc, iota) = discrete_of(&a);
        let f = FinFunctor::from_parts(
            disc,
            x,
            [("0".into(), "L".into()), ("1".into(), "R".into())].into(),
            BTreeMap::new(),
        )
        .unwrap();
        let po = pushout_along_discrete(&f, &iota).unwrap();
        assert!(po.category.validate().is_ok());
        assert_eq!(po.category.morphism_count(), 8);
        assert!(
            crate::fincat::oracle::find_isomorphism(&po.category, &catalog::bex()).is_some()
        );
    }

    /// `X = 2 ⊔ 1` with the span picking the initial object of each summand.
    fn arrow_plus_point_span() -> (FinFunctor, FinFunctor) {
        let x = Arc::new(
            FinCategory::builder()
                .object("x0")
                .object("x1")
                .object("z")
                .morphism("m", "x0", "x1")
                .build()
                .unwrap(),
        );
        let a = catalog::two();
        let (disc, iota) = discrete_of(&a);
        let f = FinFunctor::from_parts(
            disc,
            x,
            [("0".into(), "x0".into()), ("1".into(), "z".into())].into(),
            BTreeMap::new(),
        )
        .unwrap();
        (f, iota)
    }

    #[test]
    fn pushout_of_arrow_into_arrow_plus_point() {
        let (f, iota) = arrow_plus_point_span();
        let po = pushout_along_discrete(&f, &iota).unwrap();
        assert!(po.category.validate().is_ok());
        assert_eq!(po.category.object_count(), 3);
        let non_ids: Vec<_> = po.category.non_identity_morphisms().cloned().collect();
        assert_eq!(non_ids.len(), 2);
        let sorts: Vec<_> = non_ids.iter().map(|m| &po.sorts[m]).collect();
        assert!(matches!(sorts[0], PushoutSort::S2 { .. }));
        assert!(matches!(sorts[1], PushoutSort::S1(_)));
        // The glued formal arrow runs from x0 to z.
        assert_eq!(po.category.src(&non_ids[0]).as_str(), "x0");
        assert_eq!(po.category.tgt(&non_ids[0]).as_str(), "z");
    }

    #[test]
    fn pushout_square_is_also_a_pullback() {
        // The square built by the special pushout is cartesian as well:
        // pulling back its two output legs recovers the discrete corner.
        let (f, iota) = arrow_plus_point_span();
        let po = pushout_along_discrete(&f, &iota).unwrap();
        let pb = pullback(&po.f_prime, &po.pi).unwrap();
        assert!(crate::fincat::oracle::find_isomorphism(&pb.category, iota.dom()).is_some());
    }

    #[test]
    fn pushout_universal_property_holds_for_sample_cocones() {
        // Every cocone under the span factors through the pushout by
        // exactly one mediating functor (checked by exhaustive search).
        let (f, iota) = arrow_plus_point_span();
        let po = pushout_along_discrete(&f, &iota).unwrap();
        let guard = SizeGuard::default();
        // Cocones into Z = the pushout itself: pairs (g: A → Z, h: X → Z)
        // with g∘ι = h∘f.
        let mut checked = 0usize;
        for g in enumerate_functors(iota.cod(), &po.category, &guard).unwrap() {
            for h in enumerate_functors(f.cod(), &po.category, &guard).unwrap() {
                let left = FinFunctor::compose(&g, &iota).unwrap();
                let right = FinFunctor::compose(&h, &f).unwrap();
                if left != right {
                    continue;
                }
                let mediators = crate::fincat::oracle::mediating_functors(&po, &g, &h);
                assert_eq!(mediators.len(), 1, "cocone must factor uniquely");
                checked += 1;
            }
        }
        assert!(checked > 0, "at least one commuting cocone exists");
    }

    #[test]
    fn pushout_rejects_non_fully_faithful_legs() {
        let a = catalog::two();
        let (disc, iota) = discrete_of(&a);
        // Send both objects to the same endpoint: not fully faithful.
        let f = FinFunctor::from_parts(
            disc,
            catalog::two(),
            [("0".into(), "0".into()), ("1".into(), "0".into())].into(),
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(
            pushout_along_discrete(&f, &iota).unwrap_err(),
            PushoutError::NotFullyFaithful
        );
    }

    #[test]
    fn boo_lift_through_identity() {
        let (_disc, iota) = discrete_of(&catalog::two());
        let psi = FinFunctor::identity(catalog::two());
        let lifted = boo_lift(&iota, &psi).unwrap();
        assert_eq!(lifted, iota);
    }

    #[test]
    fn boo_lift_rejects_non_boo() {
        let (disc, _) = discrete_of(&catalog::two());
        let g = FinFunctor::from_parts(
            disc,
            catalog::two(),
            [("0".into(), "0".into()), ("1".into(), "1".into())].into(),
            BTreeMap::new(),
        )
        .unwrap();
        let psi = catalog::delta(0, 1);
        assert_eq!(
            boo_lift(&g, &psi).unwrap_err(),
            BooLiftError::NotBijectiveOnObjects
        );
    }

    #[test]
    fn orthogonal_lift_of_identity_square() {
        let two = catalog::two();
        let id = FinFunctor::identity(two.clone());
        let d1 = catalog::delta(1, 1);
        // δ1 is initial, the identity is a discrete opfibration.
        let ell = orthogonal_lift(&d1, &id, &d1, &id).unwrap();
        assert_eq!(ell, id);
    }

    #[test]
    fn orthogonal_lift_unique_against_dopf() {
        // Lift δ1: 1 → 2 against the dopf δ0': 2 → 3 (skipping 0).
        let d1 = catalog::delta(1, 1);
        let g = catalog::delta(0, 2);
        assert!(g.classify().discrete_opfibration);
        let top = FinFunctor::from_parts(
            catalog::one(),
            catalog::two(),
            [("0".into(), "0".into())].into(),
            BTreeMap::new(),
        )
        .unwrap();
        let bottom = catalog::delta(0, 2);
        let ell = orthogonal_lift(&d1, &g, &top, &bottom).unwrap();
        assert!(ell.validate().is_ok());
        assert_eq!(FinFunctor::compose(&ell, &d1).unwrap(), top);
        assert_eq!(FinFunctor::compose(&g, &ell).unwrap(), bottom);
        // Brute-force cross-check: it is the only filler.
        let fillers = crate::fincat::oracle::square_fillers(&d1, &g, &top, &bottom);
        assert_eq!(fillers, vec![ell]);
    }

    #[test]
    fn orthogonal_lift_reports_double_fillers() {
        // G = ! : 2 → 1 has two lifts of the identity at 0, so lifting the
        // initial functor id_1 against it is ambiguous.
        let bang = catalog::bang(&catalog::two());
        let id1 = FinFunctor::identity(catalog::one());
        let pick0 = FinFunctor::from_parts(
            catalog::one(),
            catalog::two(),
            [("0".into(), "0".into())].into(),
            BTreeMap::new(),
        )
        .unwrap();
        let err = orthogonal_lift(&id1, &bang, &pick0, &id1).unwrap_err();
        assert!(matches!(err, OrthogonalLiftError::NonUnique { .. }));
    }

    #[test]
    fn comprehensive_factorization_of_bang() {
        let bang = catalog::bang(&catalog::two());
        let cf = comprehensive_factorize(&bang);
        assert!(cf.middle.validate().is_ok());
        // 2 is connected over the point, so the middle is the terminal
        // category and the initial part is ! itself.
        assert_eq!(cf.middle.object_count(), 1);
        assert!(cf.initial_part.classify().initial);
        assert!(cf.dopf_part.classify().discrete_opfibration);
        assert_eq!(
            FinFunctor::compose(&cf.dopf_part, &cf.initial_part).unwrap(),
            bang
        );
    }

    #[test]
    fn comprehensive_factorization_of_point_inclusion() {
        let d0 = catalog::delta(0, 1);
        let cf = comprehensive_factorize(&d0);
        // δ0 is already a discrete opfibration: the middle is a point and
        // the dopf part is δ0 again up to the canonical renaming.
        assert_eq!(cf.middle.object_count(), 1);
        assert!(cf.initial_part.classify().isomorphism);
        assert!(cf.dopf_part.classify().discrete_opfibration);
        assert_eq!(
            FinFunctor::compose(&cf.dopf_part, &cf.initial_part).unwrap(),
            d0
        );
    }

    #[test]
    fn comprehensive_factorization_of_identity() {
        let id = FinFunctor::identity(catalog::three());
        let cf = comprehensive_factorize(&id);
        assert!(cf.initial_part.classify().isomorphism);
        assert!(cf.dopf_part.classify().isomorphism);
        assert_eq!(
            FinFunctor::compose(&cf.dopf_part, &cf.initial_part).unwrap(),
            id
        );
    }
}
