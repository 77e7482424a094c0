use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::{section_type, EntContext};
use crate::error::{Error, Result};
use crate::group::iso::find_isomorphism;
use crate::group::{
    fiber_product, normal_subgroups, quotient_group, subgroup_classes, Carrier, Caps, Elem, FiniteGroup,
    LatticeStore, Subgroup,
};
use crate::group_id::IsoClass;
use crate::matmod::{gcd, gl2_order, Mat2};

/// `{1, Z/2, Z/3, S3}`, the (2,q) bound.
pub fn two_q_bound() -> Vec<IsoClass> {
    vec![
        IsoClass::trivial(),
        IsoClass::cyclic(2),
        IsoClass::cyclic(3),
        IsoClass::Named("S3".into()),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Direct,
    Goursat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContextSummary {
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub order: usize,
    pub image_p_order: usize,
    pub image_q_order: usize,
    pub d: u64,
    pub entanglement_type: IsoClass,
}

impl ContextSummary {
    pub fn of(ctx: &EntContext) -> Self {
        ContextSummary {
            p: Some(ctx.p),
            q: Some(ctx.q),
            order: ctx.group.order(),
            image_p_order: ctx.image_p.order(),
            image_q_order: ctx.image_q.order(),
            d: ctx.d_value(),
            entanglement_type: ctx.entanglement_type(),
        }
    }
}

/// A subquotient `P / K` of one factor, as element indices of that factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub subgroup: Vec<Elem>,
    pub kernel: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A subgroup of the context group.
    Subgroup {
        order: usize,
        generators: Vec<String>,
        members: Vec<Elem>,
    },
    /// A fiber product `P_A x_Q P_B` inside `A x B`, given by its sections.
    Section { order: usize, left: Section, right: Section },
}

impl Witness {
    pub fn order(&self) -> usize {
        match self {
            Witness::Subgroup { order, .. } | Witness::Section { order, .. } => *order,
        }
    }

    fn of_subgroup(h: &Subgroup) -> Self {
        let g = h.parent();
        Witness::Subgroup {
            order: h.order(),
            generators: h.generators().iter().map(|&x| g.label(x)).collect(),
            members: h.members().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntEntry {
    pub class: IsoClass,
    pub witness: Witness,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntReport {
    pub strategy: Strategy,
    pub context: ContextSummary,
    /// Sorted by class.
    pub entries: Vec<EntEntry>,
    /// Subgroup classes (direct) or sections (Goursat) examined.
    pub scanned: usize,
    #[serde(skip)]
    pub cache_hit: bool,
}

impl EntReport {
    pub fn classes(&self) -> Vec<IsoClass> {
        self.entries.iter().map(|e| e.class.clone()).collect()
    }

    pub fn contains(&self, class: &IsoClass) -> bool {
        self.entries.iter().any(|e| &e.class == class)
    }
}

/// Types of all subgroups of `g` relative to the normal subgroups `n_p`,
/// `n_q`, with smallest witnesses. Returns entries, classes scanned and
/// whether the lattice came from the store.
pub fn ent_set_kernels(
    g: &Arc<FiniteGroup>,
    n_p: &Subgroup,
    n_q: &Subgroup,
    caps: &Caps,
    store: Option<&dyn LatticeStore>,
) -> Result<(Vec<EntEntry>, usize, bool)> {
    let d = gcd(n_p.index() as u64, n_q.index() as u64);
    let (classes, cache_hit) = subgroup_classes(g, caps, store)?;
    let mut best: BTreeMap<IsoClass, Subgroup> = BTreeMap::new();
    for class in &classes {
        let h = &class.representative;
        let class_of_h = section_type(h, n_p, n_q);
        assert_eq!(d % class_of_h.order(), 0, "type order divides d");
        match best.get(&class_of_h) {
            Some(w) if w.lex_cmp(h).is_le() => {}
            _ => {
                best.insert(class_of_h, h.clone());
            }
        }
    }
    let entries = best
        .into_iter()
        .map(|(class, h)| EntEntry {
            class,
            witness: Witness::of_subgroup(&h),
        })
        .collect();
    Ok((entries, classes.len(), cache_hit))
}

/// `{type(H) : H <= G}` by a scan over subgroup classes of `G`.
pub fn ent_set_direct(ctx: &EntContext, caps: &Caps, store: Option<&dyn LatticeStore>) -> Result<EntReport> {
    let (entries, scanned, cache_hit) = ent_set_kernels(&ctx.group, &ctx.n_p, &ctx.n_q, caps, store)?;
    Ok(EntReport {
        strategy: Strategy::Direct,
        context: ContextSummary::of(ctx),
        entries,
        scanned,
        cache_hit,
    })
}

/// Every quotient type `P/K` (`K` normal in `P <= A`) of order dividing
/// `bound`, each with its smallest section. Also returns the number of
/// sections examined and whether the lattice came from the store.
pub fn section_spectrum(
    a: &Arc<FiniteGroup>,
    bound: u64,
    caps: &Caps,
    store: Option<&dyn LatticeStore>,
) -> Result<(BTreeMap<IsoClass, (Subgroup, Subgroup)>, usize, bool)> {
    let (classes, cache_hit) = subgroup_classes(a, caps, store)?;
    let mut spectrum: BTreeMap<IsoClass, (Subgroup, Subgroup)> = BTreeMap::new();
    let mut scanned = 0;
    for class in &classes {
        let p = &class.representative;
        for k in normal_subgroups(p) {
            let n = (p.order() / k.order()) as u64;
            if bound % n != 0 {
                continue;
            }
            scanned += 1;
            let class = section_type_quotient(p, &k);
            let better = match spectrum.get(&class) {
                None => true,
                Some((bp, bk)) => p.lex_cmp(bp).then_with(|| bk.lex_cmp(&k)).is_lt(),
            };
            if better {
                spectrum.insert(class, (p.clone(), k));
            }
        }
    }
    Ok((spectrum, scanned, cache_hit))
}

fn section_type_quotient(p: &Subgroup, k: &Subgroup) -> IsoClass {
    let n = (p.order() / k.order()) as u64;
    if n == 1 || crate::matmod::is_prime(n as u32) {
        return IsoClass::cyclic(n);
    }
    crate::group_id::identify(&Arc::new(quotient_group(p, k).expect("normal subgroup")))
}

/// A section as a group with its kernel: `P` relabelled, `K` inside it.
fn section_group(p: &Subgroup, k: &Subgroup) -> (Arc<FiniteGroup>, Subgroup) {
    let group = Arc::new(FiniteGroup::from_subgroup(p));
    let idx: Vec<Elem> = k
        .members()
        .iter()
        .map(|x| p.members().binary_search(x).expect("K inside P") as Elem)
        .collect();
    let kernel = Subgroup::from_members(&group, &idx).expect("K is a subgroup");
    (group, kernel)
}

/// Builds `P_A x_Q P_B` from two sections with isomorphic quotients and
/// checks that its type over the two factor kernels is `class`. Returns the
/// fiber product as pairs of elements of `A` and `B`.
pub fn materialize_section_witness(
    left: (&Subgroup, &Subgroup),
    right: (&Subgroup, &Subgroup),
    class: &IsoClass,
) -> Result<Vec<(Elem, Elem)>> {
    let (pa, ka) = section_group(left.0, left.1);
    let (pb, kb) = section_group(right.0, right.1);
    let qa = quotient_group(&Subgroup::whole(&pa), &ka)?;
    let qb = quotient_group(&Subgroup::whole(&pb), &kb)?;
    let phi = find_isomorphism(&qa, &qb)
        .ok_or_else(|| Error::NotIsomorphism("section quotients are not isomorphic".into()))?;
    let fiber = Arc::new(fiber_product(&pa, &ka, &pb, &kb, &phi)?);
    let Carrier::Pairs { elements, .. } = fiber.carrier() else {
        unreachable!("fiber products are pair groups")
    };
    let pick = |pred: &dyn Fn(&(Elem, Elem)) -> bool| -> Vec<Elem> {
        (0..elements.len() as Elem).filter(|&i| pred(&elements[i as usize])).collect()
    };
    let left_kernel = Subgroup::from_members(&fiber, &pick(&|&(_, y)| y == pb.identity()))?;
    let right_kernel = Subgroup::from_members(&fiber, &pick(&|&(x, _)| x == pa.identity()))?;
    let found = section_type(&Subgroup::whole(&fiber), &right_kernel, &left_kernel);
    if &found != class {
        return Err(Error::Precondition(format!("fiber product has type {found}, expected {class}")));
    }
    Ok(elements
        .iter()
        .map(|&(x, y)| (left.0.members()[x as usize], right.0.members()[y as usize]))
        .collect())
}

/// Ent set of the full product `A x B`: the common section types of `A`
/// and `B`, found by enumerating each factor only.
pub fn ent_set_goursat(
    a: &Arc<FiniteGroup>,
    b: &Arc<FiniteGroup>,
    caps: &Caps,
    store: Option<&dyn LatticeStore>,
) -> Result<EntReport> {
    let d = gcd(a.order() as u64, b.order() as u64);
    let (left, scanned_a, hit_a) = section_spectrum(a, d, caps, store)?;
    let (right, scanned_b, hit_b) = section_spectrum(b, d, caps, store)?;
    let mut entries = Vec::new();
    for (class, (pa, ka)) in &left {
        let Some((pb, kb)) = right.get(class) else {
            continue;
        };
        let pairs = materialize_section_witness((pa, ka), (pb, kb), class)?;
        entries.push(EntEntry {
            class: class.clone(),
            witness: Witness::Section {
                order: pairs.len(),
                left: Section {
                    subgroup: pa.members().to_vec(),
                    kernel: ka.members().to_vec(),
                },
                right: Section {
                    subgroup: pb.members().to_vec(),
                    kernel: kb.members().to_vec(),
                },
            },
        });
    }
    Ok(EntReport {
        strategy: Strategy::Goursat,
        context: ContextSummary {
            p: a.modulus(),
            q: b.modulus(),
            order: a.order() * b.order(),
            image_p_order: a.order(),
            image_q_order: b.order(),
            d,
            entanglement_type: IsoClass::trivial(),
        },
        entries,
        scanned: scanned_a + scanned_b,
        cache_hit: hit_a && hit_b,
    })
}

/// Replaces section witnesses by the corresponding subgroups of the
/// context group and re-verifies them.
fn embed_witnesses(ctx: &EntContext, report: &mut EntReport) -> Result<()> {
    let (a, b) = (&ctx.image_p, &ctx.image_q);
    for entry in &mut report.entries {
        let Witness::Section { left, right, .. } = &entry.witness else {
            continue;
        };
        let sub = |g: &Arc<FiniteGroup>, m: &[Elem]| Subgroup::from_members(g, m);
        let (pa, ka) = (sub(a, &left.subgroup)?, sub(a, &left.kernel)?);
        let (pb, kb) = (sub(b, &right.subgroup)?, sub(b, &right.kernel)?);
        let pairs = materialize_section_witness((&pa, &ka), (&pb, &kb), &entry.class)?;
        let members: Vec<Elem> = pairs
            .iter()
            .map(|&(x, y)| {
                let m = Mat2::crt_join(&a.matrix(x).expect("matrix"), &b.matrix(y).expect("matrix"))?;
                ctx.element(&m)
            })
            .collect::<Result<_>>()?;
        let h = Subgroup::from_members(&ctx.group, &members)?;
        if ctx.base_change_type(&h)? != entry.class {
            return Err(Error::Precondition(format!("embedded witness for {} has the wrong type", entry.class)));
        }
        entry.witness = Witness::of_subgroup(&h);
    }
    Ok(())
}

/// Ent set of a context: Goursat on the two images when `G` is their full
/// product, a direct scan otherwise.
pub fn ent_set(ctx: &EntContext, caps: &Caps, store: Option<&dyn LatticeStore>) -> Result<EntReport> {
    if !ctx.is_full_product() {
        return ent_set_direct(ctx, caps, store);
    }
    let mut report = ent_set_goursat(&ctx.image_p, &ctx.image_q, caps, store)?;
    report.context = ContextSummary::of(ctx);
    embed_witnesses(ctx, &mut report)?;
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub q: u32,
    pub image_2_order: usize,
    pub image_q_surjective: bool,
    pub type_trivial: bool,
    /// Whether the case table applies.
    pub hypotheses_hold: bool,
    /// The case table's Ent set when the hypotheses hold.
    pub predicted: Option<Vec<IsoClass>>,
    pub computed: Option<Vec<IsoClass>>,
    /// `computed` lies inside `{1, Z/2, Z/3, S3}`.
    pub within_bound: Option<bool>,
    pub matches_prediction: Option<bool>,
    pub z6_absent: Option<bool>,
}

/// The (2,q) case table, optionally cross-checked by computing Ent.
pub fn classify_2q(
    ctx: &EntContext,
    compute: bool,
    caps: &Caps,
    store: Option<&dyn LatticeStore>,
) -> Result<Classification> {
    if ctx.p != 2 || ctx.q == 2 {
        return Err(Error::Precondition(format!(
            "classification needs p = 2 and q odd, got p = {}, q = {}",
            ctx.p, ctx.q
        )));
    }
    let image_2_order = ctx.image_p.order();
    let image_q_surjective = ctx.image_q.order() as u64 == gl2_order(ctx.q);
    let type_trivial = ctx.is_full_product();
    let hypotheses_hold = image_q_surjective && type_trivial;
    let predicted = hypotheses_hold.then(|| {
        let bound = two_q_bound();
        match image_2_order {
            6 => bound,
            3 => vec![bound[0].clone(), bound[2].clone()],
            2 => vec![bound[0].clone(), bound[1].clone()],
            _ => vec![bound[0].clone()],
        }
    });
    let computed = if compute { Some(ent_set(ctx, caps, store)?.classes()) } else { None };
    let bound = two_q_bound();
    let within_bound = computed.as_ref().map(|c| c.iter().all(|t| bound.contains(t)));
    let matches_prediction = match (&computed, &predicted) {
        (Some(c), Some(p)) => Some(c == p),
        _ => None,
    };
    let z6_absent = computed.as_ref().map(|c| !c.contains(&IsoClass::cyclic(6)));
    Ok(Classification {
        q: ctx.q,
        image_2_order,
        image_q_surjective,
        type_trivial,
        hypotheses_hold,
        predicted,
        computed,
        within_bound,
        matches_prediction,
        z6_absent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::direct_product;

    fn gl2(n: u32) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::gl2(n, &Caps::default()).unwrap())
    }

    fn labels(r: &EntReport) -> Vec<String> {
        r.entries.iter().map(|e| e.class.to_string()).collect()
    }

    #[test]
    fn surjective_two_three() {
        let caps = Caps::default();
        let ctx = EntContext::full_product(&gl2(2), &gl2(3), &caps).unwrap();
        let direct = ent_set_direct(&ctx, &caps, None).unwrap();
        assert_eq!(labels(&direct), ["1", "Z/2", "Z/3", "S3"]);
        for e in &direct.entries {
            let Witness::Subgroup { members, .. } = &e.witness else { panic!() };
            let h = Subgroup::from_members(&ctx.group, members).unwrap();
            assert_eq!(ctx.base_change_type(&h).unwrap(), e.class);
        }
        let auto = ent_set(&ctx, &caps, None).unwrap();
        assert_eq!(auto.strategy, Strategy::Goursat);
        assert_eq!(labels(&auto), labels(&direct));
        for e in &auto.entries {
            assert!(matches!(e.witness, Witness::Subgroup { .. }));
        }
    }

    #[test]
    fn goursat_s3_s3() {
        let caps = Caps::default();
        let r = ent_set_goursat(&gl2(2), &gl2(2), &caps, None).unwrap();
        assert_eq!(labels(&r), ["1", "Z/2", "Z/3", "S3"]);
        let s3 = gl2(2);
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let p = direct_product(&s3, &z2, &caps).unwrap();
        let (entries, _, _) = ent_set_kernels(&p.group, &p.right, &p.left, &caps, None).unwrap();
        let direct: Vec<String> = entries.iter().map(|e| e.class.to_string()).collect();
        assert_eq!(direct, ["1", "Z/2"]);
        assert_eq!(labels(&ent_set_goursat(&s3, &z2, &caps, None).unwrap()), direct);
    }

    #[test]
    fn classification_cases() {
        let caps = Caps::default();
        let gl3 = gl2(3);
        let ctx = EntContext::full_product(&gl2(2), &gl3, &caps).unwrap();
        let c = classify_2q(&ctx, true, &caps, None).unwrap();
        assert!(c.hypotheses_hold);
        assert_eq!(c.matches_prediction, Some(true));
        assert_eq!(c.z6_absent, Some(true));
        let triv = FiniteGroup::generate(&[], 2, &caps).unwrap();
        let ctx = EntContext::full_product(&triv, &gl3, &caps).unwrap();
        let c = classify_2q(&ctx, true, &caps, None).unwrap();
        assert_eq!(c.predicted, Some(vec![IsoClass::trivial()]));
        assert_eq!(c.matches_prediction, Some(true));
    }
}
