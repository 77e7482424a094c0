//! Type identities checked against counts taken directly from matrix
//! reductions, over every context mod 6 and many mod 10 and 15.

use std::collections::{BTreeSet, HashSet};
use std::sync::{Arc, OnceLock};

use entangle_core::entangle::{entangling_subgroups, groupcomp_verify, EntContext};
use entangle_core::group::{
    enumerate_subgroups, normal_subgroups, subgroup_classes, Caps, Elem, Enumeration, FiniteGroup, Subgroup,
};
use entangle_core::Mat2;
use proptest::prelude::*;

fn caps() -> Caps {
    Caps::default()
}

struct Case {
    ctx: EntContext,
    subgroups: Vec<Subgroup>,
}

/// Each conjugacy class of subgroups of `GL2(Z/pq)` of order at most 300,
/// as a context in its own right, with all of its subgroups.
fn contexts_for(p: u32, q: u32) -> Vec<Case> {
    let big = Arc::new(FiniteGroup::gl2(p * q, &caps()).unwrap());
    let (classes, _) = subgroup_classes(&big, &caps(), None).unwrap();
    classes
        .iter()
        .filter(|c| c.representative.order() <= 300)
        .map(|c| {
            let mats: Vec<Mat2> = c.representative.members().iter().map(|&x| big.matrix(x).unwrap()).collect();
            let ctx = EntContext::from_generators(&mats, p, q, &caps()).unwrap();
            let subgroups = enumerate_subgroups(&ctx.group, Enumeration::All, &caps()).unwrap();
            Case { ctx, subgroups }
        })
        .collect()
}

fn cases() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(|| {
        let mut all = contexts_for(2, 3);
        all.extend(contexts_for(2, 5).into_iter().filter(|c| c.ctx.group.order() <= 120));
        all
    })
}

fn reduce_count(g: &FiniteGroup, members: &[Elem], r: u32) -> (usize, usize) {
    let images: HashSet<Mat2> = members.iter().map(|&x| g.matrix(x).unwrap().reduce_to(r).unwrap()).collect();
    let kernel = members
        .iter()
        .filter(|&&x| g.matrix(x).unwrap().reduce_to(r).unwrap().is_identity())
        .count();
    (images.len(), kernel)
}

/// `(|type(H)|, [G : H N_p], [G : H N_q])` from reductions alone. `N_p`
/// and `N_q` are normal and meet trivially, so they commute and
/// `|<H ∩ N_p, H ∩ N_q>| = |H ∩ N_p| |H ∩ N_q|`; `[G : H N_p]` is the index
/// of the mod-`p` image of `H` in that of `G`.
fn oracle(ctx: &EntContext, members: &[Elem]) -> (usize, usize, usize) {
    let g = &ctx.group;
    let all: Vec<Elem> = g.elements().collect();
    let (img_p, ker_p) = reduce_count(g, members, ctx.p);
    let (img_q, ker_q) = reduce_count(g, members, ctx.q);
    let (gp, _) = reduce_count(g, &all, ctx.p);
    let (gq, _) = reduce_count(g, &all, ctx.q);
    (members.len() / (ker_p * ker_q), gp / img_p, gq / img_q)
}

#[test]
fn divisibility_and_degree_identity_exhaustive() {
    let mut checked = 0;
    for case in cases() {
        let ctx = &case.ctx;
        let (type_g, _, _) = oracle(ctx, &ctx.group.elements().collect::<Vec<_>>());
        assert_eq!(type_g, ctx.type_order());
        let d = ctx.d_value() as usize;
        for h in &case.subgroups {
            let (t, ip, iq) = oracle(ctx, h.members());
            assert_eq!(t, ctx.base_change_order(h));
            assert_eq!(ctx.base_change_type(h).unwrap().order() as usize, t);
            assert_eq!(d % t, 0, "type order divides d");
            assert_eq!(t * ip * iq, type_g * h.index(), "degree identity");
            assert!(ctx.divisibility_check(h) && ctx.lk_identity_check(h));
            checked += 1;
        }
    }
    assert!(checked > 10_000, "only {checked} subgroups checked");
}

fn member_set(s: &Subgroup) -> BTreeSet<Elem> {
    s.members().iter().copied().collect()
}

/// `M ∩ G1 = M ∩ G2 ⊊ M` on member sets.
fn entangling_oracle(m: &BTreeSet<Elem>, g1: &BTreeSet<Elem>, g2: &BTreeSet<Elem>) -> bool {
    let a: BTreeSet<Elem> = m.intersection(g1).copied().collect();
    let b: BTreeSet<Elem> = m.intersection(g2).copied().collect();
    a == b && a.len() < m.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1500))]

    #[test]
    fn type_is_conjugation_invariant(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), x in any::<prop::sample::Index>()) {
        let case = &cases()[i.index(cases().len())];
        let h = &case.subgroups[j.index(case.subgroups.len())];
        let x = x.index(case.ctx.group.order()) as Elem;
        let conj = h.conjugate(x);
        prop_assert_eq!(case.ctx.base_change_type(h).unwrap(), case.ctx.base_change_type(&conj).unwrap());
        prop_assert_eq!(oracle(&case.ctx, h.members()), oracle(&case.ctx, conj.members()));
    }
}

/// Normal `G1`, `G2` and entangling `H` give an entangling `<H, G1 ∩ G2>`;
/// 1000 random instances with `H` actually entangling.
#[test]
fn groupcomp_over_normal_pairs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let small: Vec<(&Case, Vec<Subgroup>)> = cases()
        .iter()
        .filter(|c| c.ctx.group.order() <= 96)
        .map(|c| (c, normal_subgroups(&Subgroup::whole(&c.ctx.group))))
        .collect();
    let (mut genuine, mut nontrivial_meet) = (0, 0);
    while genuine < 1000 {
        let (case, normals) = &small[rng.random_range(0..small.len())];
        let f = &case.ctx.group;
        let g1 = &normals[rng.random_range(0..normals.len())];
        let g2 = &normals[rng.random_range(0..normals.len())];
        let (s1, s2) = (member_set(g1), member_set(g2));
        let hs: Vec<&Subgroup> = case
            .subgroups
            .iter()
            .filter(|h| entangling_oracle(&member_set(h), &s1, &s2))
            .collect();
        let listed = entangling_subgroups(f, g1, g2, Enumeration::All, &caps()).unwrap();
        assert_eq!(listed.len(), hs.len());
        if hs.is_empty() {
            continue;
        }
        let h = hs[rng.random_range(0..hs.len())];
        let meet = g1.intersection(g2);
        if !meet.is_trivial() {
            nontrivial_meet += 1;
        }
        let m = member_set(&h.join(&meet));
        assert!(entangling_oracle(&m, &s1, &s2));
        assert!(groupcomp_verify(f, g1, g2, h).unwrap());
        genuine += 1;
    }
    assert!(nontrivial_meet > 100, "only {nontrivial_meet} instances with G1 ∩ G2 nontrivial");
}
