use std::collections::BTreeSet;
use std::sync::Arc;

use entangle_core::group::{
    enumerate_subgroups, enumerate_subgroups_with_order, subgroup_classes, Caps, Elem, Enumeration, FiniteGroup,
};
use entangle_core::Mat2;
use proptest::prelude::*;

/// Counts subsets closed under multiplication, which for a finite group
/// are exactly the subgroups. Every subset containing the identity is tried.
fn exhaustive_subgroup_count(g: &FiniteGroup) -> u64 {
    let n = g.order();
    assert!(n <= 24);
    let table: Vec<Vec<u32>> = (0..n as Elem).map(|a| (0..n as Elem).map(|b| g.mul(a, b)).collect()).collect();
    let e = g.identity();
    let others: Vec<u32> = (0..n as u32).filter(|&i| i != e).collect();
    let mut count = 0;
    for bits in 0u32..(1u32 << others.len()) {
        let mut mask = 1u32 << e;
        let mut rest = bits;
        while rest != 0 {
            let k = rest.trailing_zeros();
            mask |= 1 << others[k as usize];
            rest &= rest - 1;
        }
        let mut closed = true;
        let mut xs = mask;
        'outer: while xs != 0 {
            let a = xs.trailing_zeros() as usize;
            xs &= xs - 1;
            let mut ys = mask;
            while ys != 0 {
                let b = ys.trailing_zeros() as usize;
                ys &= ys - 1;
                if mask >> table[a][b] & 1 == 0 {
                    closed = false;
                    break 'outer;
                }
            }
        }
        if closed {
            count += 1;
        }
    }
    count
}

fn caps() -> Caps {
    Caps::default()
}

fn s3() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::gl2(2, &caps()).unwrap())
}

fn q8() -> Arc<FiniteGroup> {
    let i = Mat2::new(0, 1, -1, 0, 3).unwrap();
    let j = Mat2::new(1, 1, 1, -1, 3).unwrap();
    Arc::new(FiniteGroup::generate(&[i, j], 3, &caps()).unwrap())
}

fn d4() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::from_permutations(&[vec![1, 2, 3, 0], vec![0, 3, 2, 1]], 4, &caps()).unwrap())
}

fn s4() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::from_permutations(&[vec![1, 0, 2, 3], vec![1, 2, 3, 0]], 4, &caps()).unwrap())
}

fn z12() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(12))
}

fn all_count(g: &Arc<FiniteGroup>) -> u64 {
    enumerate_subgroups(g, Enumeration::All, &caps()).unwrap().len() as u64
}

#[test]
fn counts_match_exhaustive_oracle() {
    for (name, g, order, expected) in [("S3", s3(), 6, 6), ("Z/12", z12(), 12, 6), ("Q8", q8(), 8, 6), ("D4", d4(), 8, 10)] {
        assert_eq!(g.order(), order, "{name}");
        let oracle = exhaustive_subgroup_count(&g);
        assert_eq!(oracle, expected, "{name} oracle");
        assert_eq!(all_count(&g), oracle, "{name}");
    }
}

#[test]
fn s4_count_matches_exhaustive_oracle() {
    let g = s4();
    assert_eq!(g.order(), 24);
    let oracle = exhaustive_subgroup_count(&g);
    assert_eq!(oracle, 30);
    assert_eq!(all_count(&g), 30);
    // 11 classes: 1, two of Z/2, Z/3, Z/4, two of V4, S3, D4, A4, S4
    assert_eq!(enumerate_subgroups(&g, Enumeration::UpToConjugacy, &caps()).unwrap().len(), 11);
}

#[test]
fn classes_partition_the_full_list() {
    for g in [s3(), q8(), d4(), s4(), Arc::new(FiniteGroup::gl2(3, &caps()).unwrap())] {
        let all: BTreeSet<Vec<Elem>> = enumerate_subgroups(&g, Enumeration::All, &caps())
            .unwrap()
            .iter()
            .map(|h| h.members().to_vec())
            .collect();
        let (classes, _) = subgroup_classes(&g, &caps(), None).unwrap();
        let mut union = BTreeSet::new();
        let mut total = 0;
        for c in &classes {
            let conj = c.conjugates();
            assert_eq!(conj.len(), c.size);
            assert_eq!(conj[0].members(), c.representative.members(), "representative is lexicographically least");
            total += conj.len();
            for h in conj {
                union.insert(h.members().to_vec());
            }
        }
        assert_eq!(total, all.len(), "classes are disjoint");
        assert_eq!(union, all);
    }
}

#[test]
fn gl2_3_lattice() {
    let g = Arc::new(FiniteGroup::gl2(3, &caps()).unwrap());
    assert_eq!(enumerate_subgroups(&g, Enumeration::UpToConjugacy, &caps()).unwrap().len(), 16);
    assert_eq!(all_count(&g), 55);
}

#[test]
fn caps_are_enforced() {
    let g = Arc::new(FiniteGroup::gl2(7, &caps()).unwrap());
    let tight = Caps { enumerate_classes: 100, ..caps() };
    assert!(enumerate_subgroups(&g, Enumeration::UpToConjugacy, &tight).is_err());
    assert!(enumerate_subgroups(&g, Enumeration::All, &caps()).is_ok() == (g.order() <= caps().enumerate_all));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn candidate_order_is_irrelevant(seed in any::<u64>(), which in 0usize..3) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let g = [s4(), d4(), Arc::new(FiniteGroup::gl2(3, &caps()).unwrap())][which].clone();
        let mut order: Vec<Elem> = g.elements().collect();
        order.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
        for mode in [Enumeration::All, Enumeration::UpToConjugacy] {
            let base = enumerate_subgroups(&g, mode, &caps()).unwrap();
            let shuffled = enumerate_subgroups_with_order(&g, mode, &caps(), &order).unwrap();
            prop_assert_eq!(base, shuffled);
        }
    }
}
