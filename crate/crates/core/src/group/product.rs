use std::sync::Arc;

use super::iso::{is_isomorphism, isomorphisms};
use super::quotient::coset_label;
use super::{quotient_group, Caps, Carrier, Elem, FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// `A x B` with its two factor embeddings.
#[derive(Clone, Debug)]
pub struct DirectProduct {
    pub group: Arc<FiniteGroup>,
    /// `A x 1`.
    pub left: Subgroup,
    /// `1 x B`.
    pub right: Subgroup,
}

/// Element index of `(x, y)` in the product built by [`direct_product`].
pub fn pair_index(b_order: usize, x: Elem, y: Elem) -> Elem {
    x * b_order as Elem + y
}

pub fn direct_product(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>, caps: &Caps) -> Result<DirectProduct> {
    let order = a.order() * b.order();
    if order > caps.order {
        return Err(Error::cap("direct product", order, caps.order));
    }
    let elements: Vec<(Elem, Elem)> = a.elements().flat_map(|x| b.elements().map(move |y| (x, y))).collect();
    let group = Arc::new(FiniteGroup::from_carrier(Carrier::Pairs {
        left: a.clone(),
        right: b.clone(),
        elements,
    }));
    let nb = b.order();
    let left_gens: Vec<Elem> = a.generators().iter().map(|&x| pair_index(nb, x, b.identity())).collect();
    let right_gens: Vec<Elem> = b.generators().iter().map(|&y| pair_index(nb, a.identity(), y)).collect();
    let left = Subgroup::generated(&group, &left_gens);
    let right = Subgroup::generated(&group, &right_gens);
    Ok(DirectProduct { group, left, right })
}

/// `{(x, y) in A x B : phi(x N_A) = y N_B}` for an isomorphism
/// `phi: A/N_A -> B/N_B` given on coset labels.
pub fn fiber_product(
    a: &Arc<FiniteGroup>,
    n_a: &Subgroup,
    b: &Arc<FiniteGroup>,
    n_b: &Subgroup,
    phi: &[Elem],
) -> Result<FiniteGroup> {
    if !Arc::ptr_eq(n_a.parent(), a) || !Arc::ptr_eq(n_b.parent(), b) {
        return Err(Error::NotSubgroup("kernel does not belong to its factor".into()));
    }
    let qa = quotient_group(&Subgroup::whole(a), n_a)?;
    let qb = quotient_group(&Subgroup::whole(b), n_b)?;
    if !is_isomorphism(&qa, &qb, phi) {
        return Err(Error::NotIsomorphism(format!(
            "coset map of length {} is not an isomorphism between quotients of orders {} and {}",
            phi.len(),
            qa.order(),
            qb.order()
        )));
    }
    let mut by_label: Vec<Vec<Elem>> = vec![Vec::new(); qb.order()];
    for y in b.elements() {
        by_label[coset_label(&qb, y).expect("y in B") as usize].push(y);
    }
    let mut elements = Vec::with_capacity(a.order() * n_b.order());
    for x in a.elements() {
        let target = phi[coset_label(&qa, x).expect("x in A") as usize];
        elements.extend(by_label[target as usize].iter().map(|&y| (x, y)));
    }
    let fiber = FiniteGroup::from_carrier(Carrier::Pairs {
        left: a.clone(),
        right: b.clone(),
        elements,
    });
    assert_goursat_form(&fiber, a, n_a, b, n_b);
    Ok(fiber)
}

fn assert_goursat_form(f: &FiniteGroup, a: &FiniteGroup, n_a: &Subgroup, b: &FiniteGroup, n_b: &Subgroup) {
    let Carrier::Pairs { elements, .. } = f.carrier() else {
        unreachable!("fiber products are pair groups")
    };
    assert_eq!(f.order(), a.order() * n_b.order());
    let mut left_seen = vec![false; a.order()];
    let mut right_seen = vec![false; b.order()];
    let (mut left_kernel, mut right_kernel) = (0, 0);
    for &(x, y) in elements {
        left_seen[x as usize] = true;
        right_seen[y as usize] = true;
        if y == b.identity() {
            assert!(n_a.contains(x), "A x 1 meets the fiber outside N_A x 1");
            left_kernel += 1;
        }
        if x == a.identity() {
            assert!(n_b.contains(y), "1 x B meets the fiber outside 1 x N_B");
            right_kernel += 1;
        }
    }
    assert!(left_seen.iter().all(|&s| s) && right_seen.iter().all(|&s| s));
    assert_eq!(left_kernel, n_a.order());
    assert_eq!(right_kernel, n_b.order());
}

/// Every isomorphism between two quotient groups, as coset-label maps.
pub fn find_quotient_isomorphisms(qa: &FiniteGroup, qb: &FiniteGroup, caps: &Caps) -> Result<Vec<Vec<Elem>>> {
    let order = qa.order().max(qb.order());
    if order > caps.isomorphism {
        return Err(Error::cap("quotient isomorphism search", order, caps.isomorphism));
    }
    Ok(isomorphisms(qa, qb, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::gl2(2, &Caps::default()).unwrap())
    }

    fn index_two(g: &Arc<FiniteGroup>) -> Subgroup {
        let x = g.elements().find(|&a| g.element_order(a) == 3).unwrap();
        Subgroup::generated(g, &[x])
    }

    #[test]
    fn product_orders() {
        let caps = Caps::default();
        let a = s3();
        let b = Arc::new(FiniteGroup::gl2(3, &caps).unwrap());
        let p = direct_product(&a, &b, &caps).unwrap();
        assert_eq!(p.group.order(), 288);
        assert!(p.left.intersection(&p.right).is_trivial());
        assert_eq!(p.left.join(&p.right).order(), 288);
        let t = Arc::new(FiniteGroup::cyclic(1));
        assert_eq!(direct_product(&a, &t, &caps).unwrap().group.order(), 6);
    }

    #[test]
    fn fiber_examples() {
        let caps = Caps::default();
        let a = s3();
        let b = s3();
        // trivial common quotient
        let wa = Subgroup::whole(&a);
        let wb = Subgroup::whole(&b);
        let qa = quotient_group(&wa, &wa).unwrap();
        let qb = quotient_group(&wb, &wb).unwrap();
        let isos = find_quotient_isomorphisms(&qa, &qb, &caps).unwrap();
        assert_eq!(isos.len(), 1);
        assert_eq!(fiber_product(&a, &wa, &b, &wb, &isos[0]).unwrap().order(), 36);
        // common quotient Z/2
        let (na, nb) = (index_two(&a), index_two(&b));
        let qa = quotient_group(&wa, &na).unwrap();
        let qb = quotient_group(&wb, &nb).unwrap();
        let isos = find_quotient_isomorphisms(&qa, &qb, &caps).unwrap();
        assert_eq!(isos.len(), 1);
        assert_eq!(fiber_product(&a, &na, &b, &nb, &isos[0]).unwrap().order(), 18);
        // a non-bijective map is refused
        let bad = vec![isos[0][0]; 2];
        assert!(matches!(
            fiber_product(&a, &na, &b, &nb, &bad),
            Err(Error::NotIsomorphism(_))
        ));
    }

    #[test]
    fn diagonal_of_z2() {
        let caps = Caps::default();
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let triv = Subgroup::trivial(&z2);
        let w = Subgroup::whole(&z2);
        let q = quotient_group(&w, &triv).unwrap();
        let isos = find_quotient_isomorphisms(&q, &q, &caps).unwrap();
        assert_eq!(isos.len(), 1);
        let d = fiber_product(&z2, &triv, &z2, &triv, &isos[0]).unwrap();
        assert_eq!(d.order(), 2);
    }
}
