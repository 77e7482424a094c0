use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{enumerate_subgroups, quotient_group, Caps, Elem, Enumeration, FiniteGroup, Subgroup};
use crate::group_id::{identify, IsoClass};

/// A subgroup `H` with `H ∩ G1 = H ∩ G2` properly contained in `H`.
#[derive(Clone, Debug)]
pub struct Entangling {
    pub subgroup: Subgroup,
    /// `|H ∩ G1|` (= `|H ∩ G2|`).
    pub meet_order: usize,
    /// Class of `H / (H ∩ G1)`, when `H ∩ G1` is normal in `H`.
    pub class: Option<IsoClass>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntanglingRecord {
    pub order: usize,
    pub meet_order: usize,
    pub class: Option<IsoClass>,
    pub members: Vec<Elem>,
}

impl From<&Entangling> for EntanglingRecord {
    fn from(e: &Entangling) -> Self {
        EntanglingRecord {
            order: e.subgroup.order(),
            meet_order: e.meet_order,
            class: e.class.clone(),
            members: e.subgroup.members().to_vec(),
        }
    }
}

fn check_parent(f: &Arc<FiniteGroup>, s: &Subgroup, name: &str) -> Result<()> {
    if Arc::ptr_eq(s.parent(), f) {
        Ok(())
    } else {
        Err(Error::NotSubgroup(format!("{name} does not belong to F")))
    }
}

/// Every subgroup `H` of `F` with `H ∩ G1 = H ∩ G2 ⊊ H`, or one per
/// conjugacy class. Conjugacy mode needs `G1` and `G2` normal in `F`, the
/// condition then being conjugation invariant.
pub fn entangling_subgroups(
    f: &Arc<FiniteGroup>,
    g1: &Subgroup,
    g2: &Subgroup,
    mode: Enumeration,
    caps: &Caps,
) -> Result<Vec<Entangling>> {
    check_parent(f, g1, "G1")?;
    check_parent(f, g2, "G2")?;
    if mode == Enumeration::UpToConjugacy && !(g1.is_normal() && g2.is_normal()) {
        return Err(Error::Precondition(
            "conjugacy-reduced search needs G1 and G2 normal in F".into(),
        ));
    }
    let mut out = Vec::new();
    for h in enumerate_subgroups(f, mode, caps)? {
        let m1 = h.intersection(g1);
        if m1.order() == h.order() || m1 != h.intersection(g2) {
            continue;
        }
        let class = m1
            .is_normal_in(&h)
            .then(|| identify(&Arc::new(quotient_group(&h, &m1).expect("normal"))));
        out.push(Entangling {
            meet_order: m1.order(),
            subgroup: h,
            class,
        });
    }
    Ok(out)
}

/// Whether `M = <H, G1 ∩ G2>` satisfies `M ∩ G1 = M ∩ G2 ⊊ M`, given that
/// `H` is entangling and `H` or `G1 ∩ G2` is normal in `F`.
pub fn groupcomp_verify(f: &Arc<FiniteGroup>, g1: &Subgroup, g2: &Subgroup, h: &Subgroup) -> Result<bool> {
    check_parent(f, g1, "G1")?;
    check_parent(f, g2, "G2")?;
    check_parent(f, h, "H")?;
    let m1 = h.intersection(g1);
    if m1.order() == h.order() || m1 != h.intersection(g2) {
        return Err(Error::Precondition("H is not entangling: need H ∩ G1 = H ∩ G2 ⊊ H".into()));
    }
    let meet = g1.intersection(g2);
    if !(h.is_normal() || meet.is_normal()) {
        return Err(Error::Precondition("neither H nor G1 ∩ G2 is normal in F".into()));
    }
    let m = h.join(&meet);
    let a = m.intersection(g1);
    Ok(a == m.intersection(g2) && a.order() < m.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::direct_product;

    #[test]
    fn klein_four_diagonal() {
        let caps = Caps::default();
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let p = direct_product(&z2, &z2, &caps).unwrap();
        let found = entangling_subgroups(&p.group, &p.left, &p.right, Enumeration::All, &caps).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].subgroup.order(), 2);
        assert_eq!(found[0].class, Some(IsoClass::cyclic(2)));
        assert!(groupcomp_verify(&p.group, &p.left, &p.right, &found[0].subgroup).unwrap());
        assert!(groupcomp_verify(&p.group, &p.left, &p.right, &p.left).is_err());
    }

    #[test]
    fn coprime_degrees_are_not_entangleable() {
        let caps = Caps::default();
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let z3 = Arc::new(FiniteGroup::cyclic(3));
        let p = direct_product(&z2, &z3, &caps).unwrap();
        // G1 = 1 x Z/3 has index 2, G2 = Z/2 x 1 has index 3
        let found = entangling_subgroups(&p.group, &p.right, &p.left, Enumeration::All, &caps).unwrap();
        assert!(found.is_empty());
    }
}
