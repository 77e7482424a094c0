use std::collections::HashMap;

use super::{Carrier, FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// `H / N` as a group on coset labels.
pub fn quotient_group(h: &Subgroup, n: &Subgroup) -> Result<FiniteGroup> {
    if !n.is_subgroup_of(h) {
        return Err(Error::NotSubgroup("quotient denominator is not contained in H".into()));
    }
    if !n.is_normal_in(h) {
        return Err(Error::NotNormal("quotient denominator is not normal in H".into()));
    }
    let g = h.parent();
    let mut coset_of = HashMap::with_capacity(h.order());
    let mut reps = Vec::with_capacity(h.order() / n.order());
    // members ascend, so the first unassigned member is its coset's minimum
    for &x in h.members() {
        if coset_of.contains_key(&x) {
            continue;
        }
        let label = reps.len() as u32;
        reps.push(x);
        for &m in n.members() {
            coset_of.insert(g.mul(x, m), label);
        }
    }
    let q = FiniteGroup::from_carrier(Carrier::Cosets {
        parent: g.clone(),
        reps,
        coset_of,
    });
    debug_assert_eq!(q.order() * n.order(), h.order());
    Ok(q)
}

/// Coset label of `x` in a quotient built by [`quotient_group`].
pub(crate) fn coset_label(q: &FiniteGroup, x: u32) -> Option<u32> {
    match q.carrier() {
        Carrier::Cosets { coset_of, .. } => coset_of.get(&x).copied(),
        _ => None,
    }
}
