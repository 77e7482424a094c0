use std::fmt;
use std::sync::Arc;

use super::{BitSet, Elem, FiniteGroup};
use crate::error::{Error, Result};

/// A subgroup of a parent group, held as a sorted set of element indices.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    mask: BitSet,
    members: Vec<Elem>,
    gens: Vec<Elem>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, {:?})", self.order(), self.members)
    }
}

impl Subgroup {
    pub(crate) fn from_parts(parent: Arc<FiniteGroup>, mask: BitSet, gens: Vec<Elem>) -> Self {
        let members = mask.to_vec();
        Subgroup {
            parent,
            mask,
            members,
            gens,
        }
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Self {
        Self::generated(parent, &[])
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Self {
        let gens = parent.generators().to_vec();
        let mask = BitSet::from_indices(parent.order(), parent.elements());
        Self::from_parts(parent.clone(), mask, gens)
    }

    /// Smallest subgroup containing `seed`.
    pub fn generated(parent: &Arc<FiniteGroup>, seed: &[Elem]) -> Self {
        let id = parent.identity();
        let mut mask = BitSet::new(parent.order());
        mask.insert(id);
        let mut elems = vec![id];
        let mut gens = Vec::new();
        for &s in seed {
            if !mask.contains(s) {
                gens.push(s);
                parent.extend_closure(&mut mask, &mut elems, &gens, s);
            }
        }
        Self::from_parts(parent.clone(), mask, gens)
    }

    /// Validates that `members` is a subgroup.
    pub fn from_members(parent: &Arc<FiniteGroup>, members: &[Elem]) -> Result<Self> {
        let n = parent.order();
        if let Some(&bad) = members.iter().find(|&&m| m as usize >= n) {
            return Err(Error::NotSubgroup(format!("index {bad} out of range for order {n}")));
        }
        let mask = BitSet::from_indices(n, members.iter().copied());
        let h = Self::generated(parent, &mask.to_vec());
        if h.mask != mask {
            return Err(Error::NotSubgroup(format!(
                "set of {} elements is not closed (closure has {})",
                mask.count(),
                h.order()
            )));
        }
        Ok(h.with_small_gens())
    }

    /// Replaces the generating set with a greedy small one.
    fn with_small_gens(self) -> Self {
        let g = &self.parent;
        let mut by_order: Vec<(u64, Elem)> =
            self.members.iter().map(|&a| (g.element_order(a), a)).collect();
        by_order.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        let mut seen = BitSet::new(g.order());
        seen.insert(g.identity());
        let mut elems = vec![g.identity()];
        let mut gens = Vec::new();
        for (_, a) in by_order {
            if elems.len() == self.members.len() {
                break;
            }
            if !seen.contains(a) {
                gens.push(a);
                g.extend_closure(&mut seen, &mut elems, &gens, a);
            }
        }
        Subgroup { gens, ..self }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn mask(&self) -> &BitSet {
        &self.mask
    }

    pub fn generators(&self) -> &[Elem] {
        &self.gens
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, a: Elem) -> bool {
        self.mask.contains(a)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.mask.is_subset(&other.mask)
    }

    /// Adds elements to the subgroup and closes.
    pub fn extended(&self, extra: &[Elem]) -> Subgroup {
        let mut mask = self.mask.clone();
        let mut elems = self.members.clone();
        let mut gens = self.gens.clone();
        for &s in extra {
            if !mask.contains(s) {
                gens.push(s);
                self.parent.extend_closure(&mut mask, &mut elems, &gens, s);
            }
        }
        Self::from_parts(self.parent.clone(), mask, gens)
    }

    /// The join `<self, other>`.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        self.extended(&other.gens)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let mask = self.mask.intersection(&other.mask);
        let members = mask.to_vec();
        Subgroup {
            parent: self.parent.clone(),
            gens: members.clone(),
            mask,
            members,
        }
        .with_small_gens()
    }

    /// `x H x^-1`.
    pub fn conjugate(&self, x: Elem) -> Subgroup {
        let g = &self.parent;
        let mask = BitSet::from_indices(g.order(), self.members.iter().map(|&h| g.conj(x, h)));
        let gens = self.gens.iter().map(|&h| g.conj(x, h)).collect();
        Self::from_parts(g.clone(), mask, gens)
    }

    /// Whether `x` normalizes this subgroup.
    pub fn is_normalized_by(&self, x: Elem) -> bool {
        self.gens
            .iter()
            .all(|&h| self.mask.contains(self.parent.conj(x, h)))
    }

    /// Whether this subgroup is normal in `over` (which must contain it).
    pub fn is_normal_in(&self, over: &Subgroup) -> bool {
        self.is_subgroup_of(over) && over.gens.iter().all(|&x| self.is_normalized_by(x))
    }

    /// Normal in the whole parent group.
    pub fn is_normal(&self) -> bool {
        self.parent.generators().iter().all(|&x| self.is_normalized_by(x))
    }

    /// `N_over(H)` for a subgroup `over` of the parent.
    pub fn normalizer_in(&self, over: &Subgroup) -> Subgroup {
        let members: Vec<Elem> = over
            .members
            .iter()
            .copied()
            .filter(|&x| self.is_normalized_by(x))
            .collect();
        let mask = BitSet::from_indices(self.parent.order(), members.iter().copied());
        Subgroup {
            parent: self.parent.clone(),
            mask,
            gens: members.clone(),
            members,
        }
        .with_small_gens()
    }

    pub fn normalizer(&self) -> Subgroup {
        self.normalizer_in(&Subgroup::whole(&self.parent))
    }

    /// Lexicographic comparison of member lists.
    pub fn lex_cmp(&self, other: &Subgroup) -> std::cmp::Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.members.cmp(&other.members))
    }
}
