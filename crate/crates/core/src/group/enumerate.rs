//! Subgroup enumeration by iterative generator augmentation.
//!
//! Starting from the trivial subgroup, every known subgroup `H` is extended by
//! each element `g` outside it and the closure `<H, g>` is recorded if new.
//! Every subgroup is reached this way (add its generators one at a time). Two
//! candidates `g`, `g'` are skipped as redundant when `g' = h g`, when `g'` is
//! a generator of `<g>`, or (up to conjugacy) when `g' = n g n^-1` for `n` in
//! the normalizer of `H`.

use std::collections::HashSet;
use std::sync::Arc;

use super::{BitSet, Caps, Elem, FiniteGroup, Subgroup};
use crate::error::{Error, Result};
use crate::matmod::gcd;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Enumeration {
    /// One representative per conjugacy class.
    UpToConjugacy,
    /// Every subgroup.
    All,
}

/// A conjugacy class of subgroups, held by its lexicographically smallest
/// member.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub representative: Subgroup,
    /// Number of conjugates.
    pub size: usize,
}

impl SubgroupClass {
    pub fn from_representative(representative: Subgroup) -> Self {
        let size = representative.normalizer().index();
        SubgroupClass {
            representative,
            size,
        }
    }

    /// All conjugates, sorted.
    pub fn conjugates(&self) -> Vec<Subgroup> {
        conjugates(&self.representative)
    }
}

/// Persistent storage for conjugacy-class representatives.
pub trait LatticeStore {
    fn load(&self, group: &FiniteGroup) -> Option<Vec<Vec<Elem>>>;
    fn store(&self, group: &FiniteGroup, representatives: &[Vec<Elem>]);
}

pub(crate) fn conjugates(h: &Subgroup) -> Vec<Subgroup> {
    let g = h.parent();
    let norm = h.normalizer();
    let mut marked = BitSet::new(g.order());
    let mut out = Vec::with_capacity(norm.index());
    for x in g.elements() {
        if marked.contains(x) {
            continue;
        }
        for &n in norm.members() {
            marked.insert(g.mul(x, n));
        }
        out.push(h.conjugate(x));
    }
    out.sort_by(|a, b| a.lex_cmp(b));
    out
}

fn check_cap(g: &FiniteGroup, mode: Enumeration, caps: &Caps) -> Result<()> {
    let (cap, what) = match mode {
        Enumeration::UpToConjugacy => (caps.enumerate_classes, "subgroup enumeration up to conjugacy"),
        Enumeration::All => (caps.enumerate_all, "full subgroup enumeration"),
    };
    if g.order() > cap {
        return Err(Error::cap(what, g.order(), cap));
    }
    Ok(())
}

/// All subgroups, or one per conjugacy class, sorted by order then member
/// list.
pub fn enumerate_subgroups(
    g: &Arc<FiniteGroup>,
    mode: Enumeration,
    caps: &Caps,
) -> Result<Vec<Subgroup>> {
    let order: Vec<Elem> = g.elements().collect();
    enumerate_subgroups_with_order(g, mode, caps, &order)
}

/// As [`enumerate_subgroups`], trying candidate elements in the given order.
/// The result does not depend on `candidates`, which must list every element.
pub fn enumerate_subgroups_with_order(
    g: &Arc<FiniteGroup>,
    mode: Enumeration,
    caps: &Caps,
    candidates: &[Elem],
) -> Result<Vec<Subgroup>> {
    check_cap(g, mode, caps)?;
    let mut found = augment(g, mode, candidates);
    found.sort_by(|a, b| a.lex_cmp(b));
    for h in &found {
        assert_eq!(g.order() % h.order(), 0, "Lagrange violated");
    }
    Ok(found)
}

/// Conjugacy classes of subgroups, optionally read from and written to a
/// store. Returns the classes and whether they came from the store.
pub fn subgroup_classes(
    g: &Arc<FiniteGroup>,
    caps: &Caps,
    store: Option<&dyn LatticeStore>,
) -> Result<(Vec<SubgroupClass>, bool)> {
    check_cap(g, Enumeration::UpToConjugacy, caps)?;
    if let Some(store) = store {
        if let Some(reps) = store.load(g) {
            let loaded: Result<Vec<Subgroup>> =
                reps.iter().map(|m| Subgroup::from_members(g, m)).collect();
            if let Ok(loaded) = loaded {
                return Ok((loaded.into_iter().map(SubgroupClass::from_representative).collect(), true));
            }
        }
    }
    let reps = enumerate_subgroups(g, Enumeration::UpToConjugacy, caps)?;
    if let Some(store) = store {
        let lists: Vec<Vec<Elem>> = reps.iter().map(|h| h.members().to_vec()).collect();
        store.store(g, &lists);
    }
    Ok((reps.into_iter().map(SubgroupClass::from_representative).collect(), false))
}

fn augment(g: &Arc<FiniteGroup>, mode: Enumeration, candidates: &[Elem]) -> Vec<Subgroup> {
    let n = g.order();
    let up_to_conj = mode == Enumeration::UpToConjugacy;
    let mut seen: HashSet<BitSet> = HashSet::new();
    let mut found: Vec<Subgroup> = Vec::new();

    let record = |k: Subgroup, seen: &mut HashSet<BitSet>, found: &mut Vec<Subgroup>| {
        if up_to_conj {
            let class = conjugates(&k);
            for c in &class {
                seen.insert(c.mask().clone());
            }
            found.push(class.into_iter().next().expect("class is non-empty"));
        } else {
            seen.insert(k.mask().clone());
            found.push(k);
        }
    };

    record(Subgroup::trivial(g), &mut seen, &mut found);
    let mut next = 0;
    while next < found.len() {
        let h = found[next].clone();
        next += 1;
        if h.order() == n {
            continue;
        }
        let conj_gens: Vec<Elem> = if up_to_conj {
            h.normalizer().generators().to_vec()
        } else {
            Vec::new()
        };
        let mut covered = h.mask().clone();
        let mut stack = Vec::new();
        for &x in candidates {
            if !covered.insert(x) {
                continue;
            }
            // mark every candidate equivalent to x
            stack.push(x);
            while let Some(y) = stack.pop() {
                for &s in h.generators() {
                    let z = g.mul(s, y);
                    if covered.insert(z) {
                        stack.push(z);
                    }
                }
                for &c in &conj_gens {
                    let z = g.conj(c, y);
                    if covered.insert(z) {
                        stack.push(z);
                    }
                }
                let ord = g.element_order(y);
                let mut z = y;
                for k in 2..ord {
                    z = g.mul(z, y);
                    if gcd(k, ord) == 1 && covered.insert(z) {
                        stack.push(z);
                    }
                }
            }
            let k = h.extended(&[x]);
            if !seen.contains(k.mask()) {
                record(k, &mut seen, &mut found);
            }
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_s3() {
        let caps = Caps::default();
        let t = Arc::new(FiniteGroup::generate(&[], 6, &caps).unwrap());
        assert_eq!(enumerate_subgroups(&t, Enumeration::All, &caps).unwrap().len(), 1);
        let s3 = Arc::new(FiniteGroup::gl2(2, &caps).unwrap());
        assert_eq!(enumerate_subgroups(&s3, Enumeration::All, &caps).unwrap().len(), 6);
        assert_eq!(
            enumerate_subgroups(&s3, Enumeration::UpToConjugacy, &caps).unwrap().len(),
            4
        );
    }

    #[test]
    fn cap_reported() {
        let caps = Caps {
            enumerate_all: 10,
            ..Caps::default()
        };
        let g = Arc::new(FiniteGroup::gl2(3, &caps).unwrap());
        assert!(matches!(
            enumerate_subgroups(&g, Enumeration::All, &caps),
            Err(Error::CapExceeded { order: 48, cap: 10, .. })
        ));
    }

    #[test]
    fn class_representative_is_smallest_conjugate() {
        let caps = Caps::default();
        let g = Arc::new(FiniteGroup::gl2(3, &caps).unwrap());
        let reps = enumerate_subgroups(&g, Enumeration::UpToConjugacy, &caps).unwrap();
        let total: usize = reps
            .iter()
            .map(|h| {
                let class = conjugates(h);
                assert_eq!(&class[0], h);
                class.len()
            })
            .sum();
        assert_eq!(total, enumerate_subgroups(&g, Enumeration::All, &caps).unwrap().len());
    }
}
