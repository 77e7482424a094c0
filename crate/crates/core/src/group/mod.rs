//! Explicit finite groups: elements are indexed `0..order` in a canonical
//! order, and multiplication is a Cayley-table lookup for small groups or a
//! composition of element labels followed by an index lookup otherwise.

mod bitset;
mod enumerate;
pub mod iso;
mod normal;
pub mod presentation;
mod product;
mod quotient;
mod subgroup;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

pub use bitset::BitSet;
pub use enumerate::{
    enumerate_subgroups, enumerate_subgroups_with_order, subgroup_classes, Enumeration,
    LatticeStore, SubgroupClass,
};
pub use normal::{abelian_invariants, conjugacy_classes, normal_structure, NormalStructure};
pub use product::{direct_product, fiber_product, find_quotient_isomorphisms, pair_index, DirectProduct};
pub use quotient::quotient_group;
pub use normal::normal_subgroups;
pub(crate) use normal::{center, derived_subgroup, quotient_invariants};
pub use subgroup::Subgroup;

use crate::error::{Error, Result};
use crate::matmod::{self, Mat2};

/// Groups up to this order carry a full Cayley table.
pub const TABLE_THRESHOLD: usize = 4096;

/// Index of an element inside its group.
pub type Elem = u32;

/// Configurable size limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest group `generate_group` and the built-in constructors will build.
    pub order: usize,
    /// Largest group enumerated up to conjugacy.
    pub enumerate_classes: usize,
    /// Largest group whose full subgroup list is enumerated.
    pub enumerate_all: usize,
    /// Largest order for isomorphism search and exact identification.
    pub isomorphism: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            order: 50_000,
            enumerate_classes: 15_000,
            enumerate_all: 4_096,
            isomorphism: 512,
        }
    }
}

/// What the element indices of a group stand for.
#[derive(Clone)]
pub enum Carrier {
    Matrices {
        modulus: u32,
        elements: Vec<Mat2>,
    },
    /// Permutations of `0..degree`, composed left to right.
    Permutations {
        degree: usize,
        elements: Vec<Vec<u16>>,
    },
    /// Pairs of elements of two groups, multiplied componentwise.
    Pairs {
        left: Arc<FiniteGroup>,
        right: Arc<FiniteGroup>,
        elements: Vec<(Elem, Elem)>,
    },
    /// A subgroup of `parent`, relabelled.
    Subset {
        parent: Arc<FiniteGroup>,
        elements: Vec<Elem>,
    },
    /// Cosets of a normal subgroup, labelled by their smallest member.
    Cosets {
        parent: Arc<FiniteGroup>,
        reps: Vec<Elem>,
        coset_of: HashMap<Elem, Elem>,
    },
}

impl Carrier {
    fn len(&self) -> usize {
        match self {
            Carrier::Matrices { elements, .. } => elements.len(),
            Carrier::Permutations { elements, .. } => elements.len(),
            Carrier::Pairs { elements, .. } => elements.len(),
            Carrier::Subset { elements, .. } => elements.len(),
            Carrier::Cosets { reps, .. } => reps.len(),
        }
    }

    fn compose(&self, a: Elem, b: Elem) -> Elem {
        let (a, b) = (a as usize, b as usize);
        let found = match self {
            Carrier::Matrices { elements, .. } => {
                elements.binary_search(&elements[a].mul_unchecked(&elements[b]))
            }
            Carrier::Permutations { elements, .. } => {
                let (x, y) = (&elements[a], &elements[b]);
                let xy: Vec<u16> = x.iter().map(|&i| y[i as usize]).collect();
                elements.binary_search(&xy)
            }
            Carrier::Pairs {
                left,
                right,
                elements,
            } => {
                let (x, y) = (elements[a], elements[b]);
                elements.binary_search(&(left.mul(x.0, y.0), right.mul(x.1, y.1)))
            }
            Carrier::Subset { parent, elements } => {
                elements.binary_search(&parent.mul(elements[a], elements[b]))
            }
            Carrier::Cosets {
                parent,
                reps,
                coset_of,
            } => return coset_of[&parent.mul(reps[a], reps[b])],
        };
        found.expect("carrier is closed under multiplication") as Elem
    }

    fn identity(&self) -> Elem {
        match self {
            Carrier::Matrices { modulus, elements } => {
                let id = Mat2::identity(*modulus).expect("valid modulus");
                elements.binary_search(&id).expect("identity present") as Elem
            }
            Carrier::Permutations { degree, elements } => {
                let id: Vec<u16> = (0..*degree as u16).collect();
                elements.binary_search(&id).expect("identity present") as Elem
            }
            Carrier::Pairs {
                left,
                right,
                elements,
            } => elements
                .binary_search(&(left.identity(), right.identity()))
                .expect("identity present") as Elem,
            Carrier::Subset { parent, elements } => elements
                .binary_search(&parent.identity())
                .expect("identity present") as Elem,
            Carrier::Cosets {
                parent, coset_of, ..
            } => coset_of[&parent.identity()],
        }
    }

    fn label(&self, a: Elem) -> String {
        let a = a as usize;
        match self {
            Carrier::Matrices { elements, .. } => elements[a].to_string(),
            Carrier::Permutations { elements, .. } => format!("{:?}", elements[a]),
            Carrier::Pairs {
                left,
                right,
                elements,
            } => {
                let (x, y) = elements[a];
                format!("({}, {})", left.label(x), right.label(y))
            }
            Carrier::Subset { parent, elements } => parent.label(elements[a]),
            Carrier::Cosets { parent, reps, .. } => format!("{}N", parent.label(reps[a])),
        }
    }
}

/// A finite group with canonically ordered, duplicate-free elements.
pub struct FiniteGroup {
    carrier: Carrier,
    n: usize,
    identity: Elem,
    inverses: Vec<Elem>,
    table: Option<Vec<u16>>,
    gens: OnceLock<Vec<Elem>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .finish_non_exhaustive()
    }
}

impl FiniteGroup {
    /// Builds a group from a carrier whose elements are already sorted and
    /// closed under composition.
    pub(crate) fn from_carrier(carrier: Carrier) -> FiniteGroup {
        let n = carrier.len();
        let identity = carrier.identity();
        let table = (n <= TABLE_THRESHOLD).then(|| {
            let mut t = vec![0u16; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = carrier.compose(a as Elem, b as Elem) as u16;
                }
            }
            t
        });
        let mut group = FiniteGroup {
            carrier,
            n,
            identity,
            inverses: Vec::new(),
            table,
            gens: OnceLock::new(),
        };
        group.inverses = (0..n as Elem).map(|a| group.compute_inverse(a)).collect();
        group
    }

    fn compute_inverse(&self, a: Elem) -> Elem {
        if let Carrier::Matrices { elements, .. } = &self.carrier {
            return elements
                .binary_search(&elements[a as usize].inv())
                .expect("closed under inverses") as Elem;
        }
        // a^(k-1) where k is the order of a
        let mut prev = self.identity;
        let mut x = a;
        while x != self.identity {
            prev = x;
            x = self.mul(x, a);
        }
        prev
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.table {
            Some(t) => t[a as usize * self.n + b as usize] as Elem,
            None => self.carrier.compose(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a as usize]
    }

    /// `x a x^-1`.
    #[inline]
    pub fn conj(&self, x: Elem, a: Elem) -> Elem {
        self.mul(self.mul(x, a), self.inverses[x as usize])
    }

    pub fn pow(&self, a: Elem, mut k: u64) -> Elem {
        let mut acc = self.identity;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: Elem) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order() as Elem
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn label(&self, a: Elem) -> String {
        self.carrier.label(a)
    }

    pub fn modulus(&self) -> Option<u32> {
        match &self.carrier {
            Carrier::Matrices { modulus, .. } => Some(*modulus),
            _ => None,
        }
    }

    pub fn matrix(&self, a: Elem) -> Option<Mat2> {
        match &self.carrier {
            Carrier::Matrices { elements, .. } => Some(elements[a as usize]),
            _ => None,
        }
    }

    pub fn index_of_matrix(&self, m: &Mat2) -> Option<Elem> {
        match &self.carrier {
            Carrier::Matrices { elements, .. } => elements.binary_search(m).ok().map(|i| i as Elem),
            _ => None,
        }
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A small generating set, chosen greedily from elements of large order.
    pub fn generators(&self) -> &[Elem] {
        self.gens.get_or_init(|| self.greedy_generators())
    }

    fn greedy_generators(&self) -> Vec<Elem> {
        let mut by_order: Vec<(u64, Elem)> =
            self.elements().map(|a| (self.element_order(a), a)).collect();
        by_order.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        let mut seen = BitSet::new(self.order());
        seen.insert(self.identity);
        let mut elems = vec![self.identity];
        let mut gens = Vec::new();
        for (_, a) in by_order {
            if seen.contains(a) {
                continue;
            }
            gens.push(a);
            self.extend_closure(&mut seen, &mut elems, &gens, a);
            if elems.len() == self.order() {
                break;
            }
        }
        gens
    }

    /// Grows the subgroup `(seen, elems)` (closed under `gens` minus `new`) by
    /// the generator `new`; `gens` must already contain `new`.
    pub(crate) fn extend_closure(
        &self,
        seen: &mut BitSet,
        elems: &mut Vec<Elem>,
        gens: &[Elem],
        new: Elem,
    ) {
        if seen.contains(new) {
            return;
        }
        // every element of the new subgroup is a product of an old element and
        // a word in all generators, so breadth-first over right multiplication
        // starting from the old elements times `new` suffices
        let mut queue: Vec<Elem> = Vec::new();
        for &x in elems.iter() {
            let y = self.mul(x, new);
            if seen.insert(y) {
                queue.push(y);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push(y);
                }
            }
        }
        elems.extend(queue);
    }

    /// Exhaustive construction of `GL2(Z/N)`.
    pub fn gl2(modulus: u32, caps: &Caps) -> Result<FiniteGroup> {
        Self::matrix_filter(modulus, caps, matmod::gl2_order(modulus), |_| true)
    }

    /// Exhaustive construction of `SL2(Z/N)`.
    pub fn sl2(modulus: u32, caps: &Caps) -> Result<FiniteGroup> {
        let phi = (1..modulus)
            .filter(|&u| matmod::gcd(u as u64, modulus as u64) == 1)
            .count() as u64;
        Self::matrix_filter(modulus, caps, matmod::gl2_order(modulus) / phi.max(1), |m| {
            m.det() == 1
        })
    }

    fn matrix_filter(
        modulus: u32,
        caps: &Caps,
        expected: u64,
        keep: impl Fn(&Mat2) -> bool,
    ) -> Result<FiniteGroup> {
        Mat2::identity(modulus)?;
        if expected > caps.order as u64 {
            return Err(Error::cap("group construction", expected as usize, caps.order));
        }
        let n = modulus as i64;
        let mut elements = Vec::with_capacity(expected as usize);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if let Ok(m) = Mat2::new(a, b, c, d, modulus) {
                            if keep(&m) {
                                elements.push(m);
                            }
                        }
                    }
                }
            }
        }
        debug_assert_eq!(elements.len() as u64, expected);
        Ok(Self::from_carrier(Carrier::Matrices { modulus, elements }))
    }

    /// Closure of a set of matrices mod `modulus`.
    pub fn generate(generators: &[Mat2], modulus: u32, caps: &Caps) -> Result<FiniteGroup> {
        let id = Mat2::identity(modulus)?;
        for g in generators {
            if g.modulus() != modulus {
                return Err(Error::ModulusMismatch(g.modulus(), modulus));
            }
        }
        let mut seen: HashSet<Mat2> = HashSet::from([id]);
        let mut queue = vec![id];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for g in generators {
                let y = x.mul_unchecked(g);
                if seen.insert(y) {
                    if seen.len() > caps.order {
                        return Err(Error::cap("generated group", seen.len(), caps.order));
                    }
                    queue.push(y);
                }
            }
        }
        queue.sort();
        Ok(Self::from_carrier(Carrier::Matrices {
            modulus,
            elements: queue,
        }))
    }

    /// Closure of a set of permutations of `0..degree`.
    pub fn from_permutations(generators: &[Vec<u16>], degree: usize, caps: &Caps) -> Result<FiniteGroup> {
        let id: Vec<u16> = (0..degree as u16).collect();
        for g in generators {
            let mut sorted = g.clone();
            sorted.sort_unstable();
            if sorted != id {
                return Err(Error::Precondition(format!("not a permutation of 0..{degree}: {g:?}")));
            }
        }
        let mut seen: HashSet<Vec<u16>> = HashSet::from([id.clone()]);
        let mut queue = vec![id];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head].clone();
            head += 1;
            for g in generators {
                let y: Vec<u16> = x.iter().map(|&i| g[i as usize]).collect();
                if seen.insert(y.clone()) {
                    if seen.len() > caps.order {
                        return Err(Error::cap("generated group", seen.len(), caps.order));
                    }
                    queue.push(y);
                }
            }
        }
        queue.sort();
        Ok(Self::from_carrier(Carrier::Permutations {
            degree,
            elements: queue,
        }))
    }

    /// Cyclic group `Z/n` as permutations.
    pub fn cyclic(n: usize) -> FiniteGroup {
        let gen: Vec<u16> = (0..n).map(|i| ((i + 1) % n) as u16).collect();
        Self::from_permutations(&[gen], n, &Caps::default()).expect("valid permutation")
    }

    /// Right-regular permutation representation: `x` acts by `i -> i x`.
    pub fn regular_representation(&self, caps: &Caps) -> Result<FiniteGroup> {
        if self.order() > u16::MAX as usize {
            return Err(Error::cap("regular representation", self.order(), u16::MAX as usize));
        }
        let perms: Vec<Vec<u16>> = self
            .generators()
            .iter()
            .map(|&s| self.elements().map(|i| self.mul(i, s) as u16).collect())
            .collect();
        Self::from_permutations(&perms, self.order(), caps)
    }

    /// Relabels a subgroup as a group in its own right.
    pub fn from_subgroup(h: &Subgroup) -> FiniteGroup {
        Self::from_carrier(Carrier::Subset {
            parent: h.parent().clone(),
            elements: h.members().to_vec(),
        })
    }

    /// Element-index list hash input: the canonical labels in order.
    pub fn canonical_labels(&self) -> Vec<String> {
        self.elements().map(|a| self.label(a)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_orders() {
        let caps = Caps::default();
        assert_eq!(FiniteGroup::gl2(2, &caps).unwrap().order(), 6);
        assert_eq!(FiniteGroup::gl2(3, &caps).unwrap().order(), 48);
        assert_eq!(FiniteGroup::sl2(3, &caps).unwrap().order(), 24);
        assert_eq!(FiniteGroup::gl2(5, &caps).unwrap().order(), 480);
        let small = Caps {
            order: 100,
            ..caps
        };
        assert!(matches!(
            FiniteGroup::gl2(5, &small),
            Err(Error::CapExceeded { order: 480, .. })
        ));
    }

    #[test]
    fn generate_small() {
        let caps = Caps::default();
        let g = FiniteGroup::generate(&[], 6, &caps).unwrap();
        assert_eq!(g.order(), 1);
        let s = Mat2::new(1, 1, 0, -1, 5).unwrap();
        let t = Mat2::new(-1, 0, 1, 1, 5).unwrap();
        let g = FiniteGroup::generate(&[s, t], 5, &caps).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        // the upper-triangular pair generates a dihedral group of order 4q
        let t_upper = Mat2::new(-1, 1, 0, 1, 5).unwrap();
        assert_eq!(FiniteGroup::generate(&[s, t_upper], 5, &caps).unwrap().order(), 20);
        let tiny = Caps { order: 10, ..caps };
        assert!(FiniteGroup::generate(&[s, t_upper], 5, &tiny).is_err());
    }

    #[test]
    fn table_agrees_with_labels() {
        let g = FiniteGroup::gl2(3, &Caps::default()).unwrap();
        for a in g.elements() {
            assert_eq!(g.mul(a, g.inv(a)), g.identity());
            for b in g.elements() {
                let ab = g.matrix(a).unwrap().mul(&g.matrix(b).unwrap()).unwrap();
                assert_eq!(g.matrix(g.mul(a, b)).unwrap(), ab);
            }
        }
        let gens = g.generators().to_vec();
        let h = Subgroup::generated(&Arc::new(g), &gens);
        assert_eq!(h.order(), 48);
    }

    #[test]
    fn cyclic_group() {
        let c = FiniteGroup::cyclic(12);
        assert_eq!(c.order(), 12);
        assert!(c.is_abelian());
        assert_eq!(c.elements().map(|a| c.element_order(a)).max(), Some(12));
    }
}
