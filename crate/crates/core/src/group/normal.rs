use std::collections::HashSet;

use super::{BitSet, Elem, Subgroup};

/// Normal subgroups, center, derived subgroup and abelianization of a group.
#[derive(Clone, Debug)]
pub struct NormalStructure {
    /// Sorted by order, then member list.
    pub normal_subgroups: Vec<Subgroup>,
    pub center: Subgroup,
    pub derived: Subgroup,
    /// Invariant factors of `H / [H, H]`, each dividing the next.
    pub abelianization: Vec<u64>,
}

/// Conjugacy classes of `h` (under conjugation by `h`), each sorted, ordered
/// by smallest member.
pub fn conjugacy_classes(h: &Subgroup) -> Vec<Vec<Elem>> {
    let g = h.parent();
    let mut assigned = BitSet::new(g.order());
    let mut classes = Vec::new();
    for &x in h.members() {
        if assigned.contains(x) {
            continue;
        }
        let mut class = Vec::new();
        let mut stack = vec![x];
        assigned.insert(x);
        while let Some(y) = stack.pop() {
            class.push(y);
            for &s in h.generators() {
                let z = g.conj(s, y);
                if assigned.insert(z) {
                    stack.push(z);
                }
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    classes
}

/// Smallest subgroup of `over` containing `seed` and normal in `over`.
pub(crate) fn normal_closure(over: &Subgroup, seed: &[Elem]) -> Subgroup {
    let g = over.parent();
    let mut n = Subgroup::generated(g, seed);
    loop {
        let extra: Vec<Elem> = n
            .generators()
            .iter()
            .flat_map(|&m| over.generators().iter().map(move |&s| g.conj(s, m)))
            .filter(|&c| !n.contains(c))
            .collect();
        if extra.is_empty() {
            return n;
        }
        n = n.extended(&extra);
    }
}

pub(crate) fn center(h: &Subgroup) -> Subgroup {
    let g = h.parent();
    let members: Vec<Elem> = h
        .members()
        .iter()
        .copied()
        .filter(|&z| h.generators().iter().all(|&s| g.mul(z, s) == g.mul(s, z)))
        .collect();
    Subgroup::generated(g, &members)
}

pub(crate) fn derived_subgroup(h: &Subgroup) -> Subgroup {
    let g = h.parent();
    let gens = h.generators();
    let mut commutators = Vec::new();
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i + 1..] {
            let ab = g.mul(a, b);
            let ba = g.mul(b, a);
            commutators.push(g.mul(ab, g.inv(ba)));
        }
    }
    normal_closure(h, &commutators)
}

/// Every normal subgroup of `h`: joins of normal closures of single
/// conjugacy classes, iterated to a fixpoint.
pub fn normal_subgroups(h: &Subgroup) -> Vec<Subgroup> {
    let mut seen: HashSet<BitSet> = HashSet::new();
    let mut list: Vec<Subgroup> = Vec::new();
    for class in conjugacy_classes(h) {
        let n = normal_closure(h, &class[..1]);
        if seen.insert(n.mask().clone()) {
            list.push(n);
        }
    }
    let minimal_count = list.len();
    let mut i = 0;
    while i < list.len() {
        for j in 0..minimal_count {
            let joined = list[i].join(&list[j]);
            if seen.insert(joined.mask().clone()) {
                list.push(joined);
            }
        }
        i += 1;
    }
    list.sort_by(|a, b| a.lex_cmp(b));
    list
}

/// Invariant factors of a finite abelian group of order `order`, given
/// `torsion(m) = #{x : x^m = 1}`.
pub fn abelian_invariants(order: u64, torsion: impl Fn(u64) -> u64) -> Vec<u64> {
    let mut n = order;
    // exponents of the cyclic p-parts, per prime, largest first
    let mut parts: Vec<(u64, Vec<u32>)> = Vec::new();
    let mut p = 2;
    while n > 1 {
        if n % p != 0 {
            p += 1;
            continue;
        }
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        // ranks[k-1] = #{cyclic factors of order >= p^k}
        let mut ranks = Vec::new();
        let mut prev_log = 0u32;
        let mut k = 1;
        loop {
            let c = torsion(p.pow(k));
            let log = c.ilog(p);
            ranks.push(log - prev_log);
            prev_log = log;
            if log >= e {
                break;
            }
            k += 1;
        }
        let count = ranks[0] as usize;
        let exps: Vec<u32> = (0..count)
            .map(|i| ranks.iter().filter(|&&r| r as usize > i).count() as u32)
            .collect();
        parts.push((p, exps));
        p += 1;
    }
    let width = parts.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut factors: Vec<u64> = (0..width)
        .map(|i| {
            parts
                .iter()
                .map(|(p, e)| e.get(i).map_or(1, |&k| p.pow(k)))
                .product()
        })
        .collect();
    factors.reverse();
    factors
}

/// Invariant factors of `h / d` for a normal subgroup `d` of `h` with
/// abelian quotient.
pub(crate) fn quotient_invariants(h: &Subgroup, d: &Subgroup) -> Vec<u64> {
    let g = h.parent();
    let index = (h.order() / d.order()) as u64;
    abelian_invariants(index, |m| {
        let hits = h.members().iter().filter(|&&x| d.contains(g.pow(x, m))).count();
        (hits / d.order()) as u64
    })
}

pub fn normal_structure(h: &Subgroup) -> NormalStructure {
    let derived = derived_subgroup(h);
    let abelianization = quotient_invariants(h, &derived);
    NormalStructure {
        normal_subgroups: normal_subgroups(h),
        center: center(h),
        derived,
        abelianization,
    }
}
