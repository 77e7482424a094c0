//! Isomorphism search by backtracking over images of a generating set.

use std::collections::BTreeMap;

use super::{BitSet, Caps, Elem, FiniteGroup};
use crate::error::{Error, Result};

const UNSET: Elem = Elem::MAX;

/// (element order, centralizer order) for every element.
fn element_signatures(g: &FiniteGroup) -> Vec<(u64, usize)> {
    g.elements()
        .map(|a| {
            let cent = g.elements().filter(|&b| g.mul(a, b) == g.mul(b, a)).count();
            (g.element_order(a), cent)
        })
        .collect()
}

/// Multiset of element orders.
pub fn order_statistics(g: &FiniteGroup) -> BTreeMap<u64, usize> {
    let mut stats = BTreeMap::new();
    for a in g.elements() {
        *stats.entry(g.element_order(a)).or_insert(0) += 1;
    }
    stats
}

/// Extends `gens[i] -> imgs[i]` to an injective homomorphism on `<gens>`.
/// Returns the map (with unreached entries unset), or `None` on conflict.
fn extend_hom(g: &FiniteGroup, h: &FiniteGroup, gens: &[Elem], imgs: &[Elem]) -> Option<Vec<Elem>> {
    let mut map = vec![UNSET; g.order()];
    let mut used = BitSet::new(h.order());
    map[g.identity() as usize] = h.identity();
    used.insert(h.identity());
    let mut queue = vec![g.identity()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let fx = map[x as usize];
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = g.mul(x, s);
            let fy = h.mul(fx, t);
            match map[y as usize] {
                UNSET => {
                    if !used.insert(fy) {
                        return None;
                    }
                    map[y as usize] = fy;
                    queue.push(y);
                }
                prev if prev != fy => return None,
                _ => {}
            }
        }
    }
    Some(map)
}

/// All isomorphisms `g -> h` (as full element maps), up to `limit` of them.
pub fn isomorphisms(g: &FiniteGroup, h: &FiniteGroup, limit: Option<usize>) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    if g.order() != h.order() || order_statistics(g) != order_statistics(h) {
        return out;
    }
    let sig_g = element_signatures(g);
    let sig_h = element_signatures(h);
    let gens = g.generators().to_vec();
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&s| h.elements().filter(|&t| sig_h[t as usize] == sig_g[s as usize]).collect())
        .collect();
    let mut imgs = Vec::with_capacity(gens.len());
    search(g, h, &gens, &candidates, &mut imgs, limit, &mut out);
    out
}

fn search(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[Elem],
    candidates: &[Vec<Elem>],
    imgs: &mut Vec<Elem>,
    limit: Option<usize>,
    out: &mut Vec<Vec<Elem>>,
) {
    if limit.is_some_and(|l| out.len() >= l) {
        return;
    }
    let depth = imgs.len();
    if depth == gens.len() {
        if let Some(map) = extend_hom(g, h, gens, imgs) {
            if map.iter().all(|&m| m != UNSET) {
                out.push(map);
            }
        }
        return;
    }
    for &t in &candidates[depth] {
        imgs.push(t);
        if extend_hom(g, h, &gens[..=depth], imgs).is_some() {
            search(g, h, gens, candidates, imgs, limit, out);
        }
        imgs.pop();
        if limit.is_some_and(|l| out.len() >= l) {
            return;
        }
    }
}

pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<Vec<Elem>> {
    isomorphisms(g, h, Some(1)).pop()
}

/// Isomorphism test for groups of equal order within the cap.
pub fn are_isomorphic(g: &FiniteGroup, h: &FiniteGroup, caps: &Caps) -> Result<bool> {
    let order = g.order().max(h.order());
    if order > caps.isomorphism {
        return Err(Error::cap("isomorphism search", order, caps.isomorphism));
    }
    Ok(find_isomorphism(g, h).is_some())
}

/// Checks that `map` is a bijective homomorphism `g -> h`.
pub fn is_isomorphism(g: &FiniteGroup, h: &FiniteGroup, map: &[Elem]) -> bool {
    if map.len() != g.order() || g.order() != h.order() {
        return false;
    }
    let mut used = BitSet::new(h.order());
    if !map.iter().all(|&m| (m as usize) < h.order() && used.insert(m)) {
        return false;
    }
    g.elements().all(|a| {
        g.elements()
            .all(|b| map[g.mul(a, b) as usize] == h.mul(map[a as usize], map[b as usize]))
    })
}
