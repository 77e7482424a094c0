//! Subgroup lattice up to conjugacy, as data and as a DOT digraph.

use std::fmt::Write;
use std::sync::Arc;

use serde::Serialize;

use crate::entangle::EntContext;
use crate::error::Result;
use crate::group::{subgroup_classes, Caps, FiniteGroup, LatticeStore, SubgroupClass};
use crate::group_id::{identify_with_caps, IsoClass};

#[derive(Clone, Debug, Serialize)]
pub struct LatticeNode {
    pub id: usize,
    pub order: usize,
    /// Number of conjugates.
    pub size: usize,
    pub class: IsoClass,
    /// Base-change type, when the group carries a pq context.
    pub base_change_type: Option<IsoClass>,
    pub members: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lattice {
    pub nodes: Vec<LatticeNode>,
    /// `(smaller, larger)`: some conjugate of `smaller` is maximal in `larger`.
    pub edges: Vec<(usize, usize)>,
    #[serde(skip)]
    pub cache_hit: bool,
}

/// Whether some conjugate of `a`'s representative lies in `b`'s.
fn below(a: &SubgroupClass, b: &SubgroupClass) -> bool {
    let (ra, rb) = (&a.representative, &b.representative);
    if ra.order() >= rb.order() || rb.order() % ra.order() != 0 {
        return false;
    }
    ra.is_subgroup_of(rb) || a.conjugates().iter().any(|c| c.is_subgroup_of(rb))
}

pub fn subgroup_lattice(
    g: &Arc<FiniteGroup>,
    ctx: Option<&EntContext>,
    caps: &Caps,
    store: Option<&dyn LatticeStore>,
) -> Result<Lattice> {
    let (classes, cache_hit) = subgroup_classes(g, caps, store)?;
    let nodes = classes
        .iter()
        .enumerate()
        .map(|(id, c)| {
            let h = &c.representative;
            let class = identify_with_caps(&Arc::new(FiniteGroup::from_subgroup(h)), caps);
            let base_change_type = ctx.map(|ctx| ctx.base_change_type(h)).transpose()?;
            Ok(LatticeNode {
                id,
                order: h.order(),
                size: c.size,
                class,
                base_change_type,
                members: h.members().to_vec(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = classes.len();
    let mut rel = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            rel[i][j] = below(&classes[i], &classes[j]);
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rel[i][j] && !(0..n).any(|k| rel[i][k] && rel[k][j]) {
                edges.push((i, j));
            }
        }
    }
    Ok(Lattice {
        nodes,
        edges,
        cache_hit,
    })
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl Lattice {
    /// DOT digraph with larger subgroups drawn above smaller ones.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
        writeln!(out, "  rankdir=BT;").unwrap();
        writeln!(out, "  node [shape=box, fontname=\"Helvetica\"];").unwrap();
        for node in &self.nodes {
            let mut label = format!("#{} order {}\\n{}", node.id, node.order, escape(&node.class.to_string()));
            if node.size > 1 {
                write!(label, " (x{})", node.size).unwrap();
            }
            if let Some(t) = &node.base_change_type {
                write!(label, "\\ntype {}", escape(&t.to_string())).unwrap();
            }
            writeln!(out, "  n{} [label=\"{}\"];", node.id, label).unwrap();
        }
        for (a, b) in &self.edges {
            writeln!(out, "  n{a} -> n{b};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}
