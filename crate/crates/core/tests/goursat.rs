use std::sync::Arc;

use entangle_core::cli_io::fixtures::fixture;
use entangle_core::entangle::{ent_set, ent_set_direct, ent_set_goursat, ent_set_kernels, Strategy, Witness};
use entangle_core::group::{direct_product, Caps, FiniteGroup, Subgroup};
use entangle_core::group_id::{catalog_models, IsoClass};

fn caps() -> Caps {
    Caps::default()
}

fn small_groups() -> Vec<(String, Arc<FiniteGroup>)> {
    let mut out: Vec<(String, Arc<FiniteGroup>)> = [2, 3, 4, 6, 8]
        .iter()
        .map(|&n| (format!("Z/{n}"), Arc::new(FiniteGroup::cyclic(n))))
        .collect();
    for m in catalog_models() {
        out.push((m.entry.name.to_string(), m.group.clone()));
    }
    out
}

#[test]
fn goursat_matches_direct_on_catalog_pairs() {
    let groups = small_groups();
    let mut pairs = 0;
    for (na, a) in &groups {
        for (nb, b) in &groups {
            if a.order() * b.order() > 400 {
                continue;
            }
            let p = direct_product(a, b, &caps()).unwrap();
            let (direct, _, _) = ent_set_kernels(&p.group, &p.right, &p.left, &caps(), None).unwrap();
            let direct: Vec<IsoClass> = direct.into_iter().map(|e| e.class).collect();
            let goursat = ent_set_goursat(a, b, &caps(), None).unwrap();
            assert_eq!(goursat.classes(), direct, "{na} x {nb}");
            for e in &goursat.entries {
                let Witness::Section { order, left, right } = &e.witness else { panic!() };
                let ka = left.kernel.len();
                assert_eq!(*order, left.subgroup.len() * right.kernel.len());
                assert_eq!(left.subgroup.len() / ka, right.subgroup.len() / right.kernel.len());
                assert_eq!(e.class.order() as usize, left.subgroup.len() / ka);
            }
            pairs += 1;
        }
    }
    assert!(pairs >= 60, "{pairs} pairs");
}

#[test]
fn matrix_contexts_agree() {
    for name in ["prod-gl2-2-gl2-3", "prod-gl2-2-gl2-5", "im2-cyclic3-gl2-3", "im2-trivial-gl2-3"] {
        let ctx = fixture(name).unwrap().build(&caps()).unwrap().context.unwrap();
        let auto = ent_set(&ctx, &caps(), None).unwrap();
        assert_eq!(auto.strategy, Strategy::Goursat);
        let direct = ent_set_direct(&ctx, &caps(), None).unwrap();
        assert_eq!(auto.classes(), direct.classes(), "{name}");
        for e in &auto.entries {
            let Witness::Subgroup { members, .. } = &e.witness else { panic!() };
            let h = Subgroup::from_members(&ctx.group, members).unwrap();
            assert_eq!(ctx.base_change_type(&h).unwrap(), e.class);
        }
    }
}

#[test]
fn entangled_contexts_use_direct_scan() {
    let ctx = fixture("fiber-s3-gl2-2-gl2-3").unwrap().build(&caps()).unwrap().context.unwrap();
    let r = ent_set(&ctx, &caps(), None).unwrap();
    assert_eq!(r.strategy, Strategy::Direct);
    let labels: Vec<String> = r.classes().iter().map(|c| c.to_string()).collect();
    assert_eq!(labels, ["1", "Z/2", "Z/3", "S3"]);
}
