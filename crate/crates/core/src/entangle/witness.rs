use std::sync::Arc;

use super::EntContext;
use crate::error::{Error, Result};
use crate::group::{Caps, Elem, FiniteGroup, Subgroup};
use crate::group_id::{identify, IsoClass};
use crate::matmod::{is_prime, Mat2};

/// A subgroup `H <= G` whose base-change type is `Z/ell`.
///
/// When `ell` divides `|G/J|`, `H = <J, x>` for some `x` whose image in
/// `G/J` has order `ell`. Otherwise `ell` divides both `|N_p|` and `|N_q|`,
/// and `H = <ab>` for `a in N_q`, `b in N_p` of order `ell`: it has order
/// `ell` and meets both kernels trivially.
pub fn cyclic_witness(ctx: &EntContext, ell: u64) -> Result<Subgroup> {
    if !is_prime(ell as u32) || ctx.d_value() % ell != 0 {
        return Err(Error::Precondition(format!(
            "ell = {ell} must be a prime dividing d = {}",
            ctx.d_value()
        )));
    }
    let g = &ctx.group;
    let h = if ctx.type_order() as u64 % ell == 0 {
        let x = g
            .elements()
            .find(|&x| !ctx.join.contains(x) && ctx.join.contains(g.pow(x, ell)))
            .expect("Cauchy: G/J has an element of order ell");
        ctx.join.extended(&[x])
    } else {
        let of_order = |n: &Subgroup| {
            n.members()
                .iter()
                .copied()
                .find(|&x| g.element_order(x) == ell)
                .expect("Cauchy: kernel order divisible by ell")
        };
        let a: Elem = of_order(&ctx.n_q);
        let b: Elem = of_order(&ctx.n_p);
        Subgroup::generated(g, &[g.mul(a, b)])
    };
    assert!(ctx.divisibility_check(&h));
    assert_eq!(ctx.base_change_type(&h)?, IsoClass::cyclic(ell));
    Ok(h)
}

/// Generators of `S3` in `GL2(Z/q)` for odd `q`: involutions whose product
/// has order 3.
pub fn s3_generators() -> ([[i64; 2]; 2], [[i64; 2]; 2]) {
    ([[1, 1], [0, -1]], [[-1, 0], [1, 1]])
}

/// A copy of `S3` inside `GL2(Z/2) x GL2(Z/q)`, realized mod `2q`, meeting
/// both factors trivially.
#[derive(Clone, Debug)]
pub struct S3Witness {
    pub q: u32,
    pub sigma: Mat2,
    pub tau: Mat2,
    /// `H` as a matrix group mod `2q`.
    pub group: Arc<FiniteGroup>,
    pub class: IsoClass,
    /// `H ∩ (GL2(Z/2) x 1)` is trivial.
    pub meets_left_trivially: bool,
    /// `H ∩ (1 x GL2(Z/q))` is trivial.
    pub meets_right_trivially: bool,
}

impl S3Witness {
    pub fn is_valid(&self) -> bool {
        self.class == IsoClass::Named("S3".into()) && self.meets_left_trivially && self.meets_right_trivially
    }

    /// `H` as a subgroup of a context group mod `2q`.
    pub fn in_context(&self, ctx: &EntContext) -> Result<Subgroup> {
        let members: Vec<Elem> = self
            .group
            .elements()
            .map(|x| ctx.element(&self.group.matrix(x).expect("matrix group")))
            .collect::<Result<_>>()?;
        Subgroup::from_members(&ctx.group, &members)
    }
}

pub fn s3_witness(q: u32, caps: &Caps) -> Result<S3Witness> {
    if q == 2 || !is_prime(q) {
        return Err(Error::Precondition(format!("q = {q} must be an odd prime")));
    }
    let n = 2 * q;
    let (s, t) = s3_generators();
    let sigma = Mat2::from_rows(s, n)?;
    let tau = Mat2::from_rows(t, n)?;
    let group = Arc::new(FiniteGroup::generate(&[sigma, tau], n, caps)?);
    let trivial_mod = |r: u32| {
        group
            .elements()
            .filter(|&x| group.matrix(x).expect("matrix group").reduce_to(r).is_ok_and(|m| m.is_identity()))
            .count()
            == 1
    };
    let class = identify(&group);
    Ok(S3Witness {
        q,
        sigma,
        tau,
        meets_left_trivially: trivial_mod(q),
        meets_right_trivially: trivial_mod(2),
        group,
        class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_matrices_as_printed_do_not_give_s3() {
        let caps = Caps::default();
        let s = Mat2::new(1, 1, 0, -1, 5).unwrap();
        let t = Mat2::new(-1, 1, 0, 1, 5).unwrap();
        assert_eq!(s.order(), 2);
        assert_eq!(t.order(), 2);
        assert_eq!(s.mul(&t).unwrap().order(), 10);
        assert_eq!(FiniteGroup::generate(&[s, t], 5, &caps).unwrap().order(), 20);
    }

    #[test]
    fn s3_witness_small_q() {
        let caps = Caps::default();
        for q in [3, 5, 7, 11] {
            let w = s3_witness(q, &caps).unwrap();
            assert_eq!(w.group.order(), 6);
            assert!(w.is_valid(), "q = {q}");
            assert_eq!(w.sigma.mul(&w.tau).unwrap().order(), 3);
        }
        assert!(s3_witness(2, &caps).is_err());
        assert!(s3_witness(9, &caps).is_err());
    }

    #[test]
    fn cyclic_witness_both_branches() {
        let caps = Caps::default();
        let gl = |n| FiniteGroup::gl2(n, &caps).unwrap();
        let ctx = EntContext::full_product(&gl(2), &gl(3), &caps).unwrap();
        for ell in [2, 3] {
            let h = cyclic_witness(&ctx, ell).unwrap();
            assert_eq!(h.order() as u64, ell);
        }
        assert!(cyclic_witness(&ctx, 5).is_err());
        let w = s3_witness(3, &caps).unwrap();
        let h = w.in_context(&ctx).unwrap();
        assert_eq!(ctx.base_change_type(&h).unwrap().to_string(), "S3");
    }
}
