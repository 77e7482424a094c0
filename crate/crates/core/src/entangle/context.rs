use std::sync::Arc;

use super::section_type;
use crate::error::{Error, Result};
use crate::group::{Caps, Elem, FiniteGroup, Subgroup};
use crate::group_id::IsoClass;
use crate::matmod::{gcd, is_prime, prime_factors, Mat2};

/// A subgroup `G` of `GL2(Z/pq)` with the kernels of reduction mod `p` and
/// mod `q`.
#[derive(Clone, Debug)]
pub struct EntContext {
    pub p: u32,
    pub q: u32,
    pub group: Arc<FiniteGroup>,
    /// `G ∩ ker(mod p)`.
    pub n_p: Subgroup,
    /// `G ∩ ker(mod q)`.
    pub n_q: Subgroup,
    /// `<N_p, N_q>`.
    pub join: Subgroup,
    /// Image of `G` mod `p`, isomorphic to `G / N_p`.
    pub image_p: Arc<FiniteGroup>,
    /// Image of `G` mod `q`, isomorphic to `G / N_q`.
    pub image_q: Arc<FiniteGroup>,
}

/// Splits a squarefree modulus `pq` into its two primes, smaller first.
pub fn split_modulus(n: u32) -> Result<(u32, u32)> {
    match prime_factors(n).as_slice() {
        &[p, q] if p * q == n => Ok((p, q)),
        _ => Err(Error::Precondition(format!(
            "modulus {n} is not a product of two distinct primes"
        ))),
    }
}

fn check_primes(p: u32, q: u32) -> Result<()> {
    if p == q {
        return Err(Error::Precondition(format!("p and q must be distinct, both are {p}")));
    }
    for r in [p, q] {
        if !is_prime(r) {
            return Err(Error::Precondition(format!("{r} is not prime")));
        }
    }
    Ok(())
}

fn kernel(g: &Arc<FiniteGroup>, r: u32) -> Subgroup {
    let members: Vec<Elem> = g
        .elements()
        .filter(|&x| {
            g.matrix(x)
                .and_then(|m| m.reduce_to(r).ok())
                .is_some_and(|m| m.is_identity())
        })
        .collect();
    Subgroup::from_members(g, &members).expect("reduction kernel is a subgroup")
}

fn image(g: &FiniteGroup, r: u32, caps: &Caps) -> Result<FiniteGroup> {
    let gens: Vec<Mat2> = g
        .generators()
        .iter()
        .map(|&x| g.matrix(x).expect("matrix group").reduce_to(r))
        .collect::<Result<_>>()?;
    FiniteGroup::generate(&gens, r, caps)
}

impl EntContext {
    /// Context for a matrix group mod `pq`.
    pub fn from_group(group: Arc<FiniteGroup>, p: u32, q: u32, caps: &Caps) -> Result<Self> {
        check_primes(p, q)?;
        let modulus = group
            .modulus()
            .ok_or_else(|| Error::Precondition("context group must consist of matrices".into()))?;
        if modulus != p * q {
            return Err(Error::BadSplit { modulus, p, q });
        }
        let n_p = kernel(&group, p);
        let n_q = kernel(&group, q);
        if !n_p.is_normal() || !n_q.is_normal() {
            return Err(Error::NotNormal("reduction kernel".into()));
        }
        if !n_p.intersection(&n_q).is_trivial() {
            return Err(Error::Precondition("N_p and N_q intersect nontrivially".into()));
        }
        let join = n_p.join(&n_q);
        let image_p = Arc::new(image(&group, p, caps)?);
        let image_q = Arc::new(image(&group, q, caps)?);
        assert_eq!(image_p.order() * n_p.order(), group.order());
        assert_eq!(image_q.order() * n_q.order(), group.order());
        Ok(EntContext {
            p,
            q,
            group,
            n_p,
            n_q,
            join,
            image_p,
            image_q,
        })
    }

    /// Mode (a): generators of `G <= GL2(Z/pq)`.
    pub fn from_generators(generators: &[Mat2], p: u32, q: u32, caps: &Caps) -> Result<Self> {
        check_primes(p, q)?;
        let group = FiniteGroup::generate(generators, p * q, caps)?;
        Self::from_group(Arc::new(group), p, q, caps)
    }

    /// Mode (b): `A <= GL2(Z/p)` and `B <= GL2(Z/q)` with no entanglement,
    /// so `G` is the CRT image of `A x B`.
    pub fn full_product(a: &FiniteGroup, b: &FiniteGroup, caps: &Caps) -> Result<Self> {
        let (Some(p), Some(q)) = (a.modulus(), b.modulus()) else {
            return Err(Error::Precondition("factors must be matrix groups".into()));
        };
        check_primes(p, q)?;
        let order = a.order() * b.order();
        if order > caps.order {
            return Err(Error::cap("full product context", order, caps.order));
        }
        let (ip, iq) = (Mat2::identity(p)?, Mat2::identity(q)?);
        let mut gens = Vec::new();
        for &x in a.generators() {
            gens.push(Mat2::crt_join(&a.matrix(x).expect("matrix group"), &iq)?);
        }
        for &y in b.generators() {
            gens.push(Mat2::crt_join(&ip, &b.matrix(y).expect("matrix group"))?);
        }
        let ctx = Self::from_generators(&gens, p, q, caps)?;
        assert_eq!(ctx.group.order(), order);
        assert_eq!(ctx.join.order(), order, "full product has trivial entanglement");
        Ok(ctx)
    }

    pub fn modulus(&self) -> u32 {
        self.p * self.q
    }

    /// `gcd(|G/N_p|, |G/N_q|)`.
    pub fn d_value(&self) -> u64 {
        gcd(self.image_p.order() as u64, self.image_q.order() as u64)
    }

    /// `<H ∩ N_p, H ∩ N_q>`, normal in `H`.
    pub fn base_change_kernel(&self, h: &Subgroup) -> Subgroup {
        h.intersection(&self.n_p).join(&h.intersection(&self.n_q))
    }

    /// `|H / <H ∩ N_p, H ∩ N_q>|`.
    pub fn base_change_order(&self, h: &Subgroup) -> usize {
        h.order() / self.base_change_kernel(h).order()
    }

    fn check_member(&self, h: &Subgroup) -> Result<()> {
        if !Arc::ptr_eq(h.parent(), &self.group) {
            return Err(Error::NotSubgroup("subgroup does not belong to the context group".into()));
        }
        Ok(())
    }

    /// Isomorphism class of `H / <H ∩ N_p, H ∩ N_q>`.
    pub fn base_change_type(&self, h: &Subgroup) -> Result<IsoClass> {
        self.check_member(h)?;
        Ok(section_type(h, &self.n_p, &self.n_q))
    }

    /// Type of `G` itself.
    pub fn entanglement_type(&self) -> IsoClass {
        self.base_change_type(&Subgroup::whole(&self.group))
            .expect("G belongs to its context")
    }

    /// `|G / <N_p, N_q>|`.
    pub fn type_order(&self) -> usize {
        self.join.index()
    }

    /// Whether the base-change type of `H` has order dividing `d`.
    pub fn divisibility_check(&self, h: &Subgroup) -> bool {
        self.d_value() % self.base_change_order(h) as u64 == 0
    }

    /// `|type(H)| [G:<H,N_p>] [G:<H,N_q>] = |type(G)| [G:H]`.
    pub fn lk_identity_check(&self, h: &Subgroup) -> bool {
        let lhs = self.base_change_order(h) * h.join(&self.n_p).index() * h.join(&self.n_q).index();
        let rhs = self.type_order() * h.index();
        lhs == rhs
    }

    /// Whether `G` is the full product of its two images.
    pub fn is_full_product(&self) -> bool {
        self.type_order() == 1
    }

    /// The element of `G` with the given matrix.
    pub fn element(&self, m: &Mat2) -> Result<Elem> {
        self.group
            .index_of_matrix(m)
            .ok_or_else(|| Error::NotSubgroup(format!("{m} is not in G")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl2(n: u32) -> FiniteGroup {
        FiniteGroup::gl2(n, &Caps::default()).unwrap()
    }

    #[test]
    fn full_product_structure() {
        let caps = Caps::default();
        let ctx = EntContext::full_product(&gl2(2), &gl2(3), &caps).unwrap();
        assert_eq!(ctx.group.order(), 288);
        assert_eq!(ctx.n_p.order(), 48);
        assert_eq!(ctx.n_q.order(), 6);
        assert_eq!(ctx.d_value(), 6);
        assert_eq!(ctx.entanglement_type(), IsoClass::trivial());
        assert_eq!(ctx.base_change_type(&ctx.n_p).unwrap(), IsoClass::trivial());
        assert!(ctx.lk_identity_check(&Subgroup::whole(&ctx.group)));
    }

    #[test]
    fn bad_contexts() {
        let caps = Caps::default();
        assert!(EntContext::full_product(&gl2(3), &gl2(3), &caps).is_err());
        assert!(EntContext::from_generators(&[], 3, 3, &caps).is_err());
        assert!(EntContext::from_generators(&[], 2, 4, &caps).is_err());
        assert_eq!(split_modulus(15).unwrap(), (3, 5));
        assert!(split_modulus(12).is_err());
        assert!(split_modulus(7).is_err());
    }

    #[test]
    fn trivial_mod_2_image() {
        let caps = Caps::default();
        let triv = FiniteGroup::generate(&[], 2, &caps).unwrap();
        let ctx = EntContext::full_product(&triv, &gl2(3), &caps).unwrap();
        assert_eq!(ctx.d_value(), 1);
        let ctx = EntContext::full_product(&gl2(3), &gl2(5), &caps).unwrap();
        assert_eq!(ctx.d_value(), 48);
    }
}
