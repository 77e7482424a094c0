//! Entanglement types of subgroups of a mod-pq image, entangling
//! subgroups, cyclic and S3 witnesses, and Ent sets.

mod context;
mod entangling;
mod entset;
mod witness;

use std::sync::Arc;

pub use context::{split_modulus, EntContext};
pub use entangling::{entangling_subgroups, groupcomp_verify, Entangling, EntanglingRecord};
pub use entset::{
    classify_2q, ent_set, ent_set_direct, ent_set_goursat, ent_set_kernels, materialize_section_witness,
    section_spectrum, two_q_bound, Classification, ContextSummary, EntEntry, EntReport, Section, Strategy,
    Witness,
};
pub use witness::{cyclic_witness, s3_generators, s3_witness, S3Witness};

use crate::group::{quotient_group, Subgroup};
use crate::group_id::{identify, IsoClass};
use crate::matmod::{gcd, gl2_order, is_prime};

/// Class of `H / <H ∩ N_p, H ∩ N_q>` for `N_p`, `N_q` normal in the parent
/// of `H`.
pub fn section_type(h: &Subgroup, n_p: &Subgroup, n_q: &Subgroup) -> IsoClass {
    let k = h.intersection(n_p).join(&h.intersection(n_q));
    let n = (h.order() / k.order()) as u64;
    if n == 1 || is_prime(n as u32) {
        return IsoClass::cyclic(n);
    }
    identify(&Arc::new(quotient_group(h, &k).expect("kernel join is normal in H")))
}

/// `gcd(|GL2(Z/p)|, |GL2(Z/q)|)`.
pub fn gl2_gcd(p: u32, q: u32) -> u64 {
    gcd(gl2_order(p), gl2_order(q))
}

/// For primes `p < q`: the gcd is divisible by 6, and by `p` when
/// `q ≡ ±1 (mod p)`.
pub fn gl2_gcd_check(p: u32, q: u32) -> bool {
    let g = gl2_gcd(p, q);
    let by_p = q % p != 1 && q % p != p - 1 || g % p as u64 == 0;
    g % 6 == 0 && by_p
}
