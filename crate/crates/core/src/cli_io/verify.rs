//! The reproduction matrix behind `verify-paper`, run on bundled fixtures.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::fixtures::fixture;
use crate::entangle::{
    classify_2q, cyclic_witness, ent_set_direct, ent_set_goursat, ent_set_kernels, entangling_subgroups,
    gl2_gcd_check, groupcomp_verify, s3_witness, EntContext,
};
use crate::error::Result;
use crate::group::{
    direct_product, enumerate_subgroups, normal_subgroups, Caps, Enumeration, FiniteGroup, LatticeStore, Subgroup,
};
use crate::group_id::{catalog_models, IsoClass};
use crate::matmod::is_prime;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn run_check(id: u32, name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let start = Instant::now();
    let (passed, detail) = match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(Ok(r)) => r,
        Ok(Err(e)) => (false, format!("error: {e}")),
        Err(_) => (false, "panicked".into()),
    };
    CheckResult {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

fn context(name: &str, caps: &Caps) -> Result<EntContext> {
    fixture(name)?.build(caps)?.require_context().cloned()
}

fn labels(classes: &[IsoClass]) -> Vec<String> {
    classes.iter().map(|c| c.to_string()).collect()
}

fn parse_all(names: &[&str]) -> Vec<IsoClass> {
    names.iter().map(|s| s.parse().expect("valid label")).collect()
}

fn gl2(n: u32, caps: &Caps) -> Result<Arc<FiniteGroup>> {
    Ok(Arc::new(FiniteGroup::gl2(n, caps)?))
}

pub const SECTION_FIVE_SMALL: &[&str] = &["1", "Z/2", "Z/3", "Z/4", "Z/2xZ/2", "Z/6", "Z/8", "S3", "D4", "Q8"];
pub const SECTION_FIVE_LARGE: &[&str] = &["D6", "SD16", "SL2(3)", "GL2(3)"];

/// Entangling subgroups of `S3 x_{Z/2} S3`.
pub fn check_entangling_example(caps: &Caps) -> Result<(bool, String)> {
    let ctx = context("fiber-z2-s3-s3", caps)?;
    let found = entangling_subgroups(&ctx.group, &ctx.n_p, &ctx.n_q, Enumeration::UpToConjugacy, caps)?;
    let mut types: Vec<String> = found
        .iter()
        .map(|e| e.class.as_ref().map_or("?".into(), |c| c.to_string()))
        .collect();
    types.sort();
    let trivial = found.iter().all(|e| e.meet_order == 1);
    let ok = ctx.group.order() == 18 && types == ["S3", "S3", "Z/2", "Z/3", "Z/3"] && trivial;
    Ok((ok, format!("|F| = {}, {} classes: {types:?}, meets trivial: {trivial}", ctx.group.order(), found.len())))
}

pub fn check_surjective_two_q(caps: &Caps, store: Option<&dyn LatticeStore>) -> Result<(bool, String)> {
    let want = ["1", "Z/2", "Z/3", "S3"];
    let ctx = context("prod-gl2-2-gl2-3", caps)?;
    let direct = labels(&ent_set_direct(&ctx, caps, store)?.classes());
    let mut ok = ctx.group.order() == 288 && direct == want;
    let mut detail = format!("direct(288) {direct:?}");
    let s3 = gl2(2, caps)?;
    for q in [3, 5, 7] {
        let got = labels(&ent_set_goursat(&s3, &gl2(q, caps)?, caps, store)?.classes());
        ok &= got == want;
        detail.push_str(&format!("; goursat q={q} {got:?}"));
    }
    Ok((ok, detail))
}

pub fn check_degenerate_two_q(caps: &Caps, store: Option<&dyn LatticeStore>) -> Result<(bool, String)> {
    let cases = [
        ("im2-cyclic3-gl2-3", vec!["1", "Z/3"]),
        ("im2-cyclic2-gl2-3", vec!["1", "Z/2"]),
        ("im2-trivial-gl2-3", vec!["1"]),
        ("prod-gl2-2-gl2-3", vec!["1", "Z/2", "Z/3", "S3"]),
        ("prod-gl2-2-gl2-5", vec!["1", "Z/2", "Z/3", "S3"]),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, want) in cases {
        let c = classify_2q(&context(name, caps)?, true, caps, store)?;
        let got = labels(c.computed.as_deref().unwrap_or_default());
        let case_ok = got == want
            && c.matches_prediction == Some(true)
            && c.z6_absent == Some(true)
            && c.within_bound == Some(true);
        ok &= case_ok;
        parts.push(format!("{name} {got:?}"));
    }
    Ok((ok, parts.join("; ")))
}

/// Containment of the listed types in `Ent(GL2(3) x GL2(q))`.
pub fn check_three_q(q: u32, caps: &Caps, store: Option<&dyn LatticeStore>) -> Result<(bool, String)> {
    let mut want = parse_all(SECTION_FIVE_SMALL);
    if q == 11 || q == 17 {
        want.extend(parse_all(SECTION_FIVE_LARGE));
    }
    let report = ent_set_goursat(&gl2(3, caps)?, &gl2(q, caps)?, caps, store)?;
    let missing: Vec<String> = want.iter().filter(|c| !report.contains(c)).map(|c| c.to_string()).collect();
    Ok((
        missing.is_empty(),
        format!("q={q}: {} types found, missing {missing:?}", report.entries.len()),
    ))
}

pub const WITNESS_CONTEXTS: &[&str] = &[
    "prod-gl2-2-gl2-3",
    "prod-gl2-2-gl2-5",
    "prod-gl2-3-gl2-5",
    "fiber-z2-gl2-2-gl2-3",
    "fiber-s3-gl2-2-gl2-3",
    "fiber-z2-s3-s3",
    "im2-cyclic2-gl2-3",
    "im2-cyclic3-gl2-3",
    "fiber-z2-gl2-3-gl2-5",
];

pub fn check_cyclic_witnesses(caps: &Caps) -> Result<(bool, String)> {
    let (mut total, mut quotient_branch, mut kernel_branch) = (0, 0, 0);
    let mut ok = true;
    for name in WITNESS_CONTEXTS {
        let ctx = context(name, caps)?;
        let d = ctx.d_value();
        for ell in (2..=d).filter(|&l| d % l == 0 && is_prime(l as u32)) {
            let h = cyclic_witness(&ctx, ell)?;
            let h = Subgroup::from_members(&ctx.group, h.members())?;
            ok &= ctx.base_change_type(&h)? == IsoClass::cyclic(ell);
            total += 1;
            if ctx.type_order() as u64 % ell == 0 {
                quotient_branch += 1;
            } else {
                kernel_branch += 1;
            }
        }
    }
    ok &= quotient_branch > 0 && kernel_branch > 0;
    Ok((
        ok,
        format!(
            "{} contexts, {total} witnesses ({quotient_branch} with ell | |G/J|, {kernel_branch} with ell not dividing)",
            WITNESS_CONTEXTS.len()
        ),
    ))
}

pub const SMALL_CONTEXTS: &[&str] = &[
    "prod-gl2-2-gl2-3",
    "fiber-z2-gl2-2-gl2-3",
    "fiber-s3-gl2-2-gl2-3",
    "fiber-z2-s3-s3",
    "im2-cyclic3-gl2-3",
    "im2-cyclic2-gl2-3",
    "im2-trivial-gl2-3",
];

/// Divisibility and the degree identity over every subgroup of each small
/// context.
pub fn check_exhaustive_identities(caps: &Caps) -> Result<(bool, usize)> {
    let mut checked = 0;
    for name in SMALL_CONTEXTS {
        let ctx = context(name, caps)?;
        for h in enumerate_subgroups(&ctx.group, Enumeration::All, caps)? {
            if !(ctx.divisibility_check(&h) && ctx.lk_identity_check(&h)) {
                return Ok((false, checked));
            }
            checked += 1;
        }
    }
    Ok((true, checked))
}

/// Type is constant on conjugacy classes: random `(context, H, x)`.
pub fn check_conjugation_invariance(caps: &Caps, instances: usize, seed: u64) -> Result<bool> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut pools = Vec::new();
    for name in SMALL_CONTEXTS {
        let ctx = context(name, caps)?;
        let subs = enumerate_subgroups(&ctx.group, Enumeration::All, caps)?;
        pools.push((ctx, subs));
    }
    for _ in 0..instances {
        let (ctx, subs) = &pools[rng.random_range(0..pools.len())];
        let h = &subs[rng.random_range(0..subs.len())];
        let x = rng.random_range(0..ctx.group.order()) as u32;
        if ctx.base_change_type(h)? != ctx.base_change_type(&h.conjugate(x))? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn small_groups(caps: &Caps) -> Result<Vec<(String, Arc<FiniteGroup>)>> {
    let mut out: Vec<(String, Arc<FiniteGroup>)> = [2, 3, 4, 6]
        .iter()
        .map(|&n| (format!("Z/{n}"), Arc::new(FiniteGroup::cyclic(n))))
        .collect();
    for m in catalog_models() {
        out.push((m.entry.name.to_string(), m.group.regular_representation(caps).map(Arc::new)?));
    }
    Ok(out)
}

/// `H` entangling for normal `G1`, `G2` implies `<H, G1 ∩ G2>` entangling,
/// over random products, normal pairs and entangling subgroups.
pub fn check_groupcomp(caps: &Caps, instances: usize, seed: u64) -> Result<(bool, usize)> {
    let groups = small_groups(caps)?;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut memo: HashMap<(usize, usize, usize, usize), Vec<Subgroup>> = HashMap::new();
    let mut products: HashMap<(usize, usize), (Arc<FiniteGroup>, Vec<Subgroup>)> = HashMap::new();
    let mut done = 0;
    let mut attempts = 0;
    while done < instances {
        attempts += 1;
        if attempts > 50 * instances {
            return Ok((false, done));
        }
        let i = rng.random_range(0..groups.len());
        let j = rng.random_range(0..groups.len());
        if groups[i].1.order() * groups[j].1.order() > 96 {
            continue;
        }
        let (f, normals) = match products.get(&(i, j)) {
            Some(v) => v.clone(),
            None => {
                let p = direct_product(&groups[i].1, &groups[j].1, caps)?;
                let ns = normal_subgroups(&Subgroup::whole(&p.group));
                products.insert((i, j), (p.group.clone(), ns.clone()));
                (p.group, ns)
            }
        };
        let a = rng.random_range(0..normals.len());
        let b = rng.random_range(0..normals.len());
        let hs = memo.entry((i, j, a, b)).or_insert_with(|| {
            entangling_subgroups(&f, &normals[a], &normals[b], Enumeration::All, caps)
                .map(|v| v.into_iter().map(|e| e.subgroup).collect())
                .unwrap_or_default()
        });
        if hs.is_empty() {
            continue;
        }
        let h = &hs[rng.random_range(0..hs.len())];
        if !groupcomp_verify(&f, &normals[a], &normals[b], h)? {
            return Ok((false, done));
        }
        done += 1;
    }
    Ok((true, done))
}

/// Goursat and direct Ent sets agree on products of small groups.
pub fn check_goursat_vs_direct(caps: &Caps, max_order: usize) -> Result<(bool, usize, Vec<String>)> {
    let groups = small_groups(caps)?;
    let mut pairs = 0;
    let mut failures = Vec::new();
    for (i, (na, a)) in groups.iter().enumerate() {
        for (nb, b) in &groups[i..] {
            if a.order() * b.order() > max_order {
                continue;
            }
            let p = direct_product(a, b, caps)?;
            let (direct, _, _) = ent_set_kernels(&p.group, &p.right, &p.left, caps, None)?;
            let direct: Vec<IsoClass> = direct.into_iter().map(|e| e.class).collect();
            let goursat = ent_set_goursat(a, b, caps, None)?.classes();
            if direct != goursat {
                failures.push(format!("{na} x {nb}"));
            }
            pairs += 1;
        }
    }
    Ok((failures.is_empty(), pairs, failures))
}

/// Number of subsets of `g` closed under multiplication. For a finite
/// group these are exactly the subgroups; checked by bitmask over all
/// subsets containing the identity.
pub fn brute_force_subgroup_count(g: &FiniteGroup) -> u64 {
    let n = g.order();
    assert!(n <= 25, "exhaustive oracle is for tiny groups");
    let e = g.identity() as usize;
    let others: Vec<usize> = (0..n).filter(|&i| i != e).collect();
    let table: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).map(|b| g.mul(a as u32, b as u32) as usize).collect())
        .collect();
    let mut count = 0;
    for bits in 0u64..(1u64 << others.len()) {
        let mut mask = 1u64 << e;
        for (k, &x) in others.iter().enumerate() {
            if bits >> k & 1 == 1 {
                mask |= 1 << x;
            }
        }
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let closed = members
            .iter()
            .all(|&a| members.iter().all(|&b| mask >> table[a][b] & 1 == 1));
        if closed {
            count += 1;
        }
    }
    count
}

/// S4 as permutations of four points.
pub fn symmetric_four(caps: &Caps) -> Result<FiniteGroup> {
    FiniteGroup::from_permutations(&[vec![1, 0, 2, 3], vec![1, 2, 3, 0]], 4, caps)
}

pub fn check_engine_soundness(caps: &Caps) -> Result<(bool, String)> {
    let model = |name: &str| {
        catalog_models()
            .iter()
            .find(|m| m.entry.name == name)
            .map(|m| m.group.clone())
            .expect("catalog group")
    };
    let cases: Vec<(&str, Arc<FiniteGroup>, u64)> = vec![
        ("S3", gl2(2, caps)?, 6),
        ("Z/12", Arc::new(FiniteGroup::cyclic(12)), 6),
        ("Q8", model("Q8"), 6),
        ("D4", model("D4"), 10),
        ("S4", Arc::new(symmetric_four(caps)?), 30),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, g, expected) in cases {
        let engine = enumerate_subgroups(&g, Enumeration::All, caps)?.len() as u64;
        let oracle = if g.order() <= 12 { Some(brute_force_subgroup_count(&g)) } else { None };
        ok &= engine == expected && oracle.is_none_or(|o| o == expected);
        parts.push(format!("{name} {engine}"));
    }
    for q in [3, 5, 7, 11] {
        let w = s3_witness(q, caps)?;
        ok &= w.is_valid();
        parts.push(format!("S3 witness q={q} {}", if w.is_valid() { "ok" } else { "bad" }));
    }
    Ok((ok, parts.join(", ")))
}

pub fn check_gcd_arithmetic() -> (bool, usize) {
    let primes: Vec<u32> = (2..50).filter(|&n| is_prime(n)).collect();
    let mut pairs = 0;
    for (i, &p) in primes.iter().enumerate() {
        for &q in &primes[i + 1..] {
            if !gl2_gcd_check(p, q) {
                return (false, pairs);
            }
            pairs += 1;
        }
    }
    (true, pairs)
}

/// Caps for the opt-in large targets.
pub fn stretch_caps() -> Caps {
    Caps {
        order: 100_000,
        enumerate_classes: 100_000,
        ..Caps::default()
    }
}

/// Runs the full matrix. `stretch` adds the `GL2(3) x GL2(q)` targets for
/// q in {7, 11, 13, 17}.
pub fn run_all(caps: &Caps, store: Option<&dyn LatticeStore>, stretch: bool) -> Vec<CheckResult> {
    let mut out = vec![
        run_check(1, "entangling subgroups of S3 x_{Z/2} S3", || check_entangling_example(caps)),
        run_check(2, "(2,q) Ent set, surjective images", || check_surjective_two_q(caps, store)),
        run_check(3, "(2,q) Ent set, degenerate mod-2 images", || check_degenerate_two_q(caps, store)),
        run_check(4, "(3,5) Ent set contains the listed types", || check_three_q(5, caps, store)),
        run_check(5, "cyclic witnesses for every prime dividing d", || check_cyclic_witnesses(caps)),
        run_check(6, "type identities and Goursat agreement", || {
            let (ident, checked) = check_exhaustive_identities(caps)?;
            let conj = check_conjugation_invariance(caps, 1000, 1)?;
            let (comp, comp_n) = check_groupcomp(caps, 1000, 2)?;
            let (gour, pairs, failures) = check_goursat_vs_direct(caps, 400)?;
            Ok((
                ident && conj && comp && gour,
                format!(
                    "{checked} subgroups exhaustively, conjugation {conj}, groupcomp {comp_n} instances {comp}, \
                     {pairs} Goursat pairs (failures {failures:?})"
                ),
            ))
        }),
        run_check(7, "subgroup counts and S3 witnesses", || check_engine_soundness(caps)),
        run_check(8, "gcd of GL2 orders for primes below 50", || {
            let (ok, pairs) = check_gcd_arithmetic();
            Ok((ok, format!("{pairs} prime pairs")))
        }),
    ];
    if stretch {
        let big = stretch_caps();
        for q in [7, 11, 13, 17] {
            out.push(run_check(100 + q, "(3,q) Ent set contains the listed types (stretch)", || {
                check_three_q(q, &big, store)
            }));
        }
    }
    out
}

/// Pass and fail counts.
pub fn summarize(results: &[CheckResult]) -> BTreeMap<&'static str, usize> {
    let passed = results.iter().filter(|r| r.passed).count();
    BTreeMap::from([("passed", passed), ("failed", results.len() - passed)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_counts() {
        let caps = Caps::default();
        assert_eq!(brute_force_subgroup_count(&FiniteGroup::gl2(2, &caps).unwrap()), 6);
        assert_eq!(brute_force_subgroup_count(&FiniteGroup::cyclic(12)), 6);
        assert_eq!(brute_force_subgroup_count(&FiniteGroup::cyclic(7)), 2);
    }

    #[test]
    fn quick_checks() {
        let caps = Caps::default();
        assert!(check_entangling_example(&caps).unwrap().0);
        assert!(check_gcd_arithmetic().0);
        assert!(check_engine_soundness(&caps).unwrap().0);
    }
}
