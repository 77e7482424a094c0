//! JSON group specifications.

use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::entangle::{split_modulus, EntContext};
use crate::error::{Error, Result};
use crate::group::iso::find_isomorphism;
use crate::group::{normal_structure, quotient_group, Caps, Elem, FiniteGroup, Subgroup};
use crate::matmod::{Mat2, MAX_MODULUS};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Gl2 {
        modulus: u32,
    },
    Sl2 {
        modulus: u32,
    },
    Generators {
        modulus: u32,
        matrices: Vec<[[u32; 2]; 2]>,
    },
    /// Full product of a mod-`p` and a mod-`q` group.
    Product {
        p: u32,
        q: u32,
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
    },
    /// Fiber product over a common quotient of the given order.
    Fiber {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
        quotient_order: usize,
    },
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::spec(path, format!("missing field \"{key}\"")))
}

fn uint(v: &Value, path: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::spec(path, "expected a non-negative integer"))
}

fn modulus(obj: &serde_json::Map<String, Value>, path: &str) -> Result<u32> {
    let p = format!("{path}.modulus");
    let n = uint(field(obj, "modulus", path)?, &p)?;
    if !(2..=MAX_MODULUS as u64).contains(&n) {
        return Err(Error::spec(p, format!("modulus {n} out of range 2..={MAX_MODULUS}")));
    }
    Ok(n as u32)
}

fn matrix(v: &Value, n: u32, path: &str) -> Result<[[u32; 2]; 2]> {
    let shape = || Error::spec(path, "expected [[a,b],[c,d]] with integer entries");
    let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(shape)?;
    let mut out = [[0i64; 2]; 2];
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().filter(|r| r.len() == 2).ok_or_else(shape)?;
        for (j, e) in row.iter().enumerate() {
            out[i][j] = e.as_i64().ok_or_else(shape)?;
        }
    }
    let m = Mat2::from_rows(out, n).map_err(|e| Error::spec(path, e.to_string()))?;
    Ok(m.rows())
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::spec("$", format!("malformed JSON: {e}")))?;
        Self::from_value(&v, "$")
    }

    pub fn from_value(v: &Value, path: &str) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::spec(path, "expected an object"))?;
        let kind = field(obj, "kind", path)?
            .as_str()
            .ok_or_else(|| Error::spec(format!("{path}.kind"), "expected a string"))?;
        let sub = |key: &str| -> Result<Box<GroupSpec>> {
            let p = format!("{path}.{key}");
            Ok(Box::new(Self::from_value(field(obj, key, path)?, &p)?))
        };
        let spec = match kind {
            "gl2" => GroupSpec::Gl2 {
                modulus: modulus(obj, path)?,
            },
            "sl2" => GroupSpec::Sl2 {
                modulus: modulus(obj, path)?,
            },
            "generators" => {
                let n = modulus(obj, path)?;
                let p = format!("{path}.matrices");
                let list = field(obj, "matrices", path)?
                    .as_array()
                    .ok_or_else(|| Error::spec(&p, "expected an array of matrices"))?;
                let matrices = list
                    .iter()
                    .enumerate()
                    .map(|(i, m)| matrix(m, n, &format!("{p}[{i}]")))
                    .collect::<Result<_>>()?;
                GroupSpec::Generators { modulus: n, matrices }
            }
            "product" => GroupSpec::Product {
                p: uint(field(obj, "p", path)?, &format!("{path}.p"))? as u32,
                q: uint(field(obj, "q", path)?, &format!("{path}.q"))? as u32,
                left: sub("left")?,
                right: sub("right")?,
            },
            "fiber" => GroupSpec::Fiber {
                left: sub("left")?,
                right: sub("right")?,
                quotient_order: uint(field(obj, "quotient_order", path)?, &format!("{path}.quotient_order"))? as usize,
            },
            other => {
                return Err(Error::spec(
                    format!("{path}.kind"),
                    format!("unknown kind \"{other}\" (expected gl2, sl2, generators, product or fiber)"),
                ))
            }
        };
        Ok(spec)
    }

    /// Canonical JSON: fixed key order, reduced matrix entries, no spaces.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    /// SHA-256 of the canonical JSON, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_canonical_json().as_bytes()))
    }

    /// Modulus of the matrices the spec describes.
    pub fn modulus(&self) -> u32 {
        match self {
            GroupSpec::Gl2 { modulus } | GroupSpec::Sl2 { modulus } | GroupSpec::Generators { modulus, .. } => *modulus,
            GroupSpec::Product { p, q, .. } => p * q,
            GroupSpec::Fiber { left, right, .. } => left.modulus() * right.modulus(),
        }
    }

    pub fn build(&self, caps: &Caps) -> Result<Built> {
        match self {
            GroupSpec::Gl2 { modulus } => Built::plain(FiniteGroup::gl2(*modulus, caps)?, caps),
            GroupSpec::Sl2 { modulus } => Built::plain(FiniteGroup::sl2(*modulus, caps)?, caps),
            GroupSpec::Generators { modulus, matrices } => {
                let mats: Vec<Mat2> = matrices
                    .iter()
                    .map(|rows| Mat2::from_rows(rows.map(|r| r.map(i64::from)), *modulus))
                    .collect::<Result<_>>()?;
                Built::plain(FiniteGroup::generate(&mats, *modulus, caps)?, caps)
            }
            GroupSpec::Product { p, q, left, right } => {
                let a = left.build(caps)?.group;
                let b = right.build(caps)?.group;
                if a.modulus() != Some(*p) || b.modulus() != Some(*q) {
                    return Err(Error::spec(
                        "$",
                        format!("product factors must have moduli p = {p} and q = {q}"),
                    ));
                }
                let ctx = EntContext::full_product(&a, &b, caps)?;
                Ok(Built {
                    group: ctx.group.clone(),
                    context: Some(ctx),
                    factors: Some((a, b)),
                })
            }
            GroupSpec::Fiber {
                left,
                right,
                quotient_order,
            } => {
                let a = left.build(caps)?.group;
                let b = right.build(caps)?.group;
                let group = fiber_matrices(&a, &b, *quotient_order, caps)?;
                Built::plain(group, caps)
            }
        }
    }
}

/// A built spec: the group, its context when the modulus is `pq`, and the
/// two factors when the spec is a full product.
#[derive(Clone, Debug)]
pub struct Built {
    pub group: Arc<FiniteGroup>,
    pub context: Option<EntContext>,
    pub factors: Option<(Arc<FiniteGroup>, Arc<FiniteGroup>)>,
}

impl Built {
    fn plain(group: FiniteGroup, caps: &Caps) -> Result<Built> {
        let group = Arc::new(group);
        let context = match group.modulus().map(split_modulus) {
            Some(Ok((p, q))) => Some(EntContext::from_group(group.clone(), p, q, caps)?),
            _ => None,
        };
        Ok(Built {
            group,
            context,
            factors: None,
        })
    }

    pub fn require_context(&self) -> Result<&EntContext> {
        self.context.as_ref().ok_or_else(|| {
            Error::Precondition(format!(
                "this command needs a group mod pq with p, q distinct primes; modulus is {:?}",
                self.group.modulus()
            ))
        })
    }
}

/// `A x_Q B` realized mod `pq` via CRT, for the first (in canonical order)
/// pair of normal subgroups with isomorphic quotients of order `m`.
fn fiber_matrices(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>, m: usize, caps: &Caps) -> Result<FiniteGroup> {
    let (Some(p), Some(q)) = (a.modulus(), b.modulus()) else {
        return Err(Error::spec("$", "fiber factors must be matrix groups"));
    };
    if crate::matmod::gcd(p as u64, q as u64) != 1 {
        return Err(Error::spec("$", format!("fiber factor moduli {p} and {q} are not coprime")));
    }
    let of_index = |g: &Arc<FiniteGroup>| -> Vec<Subgroup> {
        normal_structure(&Subgroup::whole(g))
            .normal_subgroups
            .into_iter()
            .filter(|n| n.index() == m)
            .collect()
    };
    for na in of_index(a) {
        for nb in of_index(b) {
            let wa = Subgroup::whole(a);
            let wb = Subgroup::whole(b);
            let qa = quotient_group(&wa, &na)?;
            let qb = quotient_group(&wb, &nb)?;
            let Some(phi) = find_isomorphism(&qa, &qb) else {
                continue;
            };
            let fiber = crate::group::fiber_product(a, &na, b, &nb, &phi)?;
            let crate::group::Carrier::Pairs { elements, .. } = fiber.carrier() else {
                unreachable!("fiber products are pair groups")
            };
            let gens: Vec<Mat2> = fiber
                .generators()
                .iter()
                .map(|&i| {
                    let (x, y): (Elem, Elem) = elements[i as usize];
                    Mat2::crt_join(&a.matrix(x).expect("matrix"), &b.matrix(y).expect("matrix"))
                })
                .collect::<Result<_>>()?;
            let group = FiniteGroup::generate(&gens, p * q, caps)?;
            assert_eq!(group.order(), fiber.order());
            return Ok(group);
        }
    }
    Err(Error::spec(
        "$.quotient_order",
        format!("the factors have no common quotient of order {m}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let caps = Caps::default();
        let g = GroupSpec::parse(r#"{"kind":"gl2","modulus":2}"#).unwrap();
        assert_eq!(g.build(&caps).unwrap().group.order(), 6);
        // the matrices as printed generate a group of order 20
        let printed = r#"{"kind":"generators","modulus":5,"matrices":[[[1,1],[0,4]],[[4,1],[0,1]]]}"#;
        assert_eq!(GroupSpec::parse(printed).unwrap().build(&caps).unwrap().group.order(), 20);
        let repaired = r#"{"kind":"generators","modulus":5,"matrices":[[[1,1],[0,-1]],[[-1,0],[1,1]]]}"#;
        let spec = GroupSpec::parse(repaired).unwrap();
        assert_eq!(spec.build(&caps).unwrap().group.order(), 6);
        assert_eq!(
            spec.to_canonical_json(),
            r#"{"kind":"generators","modulus":5,"matrices":[[[1,1],[0,4]],[[4,0],[1,1]]]}"#
        );
    }

    #[test]
    fn canonical_round_trip() {
        let text = r#"{"kind":"product","p":2,"q":3,"left":{"kind":"gl2","modulus":2},"right":{"kind":"sl2","modulus":3}}"#;
        let spec = GroupSpec::parse(text).unwrap();
        assert_eq!(spec.to_canonical_json(), text);
        assert_eq!(GroupSpec::parse(&spec.to_canonical_json()).unwrap(), spec);
        assert_eq!(spec.content_hash().len(), 64);
    }

    #[test]
    fn errors_carry_paths() {
        let err = |t: &str| match GroupSpec::parse(t) {
            Err(Error::Spec { path, .. }) => path,
            other => panic!("{other:?}"),
        };
        assert_eq!(err("{"), "$");
        assert_eq!(err(r#"{"kind":"cube"}"#), "$.kind");
        assert_eq!(
            err(r#"{"kind":"generators","modulus":6,"matrices":[[[1,0],[0,1]],[[2,0],[0,1]]]}"#),
            "$.matrices[1]"
        );
        assert_eq!(
            err(r#"{"kind":"product","p":2,"q":3,"left":{"kind":"gl2"},"right":{"kind":"gl2","modulus":3}}"#),
            "$.left"
        );
    }

    #[test]
    fn fiber_spec_builds_entangled_context() {
        let caps = Caps::default();
        let text = r#"{"kind":"fiber","left":{"kind":"gl2","modulus":2},"right":{"kind":"gl2","modulus":3},"quotient_order":2}"#;
        let built = GroupSpec::parse(text).unwrap().build(&caps).unwrap();
        assert_eq!(built.group.order(), 144);
        let ctx = built.context.unwrap();
        assert_eq!(ctx.entanglement_type().to_string(), "Z/2");
        let product = r#"{"kind":"product","p":2,"q":3,"left":{"kind":"gl2","modulus":2},"right":{"kind":"gl2","modulus":3}}"#;
        let built = GroupSpec::parse(product).unwrap().build(&caps).unwrap();
        assert_eq!(built.group.order(), 288);
        assert!(built.factors.is_some());
    }
}
