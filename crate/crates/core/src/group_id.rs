//! Isomorphism-class labels for small finite groups.
//!
//! Abelian groups are named by invariant factors, a handful of nonabelian
//! groups by name (confirmed against models built from presentations), and
//! everything else by a fingerprint of cheap invariants plus a serial that
//! separates non-isomorphic groups sharing a fingerprint.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::iso::{find_isomorphism, order_statistics};
use crate::group::presentation::Presentation;
use crate::group::{abelian_invariants, center, derived_subgroup, Caps, FiniteGroup, Subgroup};
use crate::matmod::prime_factors;

/// Bumped whenever the label of some group changes.
pub const ISO_LABEL_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IsoClass {
    /// Invariant factors, each dividing the next; empty for the trivial group.
    Abelian(Vec<u64>),
    /// A nonabelian catalog group.
    Named(String),
    Fingerprint { order: u64, fp: String, serial: u32 },
}

impl IsoClass {
    pub fn trivial() -> Self {
        IsoClass::Abelian(Vec::new())
    }

    pub fn cyclic(n: u64) -> Self {
        if n == 1 {
            Self::trivial()
        } else {
            IsoClass::Abelian(vec![n])
        }
    }

    pub fn order(&self) -> u64 {
        match self {
            IsoClass::Abelian(f) => f.iter().product(),
            IsoClass::Named(name) => catalog_entry(name).map_or(0, |e| e.order as u64),
            IsoClass::Fingerprint { order, .. } => *order,
        }
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self, IsoClass::Abelian(_))
    }
}

impl fmt::Display for IsoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoClass::Abelian(factors) if factors.is_empty() => f.write_str("1"),
            IsoClass::Abelian(factors) => {
                let parts: Vec<String> = factors.iter().map(|n| format!("Z/{n}")).collect();
                f.write_str(&parts.join("x"))
            }
            IsoClass::Named(name) => f.write_str(name),
            IsoClass::Fingerprint { fp, serial: 0, .. } => f.write_str(fp),
            IsoClass::Fingerprint { fp, serial, .. } => write!(f, "{fp}-#{serial}"),
        }
    }
}

impl FromStr for IsoClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("unrecognized isomorphism label {s:?}"));
        if s == "1" {
            return Ok(Self::trivial());
        }
        if catalog_entry(s).is_some() {
            return Ok(IsoClass::Named(s.to_string()));
        }
        if let Some(rest) = s.strip_prefix("fp:") {
            let (fp, serial) = match rest.rsplit_once("-#") {
                Some((head, n)) => (format!("fp:{head}"), n.parse().map_err(|_| bad())?),
                None => (s.to_string(), 0),
            };
            let order = rest
                .strip_prefix('o')
                .and_then(|r| r.split('-').next())
                .and_then(|o| o.parse().ok())
                .ok_or_else(bad)?;
            return Ok(IsoClass::Fingerprint { order, fp, serial });
        }
        let factors: Vec<u64> = s
            .split('x')
            .map(|part| part.strip_prefix("Z/").and_then(|n| n.parse().ok()).ok_or_else(bad))
            .collect::<Result<_>>()?;
        let valid = factors.iter().all(|&n| n >= 2) && factors.windows(2).all(|w| w[1] % w[0] == 0);
        if !valid {
            return Err(bad());
        }
        Ok(IsoClass::Abelian(factors))
    }
}

impl Serialize for IsoClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IsoClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl PartialOrd for IsoClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Order first, then label.
impl Ord for IsoClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.order(), self.to_string()).cmp(&(other.order(), other.to_string()))
    }
}

/// A nonabelian catalog group and its presentation.
#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub order: usize,
    pub generators: usize,
    pub relators: &'static [&'static str],
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry { name: "S3", order: 6, generators: 2, relators: &["a^2", "b^3", "(ab)^2"] },
    CatalogEntry { name: "D4", order: 8, generators: 2, relators: &["a^4", "b^2", "(ba)^2"] },
    CatalogEntry { name: "Q8", order: 8, generators: 2, relators: &["a^4", "a^2b^-2", "b^-1aba"] },
    CatalogEntry { name: "D6", order: 12, generators: 2, relators: &["a^6", "b^2", "(ba)^2"] },
    CatalogEntry { name: "SD16", order: 16, generators: 2, relators: &["a^8", "b^2", "baba^-3"] },
    CatalogEntry { name: "SL2(3)", order: 24, generators: 2, relators: &["a^3b^-3", "a^3(ab)^-2"] },
    CatalogEntry { name: "GL2(3)", order: 48, generators: 2, relators: &["a^8", "b^2", "(ab)^3", "a^4ba^-4b^-1"] },
];

pub fn catalog_entry(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name)
}

/// A catalog group realized from its presentation.
pub struct CatalogModel {
    pub entry: &'static CatalogEntry,
    pub presentation: Presentation,
    pub group: Arc<FiniteGroup>,
    pub generator_orders: Vec<u64>,
    pub fingerprint: String,
}

pub fn catalog_models() -> &'static [CatalogModel] {
    static MODELS: OnceLock<Vec<CatalogModel>> = OnceLock::new();
    MODELS.get_or_init(|| {
        CATALOG
            .iter()
            .map(|entry| {
                let presentation = Presentation::parse(entry.generators, entry.relators).expect("catalog relators parse");
                let (group, images) = presentation.enumerate(10 * entry.order).expect("catalog presentation is finite");
                assert_eq!(group.order(), entry.order, "catalog presentation of {}", entry.name);
                let group = Arc::new(group);
                let generator_orders = images.iter().map(|&x| group.element_order(x)).collect();
                let fingerprint = fingerprint(&group);
                CatalogModel { entry, presentation, group, generator_orders, fingerprint }
            })
            .collect()
    })
}

fn is_solvable(g: &Arc<FiniteGroup>) -> bool {
    let mut h = Subgroup::whole(g);
    loop {
        let d = derived_subgroup(&h);
        if d.is_trivial() {
            return true;
        }
        if d.order() == h.order() {
            return false;
        }
        h = d;
    }
}

/// Every Sylow subgroup is normal, i.e. for each prime `p` the elements of
/// `p`-power order number exactly `|G|_p`.
fn is_nilpotent(g: &FiniteGroup) -> bool {
    let n = g.order() as u64;
    prime_factors(n as u32).into_iter().map(u64::from).all(|p| {
        let mut part = 1;
        while n % (part * p) == 0 {
            part *= p;
        }
        let count = g
            .elements()
            .filter(|&x| {
                let mut o = g.element_order(x);
                while o % p == 0 {
                    o /= p;
                }
                o == 1
            })
            .count() as u64;
        count == part
    })
}

fn torsion_invariants(g: &FiniteGroup) -> Vec<u64> {
    abelian_invariants(g.order() as u64, |m| {
        g.elements().filter(|&x| g.pow(x, m) == g.identity()).count() as u64
    })
}

/// `fp:o<order>-e<order^count>...-z<|Z|>-d<|G'|>-a<abelianization>-<n|s|u>`.
pub fn fingerprint(g: &Arc<FiniteGroup>) -> String {
    let whole = Subgroup::whole(g);
    let stats: BTreeMap<u64, usize> = order_statistics(g);
    let orders: Vec<String> = stats.iter().map(|(o, c)| format!("{o}^{c}")).collect();
    let derived = derived_subgroup(&whole);
    let ab = crate::group::quotient_invariants(&whole, &derived);
    let ab = if ab.is_empty() {
        "1".to_string()
    } else {
        ab.iter().map(u64::to_string).collect::<Vec<_>>().join("x")
    };
    let flag = if is_nilpotent(g) {
        'n'
    } else if is_solvable(g) {
        's'
    } else {
        'u'
    };
    format!(
        "fp:o{}-e{}-z{}-d{}-a{}-{}",
        g.order(),
        orders.join("."),
        center(&whole).order(),
        derived.order(),
        ab,
        flag
    )
}

/// Representatives already given a serial, per fingerprint.
fn registry() -> &'static Mutex<HashMap<String, Vec<Arc<FiniteGroup>>>> {
    static REGISTRY: OnceLock<Mutex<HashMap<String, Vec<Arc<FiniteGroup>>>>> = OnceLock::new();
    REGISTRY.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Isomorphism-class label of `g`. Exact up to the isomorphism cap of the
/// default [`Caps`]; larger nonabelian groups get an unconfirmed fingerprint.
pub fn identify(g: &Arc<FiniteGroup>) -> IsoClass {
    identify_with_caps(g, &Caps::default())
}

pub fn identify_with_caps(g: &Arc<FiniteGroup>, caps: &Caps) -> IsoClass {
    if g.is_abelian() {
        return IsoClass::Abelian(torsion_invariants(g));
    }
    let fp = fingerprint(g);
    let order = g.order() as u64;
    if g.order() > caps.isomorphism {
        return IsoClass::Fingerprint { order, fp, serial: 0 };
    }
    for model in catalog_models() {
        if model.fingerprint == fp
            && model
                .presentation
                .find_generators(g, model.entry.order, &model.generator_orders)
                .is_some()
        {
            return IsoClass::Named(model.entry.name.to_string());
        }
    }
    let mut reg = registry().lock().expect("registry lock");
    let reps = reg.entry(fp.clone()).or_default();
    for (serial, rep) in reps.iter().enumerate() {
        if find_isomorphism(g, rep).is_some() {
            return IsoClass::Fingerprint { order, fp, serial: serial as u32 };
        }
    }
    let copy = g.regular_representation(caps).expect("order within u16 range");
    reps.push(Arc::new(copy));
    IsoClass::Fingerprint { order, fp, serial: (reps.len() - 1) as u32 }
}

/// Isomorphism test with a fingerprint fast-reject.
pub fn are_isomorphic(g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>, caps: &Caps) -> Result<bool> {
    let order = g.order().max(h.order());
    if order > caps.isomorphism {
        return Err(Error::cap("isomorphism search", order, caps.isomorphism));
    }
    if g.order() != h.order() || fingerprint(g) != fingerprint(h) {
        return Ok(false);
    }
    Ok(find_isomorphism(g, h).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matmod::Mat2;

    #[test]
    fn catalog_models_name_themselves() {
        for model in catalog_models() {
            assert_eq!(identify(&model.group), IsoClass::Named(model.entry.name.into()));
        }
    }

    #[test]
    fn label_strings_round_trip() {
        for text in ["1", "Z/2", "Z/2xZ/4", "S3", "SL2(3)", "fp:o16-e1^1.2^3-z2-d2-a2x2-n", "fp:o16-e1^1-z2-d2-a1-n-#2"] {
            let c: IsoClass = text.parse().unwrap();
            assert_eq!(c.to_string(), text);
        }
        assert_eq!("fp:o16-e1^1-z2-d2-a1-n-#2".parse::<IsoClass>().unwrap().order(), 16);
        assert!("Z/4xZ/2".parse::<IsoClass>().is_err());
        assert!("Z/1".parse::<IsoClass>().is_err());
        assert!("A5".parse::<IsoClass>().is_err());
        let json = serde_json::to_string(&IsoClass::Abelian(vec![2, 2])).unwrap();
        assert_eq!(json, "\"Z/2xZ/2\"");
        assert_eq!(serde_json::from_str::<IsoClass>(&json).unwrap(), IsoClass::Abelian(vec![2, 2]));
    }

    #[test]
    fn basic_identifications() {
        let caps = Caps::default();
        assert_eq!(identify(&Arc::new(FiniteGroup::cyclic(1))).to_string(), "1");
        assert_eq!(identify(&Arc::new(FiniteGroup::cyclic(12))).to_string(), "Z/12");
        let s = Mat2::new(1, 1, 0, -1, 5).unwrap();
        let t = Mat2::new(-1, 0, 1, 1, 5).unwrap();
        let g = Arc::new(FiniteGroup::generate(&[s, t], 5, &caps).unwrap());
        assert_eq!(identify(&g).to_string(), "S3");
        assert_eq!(identify(&Arc::new(FiniteGroup::gl2(3, &caps).unwrap())).to_string(), "GL2(3)");
        assert_eq!(identify(&Arc::new(FiniteGroup::sl2(3, &caps).unwrap())).to_string(), "SL2(3)");
        // GL2(2) is S3
        assert_eq!(identify(&Arc::new(FiniteGroup::gl2(2, &caps).unwrap())).to_string(), "S3");
    }

    #[test]
    fn order_eight_statistics() {
        let stats = |name: &str| {
            let m = catalog_models().iter().find(|m| m.entry.name == name).unwrap();
            let mut orders: Vec<u64> = m.group.elements().map(|x| m.group.element_order(x)).collect();
            orders.sort_unstable();
            orders
        };
        let z8 = FiniteGroup::cyclic(8);
        let mut z8_orders: Vec<u64> = z8.elements().map(|x| z8.element_order(x)).collect();
        z8_orders.sort_unstable();
        assert_eq!(z8_orders, vec![1, 2, 4, 4, 8, 8, 8, 8]);
        assert_eq!(stats("D4"), vec![1, 2, 2, 2, 2, 2, 4, 4]);
        assert_eq!(stats("Q8"), vec![1, 2, 4, 4, 4, 4, 4, 4]);
        let caps = Caps::default();
        let d4 = &catalog_models()[1].group;
        let q8 = &catalog_models()[2].group;
        assert!(!are_isomorphic(d4, q8, &caps).unwrap());
        assert!(are_isomorphic(d4, d4, &caps).unwrap());
    }

    #[test]
    fn fingerprint_serials_separate_groups() {
        // Z/4 x| Z/4 and Z/4 x Z/4 differ already by abelianness; use two
        // nonabelian groups of order 16 outside the catalog: D8 and Z/2 x D4.
        let caps = Caps::default();
        let d8 = Presentation::parse(2, &["a^8", "b^2", "(ba)^2"]).unwrap().enumerate(200).unwrap().0;
        let d8 = Arc::new(d8);
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let d4 = catalog_models()[1].group.clone();
        let z2d4 = crate::group::direct_product(&z2, &d4, &caps).unwrap().group;
        let a = identify(&d8);
        let b = identify(&z2d4);
        assert_ne!(a, b);
        assert_eq!(identify(&d8), a);
        assert_eq!(identify(&Arc::new(d8.regular_representation(&caps).unwrap())), a);
    }
}
