//! Group specs bundled into the binary.

use super::spec::GroupSpec;
use crate::error::{Error, Result};

macro_rules! fixtures {
    ($($name:literal),* $(,)?) => {
        pub const FIXTURES: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../../fixtures/", $name, ".json")))),*
        ];
    };
}

fixtures!(
    "fiber-s3-gl2-2-gl2-3",
    "fiber-z2-gl2-2-gl2-3",
    "fiber-z2-gl2-3-gl2-5",
    "fiber-z2-s3-s3",
    "gens-fiber-z2-mod6",
    "gl2-3",
    "im2-cyclic2-gl2-3",
    "im2-cyclic3-gl2-3",
    "im2-trivial-gl2-3",
    "prod-gl2-2-gl2-3",
    "prod-gl2-2-gl2-5",
    "prod-gl2-2-gl2-7",
    "prod-gl2-3-gl2-11",
    "prod-gl2-3-gl2-13",
    "prod-gl2-3-gl2-17",
    "prod-gl2-3-gl2-5",
    "prod-gl2-3-gl2-7",
    "sigma-tau-printed-mod5",
);

pub fn fixture_text(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".json").unwrap_or(name);
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn fixture(name: &str) -> Result<GroupSpec> {
    let text = fixture_text(name).ok_or_else(|| Error::Precondition(format!("no bundled fixture named {name}")))?;
    GroupSpec::parse(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse_canonically() {
        for (name, text) in FIXTURES {
            let spec = GroupSpec::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            if *name != "fiber-z2-s3-s3" {
                // that one spells -1 in its matrices
                assert_eq!(spec.to_canonical_json(), text.trim(), "{name}");
            }
        }
    }
}
