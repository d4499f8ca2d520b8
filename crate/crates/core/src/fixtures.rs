//! Bundled example extensions.

use serde_json::Value;

use crate::poisson::ExtensionSpec;

const SOURCES: [(&str, &str); 4] = [
    (
        "quantum-plane",
        include_str!("../../../fixtures/quantum-plane.json"),
    ),
    ("weyl3", include_str!("../../../fixtures/weyl3.json")),
    ("chain3", include_str!("../../../fixtures/chain3.json")),
    ("m2x2", include_str!("../../../fixtures/m2x2.json")),
];

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub spec: ExtensionSpec,
    /// Golden values checked by the test suite, when present.
    pub expected: Option<Value>,
}

fn load(name: &str, text: &str) -> Fixture {
    let spec =
        ExtensionSpec::from_json(text).unwrap_or_else(|e| panic!("bundled fixture {name}: {e}"));
    let raw: Value = serde_json::from_str(text).expect("bundled fixture is JSON");
    Fixture {
        name: name.to_string(),
        spec,
        expected: raw.get("expected").cloned(),
    }
}

pub fn names() -> Vec<&'static str> {
    SOURCES.iter().map(|(n, _)| *n).collect()
}

pub fn all() -> Vec<Fixture> {
    SOURCES.iter().map(|(n, t)| load(n, t)).collect()
}

pub fn by_name(name: &str) -> Option<Fixture> {
    SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, t)| load(n, t))
}
