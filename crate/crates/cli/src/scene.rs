//! Scene files: named bodies, measures and valuations plus a probe list.
//!
//! Valuation terms may name a scene entry or give it inline:
//!
//! ```json
//! {
//!   "bodies":     {"unit": {"kind": "polygon", "vertices": [[0,0],[1,0],[1,1],[0,1]]}},
//!   "measures":   {"delta": {"dim": 2, "atoms": [[[0,0], 1.0]]}},
//!   "valuations": {"e": {"dim": 2, "terms": [{"coeff": 1, "measure": "delta",
//!                         "body": {"kind": "polygon", "vertices": [[0,0]]}}]}},
//!   "probes": ["unit"]
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use valconv::{ConvexBody, Measure, SmoothValuation, Term};

#[derive(Deserialize)]
#[serde(untagged)]
enum Ref<T> {
    Name(String),
    Inline(T),
}

#[derive(Deserialize)]
struct RawTerm {
    coeff: f64,
    measure: Ref<Measure>,
    body: Ref<ConvexBody>,
}

#[derive(Deserialize)]
struct RawValuation {
    dim: usize,
    terms: Vec<RawTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScene {
    #[serde(default)]
    bodies: BTreeMap<String, ConvexBody>,
    #[serde(default)]
    measures: BTreeMap<String, Measure>,
    #[serde(default)]
    valuations: BTreeMap<String, RawValuation>,
    #[serde(default)]
    probes: Vec<String>,
}

#[derive(Debug)]
pub struct Scene {
    pub bodies: BTreeMap<String, ConvexBody>,
    pub valuations: BTreeMap<String, SmoothValuation>,
    pub probes: Vec<String>,
}

fn resolve<T: Clone>(
    r: Ref<T>,
    table: &BTreeMap<String, T>,
    kind: &str,
    owner: &str,
) -> Result<T, String> {
    match r {
        Ref::Inline(v) => Ok(v),
        Ref::Name(n) => table
            .get(&n)
            .cloned()
            .ok_or_else(|| format!("valuation '{owner}' refers to unknown {kind} '{n}'")),
    }
}

impl Scene {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let raw: RawScene =
            serde_json::from_str(text).map_err(|e| format!("invalid scene: {e}"))?;
        let mut seen = BTreeMap::new();
        let names = raw
            .bodies
            .keys()
            .map(|k| (k, "body"))
            .chain(raw.measures.keys().map(|k| (k, "measure")))
            .chain(raw.valuations.keys().map(|k| (k, "valuation")));
        for (name, kind) in names {
            if let Some(other) = seen.insert(name.clone(), kind) {
                return Err(format!(
                    "name '{name}' is used for both a {other} and a {kind}"
                ));
            }
        }
        let mut valuations = BTreeMap::new();
        for (name, v) in raw.valuations {
            let terms = v
                .terms
                .into_iter()
                .map(|t| {
                    Ok(Term::new(
                        t.coeff,
                        resolve(t.measure, &raw.measures, "measure", &name)?,
                        resolve(t.body, &raw.bodies, "body", &name)?,
                    ))
                })
                .collect::<Result<Vec<_>, String>>()?;
            let psi = SmoothValuation::new(v.dim, terms)
                .map_err(|e| format!("valuation '{name}': {e}"))?;
            valuations.insert(name, psi);
        }
        for p in &raw.probes {
            if !raw.bodies.contains_key(p) {
                return Err(format!("probe '{p}' is not a scene body"));
            }
        }
        Ok(Scene {
            bodies: raw.bodies,
            valuations,
            probes: raw.probes,
        })
    }

    pub fn valuation(&self, name: &str) -> Result<&SmoothValuation, String> {
        self.valuations
            .get(name)
            .ok_or_else(|| format!("unknown valuation '{name}'"))
    }

    pub fn body(&self, name: &str) -> Result<&ConvexBody, String> {
        self.bodies
            .get(name)
            .ok_or_else(|| format!("unknown body '{name}'"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCENE: &str = r#"{
        "bodies": {"unit": {"kind": "polygon", "vertices": [[0,0],[1,0],[1,1],[0,1]]},
                   "origin": {"kind": "polygon", "vertices": [[0,0]]}},
        "measures": {"delta": {"dim": 2, "atoms": [[[0,0], 1.0]]}},
        "valuations": {"e": {"dim": 2, "terms": [{"coeff": 1, "measure": "delta", "body": "origin"}]},
                       "inline": {"dim": 1, "terms": [{"coeff": 2,
                            "measure": {"dim": 1, "atoms": [[[0.5], 1.0]]},
                            "body": {"kind": "interval", "lo": 0, "hi": 1}}]}},
        "probes": ["unit"]
    }"#;

    #[test]
    fn parses_references_and_inline_entries() {
        let s = Scene::parse(SCENE).unwrap();
        assert_eq!(
            s.valuation("e").unwrap(),
            &SmoothValuation::unit(2).unwrap()
        );
        assert_eq!(s.valuation("inline").unwrap().terms()[0].coeff, 2.0);
        assert_eq!(s.probes, vec!["unit".to_string()]);
    }

    #[test]
    fn rejects_bad_scenes() {
        let dangling = SCENE.replace(r#""body": "origin""#, r#""body": "nowhere""#);
        assert!(Scene::parse(&dangling)
            .unwrap_err()
            .contains("unknown body"));
        let clash = SCENE.replace(r#""delta""#, r#""unit""#);
        assert!(Scene::parse(&clash).unwrap_err().contains("both"));
        let probe = SCENE.replace(r#""probes": ["unit"]"#, r#""probes": ["e"]"#);
        assert!(Scene::parse(&probe).is_err());
        let mixed = SCENE.replace(
            r#""body": "origin""#,
            r#""body": {"kind": "interval", "lo": 0, "hi": 1}"#,
        );
        assert!(Scene::parse(&mixed).is_err());
    }
}
