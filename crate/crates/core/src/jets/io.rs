//! JSON jet points.
//!
//! ```json
//! {"kind": "secjet", "n": 1, "l": 2, "r": 2, "x": [0.0], "u": [0.0, 0.0],
//!  "derivs": [{"A": 2, "sigma": [1, 1], "value": 8.0}, ...]}
//! {"kind": "subjet", "n": 1, "m": 1, "r": 1, "u": [0.0, 0.0],
//!  "derivs": [{"i": 2, "sigma": [1], "value": 3.0}]}
//! ```
//!
//! All indices are 1-based; `i` is the global coordinate index of a Latin
//! coordinate (`n < i ≤ n + m`). A file holds one jet or an array of jets.
//! Every derivative entry must be present.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{MultiIndex, SecJet, SubJet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SecEntry {
    #[serde(rename = "A")]
    pub a: usize,
    pub sigma: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubEntry {
    #[serde(alias = "A")]
    pub i: usize,
    pub sigma: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum JetSpec {
    Secjet { n: usize, l: usize, r: usize, x: Vec<f64>, u: Vec<f64>, derivs: Vec<SecEntry> },
    Subjet { n: usize, m: usize, r: usize, u: Vec<f64>, derivs: Vec<SubEntry> },
}

/// A loaded jet of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Jet {
    Sub(SubJet),
    Sec(SecJet),
}

impl Jet {
    pub fn kind(&self) -> &'static str {
        match self {
            Jet::Sub(_) => "subjet",
            Jet::Sec(_) => "secjet",
        }
    }
}

fn sigma_from(raw: &[usize], n: usize, what: &str) -> Result<MultiIndex> {
    if raw.iter().any(|&s| s == 0 || s > n) {
        return Err(Error::Load(format!("{what}: sigma entries must lie in 1..={n}, got {raw:?}")));
    }
    Ok(MultiIndex::new(raw.iter().map(|s| s - 1).collect()))
}

fn insert_unique(map: &mut BTreeMap<(usize, MultiIndex), f64>, key: (usize, MultiIndex), value: f64, what: &str) -> Result<()> {
    if map.insert(key, value).is_some() {
        return Err(Error::Load(format!("{what}: duplicate derivative entry")));
    }
    Ok(())
}

impl JetSpec {
    pub fn build(&self) -> Result<Jet> {
        match self {
            JetSpec::Secjet { n, l, r, x, u, derivs } => {
                let mut map = BTreeMap::new();
                for (k, e) in derivs.iter().enumerate() {
                    let what = format!("derivs[{k}]");
                    if e.a == 0 || e.a > *l {
                        return Err(Error::Load(format!("{what}: A must lie in 1..={l}")));
                    }
                    let key = (e.a - 1, sigma_from(&e.sigma, *n, &what)?);
                    insert_unique(&mut map, key, e.value, &what)?;
                }
                Ok(Jet::Sec(SecJet::new(*n, *l, *r, x.clone(), u.clone(), map)?))
            }
            JetSpec::Subjet { n, m, r, u, derivs } => {
                let mut map = BTreeMap::new();
                for (k, e) in derivs.iter().enumerate() {
                    let what = format!("derivs[{k}]");
                    if e.i <= *n || e.i > n + m {
                        return Err(Error::Load(format!("{what}: i must lie in {}..={}", n + 1, n + m)));
                    }
                    let key = (e.i - 1, sigma_from(&e.sigma, *n, &what)?);
                    insert_unique(&mut map, key, e.value, &what)?;
                }
                Ok(Jet::Sub(SubJet::new(*n, *m, *r, u.clone(), map)?))
            }
        }
    }

    pub fn from_jet(jet: &Jet) -> JetSpec {
        let sigma = |s: &MultiIndex| s.indices().iter().map(|i| i + 1).collect::<Vec<_>>();
        match jet {
            Jet::Sec(t) => JetSpec::Secjet {
                n: t.n(),
                l: t.l(),
                r: t.order(),
                x: t.x().to_vec(),
                u: t.u().to_vec(),
                derivs: t.derivs().iter().map(|((a, s), v)| SecEntry { a: a + 1, sigma: sigma(s), value: *v }).collect(),
            },
            Jet::Sub(p) => JetSpec::Subjet {
                n: p.n(),
                m: p.m(),
                r: p.order(),
                u: p.base().to_vec(),
                derivs: p.derivs().iter().map(|((i, s), v)| SubEntry { i: i + 1, sigma: sigma(s), value: *v }).collect(),
            },
        }
    }
}

/// Parse a JSON jet file holding one jet or an array of jets.
pub fn load_jets(text: &str) -> Result<Vec<Jet>> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::Load(format!("invalid jet file at line {} column {}: {e}", e.line(), e.column())))?;
    let specs = match value {
        serde_json::Value::Array(items) => items
            .into_iter()
            .enumerate()
            .map(|(k, v)| serde_json::from_value(v).map_err(|e| Error::Load(format!("jet {k}: {e}"))))
            .collect::<Result<Vec<JetSpec>>>()?,
        other => vec![serde_json::from_value(other).map_err(|e| Error::Load(format!("jet: {e}")))?],
    };
    specs.iter().enumerate().map(|(k, s)| s.build().map_err(|e| Error::Load(format!("jet {k}: {e}")))).collect()
}

/// Serialize jets as a JSON array.
pub fn jets_to_json(jets: &[Jet]) -> String {
    let specs: Vec<JetSpec> = jets.iter().map(JetSpec::from_jet).collect();
    serde_json::to_string_pretty(&specs).expect("jets serialize")
}
