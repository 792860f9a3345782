//! JSON dataset format.
//!
//! ```json
//! {
//!   "rank": 1,
//!   "operator": "signature",
//!   "components": [
//!     {
//!       "name": "north",
//!       "dim": 0,
//!       "tangent_roots": 0,
//!       "normal_lines": [ { "weight": [1], "root": false } ],
//!       "aux_lines":    [ { "weight": [0], "parity": 1, "root": false } ],
//!       "sign": 1,
//!       "intersection": { "1": "1" }
//!     }
//!   ]
//! }
//! ```
//!
//! Rationals are strings `"p/q"` (or `"p"`). Intersection keys are root
//! monomials over the component's universe, written with `*`-separated
//! factors `t0`, `n1^2`, ...; the empty monomial is `"1"`. Roots are named
//! `t<i>` (tangent), `n<i>` (normal lines with `"root": true`), `a<i>`
//! (auxiliary lines with `"root": true`), each indexed within its kind.
//! `aux_lines` may be omitted; an absent auxiliary bundle is the untwisted
//! operator. `intersection` may be omitted for zero-dimensional components.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ComponentSpec, Dataset, FixedComponent};
use crate::characteristic::{OperatorKind, Weight};
use crate::series::RootMonomial;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("invalid dataset JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("component {component}: invalid rational {text:?}")]
    BadRational { component: String, text: String },
    #[error("component {component}: invalid sign {found} (expected 1 or -1)")]
    BadSign { component: String, found: i64 },
    #[error("component {component}: invalid parity {found} (expected 1 or -1)")]
    BadParity { component: String, found: i64 },
    #[error("component {component}: unknown root {name:?} in monomial {monomial:?}")]
    UnknownRoot {
        component: String,
        name: String,
        monomial: String,
    },
    #[error("component {component}: malformed monomial {monomial:?}")]
    BadMonomial { component: String, monomial: String },
}

#[derive(Debug, Serialize, Deserialize)]
struct DatasetDoc {
    rank: usize,
    operator: OperatorKind,
    components: Vec<ComponentDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ComponentDoc {
    name: String,
    dim: usize,
    #[serde(default)]
    tangent_roots: usize,
    #[serde(default)]
    normal_lines: Vec<NormalLineDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    aux_lines: Vec<AuxLineDoc>,
    sign: i64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    intersection: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NormalLineDoc {
    weight: Vec<i64>,
    #[serde(default)]
    root: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct AuxLineDoc {
    weight: Vec<i64>,
    parity: i64,
    #[serde(default)]
    root: bool,
}

pub(super) fn parse_dataset(text: &str) -> Result<Dataset, SchemaError> {
    let doc: DatasetDoc = serde_json::from_str(text)?;
    let mut components = Vec::with_capacity(doc.components.len());
    for c in doc.components {
        if c.sign != 1 && c.sign != -1 {
            return Err(SchemaError::BadSign {
                component: c.name,
                found: c.sign,
            });
        }
        for a in &c.aux_lines {
            if a.parity != 1 && a.parity != -1 {
                return Err(SchemaError::BadParity {
                    component: c.name.clone(),
                    found: a.parity,
                });
            }
        }
        // First pass fixes the root layout so monomial names can be resolved.
        let skeleton = FixedComponent::from_spec(ComponentSpec {
            name: c.name.clone(),
            dim: c.dim,
            tangent_roots: c.tangent_roots,
            normal_lines: c
                .normal_lines
                .iter()
                .map(|l| (Weight(l.weight.clone()), l.root))
                .collect(),
            aux_lines: c
                .aux_lines
                .iter()
                .map(|l| (Weight(l.weight.clone()), l.parity as i8, l.root))
                .collect(),
            sign: c.sign as i8,
            intersection: BTreeMap::new(),
        });
        let mut intersection = BTreeMap::new();
        for (mono_text, rat_text) in &c.intersection {
            let mono = parse_monomial(&skeleton, mono_text)?;
            let value =
                BigRational::from_str(rat_text).map_err(|_| SchemaError::BadRational {
                    component: c.name.clone(),
                    text: rat_text.clone(),
                })?;
            intersection.insert(mono, value);
        }
        components.push(FixedComponent::from_spec(ComponentSpec {
            name: c.name.clone(),
            dim: c.dim,
            tangent_roots: c.tangent_roots,
            normal_lines: c
                .normal_lines
                .iter()
                .map(|l| (Weight(l.weight.clone()), l.root))
                .collect(),
            aux_lines: c
                .aux_lines
                .iter()
                .map(|l| (Weight(l.weight.clone()), l.parity as i8, l.root))
                .collect(),
            sign: c.sign as i8,
            intersection,
        }));
    }
    Ok(Dataset {
        rank: doc.rank,
        operator: doc.operator,
        components,
    })
}

fn parse_monomial(
    component: &FixedComponent,
    text: &str,
) -> Result<RootMonomial, SchemaError> {
    let mut mono = vec![0u8; component.roots().len()];
    let trimmed = text.trim();
    if trimmed == "1" || trimmed.is_empty() {
        return Ok(mono);
    }
    for factor in trimmed.split('*') {
        let factor = factor.trim();
        let (name, power) = match factor.split_once('^') {
            Some((n, p)) => {
                let power: u8 = p.trim().parse().map_err(|_| SchemaError::BadMonomial {
                    component: component.name.clone(),
                    monomial: text.to_string(),
                })?;
                (n.trim(), power)
            }
            None => (factor, 1),
        };
        let idx = component
            .root_index(name)
            .ok_or_else(|| SchemaError::UnknownRoot {
                component: component.name.clone(),
                name: name.to_string(),
                monomial: text.to_string(),
            })?;
        mono[idx] += power;
    }
    Ok(mono)
}

fn format_monomial(component: &FixedComponent, mono: &[u8]) -> String {
    let mut parts = Vec::new();
    for (i, &p) in mono.iter().enumerate() {
        if p == 0 {
            continue;
        }
        if p == 1 {
            parts.push(component.root_name(i));
        } else {
            parts.push(format!("{}^{}", component.root_name(i), p));
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

pub(super) fn dataset_to_json(dataset: &Dataset) -> String {
    let doc = DatasetDoc {
        rank: dataset.rank,
        operator: dataset.operator,
        components: dataset
            .components
            .iter()
            .map(|c| ComponentDoc {
                name: c.name.clone(),
                dim: c.dim,
                tangent_roots: c.tangent_roots().len(),
                normal_lines: c
                    .normal_lines()
                    .iter()
                    .map(|l| NormalLineDoc {
                        weight: l.weight.0.clone(),
                        root: l.root.is_some(),
                    })
                    .collect(),
                aux_lines: c
                    .aux_lines()
                    .iter()
                    .map(|l| AuxLineDoc {
                        weight: l.weight.0.clone(),
                        parity: l.parity as i64,
                        root: l.root.is_some(),
                    })
                    .collect(),
                sign: c.sign as i64,
                intersection: c
                    .intersection()
                    .iter()
                    .map(|(m, v)| (format_monomial(c, m), v.to_string()))
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("dataset serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localization::builtin_dataset;

    #[test]
    fn builtin_round_trips_through_json() {
        for name in ["s2-rotation", "cp2-t2", "k3"] {
            let d = builtin_dataset(name).unwrap();
            let text = d.to_json();
            let back = Dataset::from_json(&text).unwrap();
            assert_eq!(back.rank, d.rank);
            assert_eq!(back.operator, d.operator);
            assert_eq!(back.components.len(), d.components.len());
            for (a, b) in back.components.iter().zip(&d.components) {
                assert_eq!(a.name, b.name);
                assert_eq!(a.dim, b.dim);
                assert_eq!(a.sign, b.sign);
                assert_eq!(a.intersection(), b.intersection());
                assert_eq!(
                    a.normal_lines().iter().map(|l| &l.weight).collect::<Vec<_>>(),
                    b.normal_lines().iter().map(|l| &l.weight).collect::<Vec<_>>()
                );
            }
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn minimal_document_parses() {
        let text = r#"{
            "rank": 1,
            "operator": "dirac",
            "components": [
                { "name": "p", "dim": 0,
                  "normal_lines": [ { "weight": [1] } ],
                  "sign": 1 }
            ]
        }"#;
        let d = Dataset::from_json(text).unwrap();
        assert_eq!(d.rank, 1);
        assert_eq!(d.components[0].normal_lines().len(), 1);
        assert!(d.components[0].aux_lines().is_empty());
    }

    #[test]
    fn custom_operator_parses() {
        let text = r#"{
            "rank": 1,
            "operator": { "custom": { "genus": "ahat", "normal": "signature" } },
            "components": []
        }"#;
        let d = Dataset::from_json(text).unwrap();
        assert!(matches!(d.operator, OperatorKind::Custom { .. }));
    }

    #[test]
    fn intersection_monomials_resolve_root_names() {
        let text = r#"{
            "rank": 0,
            "operator": "dirac",
            "components": [
                { "name": "z", "dim": 4, "tangent_roots": 2, "sign": 1,
                  "intersection": { "t0^2": "-24", "t1^2": "-24", "t0*t1": "0" } }
            ]
        }"#;
        let d = Dataset::from_json(text).unwrap();
        let c = &d.components[0];
        assert_eq!(
            c.intersection().get(&vec![2u8, 0]).unwrap(),
            &BigRational::from_integer((-24).into())
        );
        assert_eq!(
            c.intersection().get(&vec![1u8, 1]).unwrap(),
            &BigRational::from_integer(0.into())
        );
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(Dataset::from_json("{").is_err());

        let bad_sign = r#"{ "rank": 1, "operator": "dirac",
            "components": [ { "name": "p", "dim": 0, "sign": 2 } ] }"#;
        assert!(matches!(
            Dataset::from_json(bad_sign),
            Err(crate::localization::LocalizationError::Schema(SchemaError::BadSign { .. }))
        ));

        let bad_root = r#"{ "rank": 1, "operator": "dirac",
            "components": [ { "name": "p", "dim": 2, "tangent_roots": 1, "sign": 1,
                              "intersection": { "q0": "1" } } ] }"#;
        assert!(matches!(
            Dataset::from_json(bad_root),
            Err(crate::localization::LocalizationError::Schema(SchemaError::UnknownRoot { .. }))
        ));

        let bad_rat = r#"{ "rank": 1, "operator": "dirac",
            "components": [ { "name": "p", "dim": 2, "tangent_roots": 1, "sign": 1,
                              "intersection": { "t0": "one half" } } ] }"#;
        assert!(matches!(
            Dataset::from_json(bad_rat),
            Err(crate::localization::LocalizationError::Schema(SchemaError::BadRational { .. }))
        ));
    }
}
