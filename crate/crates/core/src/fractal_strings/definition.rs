//! JSON string definitions.
//!
//! Either `{"kind": "cantor", "params": {"truncation": "1000"}}` or
//! `{"atoms": [["3", "1", "0"], ...]}`. Numbers are decimal strings, written
//! in shortest round-trip form so that a written file re-parses to the same
//! value.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{builtin_string, Atom, ClosedForm, GeneralizedString, StringKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum StringDefinition {
    Builtin {
        kind: String,
        #[serde(default)]
        params: BTreeMap<String, String>,
    },
    Atoms {
        atoms: Vec<[String; 3]>,
    },
}

fn num(params: &BTreeMap<String, String>, key: &str) -> Result<f64> {
    let raw = params
        .get(key)
        .ok_or_else(|| Error::InvalidInput(format!("missing parameter '{key}'")))?;
    parse_decimal(raw)
}

fn parse_decimal(raw: &str) -> Result<f64> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("'{raw}' is not a decimal number")))?;
    if !v.is_finite() {
        return Err(Error::InvalidInput(format!("'{raw}' is not finite")));
    }
    Ok(v)
}

impl StringDefinition {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("definition serializes")
    }

    /// Definition for `eta`: builtin form when it carries a closed form,
    /// otherwise its atom list.
    pub fn describe(eta: &GeneralizedString) -> Self {
        let mut params = BTreeMap::new();
        let trunc = eta.complete_to();
        match eta.closed_form() {
            Some(cf) if trunc.is_finite() => {
                params.insert("truncation".into(), trunc.to_string());
                let kind = match cf {
                    _ if cf == ClosedForm::cantor() => "cantor",
                    ClosedForm::SelfSimilar { r, m } => {
                        params.insert("r".into(), r.to_string());
                        params.insert("m".into(), m.to_string());
                        "self_similar"
                    }
                    ClosedForm::PrimeHarmonic { p } => {
                        params.insert("p".into(), p.to_string());
                        "prime_harmonic"
                    }
                    other => other.name(),
                };
                StringDefinition::Builtin {
                    kind: kind.into(),
                    params,
                }
            }
            Some(ClosedForm::Unit) => StringDefinition::Builtin {
                kind: "unit".into(),
                params,
            },
            _ => StringDefinition::Atoms {
                atoms: eta
                    .atoms()
                    .iter()
                    .map(|a| [a.x.to_string(), a.w.re.to_string(), a.w.im.to_string()])
                    .collect(),
            },
        }
    }

    pub fn build(&self) -> Result<GeneralizedString> {
        match self {
            StringDefinition::Atoms { atoms } => {
                let parsed = atoms
                    .iter()
                    .map(|[x, re, im]| {
                        Ok(Atom {
                            x: parse_decimal(x)?,
                            w: Complex64::new(parse_decimal(re)?, parse_decimal(im)?),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                GeneralizedString::from_atoms(parsed)
            }
            StringDefinition::Builtin { kind, params } => {
                if kind == "unit" {
                    return Ok(GeneralizedString::unit());
                }
                let cf = match kind.as_str() {
                    "cantor" => ClosedForm::cantor(),
                    "self_similar" => ClosedForm::SelfSimilar {
                        r: num(params, "r")?,
                        m: num(params, "m")?,
                    },
                    "prime_harmonic" => {
                        let p = num(params, "p")?;
                        if p.fract() != 0.0 || p < 2.0 {
                            return Err(Error::InvalidInput(format!("p = {p} is not a prime")));
                        }
                        ClosedForm::PrimeHarmonic { p: p as u64 }
                    }
                    "harmonic" => ClosedForm::Harmonic,
                    "prime_string" => ClosedForm::PrimeString,
                    "moebius_string" => ClosedForm::MoebiusString,
                    other => return Err(Error::InvalidInput(format!("unknown kind '{other}'"))),
                };
                builtin_string(StringKind::Family(cf), num(params, "truncation")?).map_err(|e| {
                    match e {
                        Error::EmptyTruncation { x } => {
                            Error::InvalidInput(format!("truncation {x} lies below the first atom"))
                        }
                        other => other,
                    }
                })
            }
        }
    }
}
