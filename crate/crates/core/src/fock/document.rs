//! JSON form of a mode algebra.
//!
//! ```json
//! {
//!   "name": "heisenberg",
//!   "generators": [{ "name": "b", "weight": 2, "parity": "even" }],
//!   "brackets": [
//!     { "lhs": "b", "rhs": "b", "terms": [], "central": { "param": "1", "coeff": "m" } }
//!   ]
//! }
//! ```
//!
//! Weights are doubled integers. Bracket coefficients are polynomials in the
//! mode indices `m` (of `lhs`) and `n` (of `rhs`).

use serde::{Deserialize, Serialize};

use super::algebra::{BracketRule, BracketTerm, Central, GeneratorSpec, LatticeData, ModeAlgebra, ModePoly, Parity};
use crate::error::{Error, Result};
use crate::half::Half;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vacuum: Option<String>,
    pub generators: Vec<GeneratorDoc>,
    #[serde(default)]
    pub brackets: Vec<BracketDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub name: String,
    pub weight: i64,
    pub parity: Parity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketDoc {
    pub lhs: String,
    pub rhs: String,
    #[serde(default)]
    pub terms: Vec<TermDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub central: Option<CentralDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub gen: String,
    pub coeff: String,
    /// Restricts the term to `m + n` equal to this half-integer.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_condition: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CentralDoc {
    pub param: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub n: i64,
    pub charge: String,
}

impl AlgebraDocument {
    pub fn from_json(text: &str) -> Result<AlgebraDocument> {
        serde_json::from_str(text).map_err(|e| Error::InvalidAlgebra(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn build(&self) -> Result<ModeAlgebra> {
        let generators: Vec<GeneratorSpec> = self
            .generators
            .iter()
            .map(|g| GeneratorSpec::new(&g.name, Half::from_doubled(g.weight), g.parity))
            .collect();
        let id = |name: &str| {
            generators
                .iter()
                .position(|g| g.name == name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
        };
        let mut brackets = Vec::new();
        for b in &self.brackets {
            let mut terms = Vec::new();
            for t in &b.terms {
                terms.push(BracketTerm {
                    gen: id(&t.gen)?,
                    coeff: ModePoly::parse(&t.coeff)?,
                    only_at: t.delta_condition.as_deref().map(str::parse).transpose()?,
                });
            }
            let central = match &b.central {
                None => None,
                Some(c) => {
                    if c.param != "1" && !c.param.chars().all(|ch| ch.is_alphanumeric() || ch == '_') {
                        return Err(Error::InvalidAlgebra(format!("bad central parameter `{}`", c.param)));
                    }
                    if c.param == "m" || c.param == "n" {
                        return Err(Error::InvalidAlgebra("`m` and `n` are reserved for mode indices".into()));
                    }
                    Some(Central {
                        param: c.param.clone(),
                        coeff: ModePoly::parse(&c.coeff)?,
                    })
                }
            };
            brackets.push(((id(&b.lhs)?, id(&b.rhs)?), BracketRule { terms, central }));
        }
        let lattice = match &self.lattice {
            None => None,
            Some(l) => Some(LatticeData {
                n: l.n,
                charge: id(&l.charge)?,
            }),
        };
        let alg = ModeAlgebra::new(&self.name, generators, brackets, lattice)?;
        Ok(match &self.vacuum {
            Some(v) => alg.with_vacuum_label(v),
            None => alg,
        })
    }

    pub fn from_algebra(alg: &ModeAlgebra) -> AlgebraDocument {
        let name = |id: usize| alg.generator(id).name.clone();
        AlgebraDocument {
            name: alg.name().to_string(),
            vacuum: (alg.vacuum_label() != "|0>").then(|| alg.vacuum_label().to_string()),
            generators: alg
                .generators()
                .iter()
                .map(|g| GeneratorDoc {
                    name: g.name.clone(),
                    weight: g.weight.doubled(),
                    parity: g.parity,
                })
                .collect(),
            brackets: alg
                .declared_brackets()
                .iter()
                .map(|((x, y), rule)| BracketDoc {
                    lhs: name(*x),
                    rhs: name(*y),
                    terms: rule
                        .terms
                        .iter()
                        .map(|t| TermDoc {
                            gen: name(t.gen),
                            coeff: t.coeff.to_string(),
                            delta_condition: t.only_at.map(|h| h.to_string()),
                        })
                        .collect(),
                    central: rule.central.as_ref().map(|c| CentralDoc {
                        param: c.param.clone(),
                        coeff: c.coeff.to_string(),
                    }),
                })
                .collect(),
            lattice: alg.lattice().map(|l| LatticeDoc {
                n: l.n,
                charge: name(l.charge),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const VIRASORO: &str = r#"{
        "name": "virasoro",
        "vacuum": "v_c",
        "generators": [{ "name": "L", "weight": 4, "parity": "even" }],
        "brackets": [{
            "lhs": "L", "rhs": "L",
            "terms": [{ "gen": "L", "coeff": "m-n" }],
            "central": { "param": "c", "coeff": "(m^3-m)/12" }
        }]
    }"#;

    #[test]
    fn load_and_dump_roundtrip() {
        let doc = AlgebraDocument::from_json(VIRASORO).unwrap();
        let alg = doc.build().unwrap();
        assert_eq!(alg.vacuum_label(), "v_c");
        assert_eq!(alg.central_params(), vec!["c".to_string()]);
        let again = AlgebraDocument::from_json(&AlgebraDocument::from_algebra(&alg).to_json()).unwrap();
        assert_eq!(again.build().unwrap(), alg);
    }

    #[test]
    fn rejects_unknown_generator() {
        let bad = VIRASORO.replace(r#""gen": "L""#, r#""gen": "W""#);
        let err = AlgebraDocument::from_json(&bad).unwrap().build().unwrap_err();
        assert_eq!(err, Error::UnknownGenerator("W".into()));
    }

    #[test]
    fn rejects_non_skew_self_bracket() {
        let bad = VIRASORO.replace("m-n", "m+n");
        assert!(matches!(
            AlgebraDocument::from_json(&bad).unwrap().build(),
            Err(Error::InvalidAlgebra(_))
        ));
    }
}
