//! The JSON algebra-definition format shared by the CLI and the preset files.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, FieldSpec};
use crate::presentation::{Arrow, PathSum, Presentation, Quiver};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ArrowJson {
    pub id: String,
    pub src: u32,
    pub tgt: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub coeff: String,
    pub path: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraJson {
    pub field: FieldJson,
    pub vertices: Vec<u32>,
    pub arrows: Vec<ArrowJson>,
    pub relations: Vec<Vec<TermJson>>,
    #[serde(default)]
    pub poset: Vec<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl FieldJson {
    pub fn from_spec(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rationals => Self {
                kind: "Q".into(),
                p: None,
            },
            FieldSpec::PrimeField(p) => Self {
                kind: "Fp".into(),
                p: Some(p),
            },
        }
    }

    pub fn to_spec(&self) -> Result<FieldSpec> {
        match (self.kind.as_str(), self.p) {
            ("Q", _) => Ok(FieldSpec::Rationals),
            ("Fp", Some(p)) => FieldSpec::prime(p),
            _ => Err(Error::Parse(format!("bad field object kind `{}`", self.kind))),
        }
    }
}

impl AlgebraJson {
    /// Converts to a presentation; `coeff` resolves any non-numeric coefficient
    /// token (used by parametrised preset files).
    pub fn to_presentation_with(
        &self,
        coeff: &dyn Fn(&str) -> Result<BigRational>,
    ) -> Result<Presentation> {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                id: a.id.clone(),
                src: a.src,
                tgt: a.tgt,
            })
            .collect();
        let quiver = Quiver::new(self.vertices.clone(), arrows)?;
        let mut relations = Vec::new();
        for rel in &self.relations {
            let terms = rel
                .iter()
                .map(|t| Ok((coeff(&t.coeff)?, quiver.path_from_ids(&t.path)?)))
                .collect::<Result<Vec<_>>>()?;
            let r = PathSum::normalized(terms)?;
            if !r.is_zero() {
                relations.push(r);
            }
        }
        let order = self.poset.iter().map(|[a, b]| (*a, *b)).collect();
        Presentation::new(quiver, relations, self.field.to_spec()?, order)
    }

    pub fn to_presentation(&self) -> Result<Presentation> {
        self.to_presentation_with(&parse_rational)
    }

    pub fn from_presentation(p: &Presentation) -> Self {
        let arrows = p.quiver.arrows();
        Self {
            field: FieldJson::from_spec(p.field),
            vertices: p.quiver.vertices().to_vec(),
            arrows: arrows
                .iter()
                .map(|a| ArrowJson {
                    id: a.id.clone(),
                    src: a.src,
                    tgt: a.tgt,
                })
                .collect(),
            relations: p
                .relations
                .iter()
                .map(|r| {
                    r.terms
                        .iter()
                        .map(|(c, path)| TermJson {
                            coeff: format_rational(c),
                            path: path.word.iter().map(|&a| arrows[a].id.clone()).collect(),
                        })
                        .collect()
                })
                .collect(),
            poset: p.order.iter().map(|&(a, b)| [a, b]).collect(),
            provenance: None,
        }
    }
}

pub fn parse(text: &str) -> Result<Presentation> {
    let j: AlgebraJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    j.to_presentation()
}

pub fn serialize(p: &Presentation) -> String {
    serde_json::to_string_pretty(&AlgebraJson::from_presentation(p)).expect("plain data serializes")
}
