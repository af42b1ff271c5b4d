//! JSON files for posets, labelings, complexes, certificates and shelling
//! orders. Unknown keys are rejected everywhere.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, ShellingOrder, SimplicialComplex, VdCertificate};
use crate::labeling::{EdgeLabeling, Label};
use crate::poset::{Poset, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("input starts with a byte-order mark")]
    ByteOrderMark,
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    if text.starts_with('\u{feff}') {
        return Err(IoError::ByteOrderMark);
    }
    serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))
}

fn emit<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetFile {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl PosetFile {
    pub fn of(p: &Poset) -> PosetFile {
        PosetFile {
            elements: p.names().to_vec(),
            covers: p.cover_names(),
        }
    }

    pub fn build(&self) -> Result<Poset, PosetError> {
        Poset::build(&self.elements, &self.covers)
    }
}

pub fn poset_from_json(text: &str) -> Result<Poset, IoError> {
    Ok(parse::<PosetFile>(text)?.build()?)
}

pub fn poset_to_json(p: &Poset) -> String {
    emit(&PosetFile::of(p))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub from: String,
    pub to: String,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelingFile {
    pub edges: Vec<EdgeEntry>,
}

impl LabelingFile {
    pub fn of(lab: &EdgeLabeling) -> LabelingFile {
        LabelingFile {
            edges: lab
                .iter()
                .map(|(from, to, &label)| EdgeEntry {
                    from: from.to_string(),
                    to: to.to_string(),
                    label,
                })
                .collect(),
        }
    }

    pub fn labeling(&self) -> EdgeLabeling {
        let mut lab = EdgeLabeling::new();
        for e in &self.edges {
            lab.insert(e.from.clone(), e.to.clone(), e.label);
        }
        lab
    }
}

pub fn labeling_from_json(text: &str) -> Result<EdgeLabeling, IoError> {
    Ok(parse::<LabelingFile>(text)?.labeling())
}

/// Edges in the labeling's own (name-sorted) order.
pub fn labeling_to_json(lab: &EdgeLabeling) -> String {
    emit(&LabelingFile::of(lab))
}

/// Labeling edges in the poset's cover order.
pub fn labeling_to_json_for(p: &Poset, lab: &EdgeLabeling) -> String {
    let edges = p
        .cover_names()
        .into_iter()
        .filter_map(|(from, to)| {
            lab.get(&from, &to).map(|&label| EdgeEntry { from, to, label })
        })
        .collect();
    emit(&LabelingFile { edges })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub facets: Vec<Vec<String>>,
}

pub fn complex_from_json(text: &str) -> Result<SimplicialComplex, IoError> {
    Ok(SimplicialComplex::from_named(&parse::<ComplexFile>(text)?.facets)?)
}

pub fn complex_to_json(c: &SimplicialComplex) -> String {
    emit(&ComplexFile { facets: c.named_facets() })
}

pub fn certificate_from_json(text: &str) -> Result<VdCertificate, IoError> {
    parse(text)
}

pub fn certificate_to_json(cert: &VdCertificate) -> String {
    emit(cert)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderFile {
    pub order: ShellingOrder,
}

pub fn order_from_json(text: &str) -> Result<ShellingOrder, IoError> {
    Ok(parse::<OrderFile>(text)?.order)
}

pub fn order_to_json(order: &ShellingOrder) -> String {
    emit(&OrderFile { order: order.clone() })
}
