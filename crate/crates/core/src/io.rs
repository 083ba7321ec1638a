//! JSON decomposition files.
//!
//! A Waring file is `{"n", "D", "terms": [{"weight", "direction"}]}`; a
//! partially symmetric file is `{"sizes", "degrees", "terms": [{"weight",
//! "directions"}]}`. Directions are normalized on load.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{norm2, UnitVector};
use crate::terracini::{PsrdDecomposition, PsrdTerm, SymmetricTerm, WaringDecomposition};

/// Input norms further than this from 1 produce a warning.
pub const NORM_WARN_TOL: f64 = 1e-8;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WaringTermFile {
    weight: f64,
    direction: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WaringFile {
    n: usize,
    #[serde(rename = "D")]
    order: usize,
    terms: Vec<WaringTermFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PsrdTermFile {
    weight: f64,
    directions: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PsrdFile {
    sizes: Vec<usize>,
    degrees: Vec<usize>,
    terms: Vec<PsrdTermFile>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decomposition {
    Waring(WaringDecomposition),
    Psrd(PsrdDecomposition),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Loaded {
    pub decomposition: Decomposition,
    pub warnings: Vec<String>,
}

fn normalize(raw: Vec<f64>, label: &str, warnings: &mut Vec<String>) -> Result<UnitVector> {
    let norm = norm2(&raw);
    if !norm.is_finite() {
        return Err(Error::InvalidDecomposition(format!("{label} has non-finite entries")));
    }
    if (norm - 1.0).abs() > NORM_WARN_TOL {
        warnings.push(format!("{label} has norm {norm}; normalized"));
    }
    UnitVector::normalize(raw)
}

fn check_len(len: usize, expected: usize, label: &str) -> Result<()> {
    if len == expected {
        Ok(())
    } else {
        Err(Error::InvalidDecomposition(format!("{label} has length {len}, expected {expected}")))
    }
}

fn waring_from_file(f: WaringFile, warnings: &mut Vec<String>) -> Result<WaringDecomposition> {
    let terms = f
        .terms
        .into_iter()
        .enumerate()
        .map(|(r, t)| {
            let label = format!("terms[{r}].direction");
            check_len(t.direction.len(), f.n, &label)?;
            SymmetricTerm::new(t.weight, normalize(t.direction, &label, warnings)?)
        })
        .collect::<Result<Vec<_>>>()?;
    WaringDecomposition::new(f.n, f.order, terms)
}

fn psrd_from_file(f: PsrdFile, warnings: &mut Vec<String>) -> Result<PsrdDecomposition> {
    let terms = f
        .terms
        .into_iter()
        .enumerate()
        .map(|(r, t)| {
            check_len(t.directions.len(), f.sizes.len(), &format!("terms[{r}].directions"))?;
            let dirs = t
                .directions
                .into_iter()
                .zip(&f.sizes)
                .enumerate()
                .map(|(k, (d, &n))| {
                    let label = format!("terms[{r}].directions[{k}]");
                    check_len(d.len(), n, &label)?;
                    normalize(d, &label, warnings)
                })
                .collect::<Result<Vec<_>>>()?;
            PsrdTerm::new(t.weight, dirs)
        })
        .collect::<Result<Vec<_>>>()?;
    PsrdDecomposition::new(f.sizes, f.degrees, terms)
}

/// Parses either file variant, chosen by the presence of a `"sizes"` key.
pub fn parse_decomposition(text: &str) -> Result<Loaded> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let mut warnings = Vec::new();
    let is_psrd = value.get("sizes").is_some();
    let decomposition = if is_psrd {
        Decomposition::Psrd(psrd_from_file(serde_json::from_value(value)?, &mut warnings)?)
    } else {
        Decomposition::Waring(waring_from_file(serde_json::from_value(value)?, &mut warnings)?)
    };
    Ok(Loaded { decomposition, warnings })
}

pub fn load_decomposition(path: impl AsRef<Path>) -> Result<Loaded> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    parse_decomposition(&text)
}

pub fn waring_to_json(dec: &WaringDecomposition) -> String {
    let f = WaringFile {
        n: dec.n(),
        order: dec.order(),
        terms: dec
            .terms()
            .iter()
            .map(|t| WaringTermFile { weight: t.weight(), direction: t.direction().as_slice().to_vec() })
            .collect(),
    };
    serde_json::to_string_pretty(&f).expect("plain data serializes")
}

pub fn psrd_to_json(dec: &PsrdDecomposition) -> String {
    let f = PsrdFile {
        sizes: dec.sizes().to_vec(),
        degrees: dec.degrees().to_vec(),
        terms: dec
            .terms()
            .iter()
            .map(|t| PsrdTermFile {
                weight: t.weight(),
                directions: t.directions().iter().map(|d| d.as_slice().to_vec()).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&f).expect("plain data serializes")
}
