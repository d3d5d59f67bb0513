//! Instance and contact-data files. TOML by default, JSON when the path ends
//! in `.json`.

use std::fs;
use std::path::{Path, PathBuf};

use fibrepos::chowring::{AmbientData, CiFactor, CompleteIntersectionSpec};
use fibrepos::cones::{HNData, HNPiece};
use fibrepos::exact::from_int;
use fibrepos::stability::{ContactDatum, WeightedFiltration};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSection {
    pub rank: i64,
    pub degree: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hn: Option<Vec<HNPiece>>,
}

/// A relative complete intersection `X ⊂ P(E)` over a curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub bundle: BundleSection,
    pub ci: Vec<CiFactor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<i64>,
}

/// Validated form of [`InstanceFile`].
#[derive(Debug, Clone)]
pub struct Instance {
    pub ambient: AmbientData,
    pub spec: CompleteIntersectionSpec,
    pub hn: Option<HNData>,
    pub h: Option<i64>,
    pub twist: Option<i64>,
}

impl InstanceFile {
    pub fn validate(&self) -> Result<Instance, CliError> {
        let b = &self.bundle;
        let ambient = AmbientData::with_genus(b.rank, b.degree, b.genus.unwrap_or(0))?;
        let spec = CompleteIntersectionSpec::new(self.ci.clone())?;
        spec.validate_for(&ambient)?;
        let hn = match &b.hn {
            Some(pieces) => {
                let hn = HNData::new(pieces.clone())?;
                hn.check_against(&ambient)?;
                Some(hn)
            }
            None => None,
        };
        Ok(Instance { ambient, spec, hn, h: self.h, twist: self.twist })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationSection {
    pub n: i64,
    pub weights: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContactSection {
    pub dim: i64,
    pub deg: i64,
    pub e: i64,
}

impl ContactSection {
    fn datum(self) -> Result<ContactDatum, CliError> {
        Ok(ContactDatum::from_ints(self.dim, self.deg, self.e)?)
    }
}

/// Weighted filtration on `P^n` with two subvarieties `Y` and `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContactFile {
    pub filtration: FiltrationSection,
    pub y: ContactSection,
    pub z: ContactSection,
}

pub struct ContactInput {
    pub filtration: WeightedFiltration,
    pub y: ContactDatum,
    pub z: ContactDatum,
}

impl ContactFile {
    pub fn validate(&self) -> Result<ContactInput, CliError> {
        let f = &self.filtration;
        let filtration = WeightedFiltration::new(f.n, f.weights.iter().map(|&w| from_int(w)).collect())?;
        Ok(ContactInput { filtration, y: self.y.datum()?, z: self.z.datum()? })
    }
}

/// A parsed input file whose schema is not yet known.
pub enum Document {
    Toml(toml::Table),
    Json(serde_json::Value),
}

impl Document {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
        let parse_err = |msg: String| CliError::Parse { path: path.to_owned(), msg };
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            serde_json::from_str(&text).map(Document::Json).map_err(|e| parse_err(e.to_string()))
        } else {
            toml::from_str(&text).map(Document::Toml).map_err(|e| parse_err(e.to_string()))
        }
    }

    pub fn has_key(&self, key: &str) -> bool {
        match self {
            Document::Toml(t) => t.contains_key(key),
            Document::Json(v) => v.get(key).is_some(),
        }
    }

    pub fn parse<T: DeserializeOwned>(self, path: &Path) -> Result<T, CliError> {
        let res = match self {
            Document::Toml(t) => t.try_into().map_err(|e: toml::de::Error| e.to_string()),
            Document::Json(v) => serde_json::from_value(v).map_err(|e| e.to_string()),
        };
        res.map_err(|msg| CliError::Parse { path: PathBuf::from(path), msg })
    }
}

pub fn load_instance(path: &Path) -> Result<(InstanceFile, Instance), CliError> {
    let file: InstanceFile = Document::load(path)?.parse(path)?;
    let inst = file.validate()?;
    Ok((file, inst))
}
