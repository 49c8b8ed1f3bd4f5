use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{BipartiteMonoid, Monoid, MonoidError};

/// A table as it appears on disk, before any validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMonoid {
    pub size: usize,
    #[serde(default)]
    pub identity: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default)]
    pub generators: Vec<usize>,
}

/// `{ "size", "identity", "table", "P", "generators" }`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidJson {
    pub size: usize,
    #[serde(default)]
    pub identity: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(rename = "P", default)]
    pub p: Vec<usize>,
    #[serde(default)]
    pub generators: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(#[from] MonoidError),
    #[error("declared size {declared} but the table has {rows} rows")]
    SizeMismatch { declared: usize, rows: usize },
}

impl MonoidJson {
    pub fn from_bm(b: &BipartiteMonoid) -> Self {
        MonoidJson {
            size: b.size(),
            identity: b.identity(),
            table: b.monoid().rows(),
            p: b.p_elements(),
            generators: b.monoid().generators().to_vec(),
        }
    }

    pub fn raw(&self) -> RawMonoid {
        RawMonoid {
            size: self.size,
            identity: self.identity,
            table: self.table.clone(),
            generators: self.generators.clone(),
        }
    }

    pub fn into_bm(self) -> Result<BipartiteMonoid, DecodeError> {
        if self.size != self.table.len() {
            return Err(DecodeError::SizeMismatch { declared: self.size, rows: self.table.len() });
        }
        let m = Monoid::from_rows(self.table, self.identity, self.generators)?;
        Ok(BipartiteMonoid::new(m, self.p)?)
    }

    pub fn parse(text: &str) -> Result<BipartiteMonoid, DecodeError> {
        let j: MonoidJson = serde_json::from_str(text)?;
        j.into_bm()
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data serializes")
    }
}
