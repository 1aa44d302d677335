//! Published class list for `d = 2`, `p = 0..=5`, shipped as a CSV asset.
//!
//! Columns: `p,rank,cardinality,monomial,note`. Monomials are compact style
//! with the factor order of the original listing. The note column records
//! transcription remarks and is surfaced verbatim in verification reports.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Count;

pub const EMBEDDED_CATALOG: &str = include_str!("../assets/paper_catalog.csv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub p: usize,
    pub rank: usize,
    pub cardinality: Count,
    pub monomial: String,
    #[serde(default)]
    pub note: String,
}

impl PaperRecord {
    pub fn designation(&self) -> String {
        format!("{},{},{}", self.p, self.rank, self.cardinality)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperCatalog {
    pub records: Vec<PaperRecord>,
}

impl PaperCatalog {
    pub fn embedded() -> Self {
        Self::from_reader(EMBEDDED_CATALOG.as_bytes()).expect("embedded catalog is well-formed")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref())?;
        Self::from_reader(file)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Catalog(e.to_string()))?.clone();
        let expected = ["p", "rank", "cardinality", "monomial", "note"];
        if headers.iter().ne(expected) {
            return Err(Error::Catalog(format!(
                "header must be {}, found {}",
                expected.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let records = rdr
            .deserialize()
            .collect::<std::result::Result<Vec<PaperRecord>, _>>()
            .map_err(|e| Error::Catalog(e.to_string()))?;
        Ok(PaperCatalog { records })
    }

    pub fn slice(&self, p: usize) -> impl Iterator<Item = &PaperRecord> + '_ {
        self.records.iter().filter(move |r| r.p == p)
    }

    /// Node counts present, ascending.
    pub fn node_counts(&self) -> Vec<usize> {
        let mut ps: Vec<usize> = self.records.iter().map(|r| r.p).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }
}
