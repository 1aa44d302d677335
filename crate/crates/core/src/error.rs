use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Per-node degree shortfall of a monomial or matrix against a degree spec.
///
/// Entries are `d - actual`: positive values are missing arcs, negative
/// values are excess arcs. Index 0 is node 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeDeficit {
    pub out_deficit: Vec<i64>,
    pub in_deficit: Vec<i64>,
    pub factor_count: usize,
    pub expected_factors: usize,
}

impl DegreeDeficit {
    /// The single missing arc `(source, target)` (1-based) if the deficit is
    /// exactly one out-slot at one node and one in-slot at one node.
    pub fn single_missing_arc(&self) -> Option<(usize, usize)> {
        if self.factor_count + 1 != self.expected_factors {
            return None;
        }
        let sole = |v: &[i64]| -> Option<usize> {
            if v.iter().any(|&x| x < 0) {
                return None;
            }
            let mut it = v.iter().enumerate().filter(|(_, &x)| x != 0);
            match (it.next(), it.next()) {
                (Some((i, 1)), None) => Some(i + 1),
                _ => None,
            }
        };
        Some((sole(&self.out_deficit)?, sole(&self.in_deficit)?))
    }
}

impl fmt::Display for DegreeDeficit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} factors (expected {}); out-deficits {:?}; in-deficits {:?}",
            self.factor_count, self.expected_factors, self.out_deficit, self.in_deficit
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("not a permutation: {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("matrix is not regular for degree {d}")]
    NotRegular { d: u32 },

    #[error("degree violation: {0}")]
    Degree(DegreeDeficit),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("compact style cannot print node {node} (names above 9 need braced or bracket style)")]
    Style { node: usize },

    #[error("node count {p} exceeds the supported maximum of {cap}")]
    CapExceeded { p: usize, cap: usize },

    #[error("degree {d} outside the supported range 1..={max}")]
    DegreeRange { d: u32, max: u32 },

    #[error("exact integer overflow computing {0}")]
    Overflow(&'static str),

    #[error("malformed configuration word: {0}")]
    InvalidWord(String),

    #[error("invariant failure: {0}")]
    Invariant(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for cap and overflow errors, which the CLI reports as resource limits.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::Overflow(_) | Error::DegreeRange { .. }
        )
    }
}
