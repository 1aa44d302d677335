//! Arc-count matrices, node relabeling, and the two exact counting primitives.
//!
//! A directed multigraph on `p` nodes is stored as a dense `p × p` matrix
//! whose entry `(i, j)` is the number of arcs from node `i` to node `j`.
//! Indices are 0-based here; every piece of external text uses 1-based names.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported node count. Canonicalization is factorial-time.
pub const MAX_NODES: usize = 10;

/// Largest supported common degree; `d!` must fit the exact count type.
pub const MAX_DEGREE: u32 = 20;

/// Exact count type for cardinalities and totals.
pub type Count = u64;

/// Common in-degree and out-degree of every node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Degree(u32);

impl Degree {
    pub const TWO: Degree = Degree(2);

    pub fn new(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::Usage("degree must be at least 1".into()));
        }
        if d > MAX_DEGREE {
            return Err(Error::DegreeRange { d, max: MAX_DEGREE });
        }
        Ok(Degree(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl Default for Degree {
    fn default() -> Self {
        Degree::TWO
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Rejects node counts above [`MAX_NODES`].
pub fn check_cap(p: usize) -> Result<()> {
    if p > MAX_NODES {
        Err(Error::CapExceeded { p, cap: MAX_NODES })
    } else {
        Ok(())
    }
}

/// Dense `p × p` arc-count matrix, row-major.
///
/// The derived ordering compares `p` first and then the row-major entry
/// sequence, so among matrices of one size it is the lexicographic order
/// used for canonical forms and census ranks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcMatrix {
    p: usize,
    entries: Vec<u8>,
}

impl ArcMatrix {
    /// The null multigraph.
    pub fn empty() -> Self {
        ArcMatrix { p: 0, entries: Vec::new() }
    }

    pub fn zeros(p: usize) -> Self {
        ArcMatrix { p, entries: vec![0; p * p] }
    }

    /// Builds a matrix from a row-major entry vector of length `p * p`.
    pub fn new(p: usize, entries: Vec<u8>) -> Result<Self> {
        if entries.len() != p * p {
            return Err(Error::Dimension { expected: p * p, found: entries.len() });
        }
        Ok(ArcMatrix { p, entries })
    }

    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let p = rows.len();
        let mut entries = Vec::with_capacity(p * p);
        for row in rows {
            let row = row.as_ref();
            if row.len() != p {
                return Err(Error::Dimension { expected: p, found: row.len() });
            }
            entries.extend_from_slice(row);
        }
        Ok(ArcMatrix { p, entries })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.p + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.entries[i * self.p + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.entries[i * self.p..(i + 1) * self.p]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> + '_ {
        // chunks(0) panics, and p = 0 has no rows anyway.
        self.entries.chunks(self.p.max(1)).take(self.p)
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows().map(<[u8]>::to_vec).collect()
    }

    pub fn row_sums(&self) -> Vec<u32> {
        self.rows().map(|r| r.iter().map(|&x| u32::from(x)).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u32> {
        let mut sums = vec![0u32; self.p];
        for row in self.rows() {
            for (s, &x) in sums.iter_mut().zip(row) {
                *s += u32::from(x);
            }
        }
        sums
    }

    /// Total number of arcs.
    pub fn arc_count(&self) -> u32 {
        self.entries.iter().map(|&x| u32::from(x)).sum()
    }

    /// True iff every row sum and every column sum equals `d`. Vacuous for `p = 0`.
    pub fn is_regular(&self, d: Degree) -> bool {
        let d = d.get();
        self.row_sums().iter().all(|&s| s == d) && self.col_sums().iter().all(|&s| s == d)
    }

    /// Relabels nodes: the result `B` satisfies `B[σ(i)][σ(j)] = A[i][j]`.
    pub fn apply_permutation(&self, sigma: &Permutation) -> Result<ArcMatrix> {
        if sigma.len() != self.p {
            return Err(Error::Dimension { expected: self.p, found: sigma.len() });
        }
        let p = self.p;
        let mut out = vec![0u8; p * p];
        for i in 0..p {
            let si = sigma.image(i);
            for j in 0..p {
                out[si * p + sigma.image(j)] = self.get(i, j);
            }
        }
        Ok(ArcMatrix { p, entries: out })
    }

    /// Number of ways to assign each node's `d` in-slots to its incoming arcs:
    /// the product over columns of `d! / ∏_i A[i][j]!`.
    pub fn weight(&self, d: Degree) -> Result<Count> {
        if !self.is_regular(d) {
            return Err(Error::NotRegular { d: d.get() });
        }
        let mut w: Count = 1;
        for j in 0..self.p {
            let col = (0..self.p).map(|i| u32::from(self.get(i, j)));
            w = w
                .checked_mul(multinomial(col)?)
                .ok_or(Error::Overflow("weight"))?;
        }
        Ok(w)
    }
}

impl fmt::Display for ArcMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{row:?}")?;
        }
        write!(f, "]")
    }
}

/// A bijection on `0..p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(p: usize) -> Self {
        Permutation { images: (0..p).collect() }
    }

    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(images));
            }
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// Class designation: node count, rank within that node count, cardinality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassId {
    pub p: usize,
    pub rank: usize,
    pub cardinality: Count,
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.p, self.rank, self.cardinality)
    }
}

pub fn factorial(n: u32) -> Result<Count> {
    (1..=Count::from(n)).try_fold(1 as Count, |acc, k| acc.checked_mul(k).ok_or(Error::Overflow("factorial")))
}

/// Multinomial coefficient `(Σ k)! / ∏ k!`, built as a product of binomials.
fn multinomial(parts: impl Iterator<Item = u32>) -> Result<Count> {
    let mut acc: Count = 1;
    let mut n = 0u32;
    for k in parts {
        n += k;
        acc = acc
            .checked_mul(binomial(n, k)?)
            .ok_or(Error::Overflow("multinomial"))?;
    }
    Ok(acc)
}

fn binomial(n: u32, k: u32) -> Result<Count> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc
            .checked_mul(u128::from(n - i))
            .ok_or(Error::Overflow("binomial"))?
            / u128::from(i + 1);
    }
    Count::try_from(acc).map_err(|_| Error::Overflow("binomial"))
}

/// Number of labeled configurations `(d·p)! / (d!)^p`, computed exactly.
///
/// Evaluated as `∏_{k=1..p} C(k·d, d)` so intermediates never exceed the
/// final value by more than one binomial factor.
pub fn total_configurations(p: usize, d: Degree) -> Result<Count> {
    let p = u32::try_from(p).map_err(|_| Error::Overflow("total configurations"))?;
    let d = d.get();
    let mut acc: Count = 1;
    for k in 1..=p {
        let n = k.checked_mul(d).ok_or(Error::Overflow("total configurations"))?;
        acc = acc
            .checked_mul(binomial(n, d)?)
            .ok_or(Error::Overflow("total configurations"))?;
    }
    Ok(acc)
}
