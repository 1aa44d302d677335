//! Exhaustive generation of labeled objects.
//!
//! Two independent streams: every `d`-regular arc matrix on `p` nodes, built
//! row by row from weak compositions of `d`, and every configuration word,
//! the labeled model whose total is `(d·p)! / (d!)^p`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{check_cap, total_configurations, ArcMatrix, Count, Degree};

/// All weak compositions of `d` into `p` parts, in ascending lexicographic order.
pub fn weak_compositions(d: u32, p: usize) -> Vec<Vec<u8>> {
    fn rec(left: u8, slots: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(left - x, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p > 0 {
        rec(d as u8, p, &mut Vec::with_capacity(p), &mut out);
    }
    out
}

/// Demand-driven stream of every `d`-regular `p × p` matrix, ascending in
/// row-major lexicographic order.
///
/// Rows `0..p-1` are chosen from the composition list with a running column
/// budget; the last row is forced to whatever the budget leaves.
pub struct RegularMatrices {
    p: usize,
    comps: Vec<Vec<u8>>,
    chosen: Vec<usize>,
    col_left: Vec<u8>,
    first_row: Option<usize>,
    started: bool,
    finished: bool,
}

impl RegularMatrices {
    pub fn new(p: usize, d: Degree) -> Result<Self> {
        check_cap(p)?;
        Ok(Self::build(p, d, None))
    }

    fn build(p: usize, d: Degree, first_row: Option<usize>) -> Self {
        RegularMatrices {
            p,
            comps: weak_compositions(d.get(), p),
            chosen: Vec::with_capacity(p),
            col_left: vec![d.get() as u8; p],
            first_row,
            started: false,
            finished: false,
        }
    }

    /// Splits the stream into independent pieces, one per first-row
    /// composition. Concatenating the pieces in order reproduces the full
    /// stream.
    pub fn partitions(p: usize, d: Degree) -> Result<Vec<RegularMatrices>> {
        check_cap(p)?;
        if p < 2 {
            return Ok(vec![Self::build(p, d, None)]);
        }
        let n = weak_compositions(d.get(), p).len();
        Ok((0..n).map(|k| Self::build(p, d, Some(k))).collect())
    }

    fn free_rows(&self) -> usize {
        self.p.saturating_sub(1)
    }

    fn fits(&self, idx: usize) -> bool {
        self.comps[idx].iter().zip(&self.col_left).all(|(a, b)| a <= b)
    }

    fn place(&mut self, from: usize) -> bool {
        let level = self.chosen.len();
        let range = match (level, self.first_row) {
            (0, Some(k)) if from <= k => k..k + 1,
            (0, Some(_)) => return false,
            _ => from..self.comps.len(),
        };
        for idx in range {
            if self.fits(idx) {
                for (c, &a) in self.col_left.iter_mut().zip(&self.comps[idx]) {
                    *c -= a;
                }
                self.chosen.push(idx);
                return true;
            }
        }
        false
    }

    fn backtrack(&mut self) -> bool {
        while let Some(idx) = self.chosen.pop() {
            for (c, &a) in self.col_left.iter_mut().zip(&self.comps[idx]) {
                *c += a;
            }
            if self.place(idx + 1) {
                return true;
            }
        }
        false
    }

    fn descend(&mut self) -> bool {
        while self.chosen.len() < self.free_rows() {
            if !self.place(0) && !self.backtrack() {
                return false;
            }
        }
        true
    }

    fn current(&self) -> ArcMatrix {
        let mut entries = Vec::with_capacity(self.p * self.p);
        for &idx in &self.chosen {
            entries.extend_from_slice(&self.comps[idx]);
        }
        entries.extend_from_slice(&self.col_left);
        ArcMatrix::new(self.p, entries).expect("p*p entries")
    }
}

impl Iterator for RegularMatrices {
    type Item = ArcMatrix;

    fn next(&mut self) -> Option<ArcMatrix> {
        if self.finished {
            return None;
        }
        let ok = if self.started {
            self.backtrack() && self.descend()
        } else {
            self.started = true;
            self.descend()
        };
        if ok {
            Some(self.current())
        } else {
            self.finished = true;
            None
        }
    }
}

pub fn enumerate_regular_matrices(p: usize, d: Degree) -> Result<RegularMatrices> {
    RegularMatrices::new(p, d)
}

/// Counts regular matrices without building them, memoizing on the sorted
/// remaining column budget.
pub fn count_regular_matrices(p: usize, d: Degree) -> Result<Count> {
    check_cap(p)?;
    fn rec(
        rows_left: usize,
        budget: &mut Vec<u8>,
        comps: &[Vec<u8>],
        memo: &mut HashMap<(usize, Vec<u8>), Count>,
    ) -> Result<Count> {
        if rows_left <= 1 {
            return Ok(1);
        }
        let mut key = budget.clone();
        key.sort_unstable();
        if let Some(&n) = memo.get(&(rows_left, key.clone())) {
            return Ok(n);
        }
        let mut total: Count = 0;
        for comp in comps {
            if comp.iter().zip(budget.iter()).all(|(a, b)| a <= b) {
                budget.iter_mut().zip(comp).for_each(|(b, a)| *b -= a);
                let sub = rec(rows_left - 1, budget, comps, memo);
                budget.iter_mut().zip(comp).for_each(|(b, a)| *b += a);
                total = total.checked_add(sub?).ok_or(Error::Overflow("matrix count"))?;
            }
        }
        memo.insert((rows_left, key), total);
        Ok(total)
    }
    let comps = weak_compositions(d.get(), p);
    rec(p, &mut vec![d.get() as u8; p], &comps, &mut HashMap::new())
}

/// A length `d·p` word over nodes in which every node occurs `d` times.
///
/// Block `j` (positions `d·j .. d·(j+1)`) lists the sources feeding node
/// `j`'s in-slots. Symbols are stored 0-based and displayed 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConfigurationWord {
    symbols: Vec<u8>,
}

impl ConfigurationWord {
    /// Validates a word given with 1-based node names.
    pub fn from_names(names: &[usize], p: usize, d: Degree) -> Result<Self> {
        let d = d.get() as usize;
        if names.len() != d * p {
            return Err(Error::InvalidWord(format!("length {} != {}", names.len(), d * p)));
        }
        let mut seen = vec![0usize; p];
        for &s in names {
            if s == 0 || s > p {
                return Err(Error::InvalidWord(format!("symbol {s} outside 1..={p}")));
            }
            seen[s - 1] += 1;
        }
        if let Some(s) = seen.iter().position(|&c| c != d) {
            return Err(Error::InvalidWord(format!("node {} occurs {} times", s + 1, seen[s])));
        }
        Ok(ConfigurationWord { symbols: names.iter().map(|&s| (s - 1) as u8).collect() })
    }

    /// 0-based symbols.
    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Projects the word onto its multigraph: `A[i][j]` counts symbol `i` in block `j`.
    pub fn to_matrix(&self, p: usize, d: Degree) -> Result<ArcMatrix> {
        let dd = d.get() as usize;
        if self.symbols.len() != dd * p || self.symbols.iter().any(|&s| usize::from(s) >= p) {
            return Err(Error::InvalidWord(format!("{self} does not fit p={p}, d={d}")));
        }
        let mut a = ArcMatrix::zeros(p);
        for (pos, &s) in self.symbols.iter().enumerate() {
            let (i, j) = (usize::from(s), pos / dd);
            a.set(i, j, a.get(i, j) + 1);
        }
        if !a.is_regular(d) {
            return Err(Error::InvalidWord(format!("{self} is not balanced")));
        }
        Ok(a)
    }
}

impl fmt::Display for ConfigurationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{}", u32::from(*s) + 1)?;
        }
        Ok(())
    }
}

pub fn word_to_matrix(w: &ConfigurationWord, p: usize, d: Degree) -> Result<ArcMatrix> {
    w.to_matrix(p, d)
}

/// Lexicographic stream of every multiset permutation of `{1^d, …, p^d}`,
/// optionally restricted to words starting with a fixed symbol.
pub struct Words {
    current: Vec<u8>,
    // positions before `fixed` never move
    fixed: usize,
    started: bool,
    finished: bool,
}

impl Words {
    pub fn new(p: usize, d: Degree) -> Result<Self> {
        check_cap(p)?;
        total_configurations(p, d)?;
        let current = (0..p as u8)
            .flat_map(|s| std::iter::repeat_n(s, d.get() as usize))
            .collect();
        Ok(Words { current, fixed: 0, started: false, finished: false })
    }

    /// One stream per leading symbol; their concatenation is the full stream.
    pub fn partitions(p: usize, d: Degree) -> Result<Vec<Words>> {
        let full = Words::new(p, d)?;
        if p == 0 {
            return Ok(vec![full]);
        }
        let dd = d.get() as usize;
        Ok((0..p)
            .map(|lead| {
                // lead symbol first, then the rest of the multiset ascending
                let mut current = full.current.clone();
                let at = lead * dd;
                current[..=at].rotate_right(1);
                Words { current, fixed: 1, started: false, finished: false }
            })
            .collect())
    }

    fn advance(&mut self) -> bool {
        let w = &mut self.current[self.fixed..];
        let n = w.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && w[i - 1] >= w[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while w[j] <= w[i - 1] {
            j -= 1;
        }
        w.swap(i - 1, j);
        w[i..].reverse();
        true
    }
}

impl Iterator for Words {
    type Item = ConfigurationWord;

    fn next(&mut self) -> Option<ConfigurationWord> {
        if self.finished {
            return None;
        }
        if self.started && !self.advance() {
            self.finished = true;
            return None;
        }
        self.started = true;
        Some(ConfigurationWord { symbols: self.current.clone() })
    }
}

pub fn enumerate_words(p: usize, d: Degree) -> Result<Words> {
    Words::new(p, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deg(d: u32) -> Degree {
        Degree::new(d).unwrap()
    }

    #[test]
    fn compositions() {
        assert_eq!(weak_compositions(2, 2), [vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(weak_compositions(2, 3).len(), 6);
        assert!(weak_compositions(2, 0).is_empty());
    }

    #[test]
    fn small_matrix_streams() {
        let all: Vec<_> = enumerate_regular_matrices(1, Degree::TWO).unwrap().collect();
        assert_eq!(all, [ArcMatrix::from_rows(&[[2]]).unwrap()]);
        let all: Vec<_> = enumerate_regular_matrices(0, Degree::TWO).unwrap().collect();
        assert_eq!(all, [ArcMatrix::empty()]);
        let all: Vec<_> = enumerate_regular_matrices(2, Degree::TWO).unwrap().collect();
        let expect: Vec<_> = [[[0, 2], [2, 0]], [[1, 1], [1, 1]], [[2, 0], [0, 2]]]
            .iter()
            .map(|r| ArcMatrix::from_rows(r).unwrap())
            .collect();
        assert_eq!(all, expect);
    }

    #[test]
    fn matrix_stream_is_sorted_and_regular() {
        let all: Vec<_> = enumerate_regular_matrices(4, Degree::TWO).unwrap().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|a| a.is_regular(Degree::TWO)));
    }

    #[test]
    fn partitions_concatenate_to_stream() {
        for p in 0..=4 {
            let whole: Vec<_> = enumerate_regular_matrices(p, Degree::TWO).unwrap().collect();
            let parts: Vec<_> = RegularMatrices::partitions(p, Degree::TWO)
                .unwrap()
                .into_iter()
                .flatten()
                .collect();
            assert_eq!(whole, parts, "p={p}");
        }
    }

    #[test]
    fn counts() {
        assert_eq!(count_regular_matrices(0, Degree::TWO).unwrap(), 1);
        assert_eq!(count_regular_matrices(2, Degree::TWO).unwrap(), 3);
        assert_eq!(count_regular_matrices(3, Degree::TWO).unwrap(), 21);
        for (p, d) in [(4, 2), (5, 2), (3, 3), (5, 1), (4, 3)] {
            let n = enumerate_regular_matrices(p, deg(d)).unwrap().count() as Count;
            assert_eq!(count_regular_matrices(p, deg(d)).unwrap(), n, "p={p} d={d}");
        }
    }

    #[test]
    fn cap_is_a_usage_error() {
        assert!(matches!(enumerate_regular_matrices(11, Degree::TWO), Err(Error::CapExceeded { .. })));
        assert!(matches!(enumerate_words(11, Degree::TWO), Err(Error::CapExceeded { .. })));
        assert!(matches!(count_regular_matrices(11, Degree::TWO), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn word_streams() {
        let w: Vec<String> = enumerate_words(1, Degree::TWO).unwrap().map(|w| w.to_string()).collect();
        assert_eq!(w, ["11"]);
        let w: Vec<String> = enumerate_words(2, Degree::TWO).unwrap().map(|w| w.to_string()).collect();
        assert_eq!(w, ["1122", "1212", "1221", "2112", "2121", "2211"]);
        assert_eq!(enumerate_words(3, Degree::TWO).unwrap().count(), 90);
        assert_eq!(enumerate_words(0, Degree::TWO).unwrap().count(), 1);
    }

    #[test]
    fn word_partitions_concatenate() {
        for (p, d) in [(0, 2), (1, 2), (3, 2), (3, 3), (4, 1)] {
            let whole: Vec<_> = enumerate_words(p, deg(d)).unwrap().collect();
            let parts: Vec<_> = Words::partitions(p, deg(d)).unwrap().into_iter().flatten().collect();
            assert_eq!(whole, parts, "p={p} d={d}");
        }
    }

    #[test]
    fn word_projection() {
        let d = Degree::TWO;
        let w = ConfigurationWord::from_names(&[1, 1], 1, d).unwrap();
        assert_eq!(w.to_matrix(1, d).unwrap(), ArcMatrix::from_rows(&[[2]]).unwrap());
        let w = ConfigurationWord::from_names(&[1, 2, 1, 2], 2, d).unwrap();
        assert_eq!(w.to_matrix(2, d).unwrap(), ArcMatrix::from_rows(&[[1, 1], [1, 1]]).unwrap());
        let w = ConfigurationWord::from_names(&[1, 1, 2, 2], 2, d).unwrap();
        assert_eq!(w.to_matrix(2, d).unwrap(), ArcMatrix::from_rows(&[[2, 0], [0, 2]]).unwrap());
    }

    #[test]
    fn malformed_words() {
        let d = Degree::TWO;
        assert!(ConfigurationWord::from_names(&[1, 1, 1, 2], 2, d).is_err());
        assert!(ConfigurationWord::from_names(&[1, 3, 2, 2], 2, d).is_err());
        assert!(ConfigurationWord::from_names(&[1, 1, 2], 2, d).is_err());
        let w = ConfigurationWord::from_names(&[1, 1, 2, 2], 2, d).unwrap();
        assert!(matches!(w.to_matrix(3, d), Err(Error::InvalidWord(_))));
    }
}
