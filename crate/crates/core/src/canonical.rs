//! Canonical forms under simultaneous row/column permutation.
//!
//! The canonical form of `A` is the lexicographically smallest row-major
//! entry sequence among all relabelings of `A`. The search fixes one output
//! position per level. After positions `0..k` are fixed, the remaining
//! positions are split into ordered cells keyed by their columns in rows
//! `0..k`; a smaller matrix can always be had by swapping two positions of
//! one cell whose row-`k` entries are out of order, so every minimal
//! relabeling sorts each cell by the row being placed. Row `k` is therefore
//! a function of the node placed at position `k` alone, and only the nodes
//! of the first cell that minimize it (and do not exceed the best row `k`
//! found so far) are explored.
//!
//! Every relabeling that reaches the minimum survives this pruning, so the
//! leaves that equal the final answer are exactly the automorphisms.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matrix::{check_cap, ArcMatrix, Count, Permutation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalResult {
    pub canonical: ArcMatrix,
    /// `|Aut(A)|`.
    pub aut_order: Count,
    /// Maps the input onto `canonical` via [`ArcMatrix::apply_permutation`].
    pub witness: Permutation,
}

struct Search<'a> {
    a: &'a ArcMatrix,
    p: usize,
    best: Option<Vec<u8>>,
    best_order: Vec<usize>,
    hits: Count,
}

/// A level of the search: `order[..k]` is fixed, `order[k..]` is split into
/// cells by `bounds`, where each cell is `order[bounds[c]..bounds[c + 1]]`.
#[derive(Clone)]
struct Level {
    order: Vec<usize>,
    bounds: Vec<usize>,
}

impl Search<'_> {
    /// Places node `t` at position `k` and refines every cell by row `t`.
    /// Returns the new level together with output row `k`.
    fn place(&self, level: &Level, k: usize, t: usize) -> (Level, Vec<u8>) {
        let mut order = level.order.clone();
        let at = order[k..].iter().position(|&x| x == t).expect("candidate in tail") + k;
        // keep the rest of the first cell contiguous after position k
        order[k..=at].rotate_right(1);

        let mut bounds = Vec::with_capacity(self.p + 1);
        let old = &level.bounds;
        for c in 0..old.len() - 1 {
            let (mut lo, hi) = (old[c], old[c + 1]);
            if c == 0 {
                lo += 1;
            }
            if lo >= hi {
                continue;
            }
            let cell = &mut order[lo..hi];
            cell.sort_by_key(|&x| self.a.get(t, x));
            bounds.push(lo);
            for i in lo + 1..hi {
                if self.a.get(t, order[i]) != self.a.get(t, order[i - 1]) {
                    bounds.push(i);
                }
            }
        }
        bounds.push(self.p);

        let row = order.iter().map(|&x| self.a.get(t, x)).collect();
        (Level { order, bounds }, row)
    }

    fn run(&mut self, level: Level, k: usize, prefix: &mut Vec<u8>) {
        let p = self.p;
        if k == p {
            match self.best.as_deref().map(|b| prefix.as_slice().cmp(b)) {
                Some(Ordering::Equal) => self.hits += 1,
                Some(Ordering::Greater) => {}
                _ => {
                    self.best = Some(prefix.clone());
                    self.best_order = level.order;
                    self.hits = 1;
                }
            }
            return;
        }

        let first = level.bounds[0]..level.bounds[1];
        let mut candidates: Vec<(Level, Vec<u8>)> = Vec::new();
        for &t in &level.order[first] {
            let (next, row) = self.place(&level, k, t);
            match candidates.first().map(|(_, r)| row.cmp(r)) {
                Some(Ordering::Greater) => {}
                Some(Ordering::Equal) => candidates.push((next, row)),
                _ => {
                    candidates.clear();
                    candidates.push((next, row));
                }
            }
        }

        for (next, row) in candidates {
            prefix.extend_from_slice(&row);
            // the incumbent may have changed since an earlier sibling finished
            let worse = self
                .best
                .as_deref()
                .is_some_and(|b| prefix.as_slice() > &b[..prefix.len()]);
            if !worse {
                self.run(next, k + 1, prefix);
            }
            prefix.truncate(k * p);
        }
    }
}

/// Canonical form, automorphism group order, and a witness relabeling.
pub fn canonical_form(a: &ArcMatrix) -> Result<CanonicalResult> {
    let p = a.p();
    check_cap(p)?;
    let mut search = Search { a, p, best: None, best_order: Vec::new(), hits: 0 };
    let root = Level { order: (0..p).collect(), bounds: vec![0, p] };
    if p == 0 {
        return Ok(CanonicalResult {
            canonical: ArcMatrix::empty(),
            aut_order: 1,
            witness: Permutation::identity(0),
        });
    }
    search.run(root, 0, &mut Vec::with_capacity(p * p));
    search_result(search)
}

fn search_result(search: Search<'_>) -> Result<CanonicalResult> {
    let p = search.p;
    let best = search.best.ok_or_else(|| Error::Invariant("canonical search found no leaf".into()))?;
    let canonical = ArcMatrix::new(p, best)?;
    // best_order[k] is the input node sent to position k
    let witness = Permutation::new(search.best_order)?.inverse();
    debug_assert_eq!(search.a.apply_permutation(&witness).ok().as_ref(), Some(&canonical));
    Ok(CanonicalResult { canonical, aut_order: search.hits, witness })
}

pub fn automorphism_order(a: &ArcMatrix) -> Result<Count> {
    Ok(canonical_form(a)?.aut_order)
}

pub fn are_isomorphic(a: &ArcMatrix, b: &ArcMatrix) -> Result<bool> {
    if a.p() != b.p() {
        return Err(Error::Dimension { expected: a.p(), found: b.p() });
    }
    if a.arc_count() != b.arc_count() {
        return Ok(false);
    }
    Ok(canonical_form(a)?.canonical == canonical_form(b)?.canonical)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> ArcMatrix {
        ArcMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn null_multigraph() {
        let r = canonical_form(&ArcMatrix::empty()).unwrap();
        assert_eq!(r.canonical, ArcMatrix::empty());
        assert_eq!(r.aut_order, 1);
        assert!(r.witness.is_empty());
    }

    #[test]
    fn full_two_node() {
        let a = m(&[&[1, 1], &[1, 1]]);
        let r = canonical_form(&a).unwrap();
        assert_eq!(r.canonical, a);
        assert_eq!(r.aut_order, 2);
        assert!(r.witness.is_identity());
    }

    #[test]
    fn double_three_cycle() {
        let a = m(&[&[0, 2, 0], &[0, 0, 2], &[2, 0, 0]]);
        let reversed = m(&[&[0, 0, 2], &[2, 0, 0], &[0, 2, 0]]);
        let r = canonical_form(&a).unwrap();
        assert_eq!(r.aut_order, 3);
        assert_eq!(r.canonical, reversed);
        assert_eq!(a.apply_permutation(&r.witness).unwrap(), reversed);
        assert_eq!(canonical_form(&reversed).unwrap().canonical, reversed);
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(automorphism_order(&m(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])).unwrap(), 6);
        assert_eq!(automorphism_order(&m(&[&[2]])).unwrap(), 1);
        let two_pairs = m(&[&[0, 2, 0, 0], &[2, 0, 0, 0], &[0, 0, 0, 2], &[0, 0, 2, 0]]);
        assert_eq!(automorphism_order(&two_pairs).unwrap(), 8);
    }

    #[test]
    fn isomorphism_examples() {
        let loops = m(&[&[2, 0], &[0, 2]]);
        let swap = m(&[&[0, 2], &[2, 0]]);
        assert!(!are_isomorphic(&loops, &swap).unwrap());
        assert!(are_isomorphic(&loops, &loops).unwrap());
        assert!(matches!(
            are_isomorphic(&loops, &m(&[&[2]])),
            Err(Error::Dimension { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn cap_exceeded() {
        assert!(matches!(canonical_form(&ArcMatrix::zeros(11)), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn ten_node_identity_is_practical() {
        let mut a = ArcMatrix::zeros(10);
        for i in 0..10 {
            a.set(i, (i + 1) % 10, 1);
            a.set(i, (i + 3) % 10, 1);
        }
        let r = canonical_form(&a).unwrap();
        assert_eq!(a.apply_permutation(&r.witness).unwrap(), r.canonical);
        // circulant with connection set {1, 3} on Z_10: rotations only
        assert_eq!(r.aut_order, 10);
    }
}
