//! Class census by orbit-stabilizer counting, the brute-force word oracle,
//! and verification against the published catalog.

use std::collections::{BTreeMap, HashMap};

use crate::canonical::canonical_form;
use crate::catalog::{PaperCatalog, PaperRecord};
use crate::error::{Error, Result};
use crate::generate::{RegularMatrices, Words};
use crate::matrix::{check_cap, factorial, total_configurations, ArcMatrix, ClassId, Count, Degree};
use crate::monomial::Monomial;
use crate::par::{self, Strategy};

/// One isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusEntry {
    pub class_id: ClassId,
    pub canonical: ArcMatrix,
    pub aut_order: Count,
    pub weight: Count,
    /// Distinct labeled matrices in the class, `p! / aut_order`.
    pub labeled_matrix_count: Count,
    pub representative: Monomial,
}

impl CensusEntry {
    pub fn cardinality(&self) -> Count {
        self.class_id.cardinality
    }
}

/// Every class for one `(p, d)`, ascending by canonical matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub p: usize,
    pub d: Degree,
    pub entries: Vec<CensusEntry>,
    pub total: Count,
}

impl CensusReport {
    /// Sorts classes, assigns ranks, and checks the total and per-entry identities.
    fn assemble(p: usize, d: Degree, mut entries: Vec<CensusEntry>) -> Result<Self> {
        entries.sort_by(|a, b| a.canonical.cmp(&b.canonical));
        let p_fact = factorial(p as u32)?;
        let mut total: Count = 0;
        for (k, e) in entries.iter_mut().enumerate() {
            e.class_id.rank = k + 1;
            if e.aut_order.checked_mul(e.labeled_matrix_count) != Some(p_fact) {
                return Err(Error::Invariant(format!(
                    "class {}: |Aut| {} x labeled {} != {p}!",
                    e.class_id, e.aut_order, e.labeled_matrix_count
                )));
            }
            if e.labeled_matrix_count.checked_mul(e.weight) != Some(e.class_id.cardinality) {
                return Err(Error::Invariant(format!(
                    "class {}: labeled {} x weight {} != cardinality",
                    e.class_id, e.labeled_matrix_count, e.weight
                )));
            }
            total = total
                .checked_add(e.class_id.cardinality)
                .ok_or(Error::Overflow("census total"))?;
        }
        let expected = total_configurations(p, d)?;
        if total != expected {
            return Err(Error::Invariant(format!(
                "census total {total} != configuration count {expected} for p={p}, d={d}"
            )));
        }
        Ok(CensusReport { p, d, entries, total })
    }

    /// Builds a report from per-class data read back from a serialized form.
    pub fn from_classes(p: usize, d: Degree, classes: Vec<(ArcMatrix, Count, Count)>) -> Result<Self> {
        let p_fact = factorial(p as u32)?;
        let entries = classes
            .into_iter()
            .map(|(canonical, aut_order, weight)| {
                if aut_order == 0 || p_fact % aut_order != 0 {
                    return Err(Error::Invariant(format!("|Aut| {aut_order} does not divide {p}!")));
                }
                let labeled = p_fact / aut_order;
                Ok(CensusEntry {
                    class_id: ClassId { p, rank: 0, cardinality: labeled * weight },
                    representative: Monomial::from_matrix(&canonical),
                    canonical,
                    aut_order,
                    weight,
                    labeled_matrix_count: labeled,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::assemble(p, d, entries)
    }

    pub fn class_count(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, rank: usize) -> Option<&CensusEntry> {
        rank.checked_sub(1).and_then(|k| self.entries.get(k))
    }

    fn find(&self, canonical: &ArcMatrix) -> Option<&CensusEntry> {
        self.entries
            .binary_search_by(|e| e.canonical.cmp(canonical))
            .ok()
            .map(|k| &self.entries[k])
    }
}

pub fn build_census(p: usize, d: Degree) -> Result<CensusReport> {
    build_census_with(p, d, Strategy::default())
}

/// Enumerates labeled matrices, groups them by canonical form, and sizes
/// each class as `(p! / |Aut|) × weight`.
pub fn build_census_with(p: usize, d: Degree, strategy: Strategy) -> Result<CensusReport> {
    check_cap(p)?;
    let parts = RegularMatrices::partitions(p, d)?;
    let tallies = par::map(strategy, parts, |part| -> Result<HashMap<ArcMatrix, (Count, Count)>> {
        let mut seen: HashMap<ArcMatrix, (Count, Count)> = HashMap::new();
        for a in part {
            let c = canonical_form(&a)?;
            seen.entry(c.canonical).or_insert((c.aut_order, 0)).1 += 1;
        }
        Ok(seen)
    });

    let mut classes: HashMap<ArcMatrix, (Count, Count)> = HashMap::new();
    for tally in tallies {
        for (canonical, (aut, n)) in tally? {
            classes.entry(canonical).or_insert((aut, 0)).1 += n;
        }
    }

    let p_fact = factorial(p as u32)?;
    let entries = classes
        .into_iter()
        .map(|(canonical, (aut_order, observed))| {
            let labeled = p_fact / aut_order;
            if labeled != observed {
                return Err(Error::Invariant(format!(
                    "class of {canonical}: {observed} labeled matrices seen, orbit-stabilizer predicts {labeled}"
                )));
            }
            let weight = canonical.weight(d)?;
            let cardinality = labeled.checked_mul(weight).ok_or(Error::Overflow("cardinality"))?;
            Ok(CensusEntry {
                class_id: ClassId { p, rank: 0, cardinality },
                representative: Monomial::from_matrix(&canonical),
                canonical,
                aut_order,
                weight,
                labeled_matrix_count: labeled,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    CensusReport::assemble(p, d, entries)
}

pub fn oracle_census(p: usize, d: Degree) -> Result<CensusReport> {
    oracle_census_with(p, d, Strategy::default())
}

/// Tallies every configuration word by the class of its multigraph. Class
/// sizes are raw word counts; no counting formula is used.
pub fn oracle_census_with(p: usize, d: Degree, strategy: Strategy) -> Result<CensusReport> {
    let parts = Words::partitions(p, d)?;
    let tallies = par::map(strategy, parts, |part| -> Result<HashMap<ArcMatrix, Count>> {
        let mut seen: HashMap<ArcMatrix, Count> = HashMap::new();
        for w in part {
            *seen.entry(w.to_matrix(p, d)?).or_default() += 1;
        }
        Ok(seen)
    });
    let mut per_matrix: HashMap<ArcMatrix, Count> = HashMap::new();
    for tally in tallies {
        for (a, n) in tally? {
            *per_matrix.entry(a).or_default() += n;
        }
    }

    let mut labeled: Vec<(ArcMatrix, Count)> = per_matrix.into_iter().collect();
    labeled.sort();
    let canon = par::map(strategy, labeled, |(a, n)| canonical_form(&a).map(|c| (c, n)));

    // canonical -> (aut_order, labeled matrices, words, per-matrix word count)
    let mut classes: BTreeMap<ArcMatrix, (Count, Count, Count, Count)> = BTreeMap::new();
    for item in canon {
        let (c, n) = item?;
        let slot = classes.entry(c.canonical).or_insert((c.aut_order, 0, 0, n));
        if slot.3 != n {
            return Err(Error::Invariant("labeled matrices of one class received unequal word counts".into()));
        }
        slot.1 += 1;
        slot.2 += n;
    }
    let entries = classes
        .into_iter()
        .map(|(canonical, (aut_order, labeled, words, per))| CensusEntry {
            class_id: ClassId { p, rank: 0, cardinality: words },
            representative: Monomial::from_matrix(&canonical),
            canonical,
            aut_order,
            weight: per,
            labeled_matrix_count: labeled,
        })
        .collect();
    CensusReport::assemble(p, d, entries)
}

/// One class on which two reports disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub canonical: ArcMatrix,
    pub left: Option<Count>,
    pub right: Option<Count>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CensusDiff {
    pub discrepancies: Vec<Discrepancy>,
}

impl CensusDiff {
    pub fn is_empty(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Compares class keys and cardinalities of two reports for the same `(p, d)`.
pub fn compare_census(a: &CensusReport, b: &CensusReport) -> Result<CensusDiff> {
    if (a.p, a.d) != (b.p, b.d) {
        return Err(Error::Usage(format!(
            "cannot compare census p={}, d={} with p={}, d={}",
            a.p, a.d, b.p, b.d
        )));
    }
    let mut merged: BTreeMap<&ArcMatrix, (Option<Count>, Option<Count>)> = BTreeMap::new();
    for e in &a.entries {
        merged.entry(&e.canonical).or_default().0 = Some(e.cardinality());
    }
    for e in &b.entries {
        merged.entry(&e.canonical).or_default().1 = Some(e.cardinality());
    }
    let discrepancies = merged
        .into_iter()
        .filter(|(_, (l, r))| l != r)
        .map(|(m, (left, right))| Discrepancy { canonical: m.clone(), left, right })
        .collect();
    Ok(CensusDiff { discrepancies })
}

/// A catalog record paired with the computed class it was matched to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordMatch {
    pub record: PaperRecord,
    pub computed: ClassId,
    /// Arc inserted to restore regularity, 1-based.
    pub inserted_arc: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnmatchedRecord {
    pub record: PaperRecord,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub p: usize,
    /// Matched as listed, equal cardinality.
    pub matched: Vec<RecordMatch>,
    /// Matched after inserting a single missing arc, equal cardinality.
    pub corrected: Vec<RecordMatch>,
    /// Matched a class, but the cardinalities differ.
    pub mismatched: Vec<RecordMatch>,
    pub unmatched_paper: Vec<UnmatchedRecord>,
    pub unmatched_computed: Vec<ClassId>,
}

impl VerificationReport {
    pub fn is_verified(&self) -> bool {
        self.mismatched.is_empty() && self.unmatched_paper.is_empty() && self.unmatched_computed.is_empty()
    }

    pub fn record_count(&self) -> usize {
        self.matched.len() + self.corrected.len() + self.mismatched.len() + self.unmatched_paper.len()
    }

    /// Catalog rank of every computed class that was matched, by computed rank.
    pub fn paper_ranks(&self) -> BTreeMap<usize, usize> {
        self.matched
            .iter()
            .chain(&self.corrected)
            .chain(&self.mismatched)
            .map(|m| (m.computed.rank, m.record.rank))
            .collect()
    }
}

/// Matrix for a catalog record, with the single forced completion applied
/// when exactly one arc is missing.
pub fn record_matrix(record: &PaperRecord, d: Degree) -> std::result::Result<(ArcMatrix, Option<(usize, usize)>), String> {
    let mut m = Monomial::parse(&record.monomial).map_err(|e| e.to_string())?;
    match m.to_matrix(record.p, d) {
        Ok(a) => Ok((a, None)),
        Err(Error::Degree(deficit)) => match deficit.single_missing_arc() {
            Some(arc) => {
                m.insert(arc);
                let a = m.to_matrix(record.p, d).map_err(|e| e.to_string())?;
                Ok((a, Some(arc)))
            }
            None => Err(format!("degree violation without a unique completion: {deficit}")),
        },
        Err(e) => Err(e.to_string()),
    }
}

/// Matches every catalog record for `report.p` to a computed class up to
/// isomorphism and compares cardinalities.
pub fn verify_against_paper(report: &CensusReport, catalog: &PaperCatalog) -> VerificationReport {
    let mut out = VerificationReport { p: report.p, ..Default::default() };
    let mut taken = vec![false; report.entries.len()];

    for record in catalog.slice(report.p) {
        let unmatched = |reason: String| UnmatchedRecord { record: record.clone(), reason };
        let (a, inserted_arc) = match record_matrix(record, report.d) {
            Ok(x) => x,
            Err(reason) => {
                out.unmatched_paper.push(unmatched(reason));
                continue;
            }
        };
        let canonical = match canonical_form(&a) {
            Ok(c) => c.canonical,
            Err(e) => {
                out.unmatched_paper.push(unmatched(e.to_string()));
                continue;
            }
        };
        let Some(entry) = report.find(&canonical) else {
            out.unmatched_paper.push(unmatched("no computed class is isomorphic".into()));
            continue;
        };
        let k = entry.class_id.rank - 1;
        if std::mem::replace(&mut taken[k], true) {
            out.unmatched_paper.push(unmatched(format!(
                "computed class {} already matched by another record",
                entry.class_id
            )));
            continue;
        }
        let m = RecordMatch { record: record.clone(), computed: entry.class_id, inserted_arc };
        if entry.cardinality() != record.cardinality {
            out.mismatched.push(m);
        } else if inserted_arc.is_some() {
            out.corrected.push(m);
        } else {
            out.matched.push(m);
        }
    }
    out.unmatched_computed = report
        .entries
        .iter()
        .zip(&taken)
        .filter(|(_, &t)| !t)
        .map(|(e, _)| e.class_id)
        .collect();
    out
}

/// The class of the multigraph encoded by `m`.
pub fn class_lookup(report: &CensusReport, m: &Monomial) -> Result<ClassId> {
    let a = m.to_matrix(report.p, report.d)?;
    let canonical = canonical_form(&a)?.canonical;
    report
        .find(&canonical)
        .map(|e| e.class_id)
        .ok_or_else(|| Error::Invariant(format!("no class in census p={} for {m}", report.p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deg(d: u32) -> Degree {
        Degree::new(d).unwrap()
    }

    fn cards(r: &CensusReport) -> Vec<Count> {
        r.entries.iter().map(CensusEntry::cardinality).collect()
    }

    #[test]
    fn two_nodes() {
        let r = build_census(2, Degree::TWO).unwrap();
        assert_eq!(r.class_count(), 3);
        // ascending canonical order: 2-cycle pair, full, loops
        assert_eq!(cards(&r), [1, 4, 1]);
        assert_eq!(r.total, 6);
        assert_eq!(r, oracle_census(2, Degree::TWO).unwrap());
    }

    #[test]
    fn null_census() {
        let r = build_census(0, Degree::TWO).unwrap();
        assert_eq!(cards(&r), [1]);
        assert_eq!(r.entries[0].representative.to_string(), "1");
        assert_eq!(r.entries[0].class_id, ClassId { p: 0, rank: 1, cardinality: 1 });
    }

    #[test]
    fn three_nodes() {
        let r = build_census(3, Degree::TWO).unwrap();
        let mut c = cards(&r);
        c.sort_unstable();
        let mut expect = vec![1, 12, 3, 16, 24, 24, 2, 8];
        expect.sort_unstable();
        assert_eq!(c, expect);
        assert_eq!(r.total, 90);
    }

    #[test]
    fn oracle_small_cases() {
        let r = oracle_census(1, Degree::TWO).unwrap();
        assert_eq!(cards(&r), [1]);
        let r = oracle_census(3, deg(1)).unwrap();
        let mut c = cards(&r);
        c.sort_unstable();
        assert_eq!(c, [1, 2, 3]);
        assert_eq!(r.total, 6);
    }

    #[test]
    fn compare_detects_perturbation() {
        let a = build_census(2, Degree::TWO).unwrap();
        assert!(compare_census(&a, &a).unwrap().is_empty());
        let mut b = a.clone();
        b.entries[1].class_id.cardinality += 1;
        let diff = compare_census(&a, &b).unwrap();
        assert_eq!(diff.discrepancies.len(), 1);
        assert_eq!(diff.discrepancies[0].left, Some(4));
        assert_eq!(diff.discrepancies[0].right, Some(5));
        let other = build_census(3, Degree::TWO).unwrap();
        assert!(matches!(compare_census(&a, &other), Err(Error::Usage(_))));
    }

    #[test]
    fn verify_three_nodes_with_completion() {
        let r = build_census(3, Degree::TWO).unwrap();
        let v = verify_against_paper(&r, &PaperCatalog::embedded());
        assert!(v.is_verified());
        assert_eq!(v.matched.len(), 7);
        assert_eq!(v.corrected.len(), 1);
        let c = &v.corrected[0];
        assert_eq!((c.record.rank, c.record.cardinality), (3, 3));
        assert_eq!(c.inserted_arc, Some((2, 3)));
        assert_eq!(c.computed.cardinality, 3);
    }

    #[test]
    fn verify_reports_bad_records() {
        let r = build_census(2, Degree::TWO).unwrap();
        let csv = "p,rank,cardinality,monomial,note\n\
                   2,1,1,x11 x11 x22 x22,\n\
                   2,2,5,x11 x12 x22 x21,\n\
                   2,3,1,x11 x11 x22,\n\
                   2,4,1,x22 x22 x11 x11,\n\
                   2,5,1,x11 x11 x22 y22,\n";
        let cat = PaperCatalog::from_reader(csv.as_bytes()).unwrap();
        let v = verify_against_paper(&r, &cat);
        assert!(!v.is_verified());
        assert_eq!(v.matched.len(), 1);
        assert_eq!(v.mismatched.len(), 1);
        assert_eq!(v.mismatched[0].computed.cardinality, 4);
        // missing two arcs, duplicate class, parse failure
        assert_eq!(v.unmatched_paper.len(), 3);
        assert_eq!(v.unmatched_computed.len(), 1);
        assert_eq!(v.record_count(), 5);
    }

    #[test]
    fn lookups() {
        let r = build_census(2, Degree::TWO).unwrap();
        let id = class_lookup(&r, &Monomial::parse("x11 x12 x22 x21").unwrap()).unwrap();
        assert_eq!(id.cardinality, 4);
        let id = class_lookup(&r, &Monomial::parse("x12 x12 x21 x21").unwrap()).unwrap();
        assert_eq!(id.cardinality, 1);
        assert!(matches!(
            class_lookup(&r, &Monomial::parse("x11 x11 x22").unwrap()),
            Err(Error::Degree(_))
        ));
        let r = build_census(1, Degree::TWO).unwrap();
        let id = class_lookup(&r, &Monomial::parse("x11 x11").unwrap()).unwrap();
        assert_eq!(id, ClassId { p: 1, rank: 1, cardinality: 1 });
    }

    #[test]
    fn strategies_agree() {
        for p in 0..=4 {
            let a = build_census_with(p, Degree::TWO, Strategy::Sequential).unwrap();
            let b = build_census_with(p, Degree::TWO, Strategy::Parallel).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn from_classes_round_trip() {
        let r = build_census(3, Degree::TWO).unwrap();
        let classes = r
            .entries
            .iter()
            .rev()
            .map(|e| (e.canonical.clone(), e.aut_order, e.weight))
            .collect();
        assert_eq!(CensusReport::from_classes(3, Degree::TWO, classes).unwrap(), r);
    }
}
