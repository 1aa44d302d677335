//! Census serialization: JSON lines, CSV, and a fixed-width text table.
//!
//! JSON lines and CSV read back into an identical [`CensusReport`].

use std::collections::BTreeMap;
use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use crate::census::{CensusEntry, CensusReport};
use crate::error::{Error, Result};
use crate::matrix::{ArcMatrix, Count, Degree};
use crate::monomial::{Monomial, Style};

/// One serialized class. Node names in `monomial` are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub p: usize,
    pub d: u32,
    pub rank: usize,
    pub cardinality: Count,
    pub aut_order: Count,
    pub weight: Count,
    pub monomial: String,
    pub matrix: Vec<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paper_rank: Option<usize>,
}

/// CSV row; the matrix is recovered from the monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct CsvRecord {
    p: usize,
    d: u32,
    rank: usize,
    cardinality: Count,
    aut_order: Count,
    weight: Count,
    monomial: String,
}

fn monomial_text(e: &CensusEntry) -> Result<String> {
    // compact style whenever node names allow it
    let style = if e.representative.max_node() > 9 { Style::Bracket } else { Style::Compact };
    e.representative.print(style)
}

/// Output records for a report, with optional catalog ranks keyed by computed rank.
pub fn output_records(report: &CensusReport, paper_ranks: &BTreeMap<usize, usize>) -> Result<Vec<OutputRecord>> {
    report
        .entries
        .iter()
        .map(|e| {
            Ok(OutputRecord {
                p: report.p,
                d: report.d.get(),
                rank: e.class_id.rank,
                cardinality: e.cardinality(),
                aut_order: e.aut_order,
                weight: e.weight,
                monomial: monomial_text(e)?,
                matrix: e.canonical.to_rows(),
                paper_rank: paper_ranks.get(&e.class_id.rank).copied(),
            })
        })
        .collect()
}

pub fn write_jsonl<W: Write>(out: &mut W, records: &[OutputRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut *out, r).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_csv<W: Write>(out: &mut W, records: &[OutputRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(CsvRecord {
            p: r.p,
            d: r.d,
            rank: r.rank,
            cardinality: r.cardinality,
            aut_order: r.aut_order,
            weight: r.weight,
            monomial: r.monomial.clone(),
        })
        .map_err(|e| Error::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_text<W: Write>(out: &mut W, report: &CensusReport, records: &[OutputRecord]) -> Result<()> {
    writeln!(out, "DEGREE {}", report.d)?;
    writeln!(out, "{:>6}  {:>8}  {:>20}", "NODES", "CLASSES", "SUM OF CARDINALITIES")?;
    writeln!(out, "{:>6}  {:>8}  {:>20}", report.p, report.class_count(), report.total)?;
    writeln!(out)?;
    writeln!(
        out,
        "{:>4} {:>5} {:>12} {:>8} {:>8} {:>6}  MONOMIAL",
        "P", "RANK", "CARDINALITY", "|AUT|", "WEIGHT", "PAPER"
    )?;
    for r in records {
        let paper = r.paper_rank.map_or_else(|| "-".to_string(), |k| k.to_string());
        writeln!(
            out,
            "{:>4} {:>5} {:>12} {:>8} {:>8} {:>6}  {}",
            r.p, r.rank, r.cardinality, r.aut_order, r.weight, paper, r.monomial
        )?;
    }
    Ok(())
}

/// Rebuilds a report from `(p, d, rank, cardinality)` claims plus per-class
/// data, and checks that every claim survives recomputation.
fn rebuild(rows: Vec<(usize, u32, usize, Count, ArcMatrix, Count, Count)>) -> Result<CensusReport> {
    let Some(&(p, d, ..)) = rows.first() else {
        return Err(Error::Usage("no census records".into()));
    };
    if rows.iter().any(|r| (r.0, r.1) != (p, d)) {
        return Err(Error::Usage("records mix several (p, d) values".into()));
    }
    let d = Degree::new(d)?;
    let claims: Vec<(usize, Count)> = rows.iter().map(|r| (r.2, r.3)).collect();
    let classes = rows.into_iter().map(|r| (r.4, r.5, r.6)).collect();
    let report = CensusReport::from_classes(p, d, classes)?;
    let mut derived: Vec<(usize, Count)> = report
        .entries
        .iter()
        .map(|e| (e.class_id.rank, e.cardinality()))
        .collect();
    let mut claims = claims;
    claims.sort_unstable();
    derived.sort_unstable();
    if claims != derived {
        return Err(Error::Invariant("serialized ranks or cardinalities disagree with their classes".into()));
    }
    Ok(report)
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<CensusReport> {
    let mut rows = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let r: OutputRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            offset: e.column().saturating_sub(1),
            message: e.to_string(),
        })?;
        let a = ArcMatrix::from_rows(&r.matrix)?;
        let d = Degree::new(r.d)?;
        if Monomial::parse(&r.monomial)?.to_matrix(r.p, d)? != a {
            return Err(Error::Invariant(format!("class {}: monomial and matrix disagree", r.rank)));
        }
        rows.push((r.p, r.d, r.rank, r.cardinality, a, r.aut_order, r.weight));
    }
    rebuild(rows)
}

pub fn read_csv<R: Read>(input: R) -> Result<CensusReport> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for rec in rdr.deserialize() {
        let r: CsvRecord = rec.map_err(|e| Error::Parse { offset: 0, message: e.to_string() })?;
        let a = Monomial::parse(&r.monomial)?.to_matrix(r.p, Degree::new(r.d)?)?;
        rows.push((r.p, r.d, r.rank, r.cardinality, a, r.aut_order, r.weight));
    }
    rebuild(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::build_census;

    #[test]
    fn csv_header_and_rows() {
        let r = build_census(2, Degree::TWO).unwrap();
        let recs = output_records(&r, &BTreeMap::new()).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "p,d,rank,cardinality,aut_order,weight,monomial");
        assert_eq!(lines[1], "2,2,1,1,2,1,x12 x12 x21 x21");
        assert_eq!(lines.len(), 4);
        assert_eq!(read_csv(text.as_bytes()).unwrap(), r);
    }

    #[test]
    fn jsonl_round_trip_and_paper_rank() {
        let r = build_census(1, Degree::TWO).unwrap();
        let ranks = BTreeMap::from([(1, 1)]);
        let recs = output_records(&r, &ranks).unwrap();
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "{\"p\":1,\"d\":2,\"rank\":1,\"cardinality\":1,\"aut_order\":1,\"weight\":1,\
             \"monomial\":\"x11 x11\",\"matrix\":[[2]],\"paper_rank\":1}\n"
        );
        assert_eq!(read_jsonl(text.as_bytes()).unwrap(), r);
    }

    #[test]
    fn tampered_files_rejected() {
        let bad = "p,d,rank,cardinality,aut_order,weight,monomial\n2,2,1,7,2,1,x12 x12 x21 x21\n";
        assert!(matches!(read_csv(bad.as_bytes()), Err(Error::Invariant(_))));
        assert!(matches!(read_csv("p,d\n".as_bytes()), Err(Error::Usage(_))));
        let bad = "{\"p\":1,\"d\":2,\"rank\":1,\"cardinality\":1,\"aut_order\":1,\"weight\":1,\"monomial\":\"x11 x11\",\"matrix\":[[1]]}\n";
        assert!(read_jsonl(bad.as_bytes()).is_err());
    }

    #[test]
    fn text_table() {
        let r = build_census(2, Degree::TWO).unwrap();
        let recs = output_records(&r, &BTreeMap::new()).unwrap();
        let mut buf = Vec::new();
        write_text(&mut buf, &r, &recs).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("     2         3                     6"));
        assert!(text.contains("   2     2            4        2        4      -  x11 x12 x21 x22"));
    }
}
