//! Command-line driver.
//!
//! Exit codes: 0 success, 1 verification mismatch or internal invariant
//! failure, 2 usage or parse error, 3 resource limit (node cap, overflow).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::catalog::PaperCatalog;
use crate::census::{
    build_census, class_lookup, compare_census, oracle_census, record_matrix, verify_against_paper,
    CensusReport, VerificationReport,
};
use crate::dot::emit_dot;
use crate::error::{Error, Result};
use crate::matrix::Degree;
use crate::monomial::Monomial;
use crate::output::{output_records, write_csv, write_jsonl, write_text};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "digraph-census", version, about = "Census of isomorphism classes of regular directed multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classes by orbit-stabilizer counting
    Census(CensusArgs),
    /// Classes by brute-force tally of configuration words
    Oracle(CensusArgs),
    /// Cross-check both censuses and the published catalog
    Verify(VerifyArgs),
    /// Class of a monomial
    Lookup(LookupArgs),
    /// Representative of a class as DOT
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RenderFormat {
    Dot,
}

#[derive(Debug, Args)]
struct CensusArgs {
    #[arg(short = 'p')]
    p: usize,
    #[arg(short = 'd', default_value_t = 2)]
    d: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(short = 'p', conflicts_with = "all")]
    p: Option<usize>,
    #[arg(long)]
    all: bool,
    #[arg(long)]
    paper_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LookupArgs {
    #[arg(long)]
    monomial: String,
    #[arg(short = 'p')]
    p: usize,
    #[arg(short = 'd', default_value_t = 2)]
    d: u32,
}

#[derive(Debug, Args)]
struct RenderArgs {
    /// `<p>,<rank>`
    #[arg(long = "class")]
    class: String,
    #[arg(short = 'd', default_value_t = 2)]
    d: u32,
    #[arg(long, value_enum, default_value_t = RenderFormat::Dot)]
    format: RenderFormat,
    /// Interpret the rank as a catalog rank and draw the catalog's representative
    #[arg(long)]
    paper: bool,
}

/// Parses `argv` (program name first), runs, and returns the exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_resource_limit() {
        EXIT_RESOURCE
    } else if matches!(e, Error::Invariant(_)) {
        EXIT_MISMATCH
    } else {
        EXIT_USAGE
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Census(a) => emit_census(build_census(a.p, Degree::new(a.d)?)?, a.format, out),
        Command::Oracle(a) => emit_census(oracle_census(a.p, Degree::new(a.d)?)?, a.format, out),
        Command::Verify(a) => verify(a, out, err),
        Command::Lookup(a) => lookup(a, out),
        Command::Render(a) => render(a, out),
    }
}

/// Catalog cross-reference for a `d = 2` report, keyed by computed rank.
fn paper_ranks(report: &CensusReport, catalog: &PaperCatalog) -> BTreeMap<usize, usize> {
    if report.d != Degree::TWO || catalog.slice(report.p).next().is_none() {
        return BTreeMap::new();
    }
    verify_against_paper(report, catalog).paper_ranks()
}

fn emit_census(report: CensusReport, format: Format, out: &mut dyn Write) -> Result<i32> {
    let ranks = paper_ranks(&report, &PaperCatalog::embedded());
    let records = output_records(&report, &ranks)?;
    let mut buf = Vec::new();
    match format {
        Format::Jsonl => write_jsonl(&mut buf, &records)?,
        Format::Csv => write_csv(&mut buf, &records)?,
        Format::Text => write_text(&mut buf, &report, &records)?,
    }
    out.write_all(&buf)?;
    Ok(EXIT_OK)
}

#[derive(Default)]
struct Tally {
    records: usize,
    matched: usize,
    corrected: usize,
    mismatched: usize,
    unmatched_paper: usize,
    unmatched_computed: usize,
}

fn report_verification(v: &VerificationReport, out: &mut dyn Write, tally: &mut Tally) -> Result<()> {
    writeln!(
        out,
        "  catalog: {} records, {} matched, {} corrected, {} mismatched, {} unmatched; {} computed classes unmatched",
        v.record_count(),
        v.matched.len(),
        v.corrected.len(),
        v.mismatched.len(),
        v.unmatched_paper.len(),
        v.unmatched_computed.len()
    )?;
    for m in &v.corrected {
        let (i, j) = m.inserted_arc.unwrap_or_default();
        writeln!(
            out,
            "  corrected {} \"{}\": inserted x{i}{j}, matches computed class {} ({})",
            m.record.designation(),
            m.record.monomial,
            m.computed,
            if m.record.note.is_empty() { "no note" } else { &m.record.note }
        )?;
    }
    for m in &v.mismatched {
        writeln!(
            out,
            "  MISMATCH {}: computed class {} has cardinality {}",
            m.record.designation(),
            m.computed,
            m.computed.cardinality
        )?;
    }
    for u in &v.unmatched_paper {
        writeln!(out, "  UNMATCHED record {}: {}", u.record.designation(), u.reason)?;
    }
    for c in &v.unmatched_computed {
        writeln!(out, "  UNMATCHED computed class {c}")?;
    }
    tally.records += v.record_count();
    tally.matched += v.matched.len();
    tally.corrected += v.corrected.len();
    tally.mismatched += v.mismatched.len();
    tally.unmatched_paper += v.unmatched_paper.len();
    tally.unmatched_computed += v.unmatched_computed.len();
    Ok(())
}

fn verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let catalog = match &a.paper_data {
        Some(path) => PaperCatalog::from_path(path)?,
        None => PaperCatalog::embedded(),
    };
    let d = Degree::TWO;
    let ps = match a.p {
        Some(p) => vec![p],
        None => catalog.node_counts(),
    };
    let mut ok = true;
    let mut tally = Tally::default();
    for p in ps {
        let census = build_census(p, d)?;
        let oracle = oracle_census(p, d)?;
        let diff = compare_census(&census, &oracle)?;
        writeln!(
            out,
            "p={p}: {} classes, total {} ({} words enumerated by the oracle)",
            census.class_count(),
            census.total,
            oracle.total
        )?;
        if diff.is_empty() {
            writeln!(out, "  oracle: agrees on all {} classes", census.class_count())?;
        } else {
            ok = false;
            for x in &diff.discrepancies {
                writeln!(out, "  ORACLE DISAGREES on {}: {:?} vs {:?}", x.canonical, x.left, x.right)?;
            }
        }
        if catalog.slice(p).next().is_none() {
            writeln!(out, "  catalog: no records for p={p}")?;
            continue;
        }
        let v = verify_against_paper(&census, &catalog);
        ok &= v.is_verified();
        report_verification(&v, out, &mut tally)?;
    }
    writeln!(
        out,
        "summary: {} catalog records, {} matched directly, {} corrected, {} mismatched, {} unmatched; {} computed classes unmatched",
        tally.records,
        tally.matched,
        tally.corrected,
        tally.mismatched,
        tally.unmatched_paper,
        tally.unmatched_computed
    )?;
    if ok {
        writeln!(out, "VERIFIED")?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "FAILED")?;
        writeln!(err, "verification failed")?;
        Ok(EXIT_MISMATCH)
    }
}

fn lookup(a: LookupArgs, out: &mut dyn Write) -> Result<i32> {
    let d = Degree::new(a.d)?;
    let m = Monomial::parse(&a.monomial)?;
    let report = build_census(a.p, d)?;
    let id = class_lookup(&report, &m)?;
    writeln!(out, "class {id}")?;
    if let Some(rank) = paper_ranks(&report, &PaperCatalog::embedded()).get(&id.rank) {
        writeln!(out, "paper class {},{},{}", id.p, rank, id.cardinality)?;
    }
    Ok(EXIT_OK)
}

fn parse_class(text: &str) -> Result<(usize, usize)> {
    let bad = || Error::Usage(format!("--class expects <p>,<rank>, got {text:?}"));
    let (p, rank) = text.split_once(',').ok_or_else(bad)?;
    Ok((p.trim().parse().map_err(|_| bad())?, rank.trim().parse().map_err(|_| bad())?))
}

fn render(a: RenderArgs, out: &mut dyn Write) -> Result<i32> {
    let RenderFormat::Dot = a.format;
    let (p, rank) = parse_class(&a.class)?;
    let d = Degree::new(a.d)?;
    let matrix = if a.paper {
        let catalog = PaperCatalog::embedded();
        let record = catalog
            .slice(p)
            .find(|r| r.rank == rank)
            .ok_or_else(|| Error::Usage(format!("no catalog class {p},{rank}")))?;
        record_matrix(record, d).map_err(Error::Usage)?.0
    } else {
        let report = build_census(p, d)?;
        report
            .entry(rank)
            .ok_or_else(|| Error::Usage(format!("census p={p} has {} classes, no rank {rank}", report.class_count())))?
            .canonical
            .clone()
    };
    out.write_all(emit_dot(&matrix).as_bytes())?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("digraph-census").chain(args.iter().copied());
        let code = run_cli(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn census_csv() {
        let (code, out, _) = run(&["census", "-p", "2", "--format", "csv"]);
        assert_eq!(code, 0);
        let cards: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').nth(3).unwrap()).collect();
        assert_eq!(cards, ["1", "4", "1"]);
    }

    #[test]
    fn lookup_null() {
        let (code, out, _) = run(&["lookup", "--monomial", "1", "-p", "0"]);
        assert_eq!(code, 0);
        assert_eq!(out, "class 0,1,1\npaper class 0,1,1\n");
    }

    #[test]
    fn lookup_paper_rank() {
        let (code, out, _) = run(&["lookup", "--monomial", "x_{11} x_{12} x_{22} x_{21}", "-p", "2"]);
        assert_eq!(code, 0);
        assert!(out.ends_with("paper class 2,2,4\n"), "{out}");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(&["census"]).0, EXIT_USAGE);
        assert_eq!(run(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run(&["lookup", "--monomial", "x11^2", "-p", "1"]).0, EXIT_USAGE);
        assert_eq!(run(&["lookup", "--monomial", "x11", "-p", "1"]).0, EXIT_USAGE);
        assert_eq!(run(&["render", "--class", "2"]).0, EXIT_USAGE);
        assert_eq!(run(&["render", "--class", "2,9"]).0, EXIT_USAGE);
        assert_eq!(run(&["census", "-p", "2", "-d", "0"]).0, EXIT_USAGE);
        assert_eq!(run(&["verify", "-p", "2", "--all"]).0, EXIT_USAGE);
        assert_eq!(run(&["verify", "--paper-data", "/nonexistent/catalog.csv"]).0, EXIT_USAGE);
    }

    #[test]
    fn resource_limits() {
        let (code, _, err) = run(&["census", "-p", "11"]);
        assert_eq!(code, EXIT_RESOURCE);
        assert!(err.contains("exceeds"));
        assert_eq!(run(&["oracle", "-p", "10", "-d", "20"]).0, EXIT_RESOURCE);
        assert_eq!(run(&["census", "-p", "2", "-d", "21"]).0, EXIT_RESOURCE);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("census"));
    }

    #[test]
    fn render_dot() {
        let (code, out, _) = run(&["render", "--class", "1,1", "--format", "dot"]);
        assert_eq!(code, 0);
        assert_eq!(out, "digraph class {\n  n1;\n  n1 -> n1;\n  n1 -> n1;\n}\n");
        let (code, out, _) = run(&["render", "--class", "3,3", "--paper"]);
        assert_eq!(code, 0);
        assert_eq!(out.matches("n2 -> n3;").count(), 2);
    }

    #[test]
    fn verify_single_p() {
        let (code, out, _) = run(&["verify", "-p", "3"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("corrected 3,3,3 \"x11 x11 x23 x32 x32\": inserted x23"));
    }

    #[test]
    fn verify_flags_bad_catalog() {
        let dir = std::env::temp_dir().join(format!("dc-cat-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cat.csv");
        std::fs::write(&path, "p,rank,cardinality,monomial,note\n2,1,1,x11 x11 x22 x22,\n2,2,5,x11 x12 x22 x21,\n").unwrap();
        let (code, out, _) = run(&["verify", "-p", "2", "--paper-data", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_MISMATCH);
        assert!(out.contains("MISMATCH 2,2,5"));
        assert!(out.contains("FAILED"));
        std::fs::remove_dir_all(dir).unwrap();
    }
}
