//! Table fixtures, batch consistency checks and report rendering for the command-line tool.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ambiguous_rank::{rank_report_for, RankError, RankReport};
use crate::filtration_oracle::{run_oracle, FiltrationError, OracleSummary};
use crate::prime_decomposition::{factor_radicand, Radicand};
use crate::quintic_descent::{descent_report_for, DescentReport};

pub const SCHEMA_VERSION: u32 = 1;

pub const TABLE1_TSV: &str = include_str!("../fixtures/table1.tsv");
pub const TABLE2_TSV: &str = include_str!("../fixtures/table2.tsv");
pub const TABLE3_TSV: &str = include_str!("../fixtures/table3.tsv");
pub const TABLE4_TSV: &str = include_str!("../fixtures/table4.tsv");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown table {0} (expected 1-4)")]
    UnknownTable(u8),
    #[error("fixture table {table}, line {line}: {msg}")]
    Fixture { table: u8, line: usize, msg: String },
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnknownTable(_) => 1,
            CliError::Fixture { .. } | CliError::Io(_) => 3,
            CliError::Rank(_) => 1,
            CliError::Filtration(_) | CliError::Json(_) => 2,
        }
    }
}

/// An abelian 5-group as the list of its cyclic orders. The trivial group is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupShape(pub Vec<u64>);

impl GroupShape {
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s == "1" {
            return Some(GroupShape(vec![]));
        }
        let orders = s
            .split('x')
            .map(|c| c.trim().parse::<u64>().ok())
            .collect::<Option<Vec<_>>>()?;
        let is_five_power = |mut k: u64| {
            if k < 5 {
                return false;
            }
            while k.is_multiple_of(5) {
                k /= 5;
            }
            k == 1
        };
        orders
            .iter()
            .all(|&k| is_five_power(k))
            .then_some(GroupShape(orders))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureRow {
    pub n: u64,
    /// Factors as written in the table, for rows given as products.
    pub factors: Vec<u64>,
    pub group: GroupShape,
    pub module: Option<String>,
    pub n_f: Option<usize>,
    pub suspected_typo: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableFixture {
    pub table: u8,
    pub rows: Vec<FixtureRow>,
}

pub fn fixture_text(table: u8) -> Result<&'static str, CliError> {
    match table {
        1 => Ok(TABLE1_TSV),
        2 => Ok(TABLE2_TSV),
        3 => Ok(TABLE3_TSV),
        4 => Ok(TABLE4_TSV),
        t => Err(CliError::UnknownTable(t)),
    }
}

pub fn load_fixture(table: u8) -> Result<TableFixture, CliError> {
    parse_fixture(table, fixture_text(table)?)
}

pub fn load_fixture_file(table: u8, path: &Path) -> Result<TableFixture, CliError> {
    parse_fixture(table, &std::fs::read_to_string(path)?)
}

pub fn parse_fixture(table: u8, text: &str) -> Result<TableFixture, CliError> {
    let err = |line: usize, msg: String| CliError::Fixture { table, line, msg };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty fixture".into()))?;
    let cols: Vec<&str> = header.split('\t').collect();
    let idx = |name: &str| cols.iter().position(|c| *c == name);
    let group_col = idx("s_k")
        .or_else(|| idx("s_l"))
        .ok_or_else(|| err(1, "no group column".into()))?;
    let key_col = idx("n")
        .or_else(|| idx("p"))
        .ok_or_else(|| err(1, "no key column".into()))?;
    let q_col = if table == 3 { idx("q") } else { None };
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        let get = |c: usize| f.get(c).copied().unwrap_or("");
        let mut factors = get(key_col)
            .split('x')
            .map(|s| s.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| err(i + 1, format!("bad key {:?}: {e}", get(key_col))))?;
        if let Some(qc) = q_col {
            factors.push(
                get(qc)
                    .parse()
                    .map_err(|e| err(i + 1, format!("bad q: {e}")))?,
            );
        }
        let n = factors.iter().product();
        let group = GroupShape::parse(get(group_col))
            .ok_or_else(|| err(i + 1, format!("bad group {:?}", get(group_col))))?;
        let opt = |name: &str| {
            idx(name)
                .map(get)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
        };
        let n_f = opt("n_f")
            .map(|s| s.parse::<usize>())
            .transpose()
            .map_err(|e| err(i + 1, format!("bad n_f: {e}")))?;
        rows.push(FixtureRow {
            n,
            factors: if factors.len() > 1 { factors } else { vec![] },
            group,
            module: opt("module"),
            n_f,
            suspected_typo: opt("suspected_typo"),
        });
    }
    Ok(TableFixture { table, rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Strong,
    NonStrong,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCheck {
    pub n: u64,
    pub observed_rank: usize,
    pub ok: bool,
    pub branch: Branch,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCheck {
    pub table: u8,
    pub rows: Vec<RowCheck>,
}

impl TableCheck {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }

    pub fn failures(&self) -> Vec<&RowCheck> {
        self.rows.iter().filter(|r| !r.ok).collect()
    }

    pub fn non_strong_rows(&self) -> Vec<u64> {
        self.rows
            .iter()
            .filter(|r| r.branch == Branch::NonStrong)
            .map(|r| r.n)
            .collect()
    }
}

fn within(x: usize, (lo, hi): (usize, usize)) -> bool {
    lo <= x && x <= hi
}

fn containment(rep: &RankReport, k: usize) -> Branch {
    if within(k, rep.bounds_strong) {
        Branch::Strong
    } else if within(k, rep.bounds_nonstrong) {
        Branch::NonStrong
    } else {
        Branch::Neither
    }
}

fn check_row(table: u8, row: &FixtureRow) -> Result<RowCheck, CliError> {
    let rad = factor_radicand(row.n).map_err(RankError::from)?;
    let rep = rank_report_for(&rad, true)?;
    let k = row.group.rank();
    let mut detail = String::new();
    let (ok, branch) = match table {
        1 => {
            let branch = containment(&rep, k);
            let nf = rad.g + usize::from(rad.v5 > 0);
            let nf_ok = match (row.n_f, &row.suspected_typo) {
                (Some(_), Some(_)) => true,
                (Some(expected), None) => expected == nf,
                (None, _) => true,
            };
            write!(
                detail,
                "strong {:?} non-strong {:?} n(f) {}",
                rep.bounds_strong, rep.bounds_nonstrong, nf
            )
            .ok();
            if row.suspected_typo.is_some() {
                write!(detail, " (table n(f) {:?} flagged)", row.n_f).ok();
            }
            (branch != Branch::Neither && nf_ok, branch)
        }
        2 | 3 => {
            let (t, s1, bounds) = if table == 2 {
                (1, 0, (2, 4))
            } else {
                (2, 1, (3, 5))
            };
            let family_ok = rep.t == t && rep.s1_strong == s1 && rep.bounds_strong == bounds;
            let branch = containment(&rep, k);
            write!(
                detail,
                "t {} s1 {} strong {:?} non-strong {:?} expected t {t} s1 {s1} {bounds:?}",
                rep.t, rep.s1_strong, rep.bounds_strong, rep.bounds_nonstrong
            )
            .ok();
            (family_ok && within(k, bounds), branch)
        }
        4 => {
            let d = descent_report_for(&rad, true, None)?;
            let cyclic_ok = d.cyclic_family.is_none() || k <= 1;
            write!(detail, "S_L bounds [{}, {}]", d.sl_lower, d.sl_upper).ok();
            if let Some(f) = d.cyclic_family {
                write!(detail, " trivial-or-cyclic family {}", f.number()).ok();
            }
            let branch = if d.contains(k) {
                Branch::Strong
            } else {
                Branch::Neither
            };
            (d.contains(k) && cyclic_ok, branch)
        }
        t => return Err(CliError::UnknownTable(t)),
    };
    Ok(RowCheck {
        n: row.n,
        observed_rank: k,
        ok,
        branch,
        detail,
    })
}

/// Per-row checks, fanned out over threads and returned in fixture order.
pub fn check_fixture(fx: &TableFixture) -> Result<TableCheck, CliError> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(8);
    let chunk = fx.rows.len().div_ceil(workers).max(1);
    let results: Vec<Result<RowCheck, CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = fx
            .rows
            .chunks(chunk)
            .map(|rows| {
                s.spawn(move || {
                    rows.iter()
                        .map(|r| check_row(fx.table, r))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("table worker panicked"))
            .collect()
    });
    Ok(TableCheck {
        table: fx.table,
        rows: results.into_iter().collect::<Result<_, _>>()?,
    })
}

pub fn check_table(table: u8) -> Result<TableCheck, CliError> {
    check_fixture(&load_fixture(table)?)
}

pub fn render_table_check(c: &TableCheck) -> String {
    let mut out = String::new();
    for r in &c.rows {
        writeln!(
            out,
            "{}\t{}\trank {}\t{:?}\t{}",
            if r.ok { "ok" } else { "FAIL" },
            r.n,
            r.observed_rank,
            r.branch,
            r.detail
        )
        .ok();
    }
    let failed = c.failures().len();
    writeln!(
        out,
        "table {}: {} rows, {} failed, non-strong rows {:?}",
        c.table,
        c.rows.len(),
        failed,
        c.non_strong_rows()
    )
    .ok();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub theorem_tag: Option<String>,
    pub rank: RankReport,
    pub descent: DescentReport,
}

pub fn report_document(n: u64, assume_strong: bool) -> Result<ReportDocument, CliError> {
    let rad = factor_radicand(n).map_err(RankError::from)?;
    report_document_for(&rad, assume_strong)
}

pub fn report_document_for(
    rad: &Radicand,
    assume_strong: bool,
) -> Result<ReportDocument, CliError> {
    let rank = rank_report_for(rad, assume_strong)?;
    let descent = descent_report_for(rad, assume_strong, None)?;
    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION,
        theorem_tag: rank
            .special_case
            .as_ref()
            .map(|s| s.family.tag().to_string()),
        rank,
        descent,
    })
}

pub fn render_json(doc: &ReportDocument) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(doc)?)
}

pub fn render_text(doc: &ReportDocument) -> String {
    let r = &doc.rank;
    let d = &doc.descent;
    let mut out = String::new();
    let exact = if r.bounds_collapse() { " exact" } else { "" };
    let (lo, hi) = r.bounds();
    writeln!(out, "n = {}", r.n).ok();
    writeln!(
        out,
        "t={} q*={} s1={} rank=[{},{}]{}",
        r.t, r.qstar, r.s1_strong, lo, hi, exact
    )
    .ok();
    writeln!(
        out,
        "d = {}  g = {}  lambda ramifies: {}",
        r.d, r.g, r.lambda_ramifies
    )
    .ok();
    writeln!(
        out,
        "theorem family: {}",
        doc.theorem_tag.as_deref().unwrap_or("none")
    )
    .ok();
    writeln!(out, "generators ({:?}):", r.generators.method).ok();
    for (i, g) in r.generators.generators.iter().enumerate() {
        writeln!(out, "  x{} = {}  exps {:?}", i + 1, g.value, g.exponents).ok();
    }
    writeln!(
        out,
        "C1 ({} tame cols, wild col {}):",
        r.c1.tame_cols, r.c1.wild_col
    )
    .ok();
    for row in &r.c1.rows {
        let vals: Vec<String> = row.iter().map(|e| e.value().to_string()).collect();
        writeln!(out, "  [{}]", vals.join(" ")).ok();
    }
    writeln!(out, "extra cols possible: {}", r.c1.extra_cols_possible).ok();
    writeln!(
        out,
        "strong branch: s1 = {}, lambda^2-rank = {}, bounds {:?}",
        r.s1_strong, r.lambda2_rank_strong, r.bounds_strong
    )
    .ok();
    writeln!(
        out,
        "non-strong branch: s1 in {:?}, lambda^2-rank in {:?}, bounds {:?}",
        r.s1_range_nonstrong, r.lambda2_rank_range_nonstrong, r.bounds_nonstrong
    )
    .ok();
    if let Some(sc) = &r.special_case {
        writeln!(
            out,
            "special case: r={} s={} t={} s1={} bounds {:?} floor {:?}",
            sc.r, sc.s, sc.t, sc.s1, sc.bounds, sc.nonstrong_floor
        )
        .ok();
    }
    writeln!(
        out,
        "descent: w={} r={} plus-part bound {}",
        d.w, d.r, d.plus_part_bound
    )
    .ok();
    writeln!(
        out,
        "S_L rank in [{}, {}] (s1 = {}, {:?})",
        d.sl_lower, d.sl_upper, d.s1, d.s1_source
    )
    .ok();
    if let Some(v) = d.sl_lower_if_s2_zero {
        writeln!(out, "S_L lower bound if s2 = 0: {v}").ok();
    }
    match d.cyclic_family {
        Some(f) => writeln!(out, "trivial-or-cyclic (family {})", f.number()).ok(),
        None => writeln!(out, "trivial-or-cyclic: no family matches").ok(),
    };
    out
}

/// C₁ entries with the symbol each came from.
pub fn render_symbols(n: u64) -> Result<String, CliError> {
    let rad = factor_radicand(n).map_err(RankError::from)?;
    let rep = rank_report_for(&rad, true)?;
    let mut out = String::new();
    for (i, (g, row)) in rep
        .generators
        .generators
        .iter()
        .zip(&rep.c1.rows)
        .enumerate()
    {
        writeln!(out, "x{} = {}", i + 1, g.value).ok();
        for (j, e) in row.iter().enumerate() {
            if j < rad.g {
                let q = &rad.primes[j].prime;
                writeln!(
                    out,
                    "  (x, {}) at pi{} = {} [tame, p = {}, residue degree {}] = {}",
                    n,
                    j + 1,
                    q.element,
                    q.p,
                    q.rf.f,
                    e.value()
                )
                .ok();
            } else {
                writeln!(
                    out,
                    "  (x, lambda) at lambda [wild, product formula] = {}",
                    e.value()
                )
                .ok();
            }
        }
    }
    Ok(out)
}

pub fn oracle_summary(ell: u64, max_t: usize) -> Result<OracleSummary, CliError> {
    Ok(run_oracle(ell, max_t)?)
}

pub fn render_oracle(s: &OracleSummary) -> String {
    let mut out = format!(
        "ell = {} max_t = {}: {} modules checked, {} failed\n",
        s.ell,
        s.max_t,
        s.checked,
        s.failures.len()
    );
    for (ex, diag) in &s.failures {
        writeln!(out, "  {:?}: {}", ex, diag.join("; ")).ok();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        let sizes = [(1, 97), (2, 14), (3, 11), (4, 50)];
        for (t, len) in sizes {
            let fx = load_fixture(t).unwrap();
            assert_eq!(fx.rows.len(), len, "table {t}");
        }
        let t1 = load_fixture(1).unwrap();
        let r55 = t1.rows.iter().find(|r| r.n == 55).unwrap();
        assert_eq!(r55.suspected_typo.as_deref(), Some("n_f"));
        assert_eq!(r55.n_f, Some(3));
        let t3 = load_fixture(3).unwrap();
        assert_eq!(t3.rows[0].factors, vec![7, 19]);
        assert_eq!(t3.rows[0].n, 133);
        let t4 = load_fixture(4).unwrap();
        assert_eq!(t4.rows[4].factors, vec![2, 13, 7]);
        assert_eq!(t4.rows[4].n, 182);
    }

    #[test]
    fn group_shapes() {
        assert_eq!(GroupShape::parse("1").unwrap().rank(), 0);
        assert_eq!(GroupShape::parse("5x5x25").unwrap().rank(), 3);
        assert!(GroupShape::parse("6").is_none());
        assert!(GroupShape::parse("5x").is_none());
    }

    #[test]
    fn bad_fixture_is_reported() {
        let e = parse_fixture(1, "n\tn_f\ts_k\n12\t2\tC5\n").unwrap_err();
        assert!(matches!(e, CliError::Fixture { line: 2, .. }));
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn report_for_eleven() {
        let doc = report_document(11, true).unwrap();
        let text = render_text(&doc);
        assert!(text.contains("t=2 q*=0 s1=2 rank=[2,2] exact"), "{text}");
        let back: ReportDocument = serde_json::from_str(&render_json(&doc).unwrap()).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn report_for_42() {
        let doc = report_document(42, true).unwrap();
        assert_eq!((doc.rank.t, doc.rank.s1_strong), (2, 0));
        assert_eq!(doc.rank.bounds_strong, (4, 8));
    }

    #[test]
    fn invalid_radicand() {
        assert!(report_document(1, true).is_err());
        assert!(report_document(32, true).is_err());
    }

    #[test]
    fn table_one_and_two_pass() {
        let t1 = check_table(1).unwrap();
        assert!(t1.passed(), "{}", render_table_check(&t1));
        assert!(t1.non_strong_rows().contains(&301));
        let t2 = check_table(2).unwrap();
        assert!(t2.passed(), "{}", render_table_check(&t2));
    }

    #[test]
    fn table_four_passes() {
        let t4 = check_table(4).unwrap();
        assert!(t4.passed(), "{}", render_table_check(&t4));
    }

    #[test]
    fn symbols_dump_lists_every_entry() {
        let s = render_symbols(11).unwrap();
        assert_eq!(s.matches("[tame").count(), 8);
        assert_eq!(s.matches("[wild").count(), 2);
    }
}
