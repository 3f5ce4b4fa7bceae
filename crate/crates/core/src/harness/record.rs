use std::io::Write;

use serde::Serialize;

use crate::division::Case;
use crate::error::{Error, Result};
use crate::report::Report;

/// Bumped whenever a field of [`InstanceRecord`] changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Jsonl,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "table" => Ok(Format::Table),
            "jsonl" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            other => Err(Error::InvalidParameters(format!("unknown format {other}"))),
        }
    }
}

/// Closed-form data kept in a record. Field elements use the packed encoding
/// of the top field printed by `jlparity tower`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessSummary {
    pub z_valuation: i64,
    pub z_leading: u64,
    pub z_in_h: bool,
    pub epsilon: Option<u64>,
}

/// One parameter triple `(zeta, chi, c)` of a sweep.
///
/// `zeta = g^zeta_dlog` for the published generator `g` of `F_q^x`,
/// `chi(g) = exp(2 pi i chi_exp / (q-1))` and `c = exp(2 pi i c_exp / c_order)`.
/// Signs are `+1`/`-1`; `None` means the quantity is not defined (no pairing).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceRecord {
    pub schema_version: u32,
    pub case: Case,
    pub q: u64,
    pub qprime: Option<u64>,
    pub n: u32,
    pub zeta_dlog: u64,
    pub chi_exp: u64,
    pub c_order: u64,
    pub c_exp: u64,
    pub csd: bool,
    pub tau_matches_dual: bool,
    pub irreducible: bool,
    pub c_jl_brute: Option<i8>,
    pub c_jl_closed: Option<i8>,
    pub c_jl_expected: Option<i8>,
    pub c_rec_predicted: Option<i8>,
    pub consistent: bool,
    #[serde(flatten)]
    pub witness: Option<WitnessSummary>,
    pub error: Option<String>,
    pub timing_ms: Option<f64>,
}

impl InstanceRecord {
    pub fn sort_key(&self) -> (Case, u64, u32, u64, u64, u64) {
        (self.case, self.q, self.n, self.zeta_dlog, self.chi_exp, self.c_exp)
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    schema_version: u32,
    case: Case,
    q: u64,
    qprime: Option<u64>,
    n: u32,
    zeta_dlog: u64,
    chi_exp: u64,
    c_order: u64,
    c_exp: u64,
    csd: bool,
    tau_matches_dual: bool,
    irreducible: bool,
    c_jl_brute: Option<i8>,
    c_jl_closed: Option<i8>,
    c_jl_expected: Option<i8>,
    c_rec_predicted: Option<i8>,
    consistent: bool,
    z_valuation: Option<i64>,
    z_leading: Option<u64>,
    z_in_h: Option<bool>,
    epsilon: Option<u64>,
    error: Option<&'a str>,
    timing_ms: Option<f64>,
}

impl<'a> From<&'a InstanceRecord> for CsvRow<'a> {
    fn from(r: &'a InstanceRecord) -> Self {
        let w = r.witness.as_ref();
        CsvRow {
            schema_version: r.schema_version,
            case: r.case,
            q: r.q,
            qprime: r.qprime,
            n: r.n,
            zeta_dlog: r.zeta_dlog,
            chi_exp: r.chi_exp,
            c_order: r.c_order,
            c_exp: r.c_exp,
            csd: r.csd,
            tau_matches_dual: r.tau_matches_dual,
            irreducible: r.irreducible,
            c_jl_brute: r.c_jl_brute,
            c_jl_closed: r.c_jl_closed,
            c_jl_expected: r.c_jl_expected,
            c_rec_predicted: r.c_rec_predicted,
            consistent: r.consistent,
            z_valuation: w.map(|w| w.z_valuation),
            z_leading: w.map(|w| w.z_leading),
            z_in_h: w.map(|w| w.z_in_h),
            epsilon: w.and_then(|w| w.epsilon),
            error: r.error.as_deref(),
            timing_ms: r.timing_ms,
        }
    }
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::InvalidParameters(format!("output: {e}"))
}

fn sign(s: Option<i8>) -> &'static str {
    match s {
        Some(1) => "+1",
        Some(-1) => "-1",
        Some(_) => "?",
        None => "-",
    }
}

pub fn write_records<W: Write + ?Sized>(records: &[InstanceRecord], format: Format, out: &mut W) -> Result<()> {
    match format {
        Format::Jsonl => {
            for r in records {
                serde_json::to_writer(&mut *out, r).map_err(io)?;
                writeln!(out).map_err(io)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for r in records {
                w.serialize(CsvRow::from(r)).map_err(io)?;
            }
            w.flush().map_err(io)?;
        }
        Format::Table => {
            writeln!(
                out,
                "{:<10} {:>3} {:>2} {:>5} {:>5} {:>9} {:>4} {:>6} {:>6} {:>6} {:>6}  ok",
                "case", "q", "n", "zeta", "chi", "c", "csd", "brute", "closed", "table", "rec"
            )
            .map_err(io)?;
            for r in records {
                write!(
                    out,
                    "{:<10} {:>3} {:>2} {:>5} {:>5} {:>9} {:>4} {:>6} {:>6} {:>6} {:>6}  {}",
                    r.case.name(),
                    r.q,
                    r.n,
                    r.zeta_dlog,
                    r.chi_exp,
                    format!("{}/{}", r.c_exp, r.c_order),
                    if r.csd { "yes" } else { "no" },
                    sign(r.c_jl_brute),
                    sign(r.c_jl_closed),
                    sign(r.c_jl_expected),
                    sign(r.c_rec_predicted),
                    if r.consistent { "ok" } else { "FAIL" }
                )
                .map_err(io)?;
                if let Some(t) = r.timing_ms {
                    write!(out, "  {t:.2}ms").map_err(io)?;
                }
                if let Some(e) = &r.error {
                    write!(out, "  {e}").map_err(io)?;
                }
                writeln!(out).map_err(io)?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckRow<'a> {
    report: &'a str,
    check: &'a str,
    passed: bool,
    detail: Option<&'a str>,
}

pub fn write_report<W: Write + ?Sized>(report: &Report, format: Format, out: &mut W) -> Result<()> {
    let rows = report.checks.iter().map(|c| CheckRow {
        report: &report.name,
        check: &c.name,
        passed: c.passed,
        detail: c.detail.as_deref(),
    });
    match format {
        Format::Jsonl => {
            for row in rows {
                serde_json::to_writer(&mut *out, &row).map_err(io)?;
                writeln!(out).map_err(io)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for row in rows {
                w.serialize(row).map_err(io)?;
            }
            w.flush().map_err(io)?;
        }
        Format::Table => {
            for c in report.failures() {
                writeln!(out, "FAIL {}{}", c.name, c.detail.as_ref().map(|d| format!(": {d}")).unwrap_or_default())
                    .map_err(io)?;
            }
            let failed = report.failures().count();
            writeln!(out, "{}: {} checks, {} failed", report.name, report.len(), failed).map_err(io)?;
        }
    }
    Ok(())
}
