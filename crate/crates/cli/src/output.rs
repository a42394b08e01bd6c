//! Record types and the two wire formats. Every float is written with 17
//! significant digits so that values round-trip exactly.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::ser::Formatter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Compact JSON with floats written through [`sig17`].
struct SigDigits;

impl Formatter for SigDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", sig17(value))
    }
}

pub fn sig17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        // JSON has no spelling for these; serde_json maps them to null before
        // reaching the formatter, so only CSV sees this branch
        format!("{v}")
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits);
    value.serialize(&mut ser).expect("records serialize infallibly");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

fn opt(v: Option<f64>) -> String {
    v.map(sig17).unwrap_or_default()
}

/// A type with a fixed CSV header and one line per record.
pub trait CsvRow {
    const HEADER: &'static str;
    fn csv(&self) -> String;
}

pub fn to_csv<T: CsvRow>(rows: &[T]) -> String {
    let mut out = String::from(T::HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

/// `eval` output. `oracle` is finite differences of `K` in the order for
/// `n >= 1` and the cosh-integral `K[1/2, x]` for `n = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct EvalRecord {
    pub n: usize,
    pub x: f64,
    pub t_derivative: f64,
    pub k_derivative: f64,
    pub k_error_estimate: f64,
    pub oracle: Option<f64>,
    pub rel_diff: Option<f64>,
}

impl CsvRow for EvalRecord {
    const HEADER: &'static str = "n,x,t_derivative,k_derivative,k_error_estimate,oracle,rel_diff";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            sig17(self.x),
            sig17(self.t_derivative),
            sig17(self.k_derivative),
            sig17(self.k_error_estimate),
            opt(self.oracle),
            opt(self.rel_diff)
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub x: f64,
    pub n: usize,
    pub t_derivative: f64,
    pub k_derivative: f64,
    pub error_estimate: f64,
}

impl CsvRow for TableRow {
    const HEADER: &'static str = "x,n,t_derivative,k_derivative,error_estimate";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            sig17(self.x),
            self.n,
            sig17(self.t_derivative),
            sig17(self.k_derivative),
            sig17(self.error_estimate)
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub check_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub tol: f64,
    pub pass: bool,
}

impl From<korder::verify::VerificationReport> for ReportRow {
    fn from(r: korder::verify::VerificationReport) -> Self {
        Self {
            check_id: r.check_id,
            lhs: r.lhs,
            rhs: r.rhs,
            abs_diff: r.abs_diff,
            rel_diff: r.rel_diff,
            tol: r.tol,
            pass: r.pass,
        }
    }
}

impl CsvRow for ReportRow {
    const HEADER: &'static str = "check_id,lhs,rhs,abs_diff,rel_diff,tol,pass";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.check_id,
            sig17(self.lhs),
            sig17(self.rhs),
            sig17(self.abs_diff),
            sig17(self.rel_diff),
            sig17(self.tol),
            self.pass
        )
    }
}

/// One `alpha` line: a per-`j` term when `j` is set, otherwise the total
/// with its tail estimate and the finite-difference comparator.
#[derive(Debug, Clone, Serialize)]
pub struct AlphaRow {
    pub j: Option<u64>,
    pub n: usize,
    pub value: f64,
    pub tail_estimate: Option<f64>,
    pub comparator: Option<f64>,
    pub rel_diff: Option<f64>,
}

impl CsvRow for AlphaRow {
    const HEADER: &'static str = "j,n,value,tail_estimate,comparator,rel_diff";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.j.map(|j| j.to_string()).unwrap_or_else(|| "total".into()),
            self.n,
            sig17(self.value),
            opt(self.tail_estimate),
            opt(self.comparator),
            opt(self.rel_diff)
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaReport {
    pub n_max: usize,
    pub j_max: u64,
    pub totals: Vec<AlphaRow>,
    pub per_j: Vec<AlphaRow>,
}
