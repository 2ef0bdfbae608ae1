use std::io::{self, Write};

use pt_harmonics::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::config::{OutputFormat, ResolvedConfig, Suite};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// How `observed` is compared with `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// deviation = `|observed - expected|`
    Eq,
    /// `expected` is an upper bound; deviation = `max(0, observed - expected)`
    Le,
    /// `expected` is a lower bound; deviation = `max(0, expected - observed)`
    Ge,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::Eq => "eq",
            Relation::Le => "le",
            Relation::Ge => "ge",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub check_id: String,
    pub expected_re: f64,
    pub expected_im: f64,
    pub observed_re: f64,
    pub observed_im: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Record {
    pub fn equal(
        check_id: impl Into<String>,
        expected: Complex64,
        observed: Complex64,
        tolerance: f64,
    ) -> Self {
        Self::build(
            check_id.into(),
            expected,
            observed,
            (observed - expected).norm(),
            tolerance,
            Relation::Eq,
        )
    }

    /// Passes when `observed <= bound`.
    pub fn at_most(check_id: impl Into<String>, bound: f64, observed: f64) -> Self {
        Self::build(
            check_id.into(),
            re(bound),
            re(observed),
            (observed - bound).max(0.0),
            0.0,
            Relation::Le,
        )
    }

    /// Passes when `observed >= bound`.
    pub fn at_least(check_id: impl Into<String>, bound: f64, observed: f64) -> Self {
        Self::build(
            check_id.into(),
            re(bound),
            re(observed),
            (bound - observed).max(0.0),
            0.0,
            Relation::Ge,
        )
    }

    fn build(
        check_id: String,
        expected: Complex64,
        observed: Complex64,
        deviation: f64,
        tolerance: f64,
        relation: Relation,
    ) -> Self {
        // NaN deviations fail
        let pass = deviation <= tolerance;
        Self {
            check_id,
            expected_re: expected.re,
            expected_im: expected.im,
            observed_re: observed.re,
            observed_im: observed.im,
            deviation,
            tolerance,
            relation,
            pass,
        }
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lambda {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub max_deviation: f64,
    pub pass_count: usize,
    pub fail_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub paper_section: &'static str,
    pub tool_version: &'static str,
    pub config: ResolvedConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Lambda>,
    pub records: Vec<Record>,
    pub summary: Summary,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(
        config: ResolvedConfig,
        paper_section: &'static str,
        lambda: Option<Complex64>,
    ) -> Self {
        Self {
            suite: config.suite,
            paper_section,
            tool_version: TOOL_VERSION,
            config,
            lambda: lambda.map(|z| Lambda { re: z.re, im: z.im }),
            records: Vec::new(),
            summary: Summary {
                max_deviation: 0.0,
                pass_count: 0,
                fail_count: 0,
            },
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, record: Record) {
        if record.pass {
            self.summary.pass_count += 1;
        } else {
            self.summary.fail_count += 1;
        }
        if record.deviation.is_nan() || record.deviation > self.summary.max_deviation {
            self.summary.max_deviation = record.deviation;
        }
        self.records.push(record);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn passed(&self) -> bool {
        self.summary.fail_count == 0
    }
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

struct SignificantDigits;

impl Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_float(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }
}

const CSV_HEADER: [&str; 9] = [
    "check_id",
    "expected_re",
    "expected_im",
    "observed_re",
    "observed_im",
    "deviation",
    "tolerance",
    "relation",
    "pass",
];

pub fn emit(report: &Report, format: OutputFormat) -> io::Result<Vec<u8>> {
    match format {
        OutputFormat::Json => emit_json(report),
        OutputFormat::Csv => emit_csv(report),
        OutputFormat::Text => Ok(emit_text(report).into_bytes()),
    }
}

fn emit_json(report: &Report) -> io::Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigits);
    report.serialize(&mut ser).map_err(io::Error::other)?;
    out.push(b'\n');
    Ok(out)
}

fn emit_csv(report: &Report) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in &report.records {
        w.write_record([
            r.check_id.clone(),
            format_float(r.expected_re),
            format_float(r.expected_im),
            format_float(r.observed_re),
            format_float(r.observed_im),
            format_float(r.deviation),
            format_float(r.tolerance),
            r.relation.name().to_string(),
            r.pass.to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| e.into_error())
}

/// Parses the CSV form back into records.
pub fn parse_csv(bytes: &[u8]) -> csv::Result<Vec<Record>> {
    csv::Reader::from_reader(bytes).deserialize().collect()
}

fn emit_text(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "suite: {} (pt-harmonics {})\n",
        report.suite, report.tool_version
    ));
    out.push_str(&format!("checks: {}\n", report.paper_section));
    out.push_str(&format!("gauge: {}\n", report.config.gauge));
    if let Some(l) = report.lambda {
        let sign = if l.im.is_sign_negative() { "-" } else { "+" };
        out.push_str(&format!(
            "lambda: {} {sign} {}i\n",
            format_float(l.re),
            format_float(l.im.abs())
        ));
    }
    let head = [
        "check",
        "expected",
        "observed",
        "deviation",
        "tolerance",
        "rel",
        "result",
    ];
    let rows: Vec<[String; 7]> = report
        .records
        .iter()
        .map(|r| {
            [
                r.check_id.clone(),
                complex_text(r.expected_re, r.expected_im),
                complex_text(r.observed_re, r.observed_im),
                format!("{:.3e}", r.deviation),
                format!("{:.1e}", r.tolerance),
                r.relation.name().to_string(),
                if r.pass { "PASS" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    let mut widths = head.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    out.push_str(&line(&head.map(String::from)));
    for row in &rows {
        out.push_str(&line(row));
    }
    let s = &report.summary;
    out.push_str(&format!(
        "summary: {} passed, {} failed, max deviation {:.3e}\n",
        s.pass_count, s.fail_count, s.max_deviation
    ));
    for n in &report.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    out
}

fn complex_text(re: f64, im: f64) -> String {
    if im == 0.0 {
        format!("{re:.6e}")
    } else {
        format!("{re:.6e}{im:+.6e}i")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;
    use clap::Parser;

    fn empty_report() -> Report {
        let (config, _) = RunConfig::parse_from(["pt-harmonics", "verify-so3"]).resolve();
        Report::new(config, "test", None)
    }

    #[test]
    fn relations() {
        assert!(Record::equal("a", re(1.0), re(1.0 + 1e-12), 1e-10).pass);
        assert!(!Record::equal("a", re(1.0), re(1.1), 1e-10).pass);
        let r = Record::at_least("b", 1e-3, 0.5);
        assert!(r.pass && r.deviation == 0.0);
        let r = Record::at_least("b", 1e-3, 1e-4);
        assert!(!r.pass && (r.deviation - 9e-4).abs() < 1e-18);
        assert!(Record::at_most("c", 2.0, 1.0).pass);
        assert!(!Record::equal("nan", re(0.0), re(f64::NAN), 1.0).pass);
    }

    #[test]
    fn summary_tracks_records() {
        let mut r = empty_report();
        r.push(Record::equal("a", re(0.0), re(1e-3), 1e-2));
        r.push(Record::equal("b", re(0.0), re(1.0), 1e-2));
        assert_eq!((r.summary.pass_count, r.summary.fail_count), (1, 1));
        assert_eq!(r.summary.max_deviation, 1.0);
        assert!(!r.passed());
    }

    #[test]
    fn empty_report_is_valid_json() {
        let bytes = emit(&empty_report(), OutputFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(v["records"].as_array().unwrap().len(), 0);
        assert!(v.get("lambda").is_none());
    }

    #[test]
    fn floats_carry_17_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.0), "-2.0000000000000000e0");
        for x in [0.1, 1.0 / 3.0, 6.02e23, -1e-300, f64::MIN_POSITIVE] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }
}
