//! Report rows and their CSV encoding.

use std::io::Write;
use std::time::Instant;

pub const HEADER: [&str; 8] = [
    "scenario",
    "model",
    "statement_id",
    "net_index",
    "residual",
    "bound",
    "verdict",
    "elapsed_ms",
];

/// One measured quantity. `net_index` is the net index when the row
/// belongs to a net trace and the 1-based case number otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub scenario: &'static str,
    pub model: String,
    pub statement_id: &'static str,
    pub net_index: usize,
    pub residual: f64,
    pub bound: f64,
    pub verdict: String,
    pub elapsed_ms: f64,
}

/// Scientific notation with 16 significant digits; non-finite values are
/// spelled `inf`, `-inf` and `nan`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.15e}")
    }
}

/// Collects the rows of one scenario together with any failed
/// expectation.
#[derive(Debug)]
pub struct Recorder {
    scenario: &'static str,
    started: Instant,
    rows: Vec<ReportRow>,
    failures: Vec<String>,
}

impl Recorder {
    pub fn new(scenario: &'static str) -> Self {
        Self {
            scenario,
            started: Instant::now(),
            rows: Vec::new(),
            failures: Vec::new(),
        }
    }

    /// Appends a row and returns its position.
    pub fn row(
        &mut self,
        model: impl Into<String>,
        statement_id: &'static str,
        net_index: usize,
        residual: f64,
        bound: f64,
        verdict: impl Into<String>,
    ) -> usize {
        self.rows.push(ReportRow {
            scenario: self.scenario,
            model: model.into(),
            statement_id,
            net_index,
            residual,
            bound,
            verdict: verdict.into(),
            elapsed_ms: self.started.elapsed().as_secs_f64() * 1e3,
        });
        self.rows.len() - 1
    }

    /// Row whose verdict is `pass` or `fail`; a failure is recorded with
    /// `what` as the reason.
    #[allow(clippy::too_many_arguments)]
    pub fn check(
        &mut self,
        model: impl Into<String>,
        statement_id: &'static str,
        net_index: usize,
        residual: f64,
        bound: f64,
        ok: bool,
        what: impl FnOnce() -> String,
    ) -> bool {
        self.row(
            model,
            statement_id,
            net_index,
            residual,
            bound,
            if ok { "pass" } else { "fail" },
        );
        if !ok {
            self.failures.push(what());
        }
        ok
    }

    /// Records a failed expectation that has no row of its own.
    pub fn fail(&mut self, reason: impl Into<String>) {
        self.failures.push(reason.into());
    }

    pub fn rows(&self) -> &[ReportRow] {
        &self.rows
    }

    pub fn failures(&self) -> &[String] {
        &self.failures
    }

    pub fn elapsed_ms(&self) -> f64 {
        self.started.elapsed().as_secs_f64() * 1e3
    }

    pub fn into_parts(self) -> (Vec<ReportRow>, Vec<String>) {
        (self.rows, self.failures)
    }
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

pub fn write_rows<W: Write>(out: W, rows: &[ReportRow]) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.scenario,
            r.model.as_str(),
            r.statement_id,
            &r.net_index.to_string(),
            &format_number(r.residual),
            &format_number(r.bound),
            r.verdict.as_str(),
            &format!("{:.3}", r.elapsed_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Outcome of one scenario as listed in the summary.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSummary {
    pub scenario: &'static str,
    pub statement_ids: Vec<&'static str>,
    pub rows: usize,
    pub failures: Vec<String>,
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

impl ScenarioSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.error.is_none()
    }
}

pub const SUMMARY_HEADER: [&str; 6] = ["scenario", "statement_ids", "rows", "verdict", "detail", "elapsed_ms"];

pub fn write_summary<W: Write>(out: W, items: &[ScenarioSummary]) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for s in items {
        let detail = match &s.error {
            Some(e) => format!("error: {e}"),
            None => s.failures.join("; "),
        };
        w.write_record([
            s.scenario,
            &s.statement_ids.join(" "),
            &s.rows.to_string(),
            if s.passed() { "pass" } else { "fail" },
            &detail,
            &format!("{:.3}", s.elapsed_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_carry_sixteen_digits() {
        assert_eq!(format_number(0.1), "1.000000000000000e-1");
        assert_eq!(format_number(1.0 / 3.0), "3.333333333333333e-1");
        assert_eq!(format_number(0.0), "0.000000000000000e0");
        assert_eq!(format_number(-2.5e-300), "-2.500000000000000e-300");
        assert_eq!(format_number(f64::INFINITY), "inf");
        assert_eq!(format_number(f64::NAN), "nan");
        for x in [0.1, 1.0 / 3.0, 6.02e23, 1e-17, f64::MIN_POSITIVE] {
            let back = format_number(x).parse::<f64>().unwrap();
            assert!((back - x).abs() <= 5e-16 * x.abs(), "{x} came back as {back}");
        }
    }

    #[test]
    fn csv_has_header_and_lf_endings() {
        let mut rec = Recorder::new("demo");
        rec.row("L1(T), M=8", "s", 1, 0.5, 1.0, "trace");
        assert!(!rec.check("m", "s", 2, 2.0, 1.0, false, || "too big".into()));
        let mut buf = Vec::new();
        write_rows(&mut buf, rec.rows()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(!text.contains('\r'));
        assert!(!text.starts_with('\u{feff}'));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], HEADER.join(","));
        assert!(lines[1].starts_with("demo,\"L1(T), M=8\",s,1,5.000000000000000e-1,1.000000000000000e0,trace,"));
        assert!(lines[2].contains(",fail,"));
        assert_eq!(rec.failures(), ["too big"]);
    }
}
