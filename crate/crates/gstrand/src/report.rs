//! Run reports and the CSV / JSON files they are written to.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    BlowUp,
    SingularConfiguration,
    IllConditioned,
    Failed,
}

/// Whether a series should stay small or stay constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    /// Residuals, drifts and errors: summarized by max |value|.
    Residual,
    /// Conserved quantities: summarized by max |value − first value|.
    Conserved,
}

/// One diagnostic's time series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticSeries {
    pub name: String,
    pub kind: SeriesKind,
    pub columns: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<(f64, Vec<f64>)>,
    /// Per-column summary (see [`SeriesKind`]).
    pub summary: Vec<f64>,
    /// Largest entry of `summary`; the quantity used in convergence studies.
    pub metric: f64,
    pub samples: usize,
}

impl DiagnosticSeries {
    pub fn new(name: &str, kind: SeriesKind, columns: Vec<String>) -> Self {
        DiagnosticSeries {
            name: name.to_string(),
            kind,
            summary: vec![0.0; columns.len()],
            columns,
            rows: Vec::new(),
            metric: 0.0,
            samples: 0,
        }
    }

    pub fn push(&mut self, t: f64, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push((t, values));
        self.refresh();
    }

    fn refresh(&mut self) {
        let first = self.rows.first().map(|(_, v)| v.clone());
        let (_, last) = self.rows.last().expect("refresh after push");
        for (c, value) in last.iter().enumerate() {
            let x = match (self.kind, &first) {
                (SeriesKind::Residual, _) => value.abs(),
                (SeriesKind::Conserved, Some(f)) => (value - f[c]).abs(),
                (SeriesKind::Conserved, None) => 0.0,
            };
            if x > self.summary[c] || x.is_nan() {
                self.summary[c] = x;
            }
        }
        self.metric = self.summary.iter().copied().fold(0.0, f64::max);
        if self.summary.iter().any(|x| x.is_nan()) {
            self.metric = f64::NAN;
        }
        self.samples = self.rows.len();
    }

    /// Summary entry for a named column.
    pub fn column(&self, name: &str) -> Option<f64> {
        self.columns
            .iter()
            .position(|c| c == name)
            .map(|i| self.summary[i])
    }

    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        write!(w, "t")?;
        for c in &self.columns {
            write!(w, ",{c}")?;
        }
        writeln!(w)?;
        for (t, values) in &self.rows {
            write!(w, "{}", fmt_f64(*t))?;
            for v in values {
                write!(w, ",{}", fmt_f64(*v))?;
            }
            writeln!(w)?;
        }
        w.flush()
    }
}

/// Summary of one scenario run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub model: String,
    pub status: RunStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// Time stamp of the failure, for runs that did not complete.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_at: Option<f64>,
    pub nodes: usize,
    pub ds: f64,
    pub dt: f64,
    pub steps_planned: usize,
    pub steps_completed: usize,
    pub final_time: f64,
    pub diagnostics: Vec<DiagnosticSeries>,
}

impl RunReport {
    pub fn diagnostic(&self, name: &str) -> Option<&DiagnosticSeries> {
        self.diagnostics.iter().find(|d| d.name == name)
    }

    pub fn write_json(&self, path: &Path) -> io::Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(io::Error::other)?;
        std::fs::write(path, text + "\n")
    }
}

/// 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Streaming writer for a per-node field: rows `t,s_index,<components>`.
pub struct FieldWriter {
    out: BufWriter<File>,
}

impl FieldWriter {
    pub fn create(path: &Path, components: &[String]) -> io::Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        write!(out, "t,s_index")?;
        for c in components {
            write!(out, ",{c}")?;
        }
        writeln!(out)?;
        Ok(FieldWriter { out })
    }

    pub fn write_node(&mut self, t: f64, index: usize, values: &[f64]) -> io::Result<()> {
        write!(self.out, "{},{index}", fmt_f64(t))?;
        for v in values {
            write!(self.out, ",{}", fmt_f64(*v))?;
        }
        writeln!(self.out)
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_and_conserved_summaries() {
        let mut r = DiagnosticSeries::new("r", SeriesKind::Residual, vec!["a".into()]);
        r.push(0.0, vec![-0.5]);
        r.push(1.0, vec![0.25]);
        assert_eq!(r.metric, 0.5);
        let mut c = DiagnosticSeries::new("c", SeriesKind::Conserved, vec!["e".into(), "p".into()]);
        c.push(0.0, vec![10.0, 1.0]);
        c.push(1.0, vec![10.5, 1.0]);
        c.push(2.0, vec![9.75, 1.0]);
        assert_eq!(c.summary, vec![0.5, 0.0]);
        assert_eq!(c.column("e"), Some(0.5));
    }

    #[test]
    fn nan_poisons_metric() {
        let mut r = DiagnosticSeries::new("r", SeriesKind::Residual, vec!["a".into()]);
        r.push(0.0, vec![1.0]);
        r.push(1.0, vec![f64::NAN]);
        assert!(r.metric.is_nan());
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
