//! Rectangular numeric tables with a metadata block, written as CSV or JSON.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::fock::{Truncation, QUADRATURE_CONVENTION};

/// Significant digits kept when a table is rendered.
pub const SIGNIFICANT_DIGITS: usize = 12;

pub const SIGMA_NOTE: &str =
    "sigma is in quadrature units for homodyne rows and photon-number units for pnrd rows; the two are not comparable";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidArgument(format!(
                "unknown output format `{other}`"
            ))),
        }
    }
}

/// Cutoffs and grid sizes seen while computing a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Audit {
    pub cutoff_min: Option<usize>,
    pub cutoff_max: Option<usize>,
    pub grid_points_min: Option<usize>,
    pub grid_points_max: Option<usize>,
}

fn merge_min(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

fn merge_max(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    a.max(b)
}

impl Audit {
    pub fn cutoff(mut self, cutoff: usize) -> Self {
        self.cutoff_min = merge_min(self.cutoff_min, Some(cutoff));
        self.cutoff_max = merge_max(self.cutoff_max, Some(cutoff));
        self
    }

    pub fn grid(mut self, points: usize) -> Self {
        self.grid_points_min = merge_min(self.grid_points_min, Some(points));
        self.grid_points_max = merge_max(self.grid_points_max, Some(points));
        self
    }

    pub fn merge(self, other: Audit) -> Audit {
        Audit {
            cutoff_min: merge_min(self.cutoff_min, other.cutoff_min),
            cutoff_max: merge_max(self.cutoff_max, other.cutoff_max),
            grid_points_min: merge_min(self.grid_points_min, other.grid_points_min),
            grid_points_max: merge_max(self.grid_points_max, other.grid_points_max),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    metadata: Vec<(String, String)>,
}

impl ResultTable {
    /// Empty table; the tool version and quadrature convention are recorded up front.
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        ResultTable {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            metadata: vec![
                (
                    "tool".into(),
                    format!("macrolens {}", env!("CARGO_PKG_VERSION")),
                ),
                ("convention".into(), QUADRATURE_CONVENTION.into()),
            ],
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::InvalidArgument(format!(
                "row has {} values for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Sets a metadata entry, replacing any earlier value for `key`.
    pub fn set_meta(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string().replace('\n', " ");
        match self.metadata.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.metadata.push((key.to_string(), value)),
        }
    }

    /// Records the truncation policy and the cutoffs and grid sizes actually used.
    pub fn record_numerics(&mut self, truncation: Truncation, audit: Audit) {
        self.set_meta("tail_tolerance", format!("{:e}", truncation.tail_tolerance));
        self.set_meta("cutoff_scale", truncation.cutoff_scale);
        let show = |v: Option<usize>| v.map_or_else(|| "n/a".to_string(), |v| v.to_string());
        self.set_meta("cutoff_min", show(audit.cutoff_min));
        self.set_meta("cutoff_max", show(audit.cutoff_max));
        self.set_meta("grid_points_min", show(audit.grid_points_min));
        self.set_meta("grid_points_max", show(audit.grid_points_max));
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All values of one column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_value(*v)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let metadata: Map<String, Value> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let rows: Vec<Vec<Value>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|v| json_value(*v)).collect())
            .collect();
        let doc = json!({ "metadata": metadata, "columns": self.columns, "rows": rows });
        let mut text = serde_json::to_string_pretty(&doc).expect("table serializes");
        text.push('\n');
        text
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    pub fn write(&self, path: &Path, format: OutputFormat) -> Result<()> {
        std::fs::write(path, self.render(format))
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

/// `value` rounded to [`SIGNIFICANT_DIGITS`], with negative zero folded into zero.
pub fn round_significant(value: f64) -> f64 {
    if !value.is_finite() || value == 0.0 {
        return if value == 0.0 { 0.0 } else { value };
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, value)
        .parse()
        .expect("scientific notation parses");
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

/// Shortest text that round-trips the 12-digit rounded value.
pub fn format_value(value: f64) -> String {
    format!("{:?}", round_significant(value))
}

fn json_value(value: f64) -> Value {
    serde_json::Number::from_f64(round_significant(value))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(format_value(0.1 + 0.2), "0.3");
        assert_eq!(format_value(-0.0), "0.0");
        assert_eq!(format_value(1.0), "1.0");
        assert_eq!(format_value(1234567.891234567), "1234567.89123");
        assert_eq!(format_value(2.5e-20), "2.5e-20");
        assert_eq!(round_significant(0.997300203936740), 0.997300203937);
    }

    #[test]
    fn csv_layout() {
        let mut t = ResultTable::new(["a", "b"]);
        t.set_meta("family", "css");
        t.push_row(vec![1.0, 0.5]).unwrap();
        assert!(t.push_row(vec![1.0]).is_err());
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# tool: macrolens"));
        assert!(lines
            .iter()
            .any(|l| l.starts_with("# convention: x=(a+a^dag)/sqrt(2)")));
        assert_eq!(lines[lines.len() - 2], "a,b");
        assert_eq!(lines[lines.len() - 1], "1.0,0.5");
        t.set_meta("family", "psv");
        assert_eq!(t.meta("family"), Some("psv"));
    }

    #[test]
    fn json_layout() {
        let mut t = ResultTable::new(["x"]);
        t.push_row(vec![0.25]).unwrap();
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["columns"][0], "x");
        assert_eq!(v["rows"][0][0], 0.25);
        assert!(v["metadata"]["convention"].is_string());
    }

    #[test]
    fn audit_merges() {
        let a = Audit::default().cutoff(10).grid(2048);
        let b = Audit::default().cutoff(40);
        let m = a.merge(b);
        assert_eq!((m.cutoff_min, m.cutoff_max), (Some(10), Some(40)));
        assert_eq!(
            (m.grid_points_min, m.grid_points_max),
            (Some(2048), Some(2048))
        );
    }

    #[test]
    fn formats_parse() {
        assert_eq!("JSON".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
