//! Result tables and phase-space field files in commented CSV.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::phase_space::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Self { name: name.into(), unit: unit.into() }
    }
}

/// A rectangular table of finite values with named, unit-carrying columns.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
    /// Free-text lines written to the footer (diagnostics, derived numbers).
    pub notes: Vec<String>,
}

impl ResultTable {
    pub fn new(name: &str, columns: &[(&str, &str)]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|(n, u)| Column::new(n, u)).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch { left: self.columns.len(), right: row.len() });
        }
        if let Some(v) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidState(format!("non-finite value {v} in table '{}'", self.name)));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self, precision: usize, config_hash: &str) -> String {
        let mut s = String::new();
        writeln!(s, "# table: {}", self.name).unwrap();
        let units: Vec<String> = self.columns.iter().map(|c| format!("{} [{}]", c.name, c.unit)).collect();
        writeln!(s, "# units: {}", units.join(", ")).unwrap();
        let names: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        writeln!(s, "{}", names.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_value(*v, precision)).collect();
            writeln!(s, "{}", cells.join(",")).unwrap();
        }
        for n in &self.notes {
            writeln!(s, "# {n}").unwrap();
        }
        writeln!(s, "# config-sha256: {config_hash}").unwrap();
        s
    }

    pub fn write(&self, dir: &Path, precision: usize, config_hash: &str) -> Result<std::path::PathBuf> {
        let path = dir.join(format!("{}.csv", self.name));
        std::fs::write(&path, self.to_csv(precision, config_hash))?;
        Ok(path)
    }
}

/// `precision` significant digits in scientific notation; zero is written as `0`.
pub fn format_value(v: f64, precision: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    format!("{:.*e}", precision.saturating_sub(1), v)
}

/// A phase-space field written as one `re, im, value` row per grid point.
#[derive(Clone, Debug)]
pub struct FieldFile {
    pub name: String,
    /// Meaning of the axes, e.g. quadratures or coherent amplitude.
    pub axes: String,
    pub field: Field,
}

impl FieldFile {
    pub fn to_csv(&self, precision: usize, config_hash: &str) -> String {
        let mut s = String::new();
        writeln!(s, "# field: {}", self.name).unwrap();
        writeln!(s, "# axes: {}", self.axes).unwrap();
        writeln!(s, "# units: re [1], im [1], value [1]").unwrap();
        writeln!(s, "re,im,value").unwrap();
        for (re, im, v) in self.field.points() {
            writeln!(s, "{},{},{}", format_value(re, precision), format_value(im, precision), format_value(v, precision))
                .unwrap();
        }
        writeln!(s, "# config-sha256: {config_hash}").unwrap();
        s
    }

    pub fn write(&self, dir: &Path, precision: usize, config_hash: &str) -> Result<std::path::PathBuf> {
        let path = dir.join(format!("{}.csv", self.name));
        std::fs::write(&path, self.to_csv(precision, config_hash))?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_round_trip_at_17_digits() {
        for v in [std::f64::consts::PI, 1.0 / 3.0, -2.718281828459045e-300, 6.02214076e23, 0.1 + 0.2] {
            let s = format_value(v, 17);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(format_value(0.0, 17), "0");
        assert_eq!(format_value(1234.5, 3), "1.23e3");
    }

    #[test]
    fn csv_layout() {
        let mut t = ResultTable::new("demo", &[("r", "1"), ("alpha", "rad/s")]);
        t.push(vec![0.0, 2.0]).unwrap();
        t.push(vec![0.5, 3.5]).unwrap();
        t.note("crossing: none");
        let csv = t.to_csv(17, "abc");
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# table: demo");
        assert_eq!(lines[1], "# units: r [1], alpha [rad/s]");
        assert_eq!(lines[2], "r,alpha");
        assert_eq!(lines[3], "0,2.0000000000000000e0");
        assert_eq!(lines.last().unwrap(), &"# config-sha256: abc");
        assert_eq!(lines.len(), 7);
    }

    #[test]
    fn rejects_ragged_or_non_finite_rows() {
        let mut t = ResultTable::new("demo", &[("a", "1"), ("b", "1")]);
        assert!(t.push(vec![1.0]).is_err());
        assert!(t.push(vec![1.0, f64::NAN]).is_err());
        assert!(t.rows.is_empty());
    }
}
