use std::io::Write;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::field::WaveField;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StopReason {
    Completed,
    GradientCap { t: f64, gradient: f64 },
}

/// Scalar time series plus (optionally) the strided fields of one run.
#[derive(Debug, Clone)]
pub struct SolutionTrace {
    pub times: Vec<f64>,
    columns: Vec<(String, Vec<f64>)>,
    pub snapshots: Vec<WaveField>,
    pub final_field: Option<WaveField>,
    pub steps: usize,
    pub stop: StopReason,
}

impl Default for SolutionTrace {
    fn default() -> Self {
        Self::new()
    }
}

impl SolutionTrace {
    pub fn new() -> Self {
        Self {
            times: Vec::new(),
            columns: Vec::new(),
            snapshots: Vec::new(),
            final_field: None,
            steps: 0,
            stop: StopReason::Completed,
        }
    }

    /// Appends one row. The first row fixes the column set and order.
    pub fn record(&mut self, t: f64, row: &[(&str, f64)]) -> Result<()> {
        if self.times.is_empty() && self.columns.is_empty() {
            self.columns = row.iter().map(|(k, _)| (k.to_string(), Vec::new())).collect();
        }
        if row.len() != self.columns.len() || row.iter().zip(&self.columns).any(|((k, _), (c, _))| k != c) {
            return Err(invalid("trace row does not match the column set"));
        }
        self.times.push(t);
        for ((_, v), (_, col)) in row.iter().zip(self.columns.iter_mut()) {
            col.push(*v);
        }
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_slice())
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(k, _)| k.as_str())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        write!(w, "t")?;
        for (k, _) in &self.columns {
            write!(w, ",{k}")?;
        }
        writeln!(w)?;
        for (i, t) in self.times.iter().enumerate() {
            write!(w, "{t:.17e}")?;
            for (_, col) in &self.columns {
                write!(w, ",{:.17e}", col[i])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}
