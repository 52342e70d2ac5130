//! Variance inflation factors of the numeric design columns.

use nalgebra::DMatrix;

use super::design::{ColumnKind, DesignMatrix};
use super::linalg::r_squared_tolerant;
use super::StatsError;

pub const DEFAULT_THRESHOLD: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct VifReport {
    /// `(column, VIF)` for every numeric column, in design order.
    pub entries: Vec<(String, f64)>,
    pub threshold: f64,
}

impl VifReport {
    /// Columns above the threshold, largest first.
    pub fn flagged(&self) -> Vec<&str> {
        let mut hits: Vec<&(String, f64)> = self.entries.iter().filter(|(_, v)| *v > self.threshold).collect();
        hits.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        hits.into_iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

/// `1 / (1 − R²)` of each numeric column regressed on an intercept and every
/// other column. Exact collinearity yields `f64::INFINITY`.
pub fn vif(design: &DesignMatrix, threshold: f64) -> Result<VifReport, StatsError> {
    let numeric: Vec<usize> = (0..design.columns.len())
        .filter(|&j| design.columns[j].kind == ColumnKind::Numeric)
        .collect();
    if numeric.len() < 2 {
        return Err(StatsError::Invalid("VIF needs at least two numeric columns".into()));
    }
    let n = design.n_rows();
    let p = design.columns.len();
    if n < 2 {
        return Err(StatsError::TooFewRows { needed: 2, have: n });
    }
    let mut entries = Vec::with_capacity(numeric.len());
    for &j in &numeric {
        let others: Vec<usize> = (0..p).filter(|&k| k != j).collect();
        let x = DMatrix::from_fn(n, others.len() + 1, |i, c| {
            if c == 0 {
                1.0
            } else {
                design.columns[others[c - 1]].values[i]
            }
        });
        let r2 = r_squared_tolerant(&x, &design.columns[j].values);
        let v = if 1.0 - r2 <= 1e-12 { f64::INFINITY } else { 1.0 / (1.0 - r2) };
        entries.push((design.columns[j].name.clone(), v));
    }
    Ok(VifReport { entries, threshold })
}
