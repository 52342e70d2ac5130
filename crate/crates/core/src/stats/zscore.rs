//! Fandom-relative z-scores of log-transformed reception counts.

use std::collections::BTreeMap;

use super::StatsError;
use crate::novelty::Score;

/// Maps every value to `ln(1 + x)` and standardizes it within its fandom by
/// the fandom mean and population standard deviation. Works of a fandom with
/// zero variance come back [`Score::Unscorable`].
pub fn log_zscore_by_fandom<S: AsRef<str>>(values: &[f64], fandoms: &[S]) -> Result<Vec<Score>, StatsError> {
    if values.len() != fandoms.len() {
        return Err(StatsError::LengthMismatch(values.len(), fandoms.len()));
    }
    if let Some(&v) = values.iter().find(|v| !(**v >= 0.0)) {
        return Err(StatsError::Negative(v));
    }
    let logs: Vec<f64> = values.iter().map(|v| v.ln_1p()).collect();
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, f) in fandoms.iter().enumerate() {
        groups.entry(f.as_ref()).or_default().push(i);
    }
    let mut out = vec![Score::Unscorable; values.len()];
    for rows in groups.values() {
        let n = rows.len() as f64;
        let mean = rows.iter().map(|&i| logs[i]).sum::<f64>() / n;
        let var = rows.iter().map(|&i| (logs[i] - mean).powi(2)).sum::<f64>() / n;
        let sd = var.sqrt();
        if sd <= 1e-12 * mean.abs().max(1.0) {
            continue;
        }
        for &i in rows {
            out[i] = Score::Scored((logs[i] - mean) / sd);
        }
    }
    Ok(out)
}
