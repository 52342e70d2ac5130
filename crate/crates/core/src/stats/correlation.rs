//! Pearson correlation matrix of named numeric columns.

use super::StatsError;

/// Returns the symmetric correlation matrix in input column order.
pub fn correlation_matrix(columns: &[(String, Vec<f64>)]) -> Result<Vec<Vec<f64>>, StatsError> {
    let Some((_, first)) = columns.first() else {
        return Ok(Vec::new());
    };
    let n = first.len();
    if n < 2 {
        return Err(StatsError::TooFewRows { needed: 2, have: n });
    }
    let mut centered = Vec::with_capacity(columns.len());
    for (name, col) in columns {
        if col.len() != n {
            return Err(StatsError::LengthMismatch(n, col.len()));
        }
        let mean = col.iter().sum::<f64>() / n as f64;
        let c: Vec<f64> = col.iter().map(|v| v - mean).collect();
        let ss: f64 = c.iter().map(|v| v * v).sum();
        if ss <= 0.0 {
            return Err(StatsError::ZeroVariance(name.clone()));
        }
        let norm = ss.sqrt();
        centered.push(c.into_iter().map(|v| v / norm).collect::<Vec<f64>>());
    }
    let m = centered.len();
    let mut out = vec![vec![0.0; m]; m];
    for i in 0..m {
        out[i][i] = 1.0;
        for j in 0..i {
            let r: f64 = centered[i].iter().zip(&centered[j]).map(|(a, b)| a * b).sum();
            let r = r.clamp(-1.0, 1.0);
            out[i][j] = r;
            out[j][i] = r;
        }
    }
    Ok(out)
}
