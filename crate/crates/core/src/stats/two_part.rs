//! Two-part reception model: a logit for whether a work received any
//! response, then OLS of the log response on the works that did, with the
//! fitted probability as an extra regressor.

use super::design::{DesignMatrix, INTERCEPT};
use super::linalg::{ols, OlsFit};
use super::logistic::{fit_logistic, LogisticFit};
use super::StatsError;
use crate::corpus::Response;

pub const PROBABILITY_COLUMN: &str = "p_nonzero";

/// Models 1–4 regress kudos, hits, comments and bookmarks on the linear
/// novelty terms; models 5–8 add the squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ModelId(pub u8);

impl ModelId {
    pub fn linear(response: Response, with_squares: bool) -> Self {
        let idx = Response::ALL.iter().position(|r| *r == response).expect("known response") as u8;
        ModelId(1 + idx + if with_squares { 4 } else { 0 })
    }

    pub fn gam(response: Response) -> Self {
        let idx = Response::ALL.iter().position(|r| *r == response).expect("known response") as u8;
        ModelId(9 + idx)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticStage {
    pub names: Vec<String>,
    pub fit: LogisticFit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OlsStage {
    pub names: Vec<String>,
    pub fit: OlsFit,
    /// Relative normal-equation residual at the solution.
    pub normal_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPartFit {
    pub model_id: ModelId,
    pub response: Response,
    /// Absent when every row has a nonzero response.
    pub logistic: Option<LogisticStage>,
    pub ols: OlsStage,
    /// Indicator columns that were constant on the nonzero rows and left out
    /// of the OLS stage.
    pub dropped: Vec<String>,
}

impl TwoPartFit {
    pub fn ols_coefficient(&self, name: &str) -> Option<(f64, f64, (f64, f64))> {
        let i = self.ols.names.iter().position(|n| n == name)?;
        let f = &self.ols.fit;
        Some((f.coefficients[i], f.std_errors[i], f.ci[i]))
    }
}

/// Fits both stages on `design` for per-chapter response `values`.
pub fn fit_two_part(design: &DesignMatrix, response: Response, values: &[f64]) -> Result<TwoPartFit, StatsError> {
    let n = design.n_rows();
    if values.len() != n {
        return Err(StatsError::LengthMismatch(n, values.len()));
    }
    if let Some(&v) = values.iter().find(|v| !(**v >= 0.0)) {
        return Err(StatsError::Negative(v));
    }
    let nonzero: Vec<bool> = values.iter().map(|v| *v > 0.0).collect();
    let rows: Vec<usize> = (0..n).filter(|&i| nonzero[i]).collect();

    let logistic = if rows.len() < n {
        let names = design.names(true);
        let fit = fit_logistic(&design.matrix(true), &nonzero, &names)?;
        Some(LogisticStage { names, fit })
    } else {
        None
    };

    let mut stage2 = design.subset_rows(&rows);
    let dropped = stage2.drop_constant_indicators();
    if let Some(l) = &logistic {
        stage2.push_column(super::design::DesignColumn {
            name: PROBABILITY_COLUMN.into(),
            kind: super::design::ColumnKind::Numeric,
            role: super::design::ColumnRole::Derived,
            values: rows.iter().map(|&i| l.fit.probabilities[i]).collect(),
        })?;
    }
    let y: Vec<f64> = rows.iter().map(|&i| values[i]).collect();
    if y.iter().any(|v| *v <= 0.0) {
        return Err(StatsError::ZeroResponse);
    }
    let y: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let names = stage2.names(true);
    let x = stage2.matrix(true);
    if rows.len() <= names.len() {
        return Err(StatsError::TooFewRows { needed: names.len() + 1, have: rows.len() });
    }
    let fit = ols(&x, &y, &names)?;
    let normal_residual = super::linalg::normal_equation_residual(&x, &y, &fit.coefficients);
    debug_assert_eq!(names[0], INTERCEPT);
    Ok(TwoPartFit {
        model_id: ModelId::linear(response, design.with_squares),
        response,
        logistic,
        ols: OlsStage { names, fit, normal_residual },
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::design::{ColumnKind, ColumnRole, DesignColumn};

    fn design(x: Vec<f64>) -> DesignMatrix {
        let n = x.len();
        DesignMatrix {
            row_ids: (0..n).map(|i| i.to_string()).collect(),
            fandoms: vec!["f".into(); n],
            columns: vec![DesignColumn {
                name: "s_term".into(),
                kind: ColumnKind::Numeric,
                role: ColumnRole::Predictor,
                values: x,
            }],
            references: vec![],
            with_squares: false,
        }
    }

    #[test]
    fn model_ids() {
        assert_eq!(ModelId::linear(Response::Kudos, false), ModelId(1));
        assert_eq!(ModelId::linear(Response::Bookmarks, false), ModelId(4));
        assert_eq!(ModelId::linear(Response::Hits, true), ModelId(6));
        assert_eq!(ModelId::gam(Response::Comments), ModelId(11));
    }

    #[test]
    fn no_zeros_skips_logit() {
        let x: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
        let v: Vec<f64> = x.iter().map(|x| (2.0 * x + 1.0f64).exp()).collect();
        let fit = fit_two_part(&design(x), Response::Kudos, &v).unwrap();
        assert!(fit.logistic.is_none());
        let (b, _, _) = fit.ols_coefficient("s_term").unwrap();
        assert!((b - 2.0).abs() < 1e-10);
        assert!((fit.ols.fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit.ols.normal_residual < 1e-8);
    }

    #[test]
    fn zeros_feed_the_probability_column() {
        let x: Vec<f64> = (0..60).map(|i| i as f64 / 60.0).collect();
        let v: Vec<f64> = (0..60).map(|i| if i % 3 == 0 && i < 40 { 0.0 } else { 1.0 + (i % 7) as f64 }).collect();
        let fit = fit_two_part(&design(x), Response::Comments, &v).unwrap();
        assert!(fit.logistic.as_ref().unwrap().fit.converged);
        assert_eq!(fit.ols.fit.n, v.iter().filter(|v| **v > 0.0).count());
        assert_eq!(fit.ols.names.last().unwrap(), PROBABILITY_COLUMN);
    }

    #[test]
    fn too_few_nonzero_rows() {
        let x = vec![0.1, 0.2, 0.3, 0.4];
        let v = vec![0.0, 0.0, 1.0, 0.0];
        assert!(fit_two_part(&design(x), Response::Kudos, &v).is_err());
    }
}
