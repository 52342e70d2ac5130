//! Least squares by Householder QR with classical standard errors.

use nalgebra::{DMatrix, DVector};

use super::{StatsError, Z95};

/// Relative pivot size below which a column counts as linearly dependent.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub ci: Vec<(f64, f64)>,
    pub r_squared: f64,
    pub n: usize,
    pub rss: f64,
    pub sigma2: f64,
    pub fitted: Vec<f64>,
}

/// Upper-triangular factor of `x` plus `Qᵀ y`, failing on rank deficiency.
pub(crate) fn qr_solve(x: &DMatrix<f64>, y: &DVector<f64>, names: &dyn Fn(usize) -> String) -> Result<(DMatrix<f64>, DVector<f64>), StatsError> {
    let p = x.ncols();
    let qr = x.clone().qr();
    let r = qr.r();
    let max_diag = (0..p).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    for i in 0..p {
        if r[(i, i)].abs() <= RANK_TOL * max_diag.max(f64::MIN_POSITIVE) {
            return Err(StatsError::Singular(names(i)));
        }
    }
    let qty = qr.q().transpose() * y;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| StatsError::Singular(names(p.saturating_sub(1))))?;
    Ok((r, beta))
}

/// `(RᵀR)⁻¹` from an upper-triangular `R`.
pub(crate) fn inverse_gram(r: &DMatrix<f64>) -> DMatrix<f64> {
    let p = r.ncols();
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(p, p))
        .expect("nonsingular R");
    &r_inv * r_inv.transpose()
}

/// Ordinary least squares. `x` must already contain an intercept column when
/// one is wanted; R² is computed around the mean of `y`.
pub fn ols(x: &DMatrix<f64>, y: &[f64], names: &[String]) -> Result<OlsFit, StatsError> {
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(StatsError::LengthMismatch(n, y.len()));
    }
    if n <= p {
        return Err(StatsError::TooFewRows { needed: p + 1, have: n });
    }
    let yv = DVector::from_column_slice(y);
    let name = |i: usize| names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
    let (r, beta) = qr_solve(x, &yv, &name)?;
    let fitted = x * &beta;
    let resid = &yv - &fitted;
    let rss = resid.norm_squared();
    let sigma2 = rss / (n - p) as f64;
    let cov = inverse_gram(&r) * sigma2;
    let mean = y.iter().sum::<f64>() / n as f64;
    let tss: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let r_squared = if tss > 0.0 { 1.0 - rss / tss } else { 1.0 };
    let coefficients: Vec<f64> = beta.iter().copied().collect();
    let std_errors: Vec<f64> = (0..p).map(|i| cov[(i, i)].max(0.0).sqrt()).collect();
    let ci = coefficients
        .iter()
        .zip(&std_errors)
        .map(|(b, s)| (b - Z95 * s, b + Z95 * s))
        .collect();
    Ok(OlsFit {
        coefficients,
        std_errors,
        ci,
        r_squared,
        n,
        rss,
        sigma2,
        fitted: fitted.iter().copied().collect(),
    })
}

/// `‖Xᵀ(y − Xβ)‖∞ / ‖Xᵀy‖∞`, the relative normal-equation residual.
pub fn normal_equation_residual(x: &DMatrix<f64>, y: &[f64], beta: &[f64]) -> f64 {
    let yv = DVector::from_column_slice(y);
    let b = DVector::from_column_slice(beta);
    let resid = &yv - x * b;
    let lhs = x.transpose() * resid;
    let rhs = x.transpose() * yv;
    lhs.amax() / rhs.amax().max(f64::MIN_POSITIVE)
}

/// R² of `y` regressed on `x` (intercept assumed inside `x`) by a truncated
/// SVD, so that rank-deficient regressors still give a well-defined fit.
pub fn r_squared_tolerant(x: &DMatrix<f64>, y: &[f64]) -> f64 {
    let n = y.len();
    let yv = DVector::from_column_slice(y);
    let svd = x.clone().svd(true, false);
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.max();
    let mut fitted = DVector::zeros(n);
    for (j, &s) in svd.singular_values.iter().enumerate() {
        if s > RANK_TOL * smax {
            let col = u.column(j);
            fitted += col * col.dot(&yv);
        }
    }
    let mean = yv.mean();
    let tss: f64 = yv.iter().map(|v| (v - mean).powi(2)).sum();
    if tss == 0.0 {
        return 1.0;
    }
    let rss = (&yv - fitted).norm_squared();
    (1.0 - rss / tss).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("c{i}")).collect()
    }

    #[test]
    fn exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let x = DMatrix::from_fn(5, 2, |i, j| if j == 0 { 1.0 } else { xs[i] });
        let y: Vec<f64> = xs.iter().map(|v| 2.0 * v).collect();
        let fit = ols(&x, &y, &names(2)).unwrap();
        assert!(fit.coefficients[0].abs() < 1e-12);
        assert!((fit.coefficients[1] - 2.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(normal_equation_residual(&x, &y, &fit.coefficients) < 1e-12);
    }

    #[test]
    fn textbook_standard_errors() {
        // y = 1 + x with residuals ±1: slope SE = sqrt(σ²/Sxx).
        let xs = [0.0, 1.0, 2.0, 3.0];
        let y = [2.0, 1.0, 4.0, 3.0];
        let x = DMatrix::from_fn(4, 2, |i, j| if j == 0 { 1.0 } else { xs[i] });
        let fit = ols(&x, &y, &names(2)).unwrap();
        // slope = Sxy/Sxx = 3/5, intercept = 2.5 - 0.6*1.5
        assert!((fit.coefficients[1] - 0.6).abs() < 1e-12);
        assert!((fit.coefficients[0] - 1.6).abs() < 1e-12);
        let sigma2 = fit.rss / 2.0;
        assert!((fit.std_errors[1] - (sigma2 / 5.0).sqrt()).abs() < 1e-12);
        let (lo, hi) = fit.ci[1];
        assert!((hi - lo - 2.0 * Z95 * fit.std_errors[1]).abs() < 1e-12);
    }

    #[test]
    fn singular_and_short_designs() {
        let x = DMatrix::from_fn(4, 3, |i, j| if j == 2 { i as f64 } else if j == 1 { i as f64 } else { 1.0 });
        assert_eq!(ols(&x, &[1.0, 2.0, 3.0, 5.0], &names(3)), Err(StatsError::Singular("c2".into())));
        let x = DMatrix::from_element(2, 2, 1.0);
        assert!(matches!(ols(&x, &[1.0, 2.0], &names(2)), Err(StatsError::TooFewRows { .. })));
    }

    proptest::proptest! {
        #[test]
        fn normal_equations_hold(
            cells in proptest::collection::vec(-10.0f64..10.0, 60),
            y in proptest::collection::vec(-100.0f64..100.0, 15),
        ) {
            let x = DMatrix::from_fn(15, 4, |i, j| if j == 0 { 1.0 } else { cells[i * 4 + j] });
            if let Ok(fit) = ols(&x, &y, &names(4)) {
                proptest::prop_assert!(normal_equation_residual(&x, &y, &fit.coefficients) < 1e-8);
            }
        }

        #[test]
        fn fandom_shift_moves_only_intercept_and_dummies(
            xs in proptest::collection::vec(0.0f64..1.0, 40),
            noise in proptest::collection::vec(-1.0f64..1.0, 40),
            shift in -5.0f64..5.0,
        ) {
            // Rows 0..20 in fandom A (reference), 20..40 in fandom B.
            let x = DMatrix::from_fn(40, 3, |i, j| match j {
                0 => 1.0,
                1 => xs[i],
                _ => if i >= 20 { 1.0 } else { 0.0 },
            });
            let y: Vec<f64> = (0..40).map(|i| 2.0 - 3.0 * xs[i] + noise[i]).collect();
            let shifted: Vec<f64> = (0..40).map(|i| y[i] + if i >= 20 { shift } else { 0.0 }).collect();
            let a = ols(&x, &y, &names(3)).unwrap();
            let b = ols(&x, &shifted, &names(3)).unwrap();
            proptest::prop_assert!((a.coefficients[1] - b.coefficients[1]).abs() < 1e-8);
            proptest::prop_assert!((b.coefficients[2] - a.coefficients[2] - shift).abs() < 1e-8);
        }
    }

    #[test]
    fn tolerant_r2_handles_duplicates() {
        let x = DMatrix::from_fn(5, 3, |i, j| if j == 0 { 1.0 } else { i as f64 });
        let y = [0.0, 2.0, 4.0, 6.0, 8.0];
        assert!((r_squared_tolerant(&x, &y) - 1.0).abs() < 1e-12);
    }
}
