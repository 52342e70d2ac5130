//! Maximum-likelihood logistic regression by iteratively reweighted least
//! squares with step halving.

use nalgebra::{DMatrix, DVector};

use super::linalg::{inverse_gram, qr_solve};
use super::{StatsError, Z95};

pub const MAX_ITER: usize = 100;
pub const GRADIENT_TOL: f64 = 1e-8;
/// Relative log-likelihood change that also counts as convergence. On large
/// samples the score gradient bottoms out at rounding noise above `GRADIENT_TOL`.
pub const LOGLIK_TOL: f64 = 1e-12;
/// Coefficient norm beyond which the fit is treated as diverging.
pub const DIVERGENCE_NORM: f64 = 1e4;

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticFit {
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub ci: Vec<(f64, f64)>,
    pub converged: bool,
    pub iterations: usize,
    /// Max-abs score gradient at the returned coefficients.
    pub gradient_norm: f64,
    /// Log-likelihood after each iteration, starting from β = 0.
    pub log_likelihood: Vec<f64>,
    pub probabilities: Vec<f64>,
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn log_likelihood(eta: &DVector<f64>, y: &[bool]) -> f64 {
    eta.iter()
        .zip(y)
        .map(|(&e, &yi)| if yi { e - softplus(e) } else { -softplus(e) })
        .sum()
}

fn separates(eta: &DVector<f64>, y: &[bool]) -> bool {
    let mut min_pos = f64::INFINITY;
    let mut max_neg = f64::NEG_INFINITY;
    for (&e, &yi) in eta.iter().zip(y) {
        if yi {
            min_pos = min_pos.min(e);
        } else {
            max_neg = max_neg.max(e);
        }
    }
    min_pos > max_neg
}

/// Fits `P(y = 1) = σ(Xβ)`. `x` must already include an intercept column when
/// one is wanted.
pub fn fit_logistic(x: &DMatrix<f64>, y: &[bool], names: &[String]) -> Result<LogisticFit, StatsError> {
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(StatsError::LengthMismatch(n, y.len()));
    }
    let ones = y.iter().filter(|&&v| v).count();
    if ones == 0 || ones == n {
        return Err(StatsError::OneClass);
    }
    if n <= p {
        return Err(StatsError::TooFewRows { needed: p + 1, have: n });
    }
    let name = |i: usize| names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
    let yv = DVector::from_iterator(n, y.iter().map(|&b| if b { 1.0 } else { 0.0 }));

    let mut beta = DVector::zeros(p);
    let mut eta = x * &beta;
    let mut ll = log_likelihood(&eta, y);
    let mut trace = vec![ll];
    let mut converged = false;
    let mut iterations = 0;
    let r = loop {
        let prob = eta.map(sigmoid);
        let grad = x.transpose() * (&yv - &prob);
        if grad.amax() < GRADIENT_TOL {
            converged = true;
        }
        let w = prob.map(|pi| (pi * (1.0 - pi)).max(1e-300));
        let sw = w.map(f64::sqrt);
        let mut xw = x.clone();
        for (i, mut row) in xw.row_iter_mut().enumerate() {
            row *= sw[i];
        }
        let z = DVector::from_iterator(n, (0..n).map(|i| (yv[i] - prob[i]) / sw[i]));
        let (r, step) = qr_solve(&xw, &z, &name)?;
        if converged || iterations == MAX_ITER {
            break r;
        }
        iterations += 1;

        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let candidate = &beta + &step * scale;
            let cand_eta = x * &candidate;
            let cand_ll = log_likelihood(&cand_eta, y);
            if cand_ll >= ll {
                if cand_ll - ll <= LOGLIK_TOL * (cand_ll.abs() + 0.1) {
                    converged = true;
                }
                beta = candidate;
                eta = cand_eta;
                ll = cand_ll;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        trace.push(ll);
        if separates(&eta, y) || beta.norm() > DIVERGENCE_NORM {
            return Err(StatsError::Separation);
        }
        if !accepted {
            // No ascent direction left at machine precision.
            break r;
        }
    };

    let prob = eta.map(sigmoid);
    let gradient_norm = (x.transpose() * (&yv - &prob)).amax();
    let cov = inverse_gram(&r);
    let coefficients: Vec<f64> = beta.iter().copied().collect();
    let std_errors: Vec<f64> = (0..p).map(|i| cov[(i, i)].max(0.0).sqrt()).collect();
    let ci = coefficients
        .iter()
        .zip(&std_errors)
        .map(|(b, s)| (b - Z95 * s, b + Z95 * s))
        .collect();
    Ok(LogisticFit {
        coefficients,
        std_errors,
        ci,
        converged,
        iterations,
        gradient_norm,
        log_likelihood: trace,
        probabilities: prob.iter().copied().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intercept_only(n: usize) -> DMatrix<f64> {
        DMatrix::from_element(n, 1, 1.0)
    }

    fn names() -> Vec<String> {
        vec!["intercept".into(), "x".into()]
    }

    #[test]
    fn balanced_labels_give_zero_intercept() {
        let y: Vec<bool> = (0..50).map(|i| i % 2 == 0).collect();
        let fit = fit_logistic(&intercept_only(50), &y, &names()).unwrap();
        assert!(fit.converged);
        assert!(fit.coefficients[0].abs() < 1e-12);
        assert!(fit.probabilities.iter().all(|p| (p - 0.5).abs() < 1e-12));
    }

    #[test]
    fn base_rate_logit() {
        let y: Vec<bool> = (0..100).map(|i| i < 70).collect();
        let fit = fit_logistic(&intercept_only(100), &y, &names()).unwrap();
        assert!((fit.coefficients[0] - (0.7f64 / 0.3).ln()).abs() < 1e-10);
        assert!((fit.coefficients[0] - 0.8473).abs() < 1e-4);
        // Fisher information of an intercept-only model: n p (1 - p).
        assert!((fit.std_errors[0] - (1.0f64 / (100.0 * 0.21)).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn separable_data_is_an_error() {
        let x = DMatrix::from_fn(20, 2, |i, j| if j == 0 { 1.0 } else { i as f64 });
        let y: Vec<bool> = (0..20).map(|i| i >= 10).collect();
        assert_eq!(fit_logistic(&x, &y, &names()), Err(StatsError::Separation));
    }

    #[test]
    fn one_class_is_an_error() {
        assert_eq!(
            fit_logistic(&intercept_only(5), &[true; 5], &names()),
            Err(StatsError::OneClass)
        );
    }

    #[test]
    fn likelihood_monotone_and_gradient_small() {
        let xs: Vec<f64> = (0..200).map(|i| (i as f64 * 0.37).sin() * 3.0).collect();
        let y: Vec<bool> = xs.iter().enumerate().map(|(i, &v)| v + ((i * 7919) % 13) as f64 / 4.0 - 1.5 > 0.0).collect();
        let x = DMatrix::from_fn(200, 2, |i, j| if j == 0 { 1.0 } else { xs[i] });
        let fit = fit_logistic(&x, &y, &names()).unwrap();
        assert!(fit.converged);
        assert!(fit.gradient_norm < 1e-6);
        assert!(fit.log_likelihood.windows(2).all(|w| w[1] >= w[0]));
    }
}
