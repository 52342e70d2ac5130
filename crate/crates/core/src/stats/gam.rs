//! Additive models with penalized cubic B-spline smooths (P-splines) and
//! linear control terms, fitted by penalized least squares.

use nalgebra::{DMatrix, DVector};

use super::design::{ColumnRole, DesignMatrix, INTERCEPT};
use super::linalg::{inverse_gram, qr_solve};
use super::{StatsError, Z95};

const DEGREE: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct GamSpec {
    /// `(variable, basis dimension)` for every smooth.
    pub smooths: Vec<(String, usize)>,
    pub sp: f64,
}

impl Default for GamSpec {
    fn default() -> Self {
        GamSpec {
            smooths: vec![("s_term".into(), 7), ("s_topic".into(), 5)],
            sp: 0.1,
        }
    }
}

impl GamSpec {
    pub fn new(k_term: usize, k_topic: usize, sp: f64) -> Self {
        GamSpec {
            smooths: vec![("s_term".into(), k_term), ("s_topic".into(), k_topic)],
            sp,
        }
    }
}

/// One fitted smooth. Its `k − 1` coefficients start at `offset` in the
/// full coefficient vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothTerm {
    pub variable: String,
    pub k: usize,
    pub sp: f64,
    pub knots: Vec<f64>,
    /// Observed range of the variable.
    pub lo: f64,
    pub hi: f64,
    /// Maps constrained coefficients to the raw B-spline coefficients.
    pub constraint: DMatrix<f64>,
    pub offset: usize,
}

impl SmoothTerm {
    fn spacing(&self) -> f64 {
        self.knots[1] - self.knots[0]
    }

    /// Raw basis row at `x`; linear extrapolation outside the knot span.
    fn raw_row(&self, x: f64) -> Vec<f64> {
        let (a, b) = (self.knots[DEGREE], self.knots[self.k]);
        if x < a || x > b {
            let edge = if x < a { a } else { b };
            let (v, d) = bspline_row(edge, &self.knots, self.k, self.spacing());
            return v.iter().zip(&d).map(|(v, d)| v + (x - edge) * d).collect();
        }
        bspline_row(x, &self.knots, self.k, self.spacing()).0
    }

    /// Constrained basis row at `x`.
    pub fn row(&self, x: f64) -> Vec<f64> {
        let raw = DVector::from_vec(self.raw_row(x));
        (self.constraint.transpose() * raw).iter().copied().collect()
    }

    pub fn n_coefficients(&self) -> usize {
        self.k - 1
    }
}

/// Values and first derivatives of all `k` cubic B-splines at `x` on an
/// equally spaced knot vector, for `x` inside `[knots[3], knots[k]]`.
fn bspline_row(x: f64, knots: &[f64], k: usize, h: f64) -> (Vec<f64>, Vec<f64>) {
    // Knot interval containing x, the last one closed on the right.
    let mut i = DEGREE;
    while i + 1 < k && x >= knots[i + 1] {
        i += 1;
    }
    let mut n = [0.0f64; DEGREE + 1];
    let mut left = [0.0f64; DEGREE + 1];
    let mut right = [0.0f64; DEGREE + 1];
    let mut quad = [0.0f64; DEGREE + 1];
    n[0] = 1.0;
    for d in 1..=DEGREE {
        left[d] = x - knots[i + 1 - d];
        right[d] = knots[i + d] - x;
        let mut saved = 0.0;
        for r in 0..d {
            let temp = n[r] / (right[r + 1] + left[d - r]);
            n[r] = saved + right[r + 1] * temp;
            saved = left[d - r] * temp;
        }
        n[d] = saved;
        if d == DEGREE - 1 {
            quad[..DEGREE].copy_from_slice(&n[..DEGREE]);
        }
    }
    let mut values = vec![0.0; k];
    let mut derivs = vec![0.0; k];
    // n[r] is B_{i-3+r}; quad[r] is the quadratic B_{i-2+r}.
    let q = |m: isize| -> f64 {
        let r = m - (i as isize - 2);
        if (0..DEGREE as isize).contains(&r) { quad[r as usize] } else { 0.0 }
    };
    for r in 0..=DEGREE {
        let j = i - DEGREE + r;
        values[j] = n[r];
        derivs[j] = (q(j as isize) - q(j as isize + 1)) / h;
    }
    (values, derivs)
}

/// Householder reflection whose trailing columns span the orthogonal
/// complement of `c`.
fn null_space_of(c: &DVector<f64>) -> DMatrix<f64> {
    let k = c.len();
    let norm = c.norm();
    let mut v = c.clone();
    if norm == 0.0 {
        return DMatrix::identity(k, k).columns(1, k - 1).into_owned();
    }
    v[0] += if c[0] >= 0.0 { norm } else { -norm };
    let h = DMatrix::identity(k, k) - &v * v.transpose() * (2.0 / v.norm_squared());
    h.columns(1, k - 1).into_owned()
}

fn second_difference(k: usize) -> DMatrix<f64> {
    DMatrix::from_fn(k - 2, k, |i, j| match j.wrapping_sub(i) {
        0 | 2 => 1.0,
        1 => -2.0,
        _ => 0.0,
    })
}

/// Largest absolute row sum.
fn norm_inf(m: &DMatrix<f64>) -> f64 {
    m.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Largest absolute column sum.
fn norm_one(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GamFit {
    pub smooths: Vec<SmoothTerm>,
    /// Coefficient names: intercept, smooth bases, then linear terms.
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub fitted: Vec<f64>,
    /// Bayesian posterior covariance of the coefficients.
    pub covariance: DMatrix<f64>,
    /// Total penalty matrix, `sp` included.
    pub penalty: DMatrix<f64>,
    pub edf: f64,
    pub sigma2: f64,
    pub rss: f64,
    pub n: usize,
    /// Design columns dropped because they were constant.
    pub dropped: Vec<String>,
    model_matrix: DMatrix<f64>,
    response: Vec<f64>,
}

impl GamFit {
    /// `‖y − Xβ‖² + βᵀSβ`.
    pub fn penalized_objective(&self, beta: &[f64]) -> f64 {
        let b = DVector::from_column_slice(beta);
        let y = DVector::from_column_slice(&self.response);
        let resid = y - &self.model_matrix * &b;
        resid.norm_squared() + (b.transpose() * &self.penalty * &b)[(0, 0)]
    }

    pub fn smooth(&self, variable: &str) -> Option<&SmoothTerm> {
        self.smooths.iter().find(|s| s.variable == variable)
    }

    pub fn linear_coefficient(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|i| self.coefficients[i])
    }
}

/// Fits `y = α + Σ f_j(x_j) + Σ γ_c z_c`. Smoothed variables come from the
/// design's predictor columns named in `spec`; other predictor columns (the
/// squared terms) are ignored and every control or derived column enters
/// linearly. Each smooth is centered to zero mean over the data. Pass only
/// rows with a nonzero response.
pub fn fit_gam(design: &DesignMatrix, response: &[f64], spec: &GamSpec) -> Result<GamFit, StatsError> {
    let n = design.n_rows();
    if response.len() != n {
        return Err(StatsError::LengthMismatch(n, response.len()));
    }
    if !(spec.sp >= 0.0) {
        return Err(StatsError::Invalid(format!("smoothing parameter {}", spec.sp)));
    }
    let mut design = design.clone();
    let dropped = design.drop_constant_indicators();

    let mut names = vec![INTERCEPT.to_string()];
    let mut blocks: Vec<DMatrix<f64>> = Vec::new();
    let mut penalties: Vec<DMatrix<f64>> = Vec::new();
    let mut smooths = Vec::new();
    let mut offset = 1;
    for (variable, k) in &spec.smooths {
        let k = *k;
        if k < DEGREE + 1 {
            return Err(StatsError::BasisTooSmall(k));
        }
        let col = design
            .column(variable)
            .ok_or_else(|| StatsError::UnknownVariable(variable.clone()))?;
        let x = &col.values;
        let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(hi > lo) {
            return Err(StatsError::ZeroVariance(variable.clone()));
        }
        let pad = (hi - lo) * 0.001;
        let (a, b) = (lo - pad, hi + pad);
        let h = (b - a) / (k - DEGREE) as f64;
        let knots: Vec<f64> = (0..k + DEGREE + 1).map(|j| a + (j as f64 - DEGREE as f64) * h).collect();
        let raw = DMatrix::from_fn(n, k, |_, _| 0.0);
        let mut raw = raw;
        for (i, &xi) in x.iter().enumerate() {
            let (row, _) = bspline_row(xi, &knots, k, h);
            for j in 0..k {
                raw[(i, j)] = row[j];
            }
        }
        let d = second_difference(k);
        let mut s = d.transpose() * d;
        // Scale the penalty to the basis so that sp is comparable across smooths.
        let scale = norm_one(&s) / norm_inf(&raw).powi(2);
        s /= scale;
        let means = DVector::from_iterator(k, raw.column_iter().map(|c| c.sum() / n as f64));
        let z = null_space_of(&means);
        blocks.push(&raw * &z);
        penalties.push(z.transpose() * s * &z * spec.sp);
        for j in 1..k {
            names.push(format!("s({variable}).{j}"));
        }
        smooths.push(SmoothTerm {
            variable: variable.clone(),
            k,
            sp: spec.sp,
            knots,
            lo,
            hi,
            constraint: z,
            offset,
        });
        offset += k - 1;
    }
    let linear: Vec<usize> = (0..design.columns.len())
        .filter(|&j| design.columns[j].role != ColumnRole::Predictor)
        .collect();
    names.extend(linear.iter().map(|&j| design.columns[j].name.clone()));
    let p = names.len();

    let mut x = DMatrix::zeros(n, p);
    x.column_mut(0).fill(1.0);
    let mut c0 = 1;
    for b in &blocks {
        x.columns_mut(c0, b.ncols()).copy_from(b);
        c0 += b.ncols();
    }
    for &j in &linear {
        x.column_mut(c0).copy_from_slice(&design.columns[j].values);
        c0 += 1;
    }
    let mut penalty = DMatrix::zeros(p, p);
    for (s, sm) in penalties.iter().zip(&smooths) {
        penalty
            .view_mut((sm.offset, sm.offset), (s.nrows(), s.ncols()))
            .copy_from(s);
    }
    if n <= p {
        return Err(StatsError::TooFewRows { needed: p + 1, have: n });
    }

    // Square root of the penalty from its eigen-decomposition.
    let eig = penalty.clone().symmetric_eigen();
    let root = DMatrix::from_fn(p, p, |i, j| eig.eigenvalues[i].max(0.0).sqrt() * eig.eigenvectors[(j, i)]);
    let mut augmented = DMatrix::zeros(n + p, p);
    augmented.rows_mut(0, n).copy_from(&x);
    augmented.rows_mut(n, p).copy_from(&root);
    let mut rhs = DVector::zeros(n + p);
    rhs.rows_mut(0, n).copy_from_slice(response);
    let name = |i: usize| names.get(i).cloned().unwrap_or_default();
    let (r, beta) = qr_solve(&augmented, &rhs, &name)?;

    let fitted = &x * &beta;
    let y = DVector::from_column_slice(response);
    let rss = (&y - &fitted).norm_squared();
    let inv = inverse_gram(&r);
    let edf = (&inv * (x.transpose() * &x)).trace();
    let resid_df = n as f64 - edf;
    let sigma2 = if resid_df > 0.0 { rss / resid_df } else { f64::NAN };
    Ok(GamFit {
        smooths,
        names,
        coefficients: beta.iter().copied().collect(),
        fitted: fitted.iter().copied().collect(),
        covariance: inv * sigma2,
        penalty,
        edf,
        sigma2,
        rss,
        n,
        dropped,
        model_matrix: x,
        response: response.to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdPoint {
    pub x: f64,
    pub estimate: f64,
    pub se: f64,
    pub lo: f64,
    pub hi: f64,
    /// `x` lies outside the range the smooth was fitted on.
    pub extrapolated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialDependence {
    pub variable: String,
    pub points: Vec<PdPoint>,
}

/// The centered smooth of `variable` evaluated on `grid`, with pointwise 95%
/// intervals from the coefficient covariance.
pub fn partial_dependence(fit: &GamFit, variable: &str, grid: &[f64]) -> Result<PartialDependence, StatsError> {
    let sm = fit
        .smooth(variable)
        .ok_or_else(|| StatsError::UnknownVariable(variable.to_string()))?;
    let m = sm.n_coefficients();
    let coef = DVector::from_column_slice(&fit.coefficients[sm.offset..sm.offset + m]);
    let cov = fit.covariance.view((sm.offset, sm.offset), (m, m)).into_owned();
    let points = grid
        .iter()
        .map(|&x| {
            let row = DVector::from_vec(sm.row(x));
            let estimate = row.dot(&coef);
            let se = (row.transpose() * &cov * &row)[(0, 0)].max(0.0).sqrt();
            PdPoint {
                x,
                estimate,
                se,
                lo: estimate - Z95 * se,
                hi: estimate + Z95 * se,
                extrapolated: x < sm.lo || x > sm.hi,
            }
        })
        .collect();
    Ok(PartialDependence {
        variable: variable.to_string(),
        points,
    })
}

/// `n` equally spaced points over `[lo, hi]`.
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}
