//! Statistical models relating novelty to reception.

pub mod binned;
pub mod correlation;
pub mod design;
pub mod gam;
pub mod linalg;
pub mod logistic;
pub mod two_part;
pub mod vif;
pub mod zscore;

use thiserror::Error;

pub use binned::{binned_curve, Bin, BinnedCurve};
pub use correlation::correlation_matrix;
pub use design::{build_design, ColumnKind, ColumnRole, DesignColumn, DesignMatrix, ModelSpec};
pub use gam::{fit_gam, partial_dependence, GamFit, GamSpec, PartialDependence};
pub use linalg::{ols, OlsFit};
pub use logistic::{fit_logistic, LogisticFit};
pub use two_part::{fit_two_part, ModelId, TwoPartFit};
pub use vif::{vif, VifReport};
pub use zscore::log_zscore_by_fandom;

/// Two-sided 95% normal quantile used for every confidence interval.
pub const Z95: f64 = 1.96;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} rows, have {have}")]
    TooFewRows { needed: usize, have: usize },
    #[error("column {0} has zero variance")]
    ZeroVariance(String),
    #[error("design matrix is rank deficient at column {0}")]
    Singular(String),
    #[error("bin width must be positive, got {0}")]
    BadBinWidth(f64),
    #[error("value {0} outside the binning range [0, 1]")]
    OutOfRange(f64),
    #[error("logistic stage needs both outcome classes")]
    OneClass,
    #[error("complete separation: logistic coefficients diverge")]
    Separation,
    #[error("work {0} has no novelty score")]
    Unscored(String),
    #[error("work {0} not found in corpus")]
    UnknownWork(String),
    #[error("negative value {0} cannot be log-transformed")]
    Negative(f64),
    #[error("response is zero on a row passed to the nonzero stage")]
    ZeroResponse,
    #[error("no smooth for variable {0}")]
    UnknownVariable(String),
    #[error("basis dimension must be at least 4 for a cubic basis, got {0}")]
    BasisTooSmall(usize),
    #[error("invalid argument: {0}")]
    Invalid(String),
}
