//! Mean reception per novelty bin with percentile-bootstrap intervals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::StatsError;
use crate::topic::derive_seed;

pub const DEFAULT_BOOTSTRAP: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub mean: Option<f64>,
    pub ci: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinnedCurve {
    pub bin_width: f64,
    pub bins: Vec<Bin>,
}

impl BinnedCurve {
    pub fn edges(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.bins.iter().map(|b| b.lo).collect();
        if let Some(last) = self.bins.last() {
            e.push(last.hi);
        }
        e
    }

    pub fn total_count(&self) -> usize {
        self.bins.iter().map(|b| b.count).sum()
    }
}

/// Index of the bin containing `x`; the last bin is closed on the right.
fn bin_index(x: f64, width: f64, n_bins: usize) -> usize {
    ((x / width).floor() as usize).min(n_bins - 1)
}

/// Percentile interval of the bootstrap distribution of the mean at `level`.
/// The interval is widened if needed so it always contains the sample mean.
pub fn bootstrap_mean_ci(values: &[f64], n_boot: usize, level: f64, seed: u64) -> (f64, f64) {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    if n_boot == 0 {
        return (mean, mean);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut means: Vec<f64> = (0..n_boot)
        .map(|_| (0..n).map(|_| values[rng.random_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    let pick = |q: f64| {
        let idx = (q * (n_boot - 1) as f64).round() as usize;
        means[idx.min(n_boot - 1)]
    };
    let lo = pick(tail).min(mean);
    let hi = pick(1.0 - tail).max(mean);
    (lo, hi)
}

/// Bins `z` by `novelty` over `[0, 1]`. Every bin is reported; empty ones have
/// no mean and no interval. Each bin's bootstrap uses its own derived seed.
pub fn binned_curve(novelty: &[f64], z: &[f64], bin_width: f64, n_boot: usize, seed: u64) -> Result<BinnedCurve, StatsError> {
    if novelty.len() != z.len() {
        return Err(StatsError::LengthMismatch(novelty.len(), z.len()));
    }
    if !(bin_width > 0.0) || !bin_width.is_finite() {
        return Err(StatsError::BadBinWidth(bin_width));
    }
    if let Some(&x) = novelty.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(StatsError::OutOfRange(x));
    }
    let n_bins = ((1.0 / bin_width) - 1e-9).ceil().max(1.0) as usize;
    let mut members: Vec<Vec<f64>> = vec![Vec::new(); n_bins];
    for (&x, &v) in novelty.iter().zip(z) {
        members[bin_index(x, bin_width, n_bins)].push(v);
    }
    let bins = members
        .par_iter()
        .enumerate()
        .map(|(i, vals)| {
            let lo = i as f64 * bin_width;
            let hi = if i + 1 == n_bins { 1.0 } else { (i + 1) as f64 * bin_width };
            if vals.is_empty() {
                return Bin { lo, hi, count: 0, mean: None, ci: None };
            }
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let ci = bootstrap_mean_ci(vals, n_boot, 0.95, derive_seed(seed, i as u64));
            Bin { lo, hi, count: vals.len(), mean: Some(mean), ci: Some(ci) }
        })
        .collect();
    Ok(BinnedCurve { bin_width, bins })
}
