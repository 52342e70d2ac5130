//! Topic novelty: Jensen-Shannon divergence between a work's inferred topic
//! mixture and the mean mixture of its trailing window.

pub mod divergence;
pub mod lda;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusError, CorpusStore, DEFAULT_SPAN_DAYS};
use crate::novelty::{NoveltyRecord, Score};
use crate::term::date_window;
use crate::text::tokenize;

pub use divergence::{js_distance, js_divergence, kl_divergence, topic_novelty_score, DivergenceError};
pub use lda::{derive_seed, fit_lda, fit_lda_tokens, Inferred, LdaConfig, LdaError, TopicModel};

#[derive(Debug, Error)]
pub enum TopicError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Lda(#[from] LdaError),
    #[error(transparent)]
    Divergence(#[from] DivergenceError),
    #[error("not a probability vector: {0}")]
    NotADistribution(String),
}

/// A dense probability vector over topics.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicDistribution(Vec<f64>);

impl TopicDistribution {
    pub const SUM_TOLERANCE: f64 = 1e-9;

    pub fn new(p: Vec<f64>) -> Result<Self, TopicError> {
        if p.is_empty() {
            return Err(TopicError::NotADistribution("empty".into()));
        }
        if let Some(x) = p.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(TopicError::NotADistribution(format!("entry {x}")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(TopicError::NotADistribution(format!("sums to {sum}")));
        }
        Ok(TopicDistribution(p))
    }

    pub(crate) fn from_vec_unchecked(p: Vec<f64>) -> Self {
        TopicDistribution(p)
    }

    pub fn uniform(k: usize) -> Self {
        TopicDistribution(vec![1.0 / k as f64; k])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Arithmetic mean of equal-length distributions.
    pub fn mean<'a>(items: impl IntoIterator<Item = &'a TopicDistribution>) -> Option<TopicDistribution> {
        let mut iter = items.into_iter();
        let mut sum = iter.next()?.0.clone();
        let mut n = 1usize;
        for d in iter {
            for (s, x) in sum.iter_mut().zip(&d.0) {
                *s += x;
            }
            n += 1;
        }
        let n = n as f64;
        sum.iter_mut().for_each(|s| *s /= n);
        Some(TopicDistribution(sum))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicConfig {
    pub span_days: i64,
    pub min_window: usize,
    pub inference_iterations: usize,
    pub seed: u64,
    /// Add the focal work to its own centroid (sensitivity analysis only).
    pub centroid_includes_focal: bool,
    /// Report the square root of the divergence instead.
    pub sqrt_distance: bool,
}

impl Default for TopicConfig {
    fn default() -> Self {
        TopicConfig {
            span_days: DEFAULT_SPAN_DAYS,
            min_window: 10,
            inference_iterations: 50,
            seed: 42,
            centroid_includes_focal: false,
            sqrt_distance: false,
        }
    }
}

/// Fits one model on all works of `fandom`.
pub fn fit_fandom(store: &CorpusStore, fandom: &str, cfg: &LdaConfig) -> Result<TopicModel, TopicError> {
    let set = store.fandom_works(fandom)?;
    Ok(fit_lda(&set, cfg)?)
}

/// Infers the topic mixture of every work of `fandom`, in (publish_date, id)
/// order. Each work gets a seed derived from its position, so the result
/// does not depend on the parallel schedule.
pub fn infer_fandom(store: &CorpusStore, fandom: &str, model: &TopicModel, cfg: &TopicConfig) -> Result<Vec<Inferred>, TopicError> {
    let set = store.fandom_works(fandom)?;
    Ok(set
        .works
        .par_iter()
        .enumerate()
        .map(|(i, w)| model.infer(&tokenize(&w.text), cfg.inference_iterations, derive_seed(cfg.seed, i as u64)))
        .collect())
}

/// Scores every work of `fandom` against the window centroid of inferred
/// mixtures. Works without in-vocabulary tokens are left out of centroids and
/// are themselves [`Score::Unscorable`].
pub fn score_fandom_topic(
    store: &CorpusStore,
    fandom: &str,
    model: &TopicModel,
    cfg: &TopicConfig,
) -> Result<Vec<NoveltyRecord>, TopicError> {
    if cfg.span_days <= 0 {
        return Err(CorpusError::InvalidSpan(cfg.span_days).into());
    }
    let set = store.fandom_works(fandom)?;
    let inferred = infer_fandom(store, fandom, model, cfg)?;
    let dates: Vec<chrono::NaiveDate> = set.works.iter().map(|w| w.publish_date).collect();
    let scores: Vec<(Score, usize)> = (0..set.len())
        .into_par_iter()
        .map(|i| {
            let range = date_window(&dates, dates[i], cfg.span_days);
            let size = range.len();
            if size < cfg.min_window.max(1) {
                return (Score::Unscored, size);
            }
            let focal = &inferred[i];
            if focal.unscorable {
                return (Score::Unscorable, size);
            }
            let mut members: Vec<&TopicDistribution> = inferred[range]
                .iter()
                .filter(|d| !d.unscorable)
                .map(|d| &d.distribution)
                .collect();
            if cfg.centroid_includes_focal {
                members.push(&focal.distribution);
            }
            let Some(center) = TopicDistribution::mean(members) else {
                return (Score::Unscorable, size);
            };
            let js = topic_novelty_score(&focal.distribution, &center).expect("equal lengths");
            let s = if cfg.sqrt_distance { js.sqrt() } else { js };
            (Score::Scored(s), size)
        })
        .collect();
    Ok(set
        .works
        .iter()
        .zip(scores)
        .map(|(w, (score, size))| NoveltyRecord {
            work_id: w.id.clone(),
            fandom: w.fandom.clone(),
            publish_date: w.publish_date,
            s_term: None,
            s_topic: Some(score),
            window_size: size,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn distribution_validation() {
        assert!(TopicDistribution::new(vec![0.5, 0.5]).is_ok());
        assert!(TopicDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(TopicDistribution::new(vec![-0.5, 1.5]).is_err());
        assert!(TopicDistribution::new(vec![]).is_err());
    }

    proptest! {
        #[test]
        fn mean_stays_on_simplex(raw in prop::collection::vec(prop::collection::vec(0.01f64..1.0, 5), 1..20)) {
            let dists: Vec<TopicDistribution> = raw
                .iter()
                .map(|v| {
                    let s: f64 = v.iter().sum();
                    TopicDistribution::new(v.iter().map(|x| x / s).collect()).unwrap()
                })
                .collect();
            let m = TopicDistribution::mean(&dists).unwrap();
            prop_assert!(TopicDistribution::new(m.as_slice().to_vec()).is_ok());
        }
    }
}
