//! Small corpora drawn exactly from a planted LDA model, for checking that
//! the sampler recovers the topics.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{dirichlet, synthetic_words};
use crate::text::TokenSeq;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedTopicsConfig {
    pub n_topics: usize,
    pub n_docs: usize,
    pub vocab_size: usize,
    pub doc_length: usize,
    /// Dirichlet concentration of each document's mixture.
    pub doc_alpha: f64,
    /// Mass every topic spreads uniformly over words outside its own block.
    pub leakage: f64,
    pub seed: u64,
}

impl Default for PlantedTopicsConfig {
    fn default() -> Self {
        PlantedTopicsConfig {
            n_topics: 5,
            n_docs: 500,
            vocab_size: 100,
            doc_length: 100,
            doc_alpha: 0.5,
            leakage: 0.02,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedTopics {
    pub words: Vec<String>,
    /// Topic-word distributions over `words`.
    pub phi: Vec<Vec<f64>>,
    pub theta: Vec<Vec<f64>>,
    pub docs: Vec<TokenSeq>,
}

/// Topic `t` owns a contiguous block of `vocab_size / n_topics` words.
pub fn planted_topic_corpus(cfg: &PlantedTopicsConfig) -> PlantedTopics {
    assert!(cfg.n_topics > 0 && cfg.vocab_size >= cfg.n_topics, "need at least one word per topic");
    let words = synthetic_words(cfg.vocab_size);
    let block = cfg.vocab_size / cfg.n_topics;
    let phi: Vec<Vec<f64>> = (0..cfg.n_topics)
        .map(|t| {
            let own = t * block..(t + 1) * block;
            let outside = (cfg.vocab_size - block) as f64;
            (0..cfg.vocab_size)
                .map(|w| {
                    if own.contains(&w) {
                        (1.0 - cfg.leakage) / block as f64
                    } else {
                        cfg.leakage / outside
                    }
                })
                .collect()
        })
        .collect();
    let tables: Vec<WeightedIndex<f64>> = phi
        .iter()
        .map(|p| WeightedIndex::new(p.iter().copied()).expect("positive weights"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut theta = Vec::with_capacity(cfg.n_docs);
    let mut docs = Vec::with_capacity(cfg.n_docs);
    for _ in 0..cfg.n_docs {
        let th = dirichlet(&vec![cfg.doc_alpha; cfg.n_topics], &mut rng);
        let mix = WeightedIndex::new(th.iter().copied()).expect("theta has mass");
        let doc = (0..cfg.doc_length)
            .map(|_| words[tables[mix.sample(&mut rng)].sample(&mut rng)].clone())
            .collect();
        theta.push(th);
        docs.push(doc);
    }
    PlantedTopics { words, phi, theta, docs }
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Pairs true and estimated topics by the permutation with the smallest
/// worst-case total variation, and returns the per-topic distances in true
/// topic order. Exhaustive, so only for a handful of topics.
pub fn matched_total_variation(truth: &[Vec<f64>], estimate: &[Vec<f64>]) -> Vec<f64> {
    assert_eq!(truth.len(), estimate.len());
    assert!(truth.len() <= 8, "exhaustive matching is limited to 8 topics");
    let n = truth.len();
    let tv: Vec<Vec<f64>> = truth
        .iter()
        .map(|t| estimate.iter().map(|e| total_variation(t, e)).collect())
        .collect();
    permutations(n)
        .into_iter()
        .map(|p| (0..n).map(|i| tv[i][p[i]]).collect::<Vec<f64>>())
        .min_by(|a, b| {
            let worst = |v: &Vec<f64>| v.iter().copied().fold(0.0, f64::max);
            worst(a).total_cmp(&worst(b))
        })
        .expect("at least one permutation")
}
