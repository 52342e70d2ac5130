//! Term novelty: one minus the cosine similarity between a work's TF-IDF
//! vector and the centroid of its trailing-window peers.
//!
//! Two routes compute the same score. [`tfidf_vectorize`], [`centroid`] and
//! [`term_novelty_score`] materialize the vectors for one focal work. The
//! fandom-level scorer [`score_fandom_term`] instead slides the window along
//! the publish-date order and keeps integer aggregates per term (window
//! frequency, document frequency) plus, per document-frequency value, the sum
//! of squared window frequencies. The centroid norm then costs O(window) per
//! work instead of O(window × vocabulary).

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusError, CorpusStore, Work, WorkSet, DEFAULT_SPAN_DAYS};
use crate::novelty::{NoveltyRecord, Score};
use crate::text::{tokenize, TokenSeq, VocabPolicy, Vocabulary};

#[derive(Debug, Error)]
pub enum TermError {
    #[error("trailing window is empty")]
    EmptyWindow,
    #[error("cannot take the centroid of zero vectors")]
    NoVectors,
    #[error("zero vector: term novelty is undefined")]
    ZeroVector,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermConfig {
    pub span_days: i64,
    pub min_window: usize,
    /// Add the focal work to its own centroid (sensitivity analysis only).
    pub centroid_includes_focal: bool,
}

impl Default for TermConfig {
    fn default() -> Self {
        TermConfig {
            span_days: DEFAULT_SPAN_DAYS,
            min_window: 10,
            centroid_includes_focal: false,
        }
    }
}

/// Sparse nonnegative term weights over a window-specific vocabulary.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TermVector {
    pub weights: BTreeMap<u32, f64>,
    pub context: String,
}

impl TermVector {
    pub fn norm(&self) -> f64 {
        self.weights.values().map(|w| w * w).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &TermVector) -> f64 {
        self.weights
            .iter()
            .filter_map(|(k, a)| other.weights.get(k).map(|b| a * b))
            .sum()
    }
}

/// Smoothed inverse document frequency over `n_docs` documents.
pub fn idf(n_docs: usize, df: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

/// TF-IDF vectors of the focal work and each window work. The vocabulary
/// (hapaxes removed) and document frequencies are taken over the window plus
/// the focal work.
pub fn tfidf_vectorize(window: &WorkSet<'_>, focal: &Work) -> Result<(TermVector, Vec<TermVector>), TermError> {
    let window_tokens: Vec<TokenSeq> = window.iter().map(|w| tokenize(&w.text)).collect();
    let focal_tokens = tokenize(&focal.text);
    let context = format!("{} -> {}", window.provenance, focal.id);
    tfidf_vectorize_tokens(&window_tokens, &focal_tokens, &context)
}

pub fn tfidf_vectorize_tokens(
    window: &[TokenSeq],
    focal: &[String],
    context: &str,
) -> Result<(TermVector, Vec<TermVector>), TermError> {
    if window.is_empty() {
        return Err(TermError::EmptyWindow);
    }
    let docs = || window.iter().map(Vec::as_slice).chain(std::iter::once(focal));
    let vocab = Vocabulary::from_token_seqs(docs(), VocabPolicy::Tfidf, context);
    let counts: Vec<BTreeMap<u32, u32>> = docs().map(|d| crate::text::term_counts(d, &vocab)).collect();
    let mut df = vec![0usize; vocab.len()];
    for c in &counts {
        for &t in c.keys() {
            df[t as usize] += 1;
        }
    }
    let n = counts.len();
    let idfs: Vec<f64> = df.iter().map(|&d| idf(n, d)).collect();
    let mut vectors: Vec<TermVector> = counts
        .into_iter()
        .map(|c| TermVector {
            weights: c
                .into_iter()
                .map(|(t, tf)| (t, f64::from(tf) * idfs[t as usize]))
                .collect(),
            context: context.to_string(),
        })
        .collect();
    let focal_vec = vectors.pop().expect("focal vector");
    Ok((focal_vec, vectors))
}

/// Coordinate-wise mean.
pub fn centroid(vectors: &[TermVector]) -> Result<TermVector, TermError> {
    let first = vectors.first().ok_or(TermError::NoVectors)?;
    let mut sum: BTreeMap<u32, f64> = BTreeMap::new();
    for v in vectors {
        for (&k, &w) in &v.weights {
            *sum.entry(k).or_insert(0.0) += w;
        }
    }
    let n = vectors.len() as f64;
    for w in sum.values_mut() {
        *w /= n;
    }
    Ok(TermVector {
        weights: sum,
        context: first.context.clone(),
    })
}

/// `1 − cos(focal, center)`, clamped to [0, 1].
pub fn term_novelty_score(focal: &TermVector, center: &TermVector) -> Result<f64, TermError> {
    let (nf, nc) = (focal.norm(), center.norm());
    if nf == 0.0 || nc == 0.0 {
        return Err(TermError::ZeroVector);
    }
    Ok((1.0 - focal.dot(center) / (nf * nc)).clamp(0.0, 1.0))
}

/// Scores one work by materializing all vectors.
pub fn score_work_explicit(window: &WorkSet<'_>, focal: &Work, include_focal: bool) -> Result<f64, TermError> {
    let (f, mut others) = tfidf_vectorize(window, focal)?;
    if include_focal {
        others.push(f.clone());
    }
    term_novelty_score(&f, &centroid(&others)?)
}

/// A fandom's documents as sorted `(term id, count)` lists over a
/// fandom-local term numbering.
pub(crate) struct InternedDocs {
    pub docs: Vec<Vec<(u32, u32)>>,
    pub n_terms: usize,
}

pub(crate) fn intern_documents(tokens: &[TokenSeq]) -> InternedDocs {
    let mut ids: HashMap<&str, u32> = HashMap::new();
    let mut docs = Vec::with_capacity(tokens.len());
    for doc in tokens {
        let mut counts: HashMap<u32, u32> = HashMap::new();
        for t in doc {
            let next = ids.len() as u32;
            let id = *ids.entry(t.as_str()).or_insert(next);
            *counts.entry(id).or_insert(0) += 1;
        }
        let mut c: Vec<(u32, u32)> = counts.into_iter().collect();
        c.sort_unstable();
        docs.push(c);
    }
    InternedDocs { docs, n_terms: ids.len() }
}

/// Integer aggregates of the documents currently in the window.
struct WindowState {
    freq: Vec<u64>,
    df: Vec<u32>,
    /// `sq_by_df[d]` = Σ freq² over in-vocabulary (freq ≥ 2) terms with
    /// document frequency d.
    sq_by_df: Vec<u128>,
    size: usize,
}

impl WindowState {
    fn new(n_terms: usize) -> Self {
        WindowState {
            freq: vec![0; n_terms],
            df: vec![0; n_terms],
            sq_by_df: vec![0; 2],
            size: 0,
        }
    }

    fn contribution(&mut self, t: usize, sign: i8) {
        let f = self.freq[t];
        if f >= 2 {
            let d = self.df[t] as usize;
            let sq = u128::from(f) * u128::from(f);
            if sign > 0 {
                self.sq_by_df[d] += sq;
            } else {
                self.sq_by_df[d] -= sq;
            }
        }
    }

    fn add(&mut self, doc: &[(u32, u32)]) {
        self.size += 1;
        if self.sq_by_df.len() <= self.size {
            self.sq_by_df.resize(self.size + 1, 0);
        }
        for &(t, c) in doc {
            let t = t as usize;
            self.contribution(t, -1);
            self.freq[t] += u64::from(c);
            self.df[t] += 1;
            self.contribution(t, 1);
        }
    }

    fn remove(&mut self, doc: &[(u32, u32)]) {
        self.size -= 1;
        for &(t, c) in doc {
            let t = t as usize;
            self.contribution(t, -1);
            self.freq[t] -= u64::from(c);
            self.df[t] -= 1;
            self.contribution(t, 1);
        }
    }

    /// Term novelty of `focal` against the current window.
    fn score(&mut self, focal: &[(u32, u32)], include_focal: bool) -> Option<f64> {
        let n = self.size;
        let n_docs = n + 1;
        // Take focal terms out of the per-df sums; they are re-added below
        // with their document frequency counted over window ∪ {focal}.
        for &(t, _) in focal {
            self.contribution(t as usize, -1);
        }
        let mut rest = 0.0;
        for (d, &sq) in self.sq_by_df.iter().enumerate().take(n + 1).skip(1) {
            if sq != 0 {
                let w = idf(n_docs, d);
                rest += w * w * sq as f64;
            }
        }
        for &(t, _) in focal {
            self.contribution(t as usize, 1);
        }

        let denom = if include_focal { n_docs } else { n } as f64;
        let (mut dot, mut ff, mut cc) = (0.0, 0.0, rest);
        for &(t, c) in focal {
            let t = t as usize;
            let window_freq = self.freq[t];
            if window_freq + u64::from(c) < 2 {
                continue;
            }
            let w = idf(n_docs, self.df[t] as usize + 1);
            let f = f64::from(c) * w;
            let center_freq = if include_focal { window_freq + u64::from(c) } else { window_freq };
            let centered = w * center_freq as f64;
            dot += f * centered;
            ff += f * f;
            cc += centered * centered;
        }
        if ff == 0.0 || cc == 0.0 {
            return None;
        }
        let cos = (dot / denom) / (ff.sqrt() * (cc.sqrt() / denom));
        Some((1.0 - cos).clamp(0.0, 1.0))
    }
}

/// Focal works are scored in chunks that each rebuild their window state, so
/// chunks are independent and results do not depend on the schedule.
const CHUNK: usize = 1024;

/// Scores every work of a fandom (ordered by publish date, then id).
pub fn score_fandom_term(store: &CorpusStore, fandom: &str, cfg: &TermConfig) -> Result<Vec<NoveltyRecord>, TermError> {
    let set = store.fandom_works(fandom)?;
    if cfg.span_days <= 0 {
        return Err(CorpusError::InvalidSpan(cfg.span_days).into());
    }
    let tokens: Vec<TokenSeq> = set.works.par_iter().map(|w| tokenize(&w.text)).collect();
    Ok(score_sorted_term(&set.works, &tokens, cfg))
}

/// Core of [`score_fandom_term`]: `works` must be one fandom sorted by
/// (publish_date, id), `tokens` aligned with it.
pub(crate) fn score_sorted_term(works: &[&Work], tokens: &[TokenSeq], cfg: &TermConfig) -> Vec<NoveltyRecord> {
    let interned = intern_documents(tokens);
    let dates: Vec<chrono::NaiveDate> = works.iter().map(|w| w.publish_date).collect();
    let ranges: Vec<std::ops::Range<usize>> = (0..works.len())
        .map(|i| date_window(&dates, dates[i], cfg.span_days))
        .collect();

    let chunks: Vec<(usize, usize)> = (0..works.len())
        .step_by(CHUNK)
        .map(|s| (s, (s + CHUNK).min(works.len())))
        .collect();
    let scores: Vec<Vec<(Score, usize)>> = chunks
        .par_iter()
        .map(|&(start, end)| {
            let mut state = WindowState::new(interned.n_terms);
            let (mut lo, mut hi) = (ranges[start].start, ranges[start].start);
            let mut out = Vec::with_capacity(end - start);
            for i in start..end {
                let r = &ranges[i];
                while hi < r.end {
                    state.add(&interned.docs[hi]);
                    hi += 1;
                }
                while lo < r.start {
                    state.remove(&interned.docs[lo]);
                    lo += 1;
                }
                let size = state.size;
                let score = if size < cfg.min_window.max(1) {
                    Score::Unscored
                } else {
                    match state.score(&interned.docs[i], cfg.centroid_includes_focal) {
                        Some(s) => Score::Scored(s),
                        None => Score::Unscorable,
                    }
                };
                out.push((score, size));
            }
            out
        })
        .collect();

    works
        .iter()
        .zip(scores.into_iter().flatten())
        .map(|(w, (score, size))| NoveltyRecord {
            work_id: w.id.clone(),
            fandom: w.fandom.clone(),
            publish_date: w.publish_date,
            s_term: Some(score),
            s_topic: None,
            window_size: size,
        })
        .collect()
}

/// Positions in a sorted date list covering `[date − span, date)`.
pub(crate) fn date_window(dates: &[chrono::NaiveDate], date: chrono::NaiveDate, span_days: i64) -> std::ops::Range<usize> {
    let start = date - chrono::Duration::days(span_days);
    dates.partition_point(|d| *d < start)..dates.partition_point(|d| *d < date)
}

/// Scores every fandom in the store, fandoms in name order.
pub fn score_all_term(store: &CorpusStore, cfg: &TermConfig) -> Result<Vec<NoveltyRecord>, TermError> {
    let mut out = Vec::with_capacity(store.len());
    for fandom in store.fandoms() {
        out.extend(score_fandom_term(store, fandom, cfg)?);
    }
    Ok(out)
}
