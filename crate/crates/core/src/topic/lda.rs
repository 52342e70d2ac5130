//! Latent Dirichlet allocation by collapsed Gibbs sampling.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::WorkSet;
use crate::text::{tokenize, TokenSeq, VocabPolicy, Vocabulary};

use super::TopicDistribution;

#[derive(Debug, Error)]
pub enum LdaError {
    #[error("topic count must be at least 1")]
    NoTopics,
    #[error("LDA vocabulary is empty after term removal")]
    EmptyVocabulary,
    #[error("cannot fit a topic model on zero documents")]
    NoDocuments,
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error("checkpoint io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub k: usize,
    /// Symmetric document-topic prior.
    pub alpha: f64,
    /// Symmetric topic-word prior.
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
    /// Number of most frequent terms dropped from the vocabulary.
    pub top_removed: usize,
}

impl Default for LdaConfig {
    fn default() -> Self {
        LdaConfig {
            k: 100,
            alpha: 0.01,
            beta: 0.01,
            iterations: 50,
            seed: 42,
            top_removed: VocabPolicy::LDA_TOP_REMOVED,
        }
    }
}

/// A fitted topic model: hyperparameters, vocabulary and the final
/// topic-word assignment counts.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicModel {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
    pub vocabulary: Vocabulary,
    /// Word-major counts: entry `w * k + t` counts tokens of word `w` in topic `t`.
    word_topic: Vec<u32>,
    topic_totals: Vec<u64>,
}

/// SplitMix64 finalizer, used to derive independent per-document seeds.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws an index from unnormalized cumulative weights.
fn draw(cumulative: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total = *cumulative.last().expect("non-empty");
    let u = rng.random::<f64>() * total;
    cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
}

/// Fits a model on the works of one fandom, building the vocabulary with the
/// top-frequency and hapax removal policy.
pub fn fit_lda(works: &WorkSet<'_>, cfg: &LdaConfig) -> Result<TopicModel, LdaError> {
    if works.is_empty() {
        return Err(LdaError::NoDocuments);
    }
    let docs: Vec<TokenSeq> = works.iter().map(|w| tokenize(&w.text)).collect();
    let vocab = Vocabulary::from_token_seqs(
        docs.iter().map(Vec::as_slice),
        VocabPolicy::Lda {
            top_removed: cfg.top_removed,
        },
        works.provenance.clone(),
    );
    fit_lda_tokens(&docs, vocab, cfg)
}

/// Fits a model on pre-tokenized documents with a given vocabulary.
pub fn fit_lda_tokens(docs: &[TokenSeq], vocab: Vocabulary, cfg: &LdaConfig) -> Result<TopicModel, LdaError> {
    if cfg.k < 1 {
        return Err(LdaError::NoTopics);
    }
    if vocab.is_empty() {
        return Err(LdaError::EmptyVocabulary);
    }
    if docs.is_empty() {
        return Err(LdaError::NoDocuments);
    }
    let k = cfg.k;
    let v = vocab.len();
    let encoded: Vec<Vec<u32>> = docs.iter().map(|d| vocab.encode(d)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut word_topic = vec![0u32; v * k];
    let mut topic_totals = vec![0u64; k];
    let mut assignments: Vec<Vec<u16>> = Vec::with_capacity(encoded.len());
    assert!(k <= usize::from(u16::MAX), "too many topics");
    for doc in &encoded {
        let z: Vec<u16> = doc
            .iter()
            .map(|&w| {
                let t = rng.random_range(0..k);
                word_topic[w as usize * k + t] += 1;
                topic_totals[t] += 1;
                t as u16
            })
            .collect();
        assignments.push(z);
    }

    let vbeta = v as f64 * cfg.beta;
    let mut inv_denom: Vec<f64> = topic_totals.iter().map(|&n| 1.0 / (n as f64 + vbeta)).collect();
    let mut doc_topic = vec![0u32; k];
    let mut cumulative = vec![0.0f64; k];
    for _ in 0..cfg.iterations {
        for (doc, z) in encoded.iter().zip(assignments.iter_mut()) {
            doc_topic.fill(0);
            for &t in z.iter() {
                doc_topic[t as usize] += 1;
            }
            for (&w, zi) in doc.iter().zip(z.iter_mut()) {
                let row = w as usize * k;
                let old = *zi as usize;
                doc_topic[old] -= 1;
                word_topic[row + old] -= 1;
                topic_totals[old] -= 1;
                inv_denom[old] = 1.0 / (topic_totals[old] as f64 + vbeta);

                let counts = &word_topic[row..row + k];
                let mut acc = 0.0;
                for t in 0..k {
                    acc += (f64::from(doc_topic[t]) + cfg.alpha) * (f64::from(counts[t]) + cfg.beta) * inv_denom[t];
                    cumulative[t] = acc;
                }
                let new = draw(&cumulative, &mut rng);

                doc_topic[new] += 1;
                word_topic[row + new] += 1;
                topic_totals[new] += 1;
                inv_denom[new] = 1.0 / (topic_totals[new] as f64 + vbeta);
                *zi = new as u16;
            }
        }
    }

    Ok(TopicModel {
        k,
        alpha: cfg.alpha,
        beta: cfg.beta,
        iterations: cfg.iterations,
        seed: cfg.seed,
        vocabulary: vocab,
        word_topic,
        topic_totals,
    })
}

/// Result of inferring one document's topic mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct Inferred {
    pub distribution: TopicDistribution,
    /// The document had no in-vocabulary tokens; `distribution` is uniform.
    pub unscorable: bool,
}

impl TopicModel {
    pub fn vocab_size(&self) -> usize {
        self.vocabulary.len()
    }

    /// Count of tokens of word `w` assigned to topic `t`.
    pub fn count(&self, t: usize, w: usize) -> u32 {
        self.word_topic[w * self.k + t]
    }

    pub fn topic_totals(&self) -> &[u64] {
        &self.topic_totals
    }

    pub fn total_tokens(&self) -> u64 {
        self.topic_totals.iter().sum()
    }

    /// Row `t` of the K × V count matrix.
    pub fn topic_word_counts(&self, t: usize) -> Vec<u32> {
        (0..self.vocab_size()).map(|w| self.count(t, w)).collect()
    }

    /// Smoothed topic-word distribution `(n_tw + β) / (n_t + Vβ)`.
    pub fn topic_word_distribution(&self, t: usize) -> Vec<f64> {
        let denom = self.topic_totals[t] as f64 + self.vocab_size() as f64 * self.beta;
        (0..self.vocab_size())
            .map(|w| (f64::from(self.count(t, w)) + self.beta) / denom)
            .collect()
    }

    /// Gibbs-samples the topic assignments of one document against the fixed
    /// model counts and returns `(n_t + α) / (n + Kα)`.
    pub fn infer(&self, tokens: &[String], iterations: usize, seed: u64) -> Inferred {
        let k = self.k;
        let doc = self.vocabulary.encode(tokens);
        if doc.is_empty() {
            return Inferred {
                distribution: TopicDistribution::uniform(k),
                unscorable: true,
            };
        }
        let vbeta = self.vocab_size() as f64 * self.beta;
        let inv_denom: Vec<f64> = self.topic_totals.iter().map(|&n| 1.0 / (n as f64 + vbeta)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut doc_topic = vec![0u32; k];
        let mut z: Vec<usize> = doc
            .iter()
            .map(|_| {
                let t = rng.random_range(0..k);
                doc_topic[t] += 1;
                t
            })
            .collect();
        let mut cumulative = vec![0.0f64; k];
        for _ in 0..iterations {
            for (&w, zi) in doc.iter().zip(z.iter_mut()) {
                doc_topic[*zi] -= 1;
                let row = &self.word_topic[w as usize * k..(w as usize + 1) * k];
                let mut acc = 0.0;
                for t in 0..k {
                    acc += (f64::from(doc_topic[t]) + self.alpha) * (f64::from(row[t]) + self.beta) * inv_denom[t];
                    cumulative[t] = acc;
                }
                *zi = draw(&cumulative, &mut rng);
                doc_topic[*zi] += 1;
            }
        }
        let denom = doc.len() as f64 + k as f64 * self.alpha;
        let probs = doc_topic.iter().map(|&n| (f64::from(n) + self.alpha) / denom).collect();
        Inferred {
            distribution: TopicDistribution::from_vec_unchecked(probs),
            unscorable: false,
        }
    }

    /// Writes the plain-text checkpoint: a versioned header, hyperparameters,
    /// the vocabulary (one term per line) and one sparse `id:count` row per
    /// topic.
    pub fn save(&self, mut out: impl Write) -> Result<(), LdaError> {
        writeln!(out, "{CHECKPOINT_MAGIC} {CHECKPOINT_VERSION}")?;
        writeln!(out, "k {}", self.k)?;
        writeln!(out, "alpha {:?}", self.alpha)?;
        writeln!(out, "beta {:?}", self.beta)?;
        writeln!(out, "iterations {}", self.iterations)?;
        writeln!(out, "seed {}", self.seed)?;
        match self.vocabulary.policy {
            VocabPolicy::Tfidf => writeln!(out, "policy tfidf")?,
            VocabPolicy::Lda { top_removed } => writeln!(out, "policy lda {top_removed}")?,
        }
        writeln!(
            out,
            "source {}",
            serde_json::to_string(&self.vocabulary.source).expect("string")
        )?;
        writeln!(out, "vocab {}", self.vocab_size())?;
        for term in self.vocabulary.terms() {
            writeln!(out, "{term}")?;
        }
        writeln!(out, "counts")?;
        for t in 0..self.k {
            write!(out, "{t}")?;
            for w in 0..self.vocab_size() {
                let c = self.count(t, w);
                if c > 0 {
                    write!(out, " {w}:{c}")?;
                }
            }
            writeln!(out)?;
        }
        writeln!(out, "end")?;
        Ok(())
    }

    pub fn load(input: impl BufRead) -> Result<Self, LdaError> {
        let bad = |m: &str| LdaError::Checkpoint(m.to_string());
        let mut lines = input.lines();
        let mut next = || -> Result<String, LdaError> {
            lines.next().ok_or_else(|| bad("unexpected end of file"))?.map_err(LdaError::from)
        };
        let header = next()?;
        if header != format!("{CHECKPOINT_MAGIC} {CHECKPOINT_VERSION}") {
            return Err(bad(&format!("unsupported header {header:?}")));
        }
        fn field(line: &str, key: &str) -> Result<String, LdaError> {
            line.strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .map(str::to_string)
                .ok_or_else(|| LdaError::Checkpoint(format!("expected `{key}`, found {line:?}")))
        }
        fn num<T: std::str::FromStr>(s: &str) -> Result<T, LdaError> {
            s.parse().map_err(|_| LdaError::Checkpoint(format!("bad number {s:?}")))
        }
        let k: usize = num(&field(&next()?, "k")?)?;
        let alpha: f64 = num(&field(&next()?, "alpha")?)?;
        let beta: f64 = num(&field(&next()?, "beta")?)?;
        let iterations: usize = num(&field(&next()?, "iterations")?)?;
        let seed: u64 = num(&field(&next()?, "seed")?)?;
        let policy_line = field(&next()?, "policy")?;
        let policy = match policy_line.split_once(' ') {
            None if policy_line == "tfidf" => VocabPolicy::Tfidf,
            Some(("lda", n)) => VocabPolicy::Lda { top_removed: num(n)? },
            _ => return Err(bad("bad policy line")),
        };
        let source: String =
            serde_json::from_str(&field(&next()?, "source")?).map_err(|e| bad(&e.to_string()))?;
        let v: usize = num(&field(&next()?, "vocab")?)?;
        let mut terms = Vec::with_capacity(v);
        for _ in 0..v {
            terms.push(next()?);
        }
        if next()? != "counts" {
            return Err(bad("missing counts section"));
        }
        if k < 1 {
            return Err(LdaError::NoTopics);
        }
        let mut word_topic = vec![0u32; v * k];
        let mut topic_totals = vec![0u64; k];
        for t in 0..k {
            let line = next()?;
            let mut parts = line.split(' ');
            if parts.next() != Some(t.to_string().as_str()) {
                return Err(bad(&format!("expected row {t}")));
            }
            for entry in parts {
                let (w, c) = entry.split_once(':').ok_or_else(|| bad("bad count entry"))?;
                let (w, c): (usize, u32) = (num(w)?, num(c)?);
                if w >= v {
                    return Err(bad("word id out of range"));
                }
                word_topic[w * k + t] = c;
                topic_totals[t] += u64::from(c);
            }
        }
        if next()? != "end" {
            return Err(bad("missing end marker"));
        }
        Ok(TopicModel {
            k,
            alpha,
            beta,
            iterations,
            seed,
            vocabulary: Vocabulary::from_ordered_terms(terms, policy, source),
            word_topic,
            topic_totals,
        })
    }
}

const CHECKPOINT_MAGIC: &str = "noveltyscope-lda";
const CHECKPOINT_VERSION: u32 = 1;
