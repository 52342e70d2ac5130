//! Tokenization and vocabulary construction.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::WorkSet;

#[derive(Debug, Error, PartialEq)]
pub enum VocabError {
    #[error("cannot build a vocabulary from an empty work set")]
    EmptyWorks,
}

pub type TokenSeq = Vec<String>;

fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\''
}

/// Lowercases `text` and splits it into maximal runs of letters, digits and
/// apostrophes.
pub fn tokenize(text: &str) -> TokenSeq {
    text.to_lowercase()
        .split(|c: char| !is_token_char(c))
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// Term filtering applied when a vocabulary is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VocabPolicy {
    /// Drop terms with total frequency 1.
    Tfidf,
    /// Drop terms with total frequency 1 and the `top_removed` most frequent
    /// terms.
    Lda { top_removed: usize },
}

impl VocabPolicy {
    pub const LDA_TOP_REMOVED: usize = 500;

    pub fn lda() -> Self {
        VocabPolicy::Lda {
            top_removed: Self::LDA_TOP_REMOVED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    terms: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, u32>,
    pub policy: VocabPolicy,
    pub source: String,
    /// Set when the policy removed every term, or all but a handful.
    pub degenerate: bool,
}

/// Vocabularies with fewer surviving terms than this are flagged degenerate.
const DEGENERATE_BELOW: usize = 2;

impl Vocabulary {
    /// Builds a vocabulary from pre-tokenized documents. Ids are assigned in
    /// lexicographic term order.
    pub fn from_token_seqs<'t, I>(docs: I, policy: VocabPolicy, source: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = &'t [String]>,
    {
        let mut freq: HashMap<&str, u64> = HashMap::new();
        for doc in docs {
            for tok in doc {
                *freq.entry(tok.as_str()).or_insert(0) += 1;
            }
        }
        Self::from_frequencies(freq.into_iter().map(|(t, f)| (t.to_string(), f)), policy, source)
    }

    pub fn from_frequencies(
        freq: impl IntoIterator<Item = (String, u64)>,
        policy: VocabPolicy,
        source: impl Into<String>,
    ) -> Self {
        let mut freq: Vec<(String, u64)> = freq.into_iter().filter(|(_, f)| *f > 0).collect();
        let distinct = freq.len();
        if let VocabPolicy::Lda { top_removed } = policy {
            // Most frequent first; ties go to the lexicographically smaller term.
            freq.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            let cut = top_removed.min(freq.len());
            freq.drain(..cut);
        }
        let mut terms: Vec<String> = freq.into_iter().filter(|(_, f)| *f > 1).map(|(t, _)| t).collect();
        terms.sort_unstable();
        let degenerate = distinct > 0 && terms.len() < DEGENERATE_BELOW;
        if degenerate {
            log::warn!(
                "vocabulary degenerate: {} of {} distinct terms survive {:?}",
                terms.len(),
                distinct,
                policy
            );
        }
        Self::from_terms(terms, policy, source, degenerate)
    }

    fn from_terms(terms: Vec<String>, policy: VocabPolicy, source: impl Into<String>, degenerate: bool) -> Self {
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Vocabulary {
            terms,
            index,
            policy,
            source: source.into(),
            degenerate,
        }
    }

    /// Reassembles a vocabulary from an ordered term list, e.g. when loading a
    /// checkpoint.
    pub fn from_ordered_terms(terms: Vec<String>, policy: VocabPolicy, source: impl Into<String>) -> Self {
        let degenerate = terms.len() < DEGENERATE_BELOW;
        Self::from_terms(terms, policy, source, degenerate)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn id(&self, term: &str) -> Option<u32> {
        self.index.get(term).copied()
    }

    pub fn term(&self, id: u32) -> &str {
        &self.terms[id as usize]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn contains(&self, term: &str) -> bool {
        self.index.contains_key(term)
    }

    /// Token ids of `tokens`, skipping out-of-vocabulary tokens.
    pub fn encode(&self, tokens: &[String]) -> Vec<u32> {
        tokens.iter().filter_map(|t| self.id(t)).collect()
    }
}

/// Tokenizes every work in `works` and builds a vocabulary under `policy`.
pub fn build_vocabulary(works: &WorkSet<'_>, policy: VocabPolicy) -> Result<Vocabulary, VocabError> {
    if works.is_empty() {
        return Err(VocabError::EmptyWorks);
    }
    let docs: Vec<TokenSeq> = works.iter().map(|w| tokenize(&w.text)).collect();
    Ok(Vocabulary::from_token_seqs(
        docs.iter().map(Vec::as_slice),
        policy,
        works.provenance.clone(),
    ))
}

/// Sparse term-id → count map with deterministic iteration order.
pub type SparseCounts = BTreeMap<u32, u32>;

pub fn term_counts(tokens: &[String], vocab: &Vocabulary) -> SparseCounts {
    let mut counts = SparseCounts::new();
    for id in tokens.iter().filter_map(|t| vocab.id(t)) {
        *counts.entry(id).or_insert(0) += 1;
    }
    counts
}
