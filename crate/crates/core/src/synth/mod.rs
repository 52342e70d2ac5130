//! Synthetic corpora with planted topic structure and a planted link from
//! novelty to reception, plus dense reference implementations of both
//! novelty scores.

pub mod oracle;
pub mod planted;

use std::io::{BufRead, Write};

use chrono::{Days, NaiveDate};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Gamma, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusError, Response, Work, WorkRecord};
use crate::novelty::Score;
use crate::term::{date_window, score_sorted_term, TermConfig};
use crate::text::tokenize;
use crate::topic::{derive_seed, js_divergence};

pub use oracle::{oracle_scores, oracle_term_scores, oracle_topic_scores, OracleError, ORACLE_MAX_WORKS};
pub use planted::{planted_topic_corpus, PlantedTopics, PlantedTopicsConfig};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("truth file: {0}")]
    Truth(#[from] serde_json::Error),
}

/// Shape of the planted mean of log reception as a function of novelty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Link {
    /// `term·s_term + topic·s_topic`.
    LinearDecreasing { term: f64, topic: f64 },
    /// Linear and squared terms in the mean-centered scores.
    UShape { term: f64, topic: f64, term_sq: f64, topic_sq: f64 },
    /// Linear in both scores plus `rise·max(0, s_term − knot)²`, with the
    /// knot at fraction `knot` of the observed term-novelty range.
    Uptick { term: f64, topic: f64, knot: f64, rise: f64 },
}

impl Link {
    /// Value of the link at the given scores. `centers` are the means of
    /// the scores and `knot` the absolute uptick position.
    pub fn eval(&self, s_term: f64, s_topic: f64, centers: (f64, f64), knot: f64) -> f64 {
        match *self {
            Link::LinearDecreasing { term, topic } => term * s_term + topic * s_topic,
            Link::UShape { term, topic, term_sq, topic_sq } => {
                let (ct, cp) = (s_term - centers.0, s_topic - centers.1);
                term * ct + topic * cp + term_sq * ct * ct + topic_sq * cp * cp
            }
            Link::Uptick { term, topic, rise, .. } => {
                term * s_term + topic * s_topic + rise * (s_term - knot).max(0.0).powi(2)
            }
        }
    }
}

/// Per-response reception parameters. Log reception per chapter is
/// `intercept + fandom effect + link + N(0, noise_sd²)`; the work gets any
/// response at all with probability `σ(zero_intercept + zero_term·s_term +
/// zero_chapters·(chapters − 1))`, or always when `zero_intercept` is absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponseModel {
    pub intercept: f64,
    pub zero_intercept: Option<f64>,
    pub zero_term: f64,
    pub zero_chapters: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_fandoms: usize,
    pub works_per_fandom: usize,
    pub k_true: usize,
    pub words_per_topic: usize,
    /// Common words shared by every topic, drawn with Zipf weights.
    pub n_background: usize,
    /// Share of tokens drawn from the background words.
    pub background_rate: f64,
    /// Dirichlet concentration of a work's topic mixture around its
    /// fandom's topic prevalence.
    pub doc_concentration: f64,
    /// Probability that a work concentrates on one uniformly chosen topic.
    pub outlier_rate: f64,
    pub min_words: usize,
    pub max_words: usize,
    pub start_date: NaiveDate,
    pub span_days: u64,
    pub max_chapters: u32,
    /// Window used for the true novelty scores.
    pub window_days: i64,
    pub min_window: usize,
    /// Number of most frequent terms the topic model will drop; the
    /// vocabulary must be larger.
    pub lda_top_removed: usize,
    pub link: Link,
    pub noise_sd: f64,
    pub fandom_effect_sd: f64,
    pub kudos: ResponseModel,
    pub hits: ResponseModel,
    pub comments: ResponseModel,
    pub bookmarks: ResponseModel,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 7,
            n_fandoms: 3,
            works_per_fandom: 400,
            k_true: 20,
            words_per_topic: 60,
            n_background: 500,
            background_rate: 0.45,
            doc_concentration: 2.0,
            outlier_rate: 0.02,
            min_words: 550,
            max_words: 900,
            start_date: NaiveDate::from_ymd_opt(2015, 1, 1).expect("valid date"),
            span_days: 730,
            max_chapters: 4,
            window_days: crate::corpus::DEFAULT_SPAN_DAYS,
            min_window: 10,
            lda_top_removed: crate::text::VocabPolicy::LDA_TOP_REMOVED,
            link: Link::LinearDecreasing { term: -5.0, topic: -3.0 },
            noise_sd: 0.5,
            fandom_effect_sd: 0.5,
            kudos: ResponseModel { intercept: 8.0, zero_intercept: Some(2.0), zero_term: -2.0, zero_chapters: 0.5 },
            hits: ResponseModel { intercept: 11.0, zero_intercept: None, zero_term: 0.0, zero_chapters: 0.0 },
            comments: ResponseModel { intercept: 5.0, zero_intercept: Some(1.0), zero_term: -2.0, zero_chapters: 0.5 },
            bookmarks: ResponseModel { intercept: 6.0, zero_intercept: Some(1.5), zero_term: -2.0, zero_chapters: 0.5 },
        }
    }
}

impl SynthConfig {
    pub fn vocab_size(&self) -> usize {
        self.n_background + self.k_true * self.words_per_topic
    }

    pub fn response(&self, r: Response) -> &ResponseModel {
        match r {
            Response::Kudos => &self.kudos,
            Response::Hits => &self.hits,
            Response::Comments => &self.comments,
            Response::Bookmarks => &self.bookmarks,
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::Infeasible(m));
        if self.n_fandoms == 0 || self.works_per_fandom == 0 {
            return bad("need at least one fandom and one work per fandom".into());
        }
        if self.k_true == 0 || self.words_per_topic == 0 {
            return bad("need at least one topic with at least one word".into());
        }
        if self.vocab_size() <= self.lda_top_removed {
            return bad(format!(
                "vocabulary of {} terms does not survive removal of the {} most frequent",
                self.vocab_size(),
                self.lda_top_removed
            ));
        }
        if !(0.0..=1.0).contains(&self.background_rate) || !(0.0..=1.0).contains(&self.outlier_rate) {
            return bad("rates must lie in [0, 1]".into());
        }
        if self.background_rate > 0.0 && self.n_background == 0 {
            return bad("background_rate > 0 needs background words".into());
        }
        if self.min_words == 0 || self.min_words > self.max_words {
            return bad("need 0 < min_words <= max_words".into());
        }
        if self.span_days == 0 || self.max_chapters == 0 || self.window_days <= 0 {
            return bad("span_days, max_chapters and window_days must be positive".into());
        }
        if !(self.doc_concentration > 0.0) || !(self.noise_sd >= 0.0) || !(self.fandom_effect_sd >= 0.0) {
            return bad("concentration must be positive and standard deviations nonnegative".into());
        }
        if let Link::Uptick { knot, .. } = self.link {
            if !(0.0..=1.0).contains(&knot) {
                return bad("uptick knot is a fraction of the range in [0, 1]".into());
            }
        }
        Ok(())
    }
}

const SYLLABLES: [&str; 20] = [
    "ba", "ko", "ri", "mu", "te", "la", "zo", "ni", "pe", "du", "sa", "vi", "go", "ra", "fe", "lu", "ma", "ti", "no", "ke",
];

/// The `i`-th gibberish word, `len` syllables long.
fn word(mut i: usize, len: usize) -> String {
    let mut out = String::with_capacity(2 * len);
    for _ in 0..len {
        out.push_str(SYLLABLES[i % SYLLABLES.len()]);
        i /= SYLLABLES.len();
    }
    out
}

/// Synthetic vocabulary: background words first, then each topic's block.
pub fn synthetic_words(n: usize) -> Vec<String> {
    let mut len = 3;
    while SYLLABLES.len().pow(len as u32) < n {
        len += 1;
    }
    (0..n).map(|i| word(i, len)).collect()
}

fn zipf_weights(n: usize, exponent: f64) -> Vec<f64> {
    (0..n).map(|r| 1.0 / ((r + 1) as f64).powf(exponent)).collect()
}

fn dirichlet(alpha: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut draws: Vec<f64> = alpha
        .iter()
        .map(|&a| Gamma::new(a, 1.0).expect("positive shape").sample(rng))
        .collect();
    let sum: f64 = draws.iter().sum();
    if sum > 0.0 {
        draws.iter_mut().for_each(|d| *d /= sum);
    } else {
        // Every gamma draw underflowed: put the mass on the largest shape.
        let best = alpha
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        draws.iter_mut().enumerate().for_each(|(i, d)| *d = if i == best { 1.0 } else { 0.0 });
    }
    draws
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

const RATINGS: [(&str, f64); 5] = [
    ("General Audiences", 0.3),
    ("Teen And Up Audiences", 0.35),
    ("Mature", 0.15),
    ("Explicit", 0.12),
    ("Not Rated", 0.08),
];
const CATEGORIES: [(&str, f64); 6] = [
    ("Gen", 0.3),
    ("M/M", 0.3),
    ("F/M", 0.2),
    ("F/F", 0.08),
    ("Multi", 0.07),
    ("Other", 0.05),
];
const WARNINGS: [(&str, f64); 4] = [
    ("No Archive Warnings Apply", 0.6),
    ("Creator Chose Not To Use Archive Warnings", 0.25),
    ("Graphic Depictions Of Violence", 0.1),
    ("Major Character Death", 0.05),
];

fn pick<'a>(table: &[(&'a str, f64)], rng: &mut ChaCha8Rng) -> &'a str {
    let w = WeightedIndex::new(table.iter().map(|(_, w)| *w)).expect("positive weights");
    table[w.sample(rng)].0
}

/// Ground truth for one generated work.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkTruth {
    pub id: String,
    pub fandom: String,
    /// Term novelty of the generated text; absent when the window is too small.
    pub true_novelty_term: Option<f64>,
    /// Divergence of the planted topic mixture from its window's mean.
    pub true_novelty_topic: Option<f64>,
    /// Largest component of the planted mixture.
    pub true_topic: usize,
    pub outlier: bool,
    pub theta: Vec<f64>,
}

/// Corpus-level ground truth, written as the first sidecar line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthMeta {
    pub config: SynthConfig,
    pub link: Link,
    pub fandom_effects: Vec<(String, f64)>,
    /// Means of the true scores over scored works, used by centered links.
    pub term_center: f64,
    pub topic_center: f64,
    /// Absolute uptick position on the term-novelty axis.
    pub uptick_knot: f64,
    /// Hash of the pipeline config that requested the corpus, if any.
    #[serde(default)]
    pub config_hash: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthTruth {
    pub meta: TruthMeta,
    pub works: Vec<WorkTruth>,
}

impl SynthTruth {
    pub fn get(&self, id: &str) -> Option<&WorkTruth> {
        self.works
            .binary_search_by(|w| w.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.works[i])
    }

    /// One JSON object per line: `{"meta": ...}` first, then one line per work.
    pub fn write(&self, mut out: impl Write) -> Result<(), SynthError> {
        #[derive(Serialize)]
        struct MetaLine<'a> {
            meta: &'a TruthMeta,
        }
        serde_json::to_writer(&mut out, &MetaLine { meta: &self.meta })?;
        out.write_all(b"\n")?;
        for w in &self.works {
            serde_json::to_writer(&mut out, w)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read(input: impl BufRead) -> Result<Self, SynthError> {
        #[derive(Deserialize)]
        struct MetaLine {
            meta: TruthMeta,
        }
        let mut lines = input.lines();
        let first = lines
            .next()
            .ok_or_else(|| SynthError::Infeasible("empty truth file".into()))??;
        let meta = serde_json::from_str::<MetaLine>(&first)?.meta;
        let mut works = Vec::new();
        for line in lines {
            let line = line?;
            if !line.trim().is_empty() {
                works.push(serde_json::from_str(&line)?);
            }
        }
        let mut truth = SynthTruth { meta, works };
        truth.works.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(truth)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    /// Works grouped by fandom, each group in (publish_date, id) order.
    pub works: Vec<Work>,
    pub truth: SynthTruth,
}

impl SynthCorpus {
    /// Writes the corpus in the ingest format, one JSON object per line.
    pub fn write_corpus(&self, mut out: impl Write) -> Result<(), SynthError> {
        for w in &self.works {
            serde_json::to_writer(&mut out, &w.to_record())?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn fandom_name(f: usize) -> String {
    format!("Fandom {:02}", f + 1)
}

/// Topic-word weights over the global vocabulary: topic `t` owns the block
/// of words after the background, with Zipf weights inside the block.
fn topic_tables(cfg: &SynthConfig) -> Vec<WeightedIndex<f64>> {
    let weights = zipf_weights(cfg.words_per_topic, 0.8);
    (0..cfg.k_true)
        .map(|_| WeightedIndex::new(weights.iter().copied()).expect("positive weights"))
        .collect()
}

struct FandomDraft {
    works: Vec<Work>,
    truth: Vec<WorkTruth>,
}

fn draft_fandom(cfg: &SynthConfig, f: usize, words: &[String], topics: &[WeightedIndex<f64>]) -> Result<FandomDraft, SynthError> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, f as u64));
    let fandom = fandom_name(f);
    let prevalence = dirichlet(&vec![1.0; cfg.k_true], &mut rng);
    let alpha: Vec<f64> = prevalence.iter().map(|p| (p * cfg.doc_concentration).max(1e-3)).collect();
    let background = if cfg.n_background > 0 {
        Some(WeightedIndex::new(zipf_weights(cfg.n_background, 1.0)).expect("positive weights"))
    } else {
        None
    };
    let n_authors = (cfg.works_per_fandom / 4).max(1);
    let authors = WeightedIndex::new(zipf_weights(n_authors, 1.1)).expect("positive weights");
    let n_rels = 15;
    let rels = WeightedIndex::new(zipf_weights(n_rels, 1.0)).expect("positive weights");

    let mut offsets: Vec<u64> = (0..cfg.works_per_fandom).map(|_| rng.random_range(0..cfg.span_days)).collect();
    offsets.sort_unstable();

    let mut works = Vec::with_capacity(cfg.works_per_fandom);
    let mut truth = Vec::with_capacity(cfg.works_per_fandom);
    for (i, &offset) in offsets.iter().enumerate() {
        let outlier = rng.random::<f64>() < cfg.outlier_rate;
        let theta = if outlier {
            let t = rng.random_range(0..cfg.k_true);
            let mut th = dirichlet(&vec![0.1; cfg.k_true], &mut rng);
            th.iter_mut().for_each(|v| *v *= 0.1);
            th[t] += 0.9;
            th
        } else {
            dirichlet(&alpha, &mut rng)
        };
        let mixture = WeightedIndex::new(theta.iter().copied()).expect("theta has mass");
        let len = rng.random_range(cfg.min_words..=cfg.max_words);
        let mut text = String::with_capacity(len * 8);
        for j in 0..len {
            if j > 0 {
                text.push(' ');
            }
            let w = match &background {
                Some(bg) if rng.random::<f64>() < cfg.background_rate => bg.sample(&mut rng),
                _ => {
                    let t = mixture.sample(&mut rng);
                    cfg.n_background + t * cfg.words_per_topic + topics[t].sample(&mut rng)
                }
            };
            text.push_str(&words[w]);
        }
        let chapters = rng.random_range(1..=cfg.max_chapters);
        let publish = cfg.start_date + Days::new(offset);
        let update = publish + Days::new(rng.random_range(0..=30 * u64::from(chapters - 1)));
        let n_rel = rng.random_range(0..=2);
        let mut relationships: Vec<String> = (0..n_rel)
            .map(|_| {
                let r = rels.sample(&mut rng);
                format!("Character {}/Character {}", 2 * r + 1, 2 * r + 2)
            })
            .collect();
        relationships.sort();
        relationships.dedup();
        let mut archive_warnings = vec![pick(&WARNINGS, &mut rng).to_string()];
        if archive_warnings[0] == WARNINGS[2].0 && rng.random::<f64>() < 0.3 {
            archive_warnings.push(WARNINGS[3].0.to_string());
        }
        let id = format!("f{:02}-{:06}", f + 1, i);
        let record = WorkRecord {
            id: id.clone(),
            fandom: fandom.clone(),
            author: format!("author-{:02}-{:05}", f + 1, authors.sample(&mut rng)),
            title: format!("Work {}", i + 1),
            text,
            chapters,
            publish_date: publish,
            update_date: update,
            rating: pick(&RATINGS, &mut rng).to_string(),
            category: pick(&CATEGORIES, &mut rng).to_string(),
            archive_warnings,
            relationships,
            kudos: 0,
            comments: 0,
            hits: 0,
            bookmarks: 0,
        };
        let true_topic = theta
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then_with(|| b.0.cmp(&a.0)))
            .map(|(t, _)| t)
            .expect("k_true > 0");
        works.push(Work::from_record(record)?);
        truth.push(WorkTruth {
            id,
            fandom: fandom.clone(),
            true_novelty_term: None,
            true_novelty_topic: None,
            true_topic,
            outlier,
            theta,
        });
    }

    // True term novelty: the term score of the text as generated.
    let refs: Vec<&Work> = works.iter().collect();
    let tokens: Vec<_> = works.iter().map(|w| tokenize(&w.text)).collect();
    let term_cfg = TermConfig {
        span_days: cfg.window_days,
        min_window: cfg.min_window,
        centroid_includes_focal: false,
    };
    for (t, rec) in truth.iter_mut().zip(score_sorted_term(&refs, &tokens, &term_cfg)) {
        t.true_novelty_term = match rec.s_term {
            Some(Score::Scored(s)) => Some(s),
            _ => None,
        };
    }

    // True topic novelty: planted mixtures against their window mean, with
    // window sums from prefix sums.
    let k = cfg.k_true;
    let mut prefix = vec![0.0f64; (works.len() + 1) * k];
    for (i, t) in truth.iter().enumerate() {
        for j in 0..k {
            prefix[(i + 1) * k + j] = prefix[i * k + j] + t.theta[j];
        }
    }
    let dates: Vec<NaiveDate> = works.iter().map(|w| w.publish_date).collect();
    for i in 0..works.len() {
        let r = date_window(&dates, dates[i], cfg.window_days);
        if r.len() < cfg.min_window.max(1) {
            continue;
        }
        let n = r.len() as f64;
        let mean: Vec<f64> = (0..k)
            .map(|j| ((prefix[r.end * k + j] - prefix[r.start * k + j]) / n).max(0.0))
            .collect();
        let total: f64 = mean.iter().sum();
        let mean: Vec<f64> = mean.iter().map(|v| v / total).collect();
        truth[i].true_novelty_topic = Some(js_divergence(&truth[i].theta, &mean).expect("equal lengths"));
    }
    Ok(FandomDraft { works, truth })
}

/// Generates a corpus and its ground truth. Output depends only on `cfg`.
pub fn generate(cfg: &SynthConfig) -> Result<SynthCorpus, SynthError> {
    cfg.validate()?;
    let words = synthetic_words(cfg.vocab_size());
    let topics = topic_tables(cfg);
    let drafts: Vec<FandomDraft> = (0..cfg.n_fandoms)
        .into_par_iter()
        .map(|f| draft_fandom(cfg, f, &words, &topics))
        .collect::<Result<_, _>>()?;

    let scored = |get: fn(&WorkTruth) -> Option<f64>| -> Vec<f64> {
        drafts.iter().flat_map(|d| d.truth.iter().filter_map(get)).collect()
    };
    let mean = |v: &[f64]| if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 };
    let terms = scored(|t| t.true_novelty_term);
    let topics_scored = scored(|t| t.true_novelty_topic);
    let term_center = mean(&terms);
    let topic_center = mean(&topics_scored);
    let lo = terms.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let uptick_knot = match cfg.link {
        Link::Uptick { knot, .. } if hi >= lo => lo + knot * (hi - lo),
        _ => 1.0,
    };

    let mut effect_rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, u64::MAX));
    let effect = Normal::new(0.0, cfg.fandom_effect_sd).expect("valid sd");
    let fandom_effects: Vec<(String, f64)> = (0..cfg.n_fandoms)
        .map(|f| (fandom_name(f), effect.sample(&mut effect_rng)))
        .collect();

    let noise = Normal::new(0.0, cfg.noise_sd).expect("valid sd");
    let centers = (term_center, topic_center);
    let drafts: Vec<FandomDraft> = drafts
        .into_par_iter()
        .enumerate()
        .map(|(f, mut d)| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, (1 << 32) + f as u64));
            for (w, t) in d.works.iter_mut().zip(&d.truth) {
                // Works without a score get the link at the centers.
                let st = t.true_novelty_term.unwrap_or(term_center);
                let sp = t.true_novelty_topic.unwrap_or(topic_center);
                let g = cfg.link.eval(st, sp, centers, uptick_knot);
                for r in Response::ALL {
                    let m = cfg.response(r);
                    let log_pc = m.intercept + fandom_effects[f].1 + g + noise.sample(&mut rng);
                    let nonzero = match m.zero_intercept {
                        None => true,
                        Some(a) => {
                            let eta = a + m.zero_term * st + m.zero_chapters * f64::from(w.chapters - 1);
                            rng.random::<f64>() < sigmoid(eta)
                        }
                    };
                    let count = if nonzero {
                        (log_pc.exp() * f64::from(w.chapters)).round().max(1.0) as u64
                    } else {
                        0
                    };
                    match r {
                        Response::Kudos => w.kudos = count,
                        Response::Hits => w.hits = count,
                        Response::Comments => w.comments = count,
                        Response::Bookmarks => w.bookmarks = count,
                    }
                }
            }
            d
        })
        .collect();

    let mut works = Vec::with_capacity(cfg.n_fandoms * cfg.works_per_fandom);
    let mut truth = Vec::with_capacity(works.capacity());
    for d in drafts {
        works.extend(d.works);
        truth.extend(d.truth);
    }
    truth.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(SynthCorpus {
        works,
        truth: SynthTruth {
            meta: TruthMeta {
                config: cfg.clone(),
                link: cfg.link.clone(),
                fandom_effects,
                term_center,
                topic_center,
                uptick_knot,
                config_hash: None,
            },
            works: truth,
        },
    })
}
