//! Corpus ingestion, validation, filtering and trailing-window queries.
//!
//! A corpus is a line-delimited JSON file with one work per line. Records that
//! fail validation are never silently dropped: they are collected in a
//! [`Reject`] list that can be written back out in the same format with an
//! extra `reason` key.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use chrono::{Duration, NaiveDate};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::tokenize;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown work id {0}")]
    UnknownWork(String),
    #[error("unknown fandom {0}")]
    UnknownFandom(String),
    #[error("trailing window span must be positive, got {0}")]
    InvalidSpan(i64),
    #[error("invalid work {id}: {reason}")]
    InvalidWork { id: String, reason: String },
    #[error("duplicate work id {0}")]
    DuplicateId(String),
}

/// One line of the external corpus format. Field order here is the
/// serialization order of exported records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkRecord {
    pub id: String,
    pub fandom: String,
    pub author: String,
    pub title: String,
    pub text: String,
    pub chapters: u32,
    pub publish_date: NaiveDate,
    pub update_date: NaiveDate,
    pub rating: String,
    pub category: String,
    pub archive_warnings: Vec<String>,
    pub relationships: Vec<String>,
    pub kudos: u64,
    pub comments: u64,
    pub hits: u64,
    pub bookmarks: u64,
}

/// A validated work. `word_count` is derived from the tokenizer, never read
/// from the input.
#[derive(Debug, Clone, PartialEq)]
pub struct Work {
    pub id: String,
    pub fandom: String,
    pub author: String,
    pub title: String,
    pub text: String,
    pub word_count: usize,
    pub chapters: u32,
    pub publish_date: NaiveDate,
    /// Completion date for finished works, last update otherwise. The
    /// producer of the corpus file applies that rule.
    pub complete_or_update_date: NaiveDate,
    pub rating: String,
    pub category: String,
    pub archive_warnings: Vec<String>,
    pub relationships: Vec<String>,
    pub kudos: u64,
    pub comments: u64,
    pub hits: u64,
    pub bookmarks: u64,
}

impl Work {
    pub fn from_record(record: WorkRecord) -> Result<Self, CorpusError> {
        let invalid = |reason: &str| CorpusError::InvalidWork {
            id: record.id.clone(),
            reason: reason.to_string(),
        };
        if record.id.is_empty() {
            return Err(invalid("id: must be non-empty"));
        }
        if record.fandom.is_empty() {
            return Err(invalid("fandom: must be non-empty"));
        }
        if record.chapters < 1 {
            return Err(invalid("chapters: chapters ≥ 1 violated"));
        }
        if record.publish_date > record.update_date {
            return Err(invalid(
                "update_date: publish_date ≤ complete_or_update_date violated",
            ));
        }
        let word_count = tokenize(&record.text).len();
        Ok(Work {
            id: record.id,
            fandom: record.fandom,
            author: record.author,
            title: record.title,
            text: record.text,
            word_count,
            chapters: record.chapters,
            publish_date: record.publish_date,
            complete_or_update_date: record.update_date,
            rating: record.rating,
            category: record.category,
            archive_warnings: record.archive_warnings,
            relationships: record.relationships,
            kudos: record.kudos,
            comments: record.comments,
            hits: record.hits,
            bookmarks: record.bookmarks,
        })
    }

    pub fn to_record(&self) -> WorkRecord {
        WorkRecord {
            id: self.id.clone(),
            fandom: self.fandom.clone(),
            author: self.author.clone(),
            title: self.title.clone(),
            text: self.text.clone(),
            chapters: self.chapters,
            publish_date: self.publish_date,
            update_date: self.complete_or_update_date,
            rating: self.rating.clone(),
            category: self.category.clone(),
            archive_warnings: self.archive_warnings.clone(),
            relationships: self.relationships.clone(),
            kudos: self.kudos,
            comments: self.comments,
            hits: self.hits,
            bookmarks: self.bookmarks,
        }
    }

    pub fn per_chapter_response(&self) -> ResponseVector {
        let ch = f64::from(self.chapters);
        ResponseVector {
            kudos_pc: self.kudos as f64 / ch,
            hits_pc: self.hits as f64 / ch,
            comments_pc: self.comments as f64 / ch,
            bookmarks_pc: self.bookmarks as f64 / ch,
        }
    }

    fn sort_key(&self) -> (NaiveDate, &str) {
        (self.publish_date, self.id.as_str())
    }
}

/// The four reception signals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Response {
    Kudos,
    Hits,
    Comments,
    Bookmarks,
}

impl Response {
    pub const ALL: [Response; 4] = [
        Response::Kudos,
        Response::Hits,
        Response::Comments,
        Response::Bookmarks,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Response::Kudos => "kudos",
            Response::Hits => "hits",
            Response::Comments => "comments",
            Response::Bookmarks => "bookmarks",
        }
    }

    pub fn raw(self, work: &Work) -> u64 {
        match self {
            Response::Kudos => work.kudos,
            Response::Hits => work.hits,
            Response::Comments => work.comments,
            Response::Bookmarks => work.bookmarks,
        }
    }
}

/// Reception counts averaged over chapters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseVector {
    pub kudos_pc: f64,
    pub hits_pc: f64,
    pub comments_pc: f64,
    pub bookmarks_pc: f64,
}

impl ResponseVector {
    pub fn get(&self, response: Response) -> f64 {
        match response {
            Response::Kudos => self.kudos_pc,
            Response::Hits => self.hits_pc,
            Response::Comments => self.comments_pc,
            Response::Bookmarks => self.bookmarks_pc,
        }
    }
}

pub fn per_chapter_response(work: &Work) -> ResponseVector {
    work.per_chapter_response()
}

/// A line of input that did not make it into the store.
#[derive(Debug, Clone, PartialEq)]
pub struct Reject {
    /// 1-based line number in the source file.
    pub line: usize,
    pub id: Option<String>,
    pub reason: String,
    pub raw: String,
}

impl Reject {
    /// Renders the reject as one line of the rejects report: the original
    /// object with an added `reason` key, or a stub object for lines that are
    /// not JSON objects at all.
    pub fn to_json_line(&self) -> String {
        let reason = format!("line {}: {}", self.line, self.reason);
        match serde_json::from_str::<serde_json::Value>(&self.raw) {
            Ok(serde_json::Value::Object(mut map)) => {
                map.insert("reason".into(), serde_json::Value::String(reason));
                serde_json::Value::Object(map).to_string()
            }
            _ => serde_json::json!({ "raw": self.raw, "reason": reason }).to_string(),
        }
    }
}

/// An ordered set of works borrowed from a store.
#[derive(Debug, Clone)]
pub struct WorkSet<'a> {
    pub works: Vec<&'a Work>,
    pub provenance: String,
}

impl<'a> WorkSet<'a> {
    pub fn new(mut works: Vec<&'a Work>, provenance: impl Into<String>) -> Self {
        works.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        works.dedup_by(|a, b| a.id == b.id);
        WorkSet {
            works,
            provenance: provenance.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.works.len()
    }

    pub fn is_empty(&self) -> bool {
        self.works.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &'a Work> + '_ {
        self.works.iter().copied()
    }

    pub fn ids(&self) -> Vec<&'a str> {
        self.works.iter().map(|w| w.id.as_str()).collect()
    }
}

/// Selection criteria applied by [`CorpusStore::filter_works`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    /// Inclusive word-count bounds.
    pub min_words: Option<usize>,
    pub max_words: Option<usize>,
    pub earliest_publish: Option<NaiveDate>,
    pub fandoms: Option<BTreeSet<String>>,
}

impl Default for FilterSpec {
    fn default() -> Self {
        FilterSpec {
            min_words: Some(500),
            max_words: Some(1500),
            earliest_publish: NaiveDate::from_ymd_opt(2010, 1, 1),
            fandoms: None,
        }
    }
}

impl FilterSpec {
    /// Accepts every work.
    pub fn none() -> Self {
        FilterSpec {
            min_words: None,
            max_words: None,
            earliest_publish: None,
            fandoms: None,
        }
    }

    pub fn accepts(&self, work: &Work) -> bool {
        self.min_words.is_none_or(|m| work.word_count >= m)
            && self.max_words.is_none_or(|m| work.word_count <= m)
            && self.earliest_publish.is_none_or(|d| work.publish_date >= d)
            && self
                .fandoms
                .as_ref()
                .is_none_or(|set| set.contains(&work.fandom))
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if let Some(m) = self.min_words {
            parts.push(format!("words>={m}"));
        }
        if let Some(m) = self.max_words {
            parts.push(format!("words<={m}"));
        }
        if let Some(d) = self.earliest_publish {
            parts.push(format!("published>={d}"));
        }
        if let Some(f) = &self.fandoms {
            let names: Vec<&str> = f.iter().map(String::as_str).collect();
            parts.push(format!("fandom in {{{}}}", names.join(",")));
        }
        if parts.is_empty() {
            "all".to_string()
        } else {
            parts.join(" & ")
        }
    }

    /// Applies the filter to an existing work set.
    pub fn apply<'a>(&self, set: &WorkSet<'a>) -> WorkSet<'a> {
        let works = set.iter().filter(|w| self.accepts(w)).collect();
        WorkSet::new(works, format!("{} | {}", set.provenance, self.describe()))
    }
}

/// Immutable store of validated works, indexed by id and by fandom.
#[derive(Debug, Clone, Default)]
pub struct CorpusStore {
    works: Vec<Work>,
    by_id: HashMap<String, usize>,
    /// Per fandom, indices into `works` sorted by (publish_date, id).
    by_fandom: HashMap<String, Vec<usize>>,
    rejects: Vec<Reject>,
    lines_read: usize,
}

impl CorpusStore {
    /// Reads a line-delimited JSON corpus. Invalid lines end up in
    /// [`CorpusStore::rejects`]; only an unreadable file is an error.
    pub fn ingest(path: impl AsRef<Path>) -> Result<Self, CorpusError> {
        let path = path.as_ref();
        let io_err = |source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        };
        let file = File::open(path).map_err(io_err)?;
        let reader = BufReader::new(file);
        let mut lines = Vec::new();
        for line in reader.lines() {
            lines.push(line.map_err(io_err)?);
        }
        Ok(Self::ingest_lines(lines.iter().map(String::as_str)))
    }

    pub fn ingest_lines<'l>(lines: impl IntoIterator<Item = &'l str>) -> Self {
        let mut accepted = Vec::new();
        let mut seen: HashMap<String, usize> = HashMap::new();
        let mut rejects = Vec::new();
        let mut lines_read = 0;
        for (idx, raw) in lines.into_iter().enumerate() {
            lines_read += 1;
            let line = idx + 1;
            let reject = |id: Option<String>, reason: String| Reject {
                line,
                id,
                reason,
                raw: raw.to_string(),
            };
            if raw.trim().is_empty() {
                rejects.push(reject(None, "empty line".into()));
                continue;
            }
            let mut de = serde_json::Deserializer::from_str(raw);
            let record: WorkRecord = match serde_path_to_error::deserialize(&mut de) {
                Ok(r) => r,
                Err(e) => {
                    let field = e.path().to_string();
                    let id = serde_json::from_str::<serde_json::Value>(raw)
                        .ok()
                        .and_then(|v| v.get("id").and_then(|i| i.as_str()).map(String::from));
                    rejects.push(reject(id, format!("malformed record at field `{field}`: {}", e.inner())));
                    continue;
                }
            };
            let id = record.id.clone();
            if let Some(first) = seen.get(&id) {
                rejects.push(reject(
                    Some(id),
                    format!("duplicate id (first occurrence on line {first})"),
                ));
                continue;
            }
            match Work::from_record(record) {
                Ok(work) => {
                    seen.insert(id, line);
                    accepted.push(work);
                }
                Err(CorpusError::InvalidWork { reason, .. }) => {
                    rejects.push(reject(Some(id), reason));
                }
                Err(e) => rejects.push(reject(Some(id), e.to_string())),
            }
        }
        let mut store = Self::index(accepted);
        store.rejects = rejects;
        store.lines_read = lines_read;
        store
    }

    /// Builds a store from already-validated works; duplicate ids are an error.
    pub fn from_works(works: Vec<Work>) -> Result<Self, CorpusError> {
        let mut ids = BTreeSet::new();
        for w in &works {
            if !ids.insert(w.id.as_str()) {
                return Err(CorpusError::DuplicateId(w.id.clone()));
            }
        }
        let n = works.len();
        let mut store = Self::index(works);
        store.lines_read = n;
        Ok(store)
    }

    fn index(mut works: Vec<Work>) -> Self {
        works.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        let by_id = works
            .iter()
            .enumerate()
            .map(|(i, w)| (w.id.clone(), i))
            .collect();
        let mut by_fandom: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, w) in works.iter().enumerate() {
            by_fandom.entry(w.fandom.clone()).or_default().push(i);
        }
        CorpusStore {
            works,
            by_id,
            by_fandom,
            rejects: Vec::new(),
            lines_read: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.works.len()
    }

    pub fn is_empty(&self) -> bool {
        self.works.is_empty()
    }

    /// All works ordered by (publish_date, id).
    pub fn works(&self) -> &[Work] {
        &self.works
    }

    pub fn rejects(&self) -> &[Reject] {
        &self.rejects
    }

    pub fn lines_read(&self) -> usize {
        self.lines_read
    }

    pub fn get(&self, id: &str) -> Option<&Work> {
        self.by_id.get(id).map(|&i| &self.works[i])
    }

    /// Fandom names in sorted order.
    pub fn fandoms(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.by_fandom.keys().map(String::as_str).collect();
        names.sort_unstable();
        names
    }

    pub fn all(&self) -> WorkSet<'_> {
        WorkSet {
            works: self.works.iter().collect(),
            provenance: "all".into(),
        }
    }

    /// Works of one fandom ordered by (publish_date, id).
    pub fn fandom_works(&self, fandom: &str) -> Result<WorkSet<'_>, CorpusError> {
        let idx = self
            .by_fandom
            .get(fandom)
            .ok_or_else(|| CorpusError::UnknownFandom(fandom.to_string()))?;
        Ok(WorkSet {
            works: idx.iter().map(|&i| &self.works[i]).collect(),
            provenance: format!("fandom={fandom}"),
        })
    }

    pub fn filter_works(&self, criteria: &FilterSpec) -> WorkSet<'_> {
        criteria.apply(&self.all())
    }

    /// A new store holding only the works accepted by `criteria`. Rejects are
    /// carried over so the ingest report stays complete.
    pub fn retain(&self, criteria: &FilterSpec) -> CorpusStore {
        let works = self
            .works
            .iter()
            .filter(|w| criteria.accepts(w))
            .cloned()
            .collect();
        let mut store = Self::index(works);
        store.rejects = self.rejects.clone();
        store.lines_read = self.lines_read;
        store
    }

    /// Same-fandom works published in `[focal − span_days, focal)`, never the
    /// focal work itself.
    pub fn trailing_window(&self, focal: &Work, span_days: i64) -> Result<WorkSet<'_>, CorpusError> {
        if span_days <= 0 {
            return Err(CorpusError::InvalidSpan(span_days));
        }
        if self.get(&focal.id).is_none() {
            return Err(CorpusError::UnknownWork(focal.id.clone()));
        }
        let idx = &self.by_fandom[&focal.fandom];
        let range = window_range(&self.works, idx, focal.publish_date, span_days);
        let works = idx[range]
            .iter()
            .map(|&i| &self.works[i])
            .filter(|w| w.id != focal.id)
            .collect();
        Ok(WorkSet {
            works,
            provenance: format!(
                "window({} - {}d, fandom={})",
                focal.publish_date, span_days, focal.fandom
            ),
        })
    }

    /// Writes accepted works back out in the input format.
    pub fn export(&self, mut out: impl Write) -> std::io::Result<()> {
        for w in &self.works {
            serde_json::to_writer(&mut out, &w.to_record())?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn export_rejects(&self, mut out: impl Write) -> std::io::Result<()> {
        for r in &self.rejects {
            writeln!(out, "{}", r.to_json_line())?;
        }
        Ok(())
    }
}

/// Position range in a date-sorted index list covering
/// `[date − span_days, date)`.
fn window_range(
    works: &[Work],
    sorted_idx: &[usize],
    date: NaiveDate,
    span_days: i64,
) -> std::ops::Range<usize> {
    let start_date = date - Duration::days(span_days);
    let lo = sorted_idx.partition_point(|&i| works[i].publish_date < start_date);
    let hi = sorted_idx.partition_point(|&i| works[i].publish_date < date);
    lo..hi
}

pub const DEFAULT_SPAN_DAYS: i64 = 183;
