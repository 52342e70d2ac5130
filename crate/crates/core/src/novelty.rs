//! Per-work novelty records and the score table format.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Outcome of scoring one work.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Score {
    Scored(f64),
    /// Trailing window smaller than the configured minimum.
    Unscored,
    /// Window large enough but the representation was degenerate (zero
    /// vector, no in-vocabulary tokens).
    Unscorable,
}

impl Score {
    pub fn value(self) -> Option<f64> {
        match self {
            Score::Scored(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_scored(self) -> bool {
        matches!(self, Score::Scored(_))
    }

    fn to_field(self) -> String {
        match self {
            Score::Scored(v) => format!("{v:?}"),
            Score::Unscored => "UNSCORED".into(),
            Score::Unscorable => "UNSCORABLE".into(),
        }
    }

    fn from_field(s: &str) -> Result<Option<Self>, ScoreTableError> {
        Ok(match s {
            "" => None,
            "UNSCORED" => Some(Score::Unscored),
            "UNSCORABLE" => Some(Score::Unscorable),
            v => Some(Score::Scored(
                v.parse().map_err(|_| ScoreTableError::BadValue(v.to_string()))?,
            )),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoveltyRecord {
    pub work_id: String,
    pub fandom: String,
    pub publish_date: NaiveDate,
    pub s_term: Option<Score>,
    pub s_topic: Option<Score>,
    pub window_size: usize,
}

impl NoveltyRecord {
    pub fn term(&self) -> Option<f64> {
        self.s_term.and_then(Score::value)
    }

    pub fn topic(&self) -> Option<f64> {
        self.s_topic.and_then(Score::value)
    }
}

#[derive(Debug, Error)]
pub enum ScoreTableError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("bad score value {0:?}")]
    BadValue(String),
    #[error("bad date {0:?}")]
    BadDate(String),
    #[error("score tables disagree on work {0}")]
    Mismatch(String),
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    work_id: String,
    fandom: String,
    publish_date: String,
    s_term: String,
    s_topic: String,
    window_size: usize,
}

pub const SCORE_COLUMNS: [&str; 6] = ["work_id", "fandom", "publish_date", "s_term", "s_topic", "window_size"];

/// Writes the score table. Lines starting with `#` are written verbatim
/// before the header.
pub fn write_scores(mut out: impl Write, records: &[NoveltyRecord], comments: &[String]) -> Result<(), ScoreTableError> {
    for c in comments {
        writeln!(out, "# {c}").map_err(csv::Error::from)?;
    }
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(Row {
            work_id: r.work_id.clone(),
            fandom: r.fandom.clone(),
            publish_date: r.publish_date.to_string(),
            s_term: r.s_term.map(Score::to_field).unwrap_or_default(),
            s_topic: r.s_topic.map(Score::to_field).unwrap_or_default(),
            window_size: r.window_size,
        })?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_scores(input: impl Read) -> Result<Vec<NoveltyRecord>, ScoreTableError> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let row: Row = row?;
        out.push(NoveltyRecord {
            publish_date: NaiveDate::parse_from_str(&row.publish_date, "%Y-%m-%d")
                .map_err(|_| ScoreTableError::BadDate(row.publish_date.clone()))?,
            s_term: Score::from_field(&row.s_term)?,
            s_topic: Score::from_field(&row.s_topic)?,
            work_id: row.work_id,
            fandom: row.fandom,
            window_size: row.window_size,
        });
    }
    Ok(out)
}

/// Combines a term-score table and a topic-score table into one record per
/// work, ordered like `term`.
pub fn merge_scores(term: &[NoveltyRecord], topic: &[NoveltyRecord]) -> Result<Vec<NoveltyRecord>, ScoreTableError> {
    let by_id: BTreeMap<&str, &NoveltyRecord> = topic.iter().map(|r| (r.work_id.as_str(), r)).collect();
    term.iter()
        .map(|t| {
            let mut merged = t.clone();
            if let Some(tp) = by_id.get(t.work_id.as_str()) {
                if tp.window_size != t.window_size {
                    return Err(ScoreTableError::Mismatch(t.work_id.clone()));
                }
                merged.s_topic = tp.s_topic;
            }
            Ok(merged)
        })
        .collect()
}
