//! Dense, loop-by-loop reference implementations of both novelty scores.
//! Deliberately self-contained: tokenization, windowing, TF-IDF and the
//! divergence are all written out again here.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::corpus::Work;
use crate::novelty::{NoveltyRecord, Score};

pub const ORACLE_MAX_WORKS: usize = 5000;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("corpus of {0} works is too large for the dense oracle (limit {ORACLE_MAX_WORKS})")]
    TooLarge(usize),
    #[error("expected one topic mixture per work")]
    LengthMismatch,
}

fn words_of(text: &str) -> Vec<String> {
    let lower = text.to_lowercase();
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in lower.chars() {
        if c.is_alphanumeric() || c == '\'' {
            cur.push(c);
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Indices of each fandom's works in (publish_date, id) order.
fn by_fandom(works: &[Work]) -> BTreeMap<&str, Vec<usize>> {
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, w) in works.iter().enumerate() {
        groups.entry(w.fandom.as_str()).or_default().push(i);
    }
    for idx in groups.values_mut() {
        idx.sort_by(|&a, &b| (works[a].publish_date, &works[a].id).cmp(&(works[b].publish_date, &works[b].id)));
    }
    groups
}

/// Same-fandom works published in `[date − span_days, date)`.
fn window_of(works: &[Work], group: &[usize], focal: usize, span_days: i64) -> Vec<usize> {
    let date = works[focal].publish_date;
    let mut out = Vec::new();
    for &j in group {
        let age = (date - works[j].publish_date).num_days();
        if j != focal && age > 0 && age <= span_days {
            out.push(j);
        }
    }
    out
}

fn record(w: &Work, size: usize) -> NoveltyRecord {
    NoveltyRecord {
        work_id: w.id.clone(),
        fandom: w.fandom.clone(),
        publish_date: w.publish_date,
        s_term: None,
        s_topic: None,
        window_size: size,
    }
}

fn term_score(docs: &[Vec<String>]) -> Option<f64> {
    // docs[..n-1] is the window, docs[n-1] the focal work.
    let mut totals: BTreeMap<&str, usize> = BTreeMap::new();
    for d in docs {
        for t in d {
            *totals.entry(t.as_str()).or_insert(0) += 1;
        }
    }
    let vocab: Vec<&str> = totals.iter().filter(|(_, &c)| c >= 2).map(|(t, _)| *t).collect();
    let col: BTreeMap<&str, usize> = vocab.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let n = docs.len();
    let v = vocab.len();
    let mut m = vec![vec![0.0f64; v]; n];
    for (i, d) in docs.iter().enumerate() {
        for t in d {
            if let Some(&j) = col.get(t.as_str()) {
                m[i][j] += 1.0;
            }
        }
    }
    for j in 0..v {
        let mut df = 0.0;
        for row in m.iter() {
            if row[j] > 0.0 {
                df += 1.0;
            }
        }
        let idf = ((1.0 + n as f64) / (1.0 + df)).ln() + 1.0;
        for row in m.iter_mut() {
            row[j] *= idf;
        }
    }
    let mut center = vec![0.0f64; v];
    for row in &m[..n - 1] {
        for j in 0..v {
            center[j] += row[j];
        }
    }
    for c in center.iter_mut() {
        *c /= (n - 1) as f64;
    }
    let focal = &m[n - 1];
    let (mut dot, mut nf, mut nc) = (0.0, 0.0, 0.0);
    for j in 0..v {
        dot += focal[j] * center[j];
        nf += focal[j] * focal[j];
        nc += center[j] * center[j];
    }
    if nf == 0.0 || nc == 0.0 {
        return None;
    }
    Some((1.0 - dot / (nf.sqrt() * nc.sqrt())).clamp(0.0, 1.0))
}

/// Term novelty of every work, by dense TF-IDF matrices per window.
pub fn oracle_term_scores(works: &[Work], span_days: i64, min_window: usize) -> Result<Vec<NoveltyRecord>, OracleError> {
    if works.len() > ORACLE_MAX_WORKS {
        return Err(OracleError::TooLarge(works.len()));
    }
    let tokens: Vec<Vec<String>> = works.iter().map(|w| words_of(&w.text)).collect();
    let mut out = Vec::with_capacity(works.len());
    for group in by_fandom(works).values() {
        for &i in group {
            let window = window_of(works, group, i, span_days);
            let mut rec = record(&works[i], window.len());
            rec.s_term = Some(if window.len() < min_window.max(1) {
                Score::Unscored
            } else {
                let mut docs: Vec<Vec<String>> = window.iter().map(|&j| tokens[j].clone()).collect();
                docs.push(tokens[i].clone());
                match term_score(&docs) {
                    Some(s) => Score::Scored(s),
                    None => Score::Unscorable,
                }
            });
            out.push(rec);
        }
    }
    Ok(out)
}

fn entropy2(p: &[f64]) -> f64 {
    let mut h = 0.0;
    for &x in p {
        if x > 0.0 {
            h -= x * x.log2();
        }
    }
    h
}

/// Jensen-Shannon divergence (base 2) in entropy form.
pub fn js_entropy_form(p: &[f64], q: &[f64]) -> f64 {
    let m: Vec<f64> = p.iter().zip(q).map(|(a, b)| 0.5 * (a + b)).collect();
    (entropy2(&m) - 0.5 * (entropy2(p) + entropy2(q))).clamp(0.0, 1.0)
}

/// Topic novelty of every work given its topic mixture (`None` for works
/// without one). Mixtures are aligned with `works`.
pub fn oracle_topic_scores(
    works: &[Work],
    mixtures: &[Option<Vec<f64>>],
    span_days: i64,
    min_window: usize,
) -> Result<Vec<NoveltyRecord>, OracleError> {
    if works.len() > ORACLE_MAX_WORKS {
        return Err(OracleError::TooLarge(works.len()));
    }
    if mixtures.len() != works.len() {
        return Err(OracleError::LengthMismatch);
    }
    let mut out = Vec::with_capacity(works.len());
    for group in by_fandom(works).values() {
        for &i in group {
            let window = window_of(works, group, i, span_days);
            let mut rec = record(&works[i], window.len());
            rec.s_topic = Some(if window.len() < min_window.max(1) {
                Score::Unscored
            } else if let Some(f) = &mixtures[i] {
                let members: Vec<&Vec<f64>> = window.iter().filter_map(|&j| mixtures[j].as_ref()).collect();
                if members.is_empty() {
                    Score::Unscorable
                } else {
                    let mut center = vec![0.0; f.len()];
                    for m in &members {
                        for (c, x) in center.iter_mut().zip(m.iter()) {
                            *c += x;
                        }
                    }
                    for c in center.iter_mut() {
                        *c /= members.len() as f64;
                    }
                    Score::Scored(js_entropy_form(f, &center))
                }
            } else {
                Score::Unscorable
            });
            out.push(rec);
        }
    }
    Ok(out)
}

/// Both scores, merged per work, in (fandom, publish_date, id) order.
pub fn oracle_scores(
    works: &[Work],
    mixtures: &[Option<Vec<f64>>],
    span_days: i64,
    min_window: usize,
) -> Result<Vec<NoveltyRecord>, OracleError> {
    let term = oracle_term_scores(works, span_days, min_window)?;
    let topic = oracle_topic_scores(works, mixtures, span_days, min_window)?;
    let ids: BTreeSet<&str> = term.iter().map(|r| r.work_id.as_str()).collect();
    debug_assert_eq!(ids.len(), term.len());
    Ok(term
        .into_iter()
        .zip(topic)
        .map(|(mut t, p)| {
            t.s_topic = p.s_topic;
            t
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::WorkRecord;
    use chrono::NaiveDate;

    fn work(id: &str, day: u32, text: &str) -> Work {
        let d = NaiveDate::from_ymd_opt(2016, 1, day).unwrap();
        Work::from_record(WorkRecord {
            id: id.into(),
            fandom: "F".into(),
            author: "a".into(),
            title: "t".into(),
            text: text.into(),
            chapters: 1,
            publish_date: d,
            update_date: d,
            rating: "r".into(),
            category: "c".into(),
            archive_warnings: vec![],
            relationships: vec![],
            kudos: 0,
            comments: 0,
            hits: 0,
            bookmarks: 0,
        })
        .unwrap()
    }

    #[test]
    fn tokenizer_agrees_with_engine() {
        for s in ["Don't STOP—me now!", "a1 b2\tc'3 ", "ÉCOLE, école"] {
            assert_eq!(words_of(s), crate::text::tokenize(s));
        }
    }

    #[test]
    fn single_work_is_unscored() {
        let r = oracle_term_scores(&[work("a", 1, "x y")], 183, 1).unwrap();
        assert_eq!(r[0].s_term, Some(Score::Unscored));
        assert_eq!(r[0].window_size, 0);
    }

    #[test]
    fn duplicates_score_zero() {
        let works: Vec<Work> = (1..=5).map(|d| work(&format!("w{d}"), d, "alpha beta beta gamma")).collect();
        let mix = vec![Some(vec![0.3, 0.7]); 5];
        let r = oracle_scores(&works, &mix, 183, 1).unwrap();
        for rec in &r[1..] {
            assert_eq!(rec.s_term, Some(Score::Scored(0.0)));
            assert_eq!(rec.s_topic, Some(Score::Scored(0.0)));
        }
    }

    #[test]
    fn js_values() {
        assert!((js_entropy_form(&[0.5, 0.5], &[0.25, 0.75]) - 0.0488).abs() < 1e-4);
        assert_eq!(js_entropy_form(&[1.0, 0.0], &[0.0, 1.0]), 1.0);
    }

    #[test]
    fn size_limit() {
        let works = vec![work("a", 1, "x"); ORACLE_MAX_WORKS + 1];
        assert_eq!(oracle_term_scores(&works, 183, 1), Err(OracleError::TooLarge(ORACLE_MAX_WORKS + 1)));
    }
}
