//! Regression design matrices: novelty predictors plus the control
//! variables (fandom, chapters, author output, age, frequent relationship,
//! rating, category, archive warnings).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::NaiveDate;
use nalgebra::DMatrix;

use super::StatsError;
use crate::corpus::{CorpusStore, Work};
use crate::novelty::NoveltyRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Numeric,
    Indicator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnRole {
    Predictor,
    Control,
    Derived,
}

impl ColumnRole {
    pub fn name(self) -> &'static str {
        match self {
            ColumnRole::Predictor => "predictor",
            ColumnRole::Control => "control",
            ColumnRole::Derived => "derived",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignColumn {
    pub name: String,
    pub kind: ColumnKind,
    pub role: ColumnRole,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    /// Mean-center the novelty scores and add their squares.
    pub with_squares: bool,
    pub include_age: bool,
    /// Date ages are measured from; defaults to the latest completion date in
    /// the store.
    pub reference_date: Option<NaiveDate>,
    /// How many of a fandom's most frequent relationships count as frequent.
    pub top_relationships: usize,
}

impl Default for ModelSpec {
    fn default() -> Self {
        ModelSpec {
            with_squares: false,
            include_age: false,
            reference_date: None,
            top_relationships: 5,
        }
    }
}

/// Rows are works, columns are named regressors. The intercept is not stored;
/// [`DesignMatrix::matrix`] prepends it.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub row_ids: Vec<String>,
    pub fandoms: Vec<String>,
    pub columns: Vec<DesignColumn>,
    /// Dropped reference level of every categorical family.
    pub references: Vec<(String, String)>,
    pub with_squares: bool,
}

pub const INTERCEPT: &str = "intercept";

impl DesignMatrix {
    pub fn n_rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn column(&self, name: &str) -> Option<&DesignColumn> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn names(&self, with_intercept: bool) -> Vec<String> {
        let mut out = Vec::with_capacity(self.columns.len() + 1);
        if with_intercept {
            out.push(INTERCEPT.to_string());
        }
        out.extend(self.columns.iter().map(|c| c.name.clone()));
        out
    }

    pub fn matrix(&self, with_intercept: bool) -> DMatrix<f64> {
        let offset = usize::from(with_intercept);
        DMatrix::from_fn(self.n_rows(), self.columns.len() + offset, |i, j| {
            if j < offset {
                1.0
            } else {
                self.columns[j - offset].values[i]
            }
        })
    }

    pub fn push_column(&mut self, column: DesignColumn) -> Result<(), StatsError> {
        if column.values.len() != self.n_rows() {
            return Err(StatsError::LengthMismatch(self.n_rows(), column.values.len()));
        }
        self.columns.push(column);
        Ok(())
    }

    /// The design restricted to `rows`, in the given order.
    pub fn subset_rows(&self, rows: &[usize]) -> DesignMatrix {
        DesignMatrix {
            row_ids: rows.iter().map(|&i| self.row_ids[i].clone()).collect(),
            fandoms: rows.iter().map(|&i| self.fandoms[i].clone()).collect(),
            columns: self
                .columns
                .iter()
                .map(|c| DesignColumn {
                    values: rows.iter().map(|&i| c.values[i]).collect(),
                    ..c.clone()
                })
                .collect(),
            references: self.references.clone(),
            with_squares: self.with_squares,
        }
    }

    /// Removes constant indicator columns (a level with no rows left after
    /// subsetting, for instance) and returns their names.
    pub fn drop_constant_indicators(&mut self) -> Vec<String> {
        let mut dropped = Vec::new();
        self.columns.retain(|c| {
            let constant = c.kind == ColumnKind::Indicator
                && c.values.first().is_none_or(|v0| c.values.iter().all(|v| v == v0));
            if constant {
                dropped.push(c.name.clone());
            }
            !constant
        });
        dropped
    }

    pub fn numeric_columns(&self) -> impl Iterator<Item = &DesignColumn> {
        self.columns.iter().filter(|c| c.kind == ColumnKind::Numeric)
    }
}

/// Subtracts the mean.
pub fn center(values: &[f64]) -> Vec<f64> {
    let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
    values.iter().map(|v| v - mean).collect()
}

/// Reference level: most frequent, ties to the lexicographically smallest.
fn reference_level(counts: &BTreeMap<String, usize>) -> Option<String> {
    counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
        .map(|(k, _)| k.clone())
}

/// One indicator per non-reference level. `labels[i]` lists the levels of
/// row `i` (several for multi-label families such as archive warnings).
fn indicator_family(family: &str, labels: &[Vec<&str>], out: &mut DesignMatrix) {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for row in labels {
        for l in row.iter().collect::<BTreeSet<_>>() {
            *counts.entry(l.to_string()).or_default() += 1;
        }
    }
    let Some(reference) = reference_level(&counts) else {
        return;
    };
    for level in counts.keys().filter(|l| **l != reference) {
        let values = labels
            .iter()
            .map(|row| if row.contains(&level.as_str()) { 1.0 } else { 0.0 })
            .collect();
        out.columns.push(DesignColumn {
            name: format!("{family}[{level}]"),
            kind: ColumnKind::Indicator,
            role: ColumnRole::Control,
            values,
        });
    }
    out.references.push((family.to_string(), reference));
}

/// The `top` most frequent relationships of every fandom in `store`, ties
/// broken lexicographically.
pub fn frequent_relationships(store: &CorpusStore, top: usize) -> HashMap<String, BTreeSet<String>> {
    let mut counts: BTreeMap<&str, BTreeMap<&str, usize>> = BTreeMap::new();
    for w in store.works() {
        let per = counts.entry(w.fandom.as_str()).or_default();
        for r in w.relationships.iter().collect::<BTreeSet<_>>() {
            *per.entry(r.as_str()).or_default() += 1;
        }
    }
    counts
        .into_iter()
        .map(|(fandom, rels)| {
            let mut ranked: Vec<(&str, usize)> = rels.into_iter().collect();
            ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
            let set = ranked.into_iter().take(top).map(|(r, _)| r.to_string()).collect();
            (fandom.to_string(), set)
        })
        .collect()
}

/// Builds the design for the works in `records`. Author output and
/// relationship frequencies are counted over all of `store`, so pass the
/// full ingested corpus rather than an analysis subset.
pub fn build_design(store: &CorpusStore, records: &[NoveltyRecord], spec: &ModelSpec) -> Result<DesignMatrix, StatsError> {
    let mut works: Vec<&Work> = Vec::with_capacity(records.len());
    let mut s_term = Vec::with_capacity(records.len());
    let mut s_topic = Vec::with_capacity(records.len());
    for r in records {
        let (Some(t), Some(p)) = (r.term(), r.topic()) else {
            return Err(StatsError::Unscored(r.work_id.clone()));
        };
        works.push(store.get(&r.work_id).ok_or_else(|| StatsError::UnknownWork(r.work_id.clone()))?);
        s_term.push(t);
        s_topic.push(p);
    }

    let mut design = DesignMatrix {
        row_ids: works.iter().map(|w| w.id.clone()).collect(),
        fandoms: works.iter().map(|w| w.fandom.clone()).collect(),
        columns: Vec::new(),
        references: Vec::new(),
        with_squares: spec.with_squares,
    };
    let predictor = |name: &str, values: Vec<f64>| DesignColumn {
        name: name.to_string(),
        kind: ColumnKind::Numeric,
        role: ColumnRole::Predictor,
        values,
    };
    let control = |name: &str, values: Vec<f64>| DesignColumn {
        name: name.to_string(),
        kind: ColumnKind::Numeric,
        role: ColumnRole::Control,
        values,
    };
    if spec.with_squares {
        let ct = center(&s_term);
        let cp = center(&s_topic);
        let sq = |v: &[f64]| v.iter().map(|x| x * x).collect::<Vec<f64>>();
        let (st, sp) = (sq(&ct), sq(&cp));
        design.columns.push(predictor("s_term", ct));
        design.columns.push(predictor("s_term_sq", st));
        design.columns.push(predictor("s_topic", cp));
        design.columns.push(predictor("s_topic_sq", sp));
    } else {
        design.columns.push(predictor("s_term", s_term));
        design.columns.push(predictor("s_topic", s_topic));
    }

    design.columns.push(control("chapters", works.iter().map(|w| w.chapters as f64).collect()));
    let mut author_counts: HashMap<&str, usize> = HashMap::new();
    for w in store.works() {
        *author_counts.entry(w.author.as_str()).or_default() += 1;
    }
    design.columns.push(control(
        "author_work_count",
        works.iter().map(|w| author_counts[w.author.as_str()] as f64).collect(),
    ));
    if spec.include_age {
        let reference = spec
            .reference_date
            .or_else(|| store.works().iter().map(|w| w.complete_or_update_date).max())
            .expect("nonempty store");
        design.columns.push(control(
            "age_days",
            works
                .iter()
                .map(|w| (reference - w.complete_or_update_date).num_days() as f64)
                .collect(),
        ));
    }

    let frequent = frequent_relationships(store, spec.top_relationships);
    design.columns.push(DesignColumn {
        name: "frequent_relationship".into(),
        kind: ColumnKind::Indicator,
        role: ColumnRole::Control,
        values: works
            .iter()
            .map(|w| {
                let top = frequent.get(&w.fandom);
                let hit = w.relationships.iter().any(|r| top.is_some_and(|t| t.contains(r)));
                if hit { 1.0 } else { 0.0 }
            })
            .collect(),
    });

    let single = |f: fn(&Work) -> &str| works.iter().map(|w| vec![f(w)]).collect::<Vec<_>>();
    indicator_family("fandom", &single(|w| w.fandom.as_str()), &mut design);
    indicator_family("rating", &single(|w| w.rating.as_str()), &mut design);
    indicator_family("category", &single(|w| w.category.as_str()), &mut design);
    let warnings: Vec<Vec<&str>> = works
        .iter()
        .map(|w| w.archive_warnings.iter().map(String::as_str).collect())
        .collect();
    indicator_family("warning", &warnings, &mut design);
    Ok(design)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::WorkRecord;
    use crate::novelty::Score;

    fn work(id: &str, fandom: &str, author: &str, rating: &str, rels: &[&str]) -> Work {
        Work::from_record(WorkRecord {
            id: id.into(),
            fandom: fandom.into(),
            author: author.into(),
            title: "t".into(),
            text: "some words here".into(),
            chapters: 1,
            publish_date: NaiveDate::from_ymd_opt(2015, 1, 1).unwrap(),
            update_date: NaiveDate::from_ymd_opt(2015, 1, 2).unwrap(),
            rating: rating.into(),
            category: "Gen".into(),
            archive_warnings: vec!["No Archive Warnings Apply".into()],
            relationships: rels.iter().map(|r| r.to_string()).collect(),
            kudos: 1,
            comments: 0,
            hits: 10,
            bookmarks: 0,
        })
        .unwrap()
    }

    fn record(w: &Work, term: f64, topic: f64) -> NoveltyRecord {
        NoveltyRecord {
            work_id: w.id.clone(),
            fandom: w.fandom.clone(),
            publish_date: w.publish_date,
            s_term: Some(Score::Scored(term)),
            s_topic: Some(Score::Scored(topic)),
            window_size: 10,
        }
    }

    #[test]
    fn centering_and_squares() {
        let works = vec![
            work("a", "F", "x", "Teen", &[]),
            work("b", "F", "x", "Teen", &[]),
            work("c", "F", "y", "Mature", &[]),
        ];
        let recs: Vec<_> = works.iter().zip([0.2, 0.4, 0.6]).map(|(w, s)| record(w, s, s)).collect();
        let store = CorpusStore::from_works(works).unwrap();
        let spec = ModelSpec { with_squares: true, ..ModelSpec::default() };
        let d = build_design(&store, &recs, &spec).unwrap();
        let c = &d.column("s_term").unwrap().values;
        let sq = &d.column("s_term_sq").unwrap().values;
        let expect = [-0.2, 0.0, 0.2];
        for i in 0..3 {
            assert!((c[i] - expect[i]).abs() < 1e-12);
            assert_eq!(sq[i], c[i] * c[i]);
        }
        assert!((sq[0] - 0.04).abs() < 1e-12 && sq[1].abs() < 1e-24);
        assert!(c.iter().sum::<f64>().abs() < 1e-9);
        assert_eq!(d.column("author_work_count").unwrap().values, vec![2.0, 2.0, 1.0]);
        // Rating has two levels: Teen (most frequent) is the reference.
        assert!(d.column("rating[Mature]").is_some());
        assert!(d.column("rating[Teen]").is_none());
        assert!(d.references.contains(&("rating".into(), "Teen".into())));
    }

    #[test]
    fn three_levels_two_indicators() {
        let works = vec![
            work("a", "F", "x", "Teen", &[]),
            work("b", "F", "x", "Teen", &[]),
            work("c", "F", "y", "Mature", &[]),
            work("d", "F", "y", "Explicit", &[]),
        ];
        let recs: Vec<_> = works.iter().map(|w| record(w, 0.1, 0.1)).collect();
        let store = CorpusStore::from_works(works).unwrap();
        let d = build_design(&store, &recs, &ModelSpec::default()).unwrap();
        let rating: Vec<_> = d.columns.iter().filter(|c| c.name.starts_with("rating[")).collect();
        assert_eq!(rating.len(), 2);
        for c in &d.columns {
            if c.kind == ColumnKind::Indicator {
                assert!(c.values.iter().all(|v| *v == 0.0 || *v == 1.0));
            }
        }
    }

    #[test]
    fn sixth_ranked_relationship_is_not_frequent() {
        let mut works = Vec::new();
        let mut n = 0;
        for (rel, count) in [("A/B", 6), ("C/D", 5), ("E/F", 4), ("G/H", 3), ("I/J", 2)] {
            for _ in 0..count {
                works.push(work(&format!("w{n}"), "F", "x", "Teen", &[rel]));
                n += 1;
            }
        }
        works.push(work("rare", "F", "x", "Teen", &["K/L"]));
        let recs: Vec<_> = works.iter().map(|w| record(w, 0.1, 0.1)).collect();
        let store = CorpusStore::from_works(works).unwrap();
        let d = build_design(&store, &recs, &ModelSpec::default()).unwrap();
        let col = &d.column("frequent_relationship").unwrap().values;
        let rare = d.row_ids.iter().position(|id| id == "rare").unwrap();
        assert_eq!(col[rare], 0.0);
        assert_eq!(col.iter().filter(|v| **v == 1.0).count(), n);
    }

    #[test]
    fn unscored_rows_rejected() {
        let works = vec![work("a", "F", "x", "Teen", &[])];
        let mut r = record(&works[0], 0.1, 0.1);
        r.s_term = Some(Score::Unscored);
        let store = CorpusStore::from_works(works).unwrap();
        assert_eq!(
            build_design(&store, &[r], &ModelSpec::default()),
            Err(StatsError::Unscored("a".into()))
        );
    }
}
