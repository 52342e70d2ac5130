use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufReader, Write};

use crate::corpus::{CorpusStore, Response};
use crate::novelty::{merge_scores, read_scores, write_scores, NoveltyRecord, Score};
use crate::stats::binned::binned_curve;
use crate::stats::correlation::correlation_matrix;
use crate::stats::design::{build_design, DesignMatrix, ModelSpec};
use crate::stats::gam::{fit_gam, grid, partial_dependence, GamSpec};
use crate::stats::two_part::{fit_two_part, ModelId, TwoPartFit};
use crate::stats::vif::vif;
use crate::stats::zscore::log_zscore_by_fandom;
use crate::synth::generate;
use crate::term::score_all_term;
use crate::topic::{derive_seed, fit_fandom, score_fandom_topic};

use super::{num, Output, PipelineError, CORPUS_SUMMARY, COEFFICIENTS, CORRELATIONS, CURVES, GAM_PD, GAM_SUMMARY,
    MODEL_SUMMARIES, REJECTS, TERM_SCORES, TOPIC_SCORES, VIF};

/// The ingested store and its filtered copy.
fn load(out: &Output<'_>) -> Result<(CorpusStore, CorpusStore), PipelineError> {
    let store = CorpusStore::ingest(&out.rc.input)?;
    let filtered = store.retain(&out.rc.config.filter.spec());
    Ok((store, filtered))
}

fn read_table(out: &Output<'_>, name: &str, producer: &str) -> Result<Vec<NoveltyRecord>, PipelineError> {
    let path = out.path(name);
    let file = File::open(&path)
        .map_err(|e| PipelineError::MissingInput(format!("{}: {e}; run `noveltyscope {producer}` first", path.display())))?;
    Ok(read_scores(BufReader::new(file))?)
}

/// Term and topic scores merged by work id.
fn load_scores(out: &Output<'_>) -> Result<Vec<NoveltyRecord>, PipelineError> {
    let term = read_table(out, TERM_SCORES, "score-term")?;
    let topic = read_table(out, TOPIC_SCORES, "score-topic")?;
    Ok(merge_scores(&term, &topic)?)
}

fn count_line(label: &str, scores: impl Iterator<Item = Option<Score>>) -> String {
    let (mut scored, mut unscored, mut unscorable, mut sum) = (0usize, 0usize, 0usize, 0.0);
    for s in scores {
        match s {
            Some(Score::Scored(v)) => {
                scored += 1;
                sum += v;
            }
            Some(Score::Unscorable) => unscorable += 1,
            _ => unscored += 1,
        }
    }
    let mean = if scored > 0 { format!("{:.4}", sum / scored as f64) } else { "-".into() };
    format!("{label}: {scored} scored (mean {mean}), {unscored} unscored, {unscorable} unscorable")
}

pub(super) fn ingest(out: &mut Output<'_>) -> Result<Vec<String>, PipelineError> {
    let (store, filtered) = load(out)?;
    let mut per_fandom: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for w in store.works() {
        per_fandom.entry(&w.fandom).or_default().0 += 1;
    }
    for w in filtered.works() {
        per_fandom.entry(&w.fandom).or_default().1 += 1;
    }
    let rows: Vec<Vec<String>> = per_fandom
        .iter()
        .map(|(f, (a, b))| vec![f.to_string(), a.to_string(), b.to_string()])
        .collect();
    out.write_csv(CORPUS_SUMMARY, &["fandom", "ingested", "after_filter"], &rows)?;

    let header = serde_json::json!({ "noveltyscope": out.header() }).to_string();
    let path = out.path(REJECTS);
    out.write(&path, |w| {
        writeln!(w, "{header}")?;
        store.export_rejects(w)?;
        Ok(())
    })?;

    Ok(vec![
        format!("{} lines read from {}", store.lines_read(), out.rc.input.display()),
        format!("{} works ingested, {} lines rejected", store.len(), store.rejects().len()),
        format!(
            "{} works in {} fandoms pass the filter ({})",
            filtered.len(),
            filtered.fandoms().len(),
            out.rc.config.filter.spec().describe()
        ),
    ])
}

pub(super) fn score_term(out: &mut Output<'_>) -> Result<Vec<String>, PipelineError> {
    let (_, filtered) = load(out)?;
    let records = score_all_term(&filtered, &out.rc.config.term_config())?;
    let header = out.header();
    let path = out.path(TERM_SCORES);
    out.write(&path, |w| Ok(write_scores(w, &records, &[header])?))?;
    Ok(vec![count_line("term novelty", records.iter().map(|r| r.s_term))])
}

/// File-name-safe form of a fandom name.
fn slug(name: &str) -> String {
    let mut s = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            s.push(c.to_ascii_lowercase());
        } else if !s.ends_with('-') {
            s.push('-');
        }
    }
    let s = s.trim_matches('-').to_string();
    if s.is_empty() { "fandom".into() } else { s }
}

pub(super) fn score_topic(out: &mut Output<'_>) -> Result<Vec<String>, PipelineError> {
    let (_, filtered) = load(out)?;
    let lda = out.rc.config.lda_config();
    let topic = out.rc.config.topic_config();
    let mut records = Vec::with_capacity(filtered.len());
    let mut slugs: HashMap<String, usize> = HashMap::new();
    let mut lines = Vec::new();
    for fandom in filtered.fandoms() {
        let mut model = fit_fandom(&filtered, fandom, &lda)?;
        model.vocabulary.source = format!("{} | {}", model.vocabulary.source, out.header());
        let base = slug(fandom);
        let seen = slugs.entry(base.clone()).or_default();
        let name = if *seen == 0 { base } else { format!("{base}-{seen}") };
        *seen += 1;
        let path = out.path(&format!("lda/{name}.lda"));
        out.write(&path, |w| Ok(model.save(w)?))?;
        if model.vocabulary.degenerate {
            lines.push(format!("{fandom}: degenerate LDA vocabulary ({} terms)", model.vocabulary.len()));
        }
        records.extend(score_fandom_topic(&filtered, fandom, &model, &topic)?);
    }
    let header = out.header();
    let path = out.path(TOPIC_SCORES);
    out.write(&path, |w| Ok(write_scores(w, &records, &[header])?))?;
    lines.insert(0, count_line("topic novelty", records.iter().map(|r| r.s_topic)));
    Ok(lines)
}

/// Per-chapter log z-scores of every response, keyed by work id. Fandom
/// means and deviations are taken over all filtered works.
fn zscores(filtered: &CorpusStore) -> Result<HashMap<Response, HashMap<String, Score>>, PipelineError> {
    let works = filtered.works();
    let fandoms: Vec<&str> = works.iter().map(|w| w.fandom.as_str()).collect();
    let mut out = HashMap::new();
    for r in Response::ALL {
        let values: Vec<f64> = works.iter().map(|w| w.per_chapter_response().get(r)).collect();
        let z = log_zscore_by_fandom(&values, &fandoms)?;
        out.insert(r, works.iter().map(|w| w.id.clone()).zip(z).collect());
    }
    Ok(out)
}

pub(super) fn curves(out: &mut Output<'_>) -> Result<Vec<String>, PipelineError> {
    let merged = load_scores(out)?;
    let (_, filtered) = load(out)?;
    let z = zscores(&filtered)?;
    let stats = &out.rc.config.stats;
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    let kinds: [(&str, fn(&NoveltyRecord) -> Option<f64>); 2] = [("term", NoveltyRecord::term), ("topic", NoveltyRecord::topic)];
    for (ki, (kind, get)) in kinds.iter().enumerate() {
        for (ri, r) in Response::ALL.into_iter().enumerate() {
            let zr = &z[&r];
            let (nov, zv): (Vec<f64>, Vec<f64>) = merged
                .iter()
                .filter_map(|rec| Some((get(rec)?, zr.get(&rec.work_id)?.value()?)))
                .unzip();
            for (wi, &width) in stats.bin_widths.iter().enumerate() {
                let stream = ((ki * 4 + ri) * 64 + wi) as u64;
                let curve = binned_curve(&nov, &zv, width, stats.n_boot, derive_seed(stats.seed, stream))?;
                for b in &curve.bins {
                    rows.push(vec![
                        kind.to_string(),
                        r.name().to_string(),
                        num(width),
                        num(b.lo),
                        num(b.hi),
                        b.count.to_string(),
                        b.mean.map(num).unwrap_or_default(),
                        b.ci.map(|c| num(c.0)).unwrap_or_default(),
                        b.ci.map(|c| num(c.1)).unwrap_or_default(),
                    ]);
                }
            }
            if ri == 0 {
                lines.push(format!("{kind} novelty: {} works with a score and a z-score", nov.len()));
            }
        }
    }
    out.write_csv(
        CURVES,
        &["novelty", "response", "bin_width", "bin_lo", "bin_hi", "count", "mean_z", "ci_lo", "ci_hi"],
        &rows,
    )?;
    lines.push(format!(
        "{} curves, bin widths {:?}, {} bootstrap resamples",
        2 * Response::ALL.len() * stats.bin_widths.len(),
        stats.bin_widths,
        stats.n_boot
    ));
    Ok(lines)
}

/// Works that have both novelty scores.
fn scored_rows(out: &Output<'_>) -> Result<Vec<NoveltyRecord>, PipelineError> {
    let rows: Vec<NoveltyRecord> = load_scores(out)?
        .into_iter()
        .filter(|r| r.term().is_some() && r.topic().is_some())
        .collect();
    if rows.is_empty() {
        return Err(PipelineError::MissingInput("no work has both a term and a topic novelty score".into()));
    }
    Ok(rows)
}

fn model_spec(out: &Output<'_>, with_squares: bool, include_age: bool) -> ModelSpec {
    ModelSpec {
        with_squares,
        include_age,
        reference_date: None,
        top_relationships: out.rc.config.stats.top_relationships,
    }
}

fn response_values(store: &CorpusStore, design: &DesignMatrix, r: Response) -> Vec<f64> {
    design
        .row_ids
        .iter()
        .map(|id| store.get(id).expect("design rows come from the store").per_chapter_response().get(r))
        .collect()
}

fn population_variance(v: &[f64]) -> f64 {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / v.len() as f64
}

pub(super) fn regress(out: &mut Output<'_>) -> Result<Vec<String>, PipelineError> {
    let rows = scored_rows(out)?;
    let (store, _) = load(out)?;
    let stats = out.rc.config.stats.clone();
    let mut lines = vec![format!("{} works with both novelty scores", rows.len())];

    // Correlations and VIF use the unsquared design with age included.
    let screen = build_design(&store, &rows, &model_spec(out, false, true))?;
    let (numeric, constant): (Vec<_>, Vec<_>) = screen
        .numeric_columns()
        .map(|c| (c.name.clone(), c.values.clone()))
        .partition(|(_, v)| population_variance(v) > 0.0);
    let corr = correlation_matrix(&numeric)?;
    let mut corr_rows = Vec::new();
    for (i, (name, _)) in numeric.iter().enumerate() {
        let mut row = vec![name.clone()];
        row.extend(corr[i].iter().map(|v| num(*v)));
        corr_rows.push(row);
    }
    let mut corr_header = vec!["variable"];
    corr_header.extend(numeric.iter().map(|(n, _)| n.as_str()));
    out.write_csv(CORRELATIONS, &corr_header, &corr_rows)?;
    if !constant.is_empty() {
        let names: Vec<&str> = constant.iter().map(|(n, _)| n.as_str()).collect();
        lines.push(format!("constant columns left out of correlations: {}", names.join(", ")));
    }

    let report = vif(&screen, stats.vif_threshold)?;
    let vif_rows: Vec<Vec<String>> = report
        .entries
        .iter()
        .map(|(n, v)| vec![n.clone(), num(*v), (*v > report.threshold).to_string()])
        .collect();
    out.write_csv(VIF, &["variable", "vif", "above_threshold"], &vif_rows)?;
    let flagged = report.flagged();
    lines.push(if flagged.is_empty() {
        format!("no VIF above {}", report.threshold)
    } else {
        format!("VIF above {}: {}", report.threshold, flagged.join(", "))
    });

    let mut coef_rows = Vec::new();
    let mut summary = String::new();
    for squares in [false, true] {
        let ids: Vec<(Response, ModelId)> = Response::ALL
            .into_iter()
            .map(|r| (r, ModelId::linear(r, squares)))
            .filter(|(_, id)| out.rc.models.contains(&id.0))
            .collect();
        if ids.is_empty() {
            continue;
        }
        let design = build_design(&store, &rows, &model_spec(out, squares, stats.include_age))?;
        for (r, _) in ids {
            let values = response_values(&store, &design, r);
            let fit = fit_two_part(&design, r, &values)?;
            push_coefficients(&mut coef_rows, &fit);
            summary.push_str(&describe_fit(&fit, &design));
            lines.push(format!(
                "model {} ({}): n={} nonzero={} R2={:.4}",
                fit.model_id.0,
                r.name(),
                design.n_rows(),
                fit.ols.fit.n,
                fit.ols.fit.r_squared
            ));
        }
    }
    out.write_csv(
        COEFFICIENTS,
        &["model_id", "response", "stage", "term", "estimate", "std_error", "ci_lo", "ci_hi"],
        &coef_rows,
    )?;
    out.write_text(MODEL_SUMMARIES, &summary)?;
    Ok(lines)
}

fn push_coefficients(rows: &mut Vec<Vec<String>>, fit: &TwoPartFit) {
    let mut push = |stage: &str, names: &[String], coef: &[f64], se: &[f64], ci: &[(f64, f64)]| {
        for i in 0..names.len() {
            rows.push(vec![
                fit.model_id.0.to_string(),
                fit.response.name().to_string(),
                stage.to_string(),
                names[i].clone(),
                num(coef[i]),
                num(se[i]),
                num(ci[i].0),
                num(ci[i].1),
            ]);
        }
    };
    if let Some(l) = &fit.logistic {
        push("zero", &l.names, &l.fit.coefficients, &l.fit.std_errors, &l.fit.ci);
    }
    let o = &fit.ols;
    push("nonzero", &o.names, &o.fit.coefficients, &o.fit.std_errors, &o.fit.ci);
}

fn describe_fit(fit: &TwoPartFit, design: &DesignMatrix) -> String {
    let mut s = format!("model {} response={}\n", fit.model_id.0, fit.response.name());
    s.push_str(&format!("  rows: {}\n", design.n_rows()));
    match &fit.logistic {
        Some(l) => s.push_str(&format!(
            "  zero stage: logistic, converged={} iterations={} gradient={:.3e} loglik={:.6}\n",
            l.fit.converged,
            l.fit.iterations,
            l.fit.gradient_norm,
            l.fit.log_likelihood.last().copied().unwrap_or(f64::NAN)
        )),
        None => s.push_str("  zero stage: skipped, no zero responses\n"),
    }
    let o = &fit.ols;
    s.push_str(&format!(
        "  nonzero stage: OLS on ln(y), n={} R2={:.6} sigma2={:.6} normal_residual={:.3e}\n",
        o.fit.n, o.fit.r_squared, o.fit.sigma2, o.normal_residual
    ));
    if !fit.dropped.is_empty() {
        s.push_str(&format!("  dropped (constant on nonzero rows): {}\n", fit.dropped.join(", ")));
    }
    let refs: Vec<String> = design.references.iter().map(|(f, l)| format!("{f}={l}")).collect();
    if !refs.is_empty() {
        s.push_str(&format!("  reference levels: {}\n", refs.join(", ")));
    }
    s
}

pub(super) fn gam(out: &mut Output<'_>) -> Result<Vec<String>, PipelineError> {
    let rows = scored_rows(out)?;
    let (store, _) = load(out)?;
    let stats = out.rc.config.stats.clone();
    let spec = GamSpec::new(stats.gam_k_term, stats.gam_k_topic, stats.gam_sp);
    let design = build_design(&store, &rows, &model_spec(out, false, stats.include_age))?;
    let xs = grid(0.0, 1.0, stats.gam_grid_points);
    let mut pd_rows = Vec::new();
    let mut summary = String::new();
    let mut lines = Vec::new();
    for r in Response::ALL {
        let id = ModelId::gam(r);
        if !out.rc.models.contains(&id.0) {
            continue;
        }
        let values = response_values(&store, &design, r);
        let keep: Vec<usize> = (0..values.len()).filter(|&i| values[i] > 0.0).collect();
        let sub = design.subset_rows(&keep);
        let y: Vec<f64> = keep.iter().map(|&i| values[i]).collect();
        let fit = fit_gam(&sub, &y, &spec)?;
        summary.push_str(&format!(
            "model {} response={} n={} edf={:.4} sigma2={:.6} rss={:.6}\n",
            id.0,
            r.name(),
            fit.n,
            fit.edf,
            fit.sigma2,
            fit.rss
        ));
        for sm in &fit.smooths {
            summary.push_str(&format!(
                "  s({}) k={} sp={} range=[{:.4}, {:.4}]\n",
                sm.variable, sm.k, sm.sp, sm.lo, sm.hi
            ));
        }
        if !fit.dropped.is_empty() {
            summary.push_str(&format!("  dropped (constant): {}\n", fit.dropped.join(", ")));
        }
        for (var, _) in &spec.smooths {
            let pd = partial_dependence(&fit, var, &xs)?;
            for p in &pd.points {
                pd_rows.push(vec![
                    id.0.to_string(),
                    r.name().to_string(),
                    var.clone(),
                    num(p.x),
                    num(p.estimate),
                    num(p.se),
                    num(p.lo),
                    num(p.hi),
                    p.extrapolated.to_string(),
                ]);
            }
        }
        lines.push(format!("model {} ({}): n={} edf={:.2}", id.0, r.name(), fit.n, fit.edf));
    }
    if lines.is_empty() {
        lines.push("no GAM models selected".into());
    }
    out.write_csv(
        GAM_PD,
        &["model_id", "response", "variable", "x", "estimate", "std_error", "ci_lo", "ci_hi", "extrapolated"],
        &pd_rows,
    )?;
    out.write_text(GAM_SUMMARY, &summary)?;
    Ok(lines)
}

pub(super) fn synth(out: &mut Output<'_>) -> Result<Vec<String>, PipelineError> {
    let mut corpus = generate(&out.rc.config.synth)?;
    corpus.truth.meta.config_hash = Some(out.rc.hash.clone());
    let input = out.rc.input.clone();
    let truth = out.rc.truth.clone();
    out.write(&input, |w| Ok(corpus.write_corpus(w)?))?;
    out.write(&truth, |w| Ok(corpus.truth.write(w)?))?;
    let cfg = &out.rc.config.synth;
    Ok(vec![format!(
        "{} works in {} fandoms, seed {}, link {:?}",
        corpus.works.len(),
        cfg.n_fandoms,
        cfg.seed,
        cfg.link
    )])
}
