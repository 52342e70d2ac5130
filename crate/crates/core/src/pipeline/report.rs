use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{
    Output, PipelineError, CORPUS_SUMMARY, COEFFICIENTS, CORRELATIONS, CURVES, GAM_PD, GAM_SUMMARY, MODEL_SUMMARIES,
    REJECTS, REPORT, TERM_SCORES, TOPIC_SCORES, VIF,
};

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn col(&self, name: &str) -> usize {
        self.header.iter().position(|h| h == name).unwrap_or(usize::MAX)
    }

    fn get<'a>(&self, row: &'a [String], name: &str) -> &'a str {
        row.get(self.col(name)).map(String::as_str).unwrap_or("")
    }
}

fn read_table(path: &Path) -> Result<Option<Table>, PipelineError> {
    if !path.exists() {
        return Ok(None);
    }
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .from_path(path)
        .map_err(|e| PipelineError::Io(e.to_string()))?;
    let header = rdr.headers().map_err(|e| PipelineError::Io(e.to_string()))?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for r in rdr.records() {
        rows.push(r.map_err(|e| PipelineError::Io(e.to_string()))?.iter().map(String::from).collect());
    }
    Ok(Some(Table { header, rows }))
}

fn missing(s: &mut String, command: &str) {
    let _ = writeln!(s, "  not available: run `noveltyscope {command}`");
}

fn section(s: &mut String, title: &str) {
    let _ = writeln!(s, "\n{title}\n{}", "-".repeat(title.len()));
}

fn parse(x: &str) -> Option<f64> {
    x.parse().ok()
}

fn fmt3(x: &str) -> String {
    parse(x).map(|v| format!("{v:.3}")).unwrap_or_else(|| "-".into())
}

pub(super) fn report(out: &mut Output<'_>) -> Result<Vec<String>, PipelineError> {
    let dir = out.rc.out_dir.clone();
    let mut s = String::new();
    let mut found = 0usize;
    let _ = writeln!(s, "noveltyscope report");
    let _ = writeln!(s, "config_sha256: {}", out.rc.hash);
    let c = &out.rc.config;
    let _ = writeln!(s, "seeds: lda {} stats {} synth {}", c.lda.seed, c.stats.seed, c.synth.seed);
    let _ = writeln!(s, "models: {}", c.models.run);

    section(&mut s, "Corpus");
    match read_table(&dir.join(CORPUS_SUMMARY))? {
        Some(t) => {
            found += 1;
            let _ = writeln!(s, "  {:<32} {:>10} {:>13}", "fandom", "ingested", "after filter");
            let (mut a, mut b) = (0usize, 0usize);
            for r in &t.rows {
                let _ = writeln!(s, "  {:<32} {:>10} {:>13}", r[0], r[1], r[2]);
                a += r[1].parse::<usize>().unwrap_or(0);
                b += r[2].parse::<usize>().unwrap_or(0);
            }
            let _ = writeln!(s, "  {:<32} {:>10} {:>13}", "total", a, b);
            if let Ok(text) = fs::read_to_string(dir.join(REJECTS)) {
                let _ = writeln!(s, "  rejected lines: {}", text.lines().count().saturating_sub(1));
            }
        }
        None => missing(&mut s, "ingest"),
    }

    section(&mut s, "Novelty scores");
    for (name, file, cmd, col) in [
        ("term", TERM_SCORES, "score-term", "s_term"),
        ("topic", TOPIC_SCORES, "score-topic", "s_topic"),
    ] {
        match read_table(&dir.join(file))? {
            Some(t) => {
                found += 1;
                let mut by_fandom: BTreeMap<String, (Vec<f64>, usize, usize)> = BTreeMap::new();
                for r in &t.rows {
                    let e = by_fandom.entry(t.get(r, "fandom").to_string()).or_default();
                    match t.get(r, col) {
                        "UNSCORED" | "" => e.1 += 1,
                        "UNSCORABLE" => e.2 += 1,
                        v => e.0.extend(parse(v)),
                    }
                }
                let _ = writeln!(
                    s,
                    "  {name}: {:<26} {:>7} {:>9} {:>11} {:>8} {:>8} {:>8}",
                    "fandom", "scored", "unscored", "unscorable", "mean", "median", "max"
                );
                for (f, (mut v, u, x)) in by_fandom {
                    v.sort_by(f64::total_cmp);
                    let stat = |o: Option<f64>| o.map(|m| format!("{m:.4}")).unwrap_or_else(|| "-".into());
                    let mean = (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
                    let median = (!v.is_empty()).then(|| v[v.len() / 2]);
                    let _ = writeln!(
                        s,
                        "  {:<len$}  {f:<26} {:>7} {u:>9} {x:>11} {:>8} {:>8} {:>8}",
                        "",
                        v.len(),
                        stat(mean),
                        stat(median),
                        stat(v.last().copied()),
                        len = name.len()
                    );
                }
            }
            None => missing(&mut s, cmd),
        }
    }

    section(&mut s, "Binned z-score curves (mean log z-score by novelty bin)");
    match read_table(&dir.join(CURVES))? {
        Some(t) => {
            found += 1;
            let width = t.rows.first().map(|r| t.get(r, "bin_width").to_string()).unwrap_or_default();
            let _ = writeln!(s, "  bin width {width}; intervals and other widths in {CURVES}");
            for kind in ["term", "topic"] {
                let mut cells: BTreeMap<(String, String), BTreeMap<String, String>> = BTreeMap::new();
                let mut order: Vec<(String, String)> = Vec::new();
                for r in t.rows.iter().filter(|r| t.get(r, "novelty") == kind && t.get(r, "bin_width") == width) {
                    let key = (t.get(r, "bin_lo").to_string(), t.get(r, "bin_hi").to_string());
                    if !cells.contains_key(&key) {
                        order.push(key.clone());
                    }
                    let cell = match parse(t.get(r, "mean_z")) {
                        Some(m) => format!("{m:+.3} ({})", t.get(r, "count")),
                        None => "-".into(),
                    };
                    cells.entry(key).or_default().insert(t.get(r, "response").to_string(), cell);
                }
                let _ = writeln!(
                    s,
                    "  {kind:<5} {:<13} {:>16} {:>16} {:>16} {:>16}",
                    "bin", "kudos", "hits", "comments", "bookmarks"
                );
                for key in order {
                    let row = &cells[&key];
                    let g = |n: &str| row.get(n).cloned().unwrap_or_else(|| "-".into());
                    let _ = writeln!(
                        s,
                        "        {:<13} {:>16} {:>16} {:>16} {:>16}",
                        format!("[{}, {})", fmt3(&key.0), fmt3(&key.1)),
                        g("kudos"),
                        g("hits"),
                        g("comments"),
                        g("bookmarks")
                    );
                }
            }
        }
        None => missing(&mut s, "curves"),
    }

    section(&mut s, "Correlations");
    match read_table(&dir.join(CORRELATIONS))? {
        Some(t) => {
            found += 1;
            let _ = write!(s, "  {:<20}", "");
            for h in &t.header[1..] {
                let _ = write!(s, " {:>9}", truncate(h, 9));
            }
            s.push('\n');
            for r in &t.rows {
                let _ = write!(s, "  {:<20}", r[0]);
                for v in &r[1..] {
                    let _ = write!(s, " {:>9}", fmt3(v));
                }
                s.push('\n');
            }
        }
        None => missing(&mut s, "regress"),
    }

    section(&mut s, "Variance inflation factors");
    match read_table(&dir.join(VIF))? {
        Some(t) => {
            found += 1;
            for r in &t.rows {
                let flag = if t.get(r, "above_threshold") == "true" { "  above threshold" } else { "" };
                let _ = writeln!(s, "  {:<24} {:>10}{flag}", r[0], fmt3(t.get(r, "vif")));
            }
        }
        None => missing(&mut s, "regress"),
    }

    section(&mut s, "Two-part regression coefficients (* = 95% interval excludes zero)");
    match read_table(&dir.join(COEFFICIENTS))? {
        Some(t) => {
            found += 1;
            let mut last = (String::new(), String::new());
            for r in &t.rows {
                let key = (t.get(r, "model_id").to_string(), t.get(r, "stage").to_string());
                if key != last {
                    let stage = if key.1 == "zero" { "P(response > 0), logistic" } else { "ln(response) | response > 0, OLS" };
                    let _ = writeln!(s, "  model {} {}: {stage}", key.0, t.get(r, "response"));
                    let _ = writeln!(s, "    {:<52} {:>11} {:>10} {:>23}", "term", "estimate", "std err", "95% interval");
                    last = key;
                }
                let (lo, hi) = (parse(t.get(r, "ci_lo")), parse(t.get(r, "ci_hi")));
                let star = match (lo, hi) {
                    (Some(l), Some(h)) if l > 0.0 || h < 0.0 => "*",
                    _ => "",
                };
                let _ = writeln!(
                    s,
                    "    {:<52} {:>11} {:>10} {:>23} {star}",
                    t.get(r, "term"),
                    sci(t.get(r, "estimate")),
                    sci(t.get(r, "std_error")),
                    format!("[{}, {}]", sci(t.get(r, "ci_lo")), sci(t.get(r, "ci_hi")))
                );
            }
        }
        None => missing(&mut s, "regress"),
    }
    append_text(&mut s, &dir.join(MODEL_SUMMARIES), &mut found);

    section(&mut s, "GAM partial dependence (centered smooth, 95% interval)");
    match read_table(&dir.join(GAM_PD))? {
        Some(t) => {
            found += 1;
            let mut last = (String::new(), String::new());
            for r in &t.rows {
                let x = parse(t.get(r, "x")).unwrap_or(f64::NAN);
                // Show the grid at tenths only.
                if ((x * 10.0).round() - x * 10.0).abs() > 1e-9 {
                    continue;
                }
                let key = (t.get(r, "model_id").to_string(), t.get(r, "variable").to_string());
                if key != last {
                    let _ = writeln!(s, "  model {} {}: s({})", key.0, t.get(r, "response"), key.1);
                    last = key;
                }
                let ext = if t.get(r, "extrapolated") == "true" { "  extrapolated" } else { "" };
                let _ = writeln!(
                    s,
                    "    x={:.1} {:>11} [{}, {}]{ext}",
                    x,
                    sci(t.get(r, "estimate")),
                    sci(t.get(r, "ci_lo")),
                    sci(t.get(r, "ci_hi"))
                );
            }
        }
        None => missing(&mut s, "gam"),
    }
    append_text(&mut s, &dir.join(GAM_SUMMARY), &mut found);

    out.write_text(REPORT, &s)?;
    Ok(vec![format!("collated {found} artifacts")])
}

fn truncate(s: &str, n: usize) -> &str {
    match s.char_indices().nth(n) {
        Some((i, _)) => &s[..i],
        None => s,
    }
}

fn sci(x: &str) -> String {
    match parse(x) {
        Some(v) if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e5) => format!("{v:.3e}"),
        Some(v) => format!("{v:.4}"),
        None => "-".into(),
    }
}

fn append_text(s: &mut String, path: &Path, found: &mut usize) {
    if let Ok(text) = fs::read_to_string(path) {
        *found += 1;
        s.push('\n');
        for line in text.lines().filter(|l| !l.starts_with('#')) {
            let _ = writeln!(s, "  {line}");
        }
    }
}
