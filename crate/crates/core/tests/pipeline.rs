use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use noveltyscope::pipeline::{
    load_config, record_error, run, run_all, Command, Overrides, PipelineConfig, PipelineError, ResolvedConfig,
    COEFFICIENTS, CURVES, ERROR_RECORD, GAM_PD, PARTIAL_SUFFIX, REJECTS, REPORT, TERM_SCORES, TOPIC_SCORES,
};

fn small_config() -> PipelineConfig {
    let mut c = PipelineConfig::default();
    c.synth.n_fandoms = 2;
    c.synth.works_per_fandom = 150;
    c.lda.k = 8;
    c.lda.iterations = 30;
    c.lda.inference_iterations = 10;
    c.stats.n_boot = 50;
    c
}

fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn run_small(dir: &Path) -> ResolvedConfig {
    let rc = small_config().resolve(dir, None).unwrap();
    run_all(&rc, true).unwrap();
    rc
}

#[test]
fn full_run_is_reproducible_and_stamped() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let rc = run_small(a.path());
    run_small(b.path());
    let (fa, fb) = (files(a.path()), files(b.path()));
    assert_eq!(fa.keys().collect::<Vec<_>>(), fb.keys().collect::<Vec<_>>());
    for (name, bytes) in &fa {
        assert!(bytes == &fb[name], "{name} differs between runs");
        assert!(!name.ends_with(PARTIAL_SUFFIX), "leftover {name}");
    }

    for name in [TERM_SCORES, TOPIC_SCORES, CURVES, COEFFICIENTS, GAM_PD, REPORT] {
        let text = fs::read_to_string(rc.out_dir.join(name)).unwrap();
        let first = text.lines().next().unwrap();
        assert!(first.starts_with("# noveltyscope "), "{name}: {first}");
        assert!(first.contains(&format!("config_sha256={}", rc.hash)), "{name}: {first}");
        assert!(first.contains("seeds=lda:42,stats:42,synth:7"), "{name}: {first}");
    }
    let rejects = fs::read_to_string(rc.out_dir.join(REJECTS)).unwrap();
    let meta: serde_json::Value = serde_json::from_str(rejects.lines().next().unwrap()).unwrap();
    assert!(meta["noveltyscope"].as_str().unwrap().contains(&rc.hash));

    let coef = fs::read_to_string(rc.out_dir.join(COEFFICIENTS)).unwrap();
    for m in 1..=8 {
        assert!(coef.lines().any(|l| l.starts_with(&format!("{m},"))), "model {m} missing");
    }
    assert!(coef.lines().any(|l| l.starts_with("5,") && l.contains("s_topic_sq")));
    assert!(!coef.lines().any(|l| l.starts_with("1,") && l.contains("_sq")));

    let term = fs::read_to_string(rc.out_dir.join(TERM_SCORES)).unwrap();
    assert!(term.contains("UNSCORED"), "the earliest works have too small a window");
    let report = fs::read_to_string(rc.out_dir.join(REPORT)).unwrap();
    assert!(!report.contains("not available"));
}

#[test]
fn seed_override_changes_hash_and_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    fs::write(&path, small_config().to_toml()).unwrap();
    let base = load_config(&path, &Overrides::default()).unwrap();
    let seeded = load_config(&path, &Overrides { seed: Some(5), ..Overrides::default() }).unwrap();
    assert_ne!(base.hash, seeded.hash);
    assert_eq!(seeded.config.lda.seed, 5);
    assert_eq!(seeded.config.stats.seed, 5);
    assert_eq!(seeded.config.synth.seed, 5);

    let moved = load_config(&path, &Overrides { out: Some(dir.path().join("elsewhere")), ..Overrides::default() }).unwrap();
    assert_eq!(moved.hash, base.hash, "output location is not part of the hash");
    assert_eq!(moved.out_dir, dir.path().join("elsewhere"));
}

#[test]
fn bad_config_is_rejected() {
    let bad = |text: &str| match PipelineConfig::from_toml(text) {
        Err(e) => e,
        Ok(c) => c.resolve(Path::new("."), None).unwrap_err(),
    };
    assert!(bad("[lda]\nkk = 3\n").to_string().contains("kk"));
    assert!(bad("[models]\nrun = \"0-13\"\n").to_string().contains("models"));
    assert!(bad("[stats]\ngam_k_term = 2\n").to_string().contains("GAM"));
    assert_eq!(bad("[window]\nspan_days = 0\n").kind(), "config");
}

#[test]
fn out_of_order_command_names_its_prerequisite() {
    let dir = tempfile::tempdir().unwrap();
    let rc = small_config().resolve(dir.path(), None).unwrap();
    run(Command::Synth, &rc).unwrap();
    run(Command::Ingest, &rc).unwrap();
    let err = run(Command::Curves, &rc).unwrap_err();
    assert!(matches!(err, PipelineError::MissingInput(_)), "{err}");
    assert!(err.to_string().contains("score-term"), "{err}");

    record_error(&rc, Command::Curves, &err).unwrap();
    let record: serde_json::Value = serde_json::from_str(&fs::read_to_string(rc.out_dir.join(ERROR_RECORD)).unwrap()).unwrap();
    assert_eq!(record["error"], "missing_input");
    assert_eq!(record["command"], "curves");

    run(Command::Report, &rc).unwrap();
    assert!(!rc.out_dir.join(ERROR_RECORD).exists(), "a new run clears the stale record");
    let report = fs::read_to_string(rc.out_dir.join(REPORT)).unwrap();
    assert!(report.contains("not available: run `noveltyscope score-term`"));
}

#[test]
fn model_and_fandom_selection() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    fs::write(&path, small_config().to_toml()).unwrap();
    let all = load_config(&path, &Overrides::default()).unwrap();
    run(Command::Synth, &all).unwrap();

    let fandom = {
        let text = fs::read_to_string(&all.input).unwrap();
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        first["fandom"].as_str().unwrap().to_string()
    };
    let o = Overrides { fandom: Some(fandom.clone()), models: Some("2,10".into()), ..Overrides::default() };
    let rc = load_config(&path, &o).unwrap();
    for c in [Command::Ingest, Command::ScoreTerm, Command::ScoreTopic, Command::Regress, Command::Gam] {
        run(c, &rc).unwrap();
    }
    let term = fs::read_to_string(rc.out_dir.join(TERM_SCORES)).unwrap();
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(term.as_bytes());
    let col = rdr.headers().unwrap().iter().position(|h| h == "fandom").unwrap();
    for r in rdr.records() {
        assert_eq!(&r.unwrap()[col], fandom);
    }
    let coef = fs::read_to_string(rc.out_dir.join(COEFFICIENTS)).unwrap();
    let models: std::collections::BTreeSet<&str> =
        coef.lines().skip(2).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(models.into_iter().collect::<Vec<_>>(), ["2"]);
    let pd = fs::read_to_string(rc.out_dir.join(GAM_PD)).unwrap();
    assert!(pd.lines().skip(2).all(|l| l.starts_with("10,")));
}
