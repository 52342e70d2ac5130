//! Pipeline configuration: one TOML file with one section per stage.
//! Command-line flags override file values.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::PipelineError;
use crate::corpus::{FilterSpec, DEFAULT_SPAN_DAYS};
use crate::synth::SynthConfig;
use crate::term::TermConfig;
use crate::topic::{LdaConfig, TopicConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputSection {
    /// Corpus file, relative to the config file.
    pub path: String,
    /// Output directory, relative to the config file.
    pub out_dir: String,
    /// Ground-truth sidecar written by `synth`, relative to the config
    /// file. Defaults to the corpus path with `.truth.jsonl` appended.
    pub truth_path: Option<String>,
}

impl Default for InputSection {
    fn default() -> Self {
        InputSection {
            path: "corpus.jsonl".into(),
            out_dir: "out".into(),
            truth_path: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterSection {
    pub min_words: Option<usize>,
    pub max_words: Option<usize>,
    pub earliest_publish: Option<NaiveDate>,
    /// Empty means every fandom.
    pub fandoms: Vec<String>,
}

impl Default for FilterSection {
    fn default() -> Self {
        let f = FilterSpec::default();
        FilterSection {
            min_words: f.min_words,
            max_words: f.max_words,
            earliest_publish: f.earliest_publish,
            fandoms: Vec::new(),
        }
    }
}

impl FilterSection {
    pub fn spec(&self) -> FilterSpec {
        FilterSpec {
            min_words: self.min_words,
            max_words: self.max_words,
            earliest_publish: self.earliest_publish,
            fandoms: if self.fandoms.is_empty() {
                None
            } else {
                Some(self.fandoms.iter().cloned().collect())
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowSection {
    pub span_days: i64,
    pub min_window: usize,
    pub centroid_includes_focal: bool,
}

impl Default for WindowSection {
    fn default() -> Self {
        WindowSection {
            span_days: DEFAULT_SPAN_DAYS,
            min_window: 10,
            centroid_includes_focal: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LdaSection {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub inference_iterations: usize,
    pub top_removed: usize,
    pub seed: u64,
    /// Report the square root of the divergence.
    pub sqrt_distance: bool,
}

impl Default for LdaSection {
    fn default() -> Self {
        let l = LdaConfig::default();
        LdaSection {
            k: l.k,
            alpha: l.alpha,
            beta: l.beta,
            iterations: l.iterations,
            inference_iterations: TopicConfig::default().inference_iterations,
            top_removed: l.top_removed,
            seed: l.seed,
            sqrt_distance: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StatsSection {
    pub bin_widths: Vec<f64>,
    pub n_boot: usize,
    pub seed: u64,
    pub gam_k_term: usize,
    pub gam_k_topic: usize,
    pub gam_sp: f64,
    pub gam_grid_points: usize,
    pub vif_threshold: f64,
    pub include_age: bool,
    pub top_relationships: usize,
}

impl Default for StatsSection {
    fn default() -> Self {
        StatsSection {
            bin_widths: vec![0.1, 0.05],
            n_boot: crate::stats::binned::DEFAULT_BOOTSTRAP,
            seed: 42,
            gam_k_term: 7,
            gam_k_topic: 5,
            gam_sp: 0.1,
            gam_grid_points: 51,
            vif_threshold: crate::stats::vif::DEFAULT_THRESHOLD,
            include_age: false,
            top_relationships: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelsSection {
    /// Model numbers to run, written like `"1-8"` or `"1,5,9-12"`.
    pub run: String,
}

impl Default for ModelsSection {
    fn default() -> Self {
        ModelsSection { run: "1-12".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: InputSection,
    pub filter: FilterSection,
    pub window: WindowSection,
    pub lda: LdaSection,
    pub stats: StatsSection,
    pub models: ModelsSection,
    pub synth: SynthConfig,
}

/// Flag values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub fandom: Option<String>,
    pub models: Option<String>,
    pub out: Option<PathBuf>,
}

/// A loaded configuration with its paths resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedConfig {
    pub config: PipelineConfig,
    pub input: PathBuf,
    pub truth: PathBuf,
    pub out_dir: PathBuf,
    pub models: BTreeSet<u8>,
    pub hash: String,
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        let de = toml::Deserializer::parse(text).map_err(|e| PipelineError::Config(e.to_string()))?;
        serde_path_to_error::deserialize(de).map_err(|e| PipelineError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Applies flag overrides. `--seed` replaces every seed.
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.seed {
            self.lda.seed = s;
            self.stats.seed = s;
            self.synth.seed = s;
        }
        if let Some(f) = &o.fandom {
            self.filter.fandoms = vec![f.clone()];
        }
        if let Some(m) = &o.models {
            self.models.run = m.clone();
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: &str| Err(PipelineError::Config(m.to_string()));
        if self.window.span_days <= 0 {
            return bad("window.span_days must be positive");
        }
        if self.lda.k == 0 {
            return bad("lda.k must be positive");
        }
        if !(self.lda.alpha > 0.0 && self.lda.beta > 0.0) {
            return bad("lda.alpha and lda.beta must be positive");
        }
        if self.stats.bin_widths.iter().any(|w| !(*w > 0.0)) {
            return bad("stats.bin_widths must be positive");
        }
        if self.stats.gam_k_term < 4 || self.stats.gam_k_topic < 4 {
            return bad("GAM basis dimensions must be at least 4");
        }
        parse_models(&self.models.run)?;
        Ok(())
    }

    /// SHA-256 of the canonical TOML form, output location excluded.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.input.out_dir = String::new();
        hex::encode(Sha256::digest(c.to_toml().as_bytes()))
    }

    pub fn term_config(&self) -> TermConfig {
        TermConfig {
            span_days: self.window.span_days,
            min_window: self.window.min_window,
            centroid_includes_focal: self.window.centroid_includes_focal,
        }
    }

    pub fn lda_config(&self) -> LdaConfig {
        LdaConfig {
            k: self.lda.k,
            alpha: self.lda.alpha,
            beta: self.lda.beta,
            iterations: self.lda.iterations,
            seed: self.lda.seed,
            top_removed: self.lda.top_removed,
        }
    }

    pub fn topic_config(&self) -> TopicConfig {
        TopicConfig {
            span_days: self.window.span_days,
            min_window: self.window.min_window,
            inference_iterations: self.lda.inference_iterations,
            seed: self.lda.seed,
            centroid_includes_focal: self.window.centroid_includes_focal,
            sqrt_distance: self.lda.sqrt_distance,
        }
    }

    /// Resolves paths against `base` (the config file's directory).
    pub fn resolve(self, base: &Path, out_override: Option<&Path>) -> Result<ResolvedConfig, PipelineError> {
        self.validate()?;
        let input = base.join(&self.input.path);
        let truth = match &self.input.truth_path {
            Some(p) => base.join(p),
            None => PathBuf::from(format!("{}.truth.jsonl", input.display())),
        };
        let out_dir = match out_override {
            Some(o) => o.to_path_buf(),
            None => base.join(&self.input.out_dir),
        };
        let models = parse_models(&self.models.run)?;
        let hash = self.hash();
        Ok(ResolvedConfig {
            config: self,
            input,
            truth,
            out_dir,
            models,
            hash,
        })
    }
}

/// Reads, overrides and resolves a config file.
pub fn load_config(path: &Path, overrides: &Overrides) -> Result<ResolvedConfig, PipelineError> {
    let text = std::fs::read_to_string(path).map_err(|e| PipelineError::Io(format!("{}: {e}", path.display())))?;
    let mut config = PipelineConfig::from_toml(&text)?;
    config.apply(overrides);
    let base = path.parent().unwrap_or(Path::new("."));
    config.resolve(base, overrides.out.as_deref())
}

/// Parses `"1-4,9"` style model lists; every number must be in 1..=12.
pub fn parse_models(spec: &str) -> Result<BTreeSet<u8>, PipelineError> {
    let bad = || PipelineError::Config(format!("models: cannot parse {spec:?}; use e.g. 1-12 or 1,5-8"));
    let mut out = BTreeSet::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (a, b) = match part.split_once('-') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (part, part),
        };
        let a: u8 = a.parse().map_err(|_| bad())?;
        let b: u8 = b.parse().map_err(|_| bad())?;
        if a < 1 || b > 12 || a > b {
            return Err(bad());
        }
        out.extend(a..=b);
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_settings() {
        let c = PipelineConfig::default();
        assert_eq!(c.lda.k, 100);
        assert_eq!(c.lda.alpha, 0.01);
        assert_eq!(c.lda.iterations, 50);
        assert_eq!(c.stats.bin_widths, vec![0.1, 0.05]);
        assert_eq!((c.stats.gam_k_term, c.stats.gam_k_topic, c.stats.gam_sp), (7, 5, 0.1));
        assert_eq!(c.window.span_days, 183);
    }

    #[test]
    fn toml_round_trip_and_partial_files() {
        let c = PipelineConfig::default();
        assert_eq!(PipelineConfig::from_toml(&c.to_toml()).unwrap(), c);
        let p = PipelineConfig::from_toml("[lda]\nk = 20\n").unwrap();
        assert_eq!(p.lda.k, 20);
        assert_eq!(p.lda.alpha, 0.01);
        let err = PipelineConfig::from_toml("[lda]\nkk = 20\n").unwrap_err();
        assert!(err.to_string().contains("kk"), "{err}");
    }

    #[test]
    fn synth_section_is_flat() {
        let p = PipelineConfig::from_toml(
            "[synth]\nn_fandoms = 2\nstart_date = \"2016-03-01\"\n[synth.link]\nshape = \"u-shape\"\nterm = -1.0\ntopic = -2.0\nterm_sq = 0.0\ntopic_sq = 8.0\n",
        )
        .unwrap();
        assert_eq!(p.synth.n_fandoms, 2);
        assert!(matches!(p.synth.link, crate::synth::Link::UShape { .. }));
    }

    #[test]
    fn overrides_and_hash() {
        let mut c = PipelineConfig::default();
        let h0 = c.hash();
        c.input.out_dir = "elsewhere".into();
        assert_eq!(c.hash(), h0);
        c.apply(&Overrides { seed: Some(9), fandom: Some("X".into()), models: Some("5-8".into()), out: None });
        assert_eq!((c.lda.seed, c.stats.seed, c.synth.seed), (9, 9, 9));
        assert_eq!(c.filter.fandoms, vec!["X".to_string()]);
        assert_ne!(c.hash(), h0);
        assert_eq!(h0.len(), 64);
    }

    #[test]
    fn model_lists() {
        assert_eq!(parse_models("1-12").unwrap().len(), 12);
        assert_eq!(parse_models("1, 5-6,12").unwrap().into_iter().collect::<Vec<_>>(), vec![1, 5, 6, 12]);
        assert!(parse_models("0-3").is_err());
        assert!(parse_models("13").is_err());
        assert!(parse_models("x").is_err());
    }
}
