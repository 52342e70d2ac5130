//! Stage runner behind the `noveltyscope` binary. Each command reads its
//! inputs from the corpus file or from earlier outputs in the output
//! directory and writes CSV or plain-text artifacts.

mod config;
mod report;
mod stages;

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::corpus::CorpusError;
use crate::novelty::ScoreTableError;
use crate::stats::StatsError;
use crate::synth::SynthError;
use crate::term::TermError;
use crate::topic::{LdaError, TopicError};

pub use config::{
    load_config, parse_models, FilterSection, InputSection, LdaSection, ModelsSection, Overrides, PipelineConfig,
    ResolvedConfig, StatsSection, WindowSection,
};

pub const TERM_SCORES: &str = "term_scores.csv";
pub const TOPIC_SCORES: &str = "topic_scores.csv";
pub const CORPUS_SUMMARY: &str = "corpus_summary.csv";
pub const REJECTS: &str = "rejects.jsonl";
pub const CURVES: &str = "binned_curves.csv";
pub const CORRELATIONS: &str = "correlations.csv";
pub const VIF: &str = "vif.csv";
pub const COEFFICIENTS: &str = "coefficients.csv";
pub const MODEL_SUMMARIES: &str = "model_summaries.txt";
pub const GAM_PD: &str = "gam_partial_dependence.csv";
pub const GAM_SUMMARY: &str = "gam_summary.txt";
pub const REPORT: &str = "report.txt";
pub const ERROR_RECORD: &str = "error.json";
/// Suffix of an artifact that is still being written, or whose command failed.
pub const PARTIAL_SUFFIX: &str = ".partial";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error("missing input: {0}")]
    MissingInput(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Topic(#[from] TopicError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Scores(#[from] ScoreTableError),
}

impl From<std::io::Error> for PipelineError {
    fn from(e: std::io::Error) -> Self {
        PipelineError::Io(e.to_string())
    }
}

impl From<LdaError> for PipelineError {
    fn from(e: LdaError) -> Self {
        PipelineError::Topic(e.into())
    }
}

impl PipelineError {
    pub fn kind(&self) -> &'static str {
        match self {
            PipelineError::Config(_) => "config",
            PipelineError::Io(_) => "io",
            PipelineError::MissingInput(_) => "missing_input",
            PipelineError::Corpus(_) => "corpus",
            PipelineError::Term(_) => "term_novelty",
            PipelineError::Topic(_) => "topic_novelty",
            PipelineError::Stats(_) => "stats",
            PipelineError::Synth(_) => "synth",
            PipelineError::Scores(_) => "score_table",
        }
    }

    /// One-line JSON error record.
    pub fn to_json(&self, command: Option<Command>) -> String {
        serde_json::json!({
            "error": self.kind(),
            "message": self.to_string(),
            "command": command.map(Command::name),
        })
        .to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Ingest,
    ScoreTerm,
    ScoreTopic,
    Curves,
    Regress,
    Gam,
    Synth,
    Report,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Ingest,
        Command::ScoreTerm,
        Command::ScoreTopic,
        Command::Curves,
        Command::Regress,
        Command::Gam,
        Command::Synth,
        Command::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Ingest => "ingest",
            Command::ScoreTerm => "score-term",
            Command::ScoreTopic => "score-topic",
            Command::Curves => "curves",
            Command::Regress => "regress",
            Command::Gam => "gam",
            Command::Synth => "synth",
            Command::Report => "report",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| PipelineError::Config(format!("unknown command {s:?}")))
    }
}

/// What a command did: summary lines for the terminal and the files written.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub command: Command,
    pub lines: Vec<String>,
    pub artifacts: Vec<PathBuf>,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "noveltyscope {}", self.command)?;
        for l in &self.lines {
            writeln!(f, "  {l}")?;
        }
        for a in &self.artifacts {
            writeln!(f, "  wrote {}", a.display())?;
        }
        Ok(())
    }
}

/// Writes artifacts under a `.partial` name and renames them once complete.
pub(crate) struct Output<'a> {
    pub rc: &'a ResolvedConfig,
    pub command: Command,
    pub written: Vec<PathBuf>,
}

impl<'a> Output<'a> {
    fn new(rc: &'a ResolvedConfig, command: Command) -> Self {
        Output { rc, command, written: Vec::new() }
    }

    /// Provenance line carried by every artifact.
    pub fn header(&self) -> String {
        provenance(self.rc, self.command)
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.rc.out_dir.join(name)
    }

    pub fn write<F>(&mut self, path: &Path, body: F) -> Result<(), PipelineError>
    where
        F: FnOnce(&mut BufWriter<File>) -> Result<(), PipelineError>,
    {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| PipelineError::Io(format!("{}: {e}", dir.display())))?;
        }
        let partial = PathBuf::from(format!("{}{PARTIAL_SUFFIX}", path.display()));
        let file = File::create(&partial).map_err(|e| PipelineError::Io(format!("{}: {e}", partial.display())))?;
        let mut w = BufWriter::new(file);
        body(&mut w)?;
        w.flush()?;
        drop(w);
        fs::rename(&partial, path)?;
        self.written.push(path.to_path_buf());
        Ok(())
    }

    /// Writes a text artifact whose first line is `# <provenance>`.
    pub fn write_text(&mut self, name: &str, body: &str) -> Result<(), PipelineError> {
        let header = self.header();
        self.write(&self.path(name), |w| {
            writeln!(w, "# {header}")?;
            w.write_all(body.as_bytes())?;
            Ok(())
        })
    }

    /// Writes a CSV artifact with a provenance comment line.
    pub fn write_csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), PipelineError> {
        let prov = self.header();
        self.write(&self.path(name), |w| {
            writeln!(w, "# {prov}")?;
            let mut c = csv::Writer::from_writer(w);
            c.write_record(header).map_err(|e| PipelineError::Io(e.to_string()))?;
            for r in rows {
                c.write_record(r).map_err(|e| PipelineError::Io(e.to_string()))?;
            }
            c.flush()?;
            Ok(())
        })
    }
}

pub(crate) fn provenance(rc: &ResolvedConfig, command: Command) -> String {
    let c = &rc.config;
    format!(
        "noveltyscope {command} config_sha256={} seeds=lda:{},stats:{},synth:{}",
        rc.hash, c.lda.seed, c.stats.seed, c.synth.seed
    )
}

/// Runs one command. A stale error record from an earlier failed run is
/// removed first.
pub fn run(command: Command, rc: &ResolvedConfig) -> Result<RunSummary, PipelineError> {
    let stale = rc.out_dir.join(ERROR_RECORD);
    if stale.exists() {
        fs::remove_file(&stale)?;
    }
    let mut out = Output::new(rc, command);
    let lines = match command {
        Command::Ingest => stages::ingest(&mut out)?,
        Command::ScoreTerm => stages::score_term(&mut out)?,
        Command::ScoreTopic => stages::score_topic(&mut out)?,
        Command::Curves => stages::curves(&mut out)?,
        Command::Regress => stages::regress(&mut out)?,
        Command::Gam => stages::gam(&mut out)?,
        Command::Synth => stages::synth(&mut out)?,
        Command::Report => report::report(&mut out)?,
    };
    Ok(RunSummary { command, lines, artifacts: out.written })
}

/// Runs every analysis command in order, starting with `synth` when
/// `with_synth` is set.
pub fn run_all(rc: &ResolvedConfig, with_synth: bool) -> Result<Vec<RunSummary>, PipelineError> {
    let mut seq = Vec::new();
    if with_synth {
        seq.push(Command::Synth);
    }
    seq.extend([
        Command::Ingest,
        Command::ScoreTerm,
        Command::ScoreTopic,
        Command::Curves,
        Command::Regress,
        Command::Gam,
        Command::Report,
    ]);
    seq.into_iter().map(|c| run(c, rc)).collect()
}

/// Writes the JSON error record into the output directory, if it exists.
pub fn record_error(rc: &ResolvedConfig, command: Command, err: &PipelineError) -> std::io::Result<()> {
    if rc.out_dir.is_dir() {
        fs::write(rc.out_dir.join(ERROR_RECORD), err.to_json(Some(command)) + "\n")?;
    }
    Ok(())
}

/// Shortest round-trip decimal form.
pub(crate) fn num(x: f64) -> String {
    format!("{x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_names_round_trip() {
        for c in Command::ALL {
            assert_eq!(c.name().parse::<Command>().unwrap(), c);
        }
        assert!("plot".parse::<Command>().is_err());
    }

    #[test]
    fn error_record_is_json() {
        let e = PipelineError::MissingInput("term_scores.csv".into());
        let v: serde_json::Value = serde_json::from_str(&e.to_json(Some(Command::Curves))).unwrap();
        assert_eq!(v["error"], "missing_input");
        assert_eq!(v["command"], "curves");
    }
}
