use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use noveltyscope::pipeline::{load_config, record_error, run, Command, Overrides};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Ingest,
    ScoreTerm,
    ScoreTopic,
    Curves,
    Regress,
    Gam,
    Synth,
    Report,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Ingest => Command::Ingest,
            Cmd::ScoreTerm => Command::ScoreTerm,
            Cmd::ScoreTopic => Command::ScoreTopic,
            Cmd::Curves => Command::Curves,
            Cmd::Regress => Command::Regress,
            Cmd::Gam => Command::Gam,
            Cmd::Synth => Command::Synth,
            Cmd::Report => Command::Report,
        }
    }
}

/// Term and topic novelty scoring and reception models for grouped corpora.
#[derive(Debug, Parser)]
#[command(name = "noveltyscope", version)]
struct Args {
    command: Cmd,
    /// TOML config file; relative paths inside it resolve against its directory.
    #[arg(long)]
    config: PathBuf,
    /// Replaces the LDA, bootstrap and generator seeds.
    #[arg(long)]
    seed: Option<u64>,
    /// Restricts the run to one fandom.
    #[arg(long)]
    fandom: Option<String>,
    /// Models to fit, e.g. `1-12` or `1,5-8`.
    #[arg(long)]
    models: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let command = Command::from(args.command);
    let overrides = Overrides {
        seed: args.seed,
        fandom: args.fandom,
        models: args.models,
        out: args.out,
    };
    let rc = match load_config(&args.config, &overrides) {
        Ok(rc) => rc,
        Err(e) => {
            eprintln!("{}", e.to_json(Some(command)));
            return ExitCode::from(2);
        }
    };
    match run(command, &rc) {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let _ = record_error(&rc, command, &e);
            eprintln!("{}", e.to_json(Some(command)));
            ExitCode::FAILURE
        }
    }
}
