//! Runs every pipeline command on a fresh synthetic corpus in a temporary
//! directory and prints the collated report.
//!
//! `cargo run --release --example full_pipeline`

use noveltyscope::pipeline::{run_all, PipelineConfig, REPORT};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let mut config = PipelineConfig::default();
    config.lda.k = 20;
    config.stats.n_boot = 200;
    config.synth.works_per_fandom = 250;
    let rc = config.resolve(dir.path(), None)?;
    for summary in run_all(&rc, true)? {
        print!("{summary}");
    }
    println!();
    println!("{}", std::fs::read_to_string(rc.out_dir.join(REPORT))?);
    Ok(())
}
