//! Scores term novelty against the trailing six-month window of each fandom.
//!
//! `cargo run --example term_novelty`

use noveltyscope::corpus::CorpusStore;
use noveltyscope::novelty::Score;
use noveltyscope::synth::{generate, SynthConfig};
use noveltyscope::term::{score_all_term, TermConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let synth = SynthConfig { n_fandoms: 2, works_per_fandom: 200, ..SynthConfig::default() };
    let store = CorpusStore::from_works(generate(&synth)?.works)?;
    let cfg = TermConfig::default();
    let records = score_all_term(&store, &cfg)?;

    let scored: Vec<f64> = records.iter().filter_map(|r| r.term()).collect();
    let unscored = records.iter().filter(|r| r.s_term == Some(Score::Unscored)).count();
    println!(
        "{} works: {} scored, {} with fewer than {} works in the window",
        records.len(),
        scored.len(),
        unscored,
        cfg.min_window
    );
    let mut by_score: Vec<_> = records.iter().filter(|r| r.term().is_some()).collect();
    by_score.sort_by(|a, b| b.term().partial_cmp(&a.term()).unwrap());
    println!("most novel:");
    for r in by_score.iter().take(5) {
        println!("  {} {} {} s_term={:.4} window={}", r.work_id, r.fandom, r.publish_date, r.term().unwrap(), r.window_size);
    }
    println!("least novel:");
    for r in by_score.iter().rev().take(3) {
        println!("  {} {} s_term={:.4}", r.work_id, r.fandom, r.term().unwrap());
    }
    Ok(())
}
