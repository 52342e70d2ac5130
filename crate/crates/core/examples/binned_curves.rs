//! Mean fandom-relative log z-score of kudos per term-novelty bin, with
//! bootstrap intervals.
//!
//! `cargo run --release --example binned_curves`

use std::collections::HashMap;

use noveltyscope::corpus::{CorpusStore, Response};
use noveltyscope::stats::binned::binned_curve;
use noveltyscope::stats::zscore::log_zscore_by_fandom;
use noveltyscope::synth::{generate, SynthConfig};
use noveltyscope::term::{score_all_term, TermConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let store = CorpusStore::from_works(generate(&SynthConfig { works_per_fandom: 300, ..SynthConfig::default() })?.works)?;
    let records = score_all_term(&store, &TermConfig::default())?;

    let works = store.works();
    let fandoms: Vec<&str> = works.iter().map(|w| w.fandom.as_str()).collect();
    let kudos: Vec<f64> = works.iter().map(|w| w.per_chapter_response().get(Response::Kudos)).collect();
    let z: HashMap<&str, f64> = works
        .iter()
        .zip(log_zscore_by_fandom(&kudos, &fandoms)?)
        .filter_map(|(w, s)| Some((w.id.as_str(), s.value()?)))
        .collect();

    let (nov, zv): (Vec<f64>, Vec<f64>) = records
        .iter()
        .filter_map(|r| Some((r.term()?, *z.get(r.work_id.as_str())?)))
        .unzip();
    for width in [0.1, 0.05] {
        let curve = binned_curve(&nov, &zv, width, 1000, 42)?;
        println!("bin width {width}");
        for b in curve.bins.iter().filter(|b| b.count > 0) {
            let (lo, hi) = b.ci.unwrap();
            println!("  [{:.2}, {:.2})  n={:<4} z={:+.3}  [{lo:+.3}, {hi:+.3}]", b.lo, b.hi, b.count, b.mean.unwrap());
        }
    }
    Ok(())
}
