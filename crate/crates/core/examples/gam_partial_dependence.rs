//! Penalized spline GAM on a corpus whose planted link falls with term
//! novelty and turns up at the high end, with the partial dependence of
//! each novelty score.
//!
//! `cargo run --release --example gam_partial_dependence`

use noveltyscope::corpus::{CorpusStore, Response};
use noveltyscope::novelty::{NoveltyRecord, Score};
use noveltyscope::stats::design::{build_design, ModelSpec};
use noveltyscope::stats::gam::{fit_gam, grid, partial_dependence, GamSpec};
use noveltyscope::synth::{generate, Link, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let synth = SynthConfig {
        works_per_fandom: 500,
        link: Link::Uptick { term: -4.0, topic: -1.0, knot: 0.8, rise: 100.0 },
        ..SynthConfig::default()
    };
    let corpus = generate(&synth)?;
    let store = CorpusStore::from_works(corpus.works)?;
    // Regress on the planted scores so the example isolates the smoother.
    let rows: Vec<NoveltyRecord> = corpus
        .truth
        .works
        .iter()
        .filter_map(|t| {
            let w = store.get(&t.id)?;
            Some(NoveltyRecord {
                work_id: t.id.clone(),
                fandom: t.fandom.clone(),
                publish_date: w.publish_date,
                s_term: Some(Score::Scored(t.true_novelty_term?)),
                s_topic: Some(Score::Scored(t.true_novelty_topic?)),
                window_size: 0,
            })
        })
        .collect();
    let design = build_design(&store, &rows, &ModelSpec::default())?;
    let y: Vec<f64> = design
        .row_ids
        .iter()
        .map(|id| store.get(id).unwrap().per_chapter_response().get(Response::Kudos))
        .collect();
    let keep: Vec<usize> = (0..y.len()).filter(|&i| y[i] > 0.0).collect();
    let sub = design.subset_rows(&keep);
    let y: Vec<f64> = keep.iter().map(|&i| y[i]).collect();

    let fit = fit_gam(&sub, &y, &GamSpec::default())?;
    println!("n={} edf={:.2} sigma2={:.4}", fit.n, fit.edf, fit.sigma2);
    for var in ["s_term", "s_topic"] {
        let s = fit.smooth(var).unwrap();
        let pd = partial_dependence(&fit, var, &grid(s.lo, s.hi, 11))?;
        println!("s({var})");
        for p in &pd.points {
            println!("  x={:.3} {:+.3} [{:+.3}, {:+.3}]", p.x, p.estimate, p.lo, p.hi);
        }
    }
    Ok(())
}
