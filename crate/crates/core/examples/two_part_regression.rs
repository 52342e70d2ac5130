//! Two-part models on a planted corpus: a logistic model for whether a
//! work received any kudos and OLS on log kudos for those that did.
//!
//! `cargo run --release --example two_part_regression`

use noveltyscope::corpus::{CorpusStore, Response};
use noveltyscope::novelty::merge_scores;
use noveltyscope::stats::design::{build_design, ModelSpec};
use noveltyscope::stats::two_part::fit_two_part;
use noveltyscope::stats::vif::{vif, DEFAULT_THRESHOLD};
use noveltyscope::synth::{generate, SynthConfig};
use noveltyscope::term::{score_all_term, TermConfig};
use noveltyscope::topic::{fit_fandom, score_fandom_topic, LdaConfig, TopicConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let synth = SynthConfig { works_per_fandom: 400, ..SynthConfig::default() };
    let store = CorpusStore::from_works(generate(&synth)?.works)?;
    let term = score_all_term(&store, &TermConfig::default())?;
    let lda = LdaConfig { k: synth.k_true, top_removed: synth.lda_top_removed, ..LdaConfig::default() };
    let mut topic = Vec::new();
    for f in store.fandoms() {
        let model = fit_fandom(&store, f, &lda)?;
        topic.extend(score_fandom_topic(&store, f, &model, &TopicConfig::default())?);
    }
    let rows: Vec<_> = merge_scores(&term, &topic)?
        .into_iter()
        .filter(|r| r.term().is_some() && r.topic().is_some())
        .collect();

    let screen = build_design(&store, &rows, &ModelSpec { include_age: true, ..ModelSpec::default() })?;
    for (name, v) in vif(&screen, DEFAULT_THRESHOLD)?.entries {
        println!("VIF {name:<20} {v:.2}");
    }

    for with_squares in [false, true] {
        let design = build_design(&store, &rows, &ModelSpec { with_squares, ..ModelSpec::default() })?;
        let y: Vec<f64> = design
            .row_ids
            .iter()
            .map(|id| store.get(id).unwrap().per_chapter_response().get(Response::Kudos))
            .collect();
        let fit = fit_two_part(&design, Response::Kudos, &y)?;
        println!("\nmodel {} ({} rows, {} with kudos)", fit.model_id.0, design.n_rows(), fit.ols.fit.n);
        if let Some(l) = &fit.logistic {
            let i = l.names.iter().position(|n| n == "s_term").unwrap();
            println!("  zero stage s_term {:+.3} (se {:.3})", l.fit.coefficients[i], l.fit.std_errors[i]);
        }
        for name in ["s_term", "s_term_sq", "s_topic", "s_topic_sq", "chapters", "frequent_relationship"] {
            if let Some((b, se, (lo, hi))) = fit.ols_coefficient(name) {
                println!("  {name:<22} {b:+.3}  se {se:.3}  [{lo:+.3}, {hi:+.3}]");
            }
        }
        println!("  R2 {:.3}", fit.ols.fit.r_squared);
    }
    Ok(())
}
