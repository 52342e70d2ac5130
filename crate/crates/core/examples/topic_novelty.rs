//! Fits one LDA model per fandom, prints its top words and scores topic
//! novelty as the Jensen-Shannon divergence from the window mean.
//!
//! `cargo run --release --example topic_novelty`

use noveltyscope::corpus::CorpusStore;
use noveltyscope::synth::{generate, SynthConfig};
use noveltyscope::topic::{fit_fandom, score_fandom_topic, LdaConfig, TopicConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let synth = SynthConfig { n_fandoms: 1, works_per_fandom: 300, k_true: 8, ..SynthConfig::default() };
    let store = CorpusStore::from_works(generate(&synth)?.works)?;
    let fandom = store.fandoms()[0].to_string();

    let lda = LdaConfig { k: 8, top_removed: synth.lda_top_removed, ..LdaConfig::default() };
    let model = fit_fandom(&store, &fandom, &lda)?;
    println!("{fandom}: {} topics over {} terms", model.k, model.vocabulary.len());
    for t in 0..model.k {
        let phi = model.topic_word_distribution(t);
        let mut ids: Vec<usize> = (0..phi.len()).collect();
        ids.sort_by(|&a, &b| phi[b].total_cmp(&phi[a]));
        let words: Vec<&str> = ids.iter().take(6).map(|&w| model.vocabulary.term(w as u32)).collect();
        println!("  topic {t}: {}", words.join(" "));
    }

    let records = score_fandom_topic(&store, &fandom, &model, &TopicConfig::default())?;
    let scores: Vec<f64> = records.iter().filter_map(|r| r.topic()).collect();
    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    let max = scores.iter().cloned().fold(f64::MIN, f64::max);
    println!("{} of {} works scored, mean s_topic {mean:.4}, max {max:.4}", scores.len(), records.len());
    Ok(())
}
