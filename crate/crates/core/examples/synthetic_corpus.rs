//! Generates a small planted-effect corpus and its ground-truth sidecar.
//!
//! `cargo run --example synthetic_corpus`

use noveltyscope::synth::{generate, Link, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SynthConfig {
        n_fandoms: 2,
        works_per_fandom: 150,
        link: Link::UShape { term: -2.0, topic: -1.0, term_sq: 0.0, topic_sq: 12.0 },
        ..SynthConfig::default()
    };
    let corpus = generate(&cfg)?;
    println!("{} works, vocabulary of {} words", corpus.works.len(), cfg.vocab_size());

    let scored: Vec<_> = corpus.truth.works.iter().filter_map(|w| w.true_novelty_term.zip(w.true_novelty_topic)).collect();
    let n = scored.len() as f64;
    println!(
        "{} works have true scores; mean term {:.3}, mean topic {:.3}",
        scored.len(),
        scored.iter().map(|s| s.0).sum::<f64>() / n,
        scored.iter().map(|s| s.1).sum::<f64>() / n
    );
    let outliers = corpus.truth.works.iter().filter(|w| w.outlier).count();
    println!("{outliers} planted outliers");
    for (f, e) in &corpus.truth.meta.fandom_effects {
        println!("{f}: fandom effect {e:+.3}");
    }

    let dir = std::env::temp_dir().join("noveltyscope-synth-example");
    std::fs::create_dir_all(&dir)?;
    corpus.write_corpus(std::fs::File::create(dir.join("corpus.jsonl"))?)?;
    corpus.truth.write(std::fs::File::create(dir.join("corpus.jsonl.truth.jsonl"))?)?;
    println!("wrote {}", dir.display());
    Ok(())
}
