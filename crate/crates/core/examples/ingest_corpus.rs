//! Ingests a few JSON lines, shows what was rejected and applies the
//! default filter.
//!
//! `cargo run --example ingest_corpus`

use noveltyscope::corpus::{CorpusStore, FilterSpec, Response};

fn line(id: &str, fandom: &str, date: &str, words: usize, kudos: u64) -> String {
    let text = vec!["lorem"; words].join(" ");
    serde_json::json!({
        "id": id, "fandom": fandom, "author": "someone", "title": id, "text": text,
        "chapters": 2, "publish_date": date, "update_date": date,
        "rating": "Teen And Up Audiences", "category": "Gen",
        "archive_warnings": ["No Archive Warnings Apply"], "relationships": [],
        "kudos": kudos, "comments": 3, "hits": 400, "bookmarks": 5
    })
    .to_string()
}

fn main() {
    let lines = [
        line("a1", "Alpha", "2016-02-01", 700, 40),
        line("a2", "Alpha", "2016-03-01", 300, 12),
        line("b1", "Beta", "2009-05-01", 900, 7),
        "{not json".to_string(),
        line("a1", "Alpha", "2016-04-01", 800, 1),
    ];
    let store = CorpusStore::ingest_lines(lines.iter().map(String::as_str));
    println!("{} lines read, {} works kept", store.lines_read(), store.len());
    for r in store.rejects() {
        println!("rejected line {}: {}", r.line, r.reason);
    }

    let filter = FilterSpec::default();
    let kept = store.filter_works(&filter);
    println!("filter {}: {} of {} works pass", filter.describe(), kept.len(), store.len());
    for w in kept.iter() {
        let pc = w.per_chapter_response();
        println!(
            "{} {} {} words, {:.1} {} per chapter",
            w.id,
            w.fandom,
            w.word_count,
            pc.get(Response::Kudos),
            Response::Kudos.name()
        );
    }
}
