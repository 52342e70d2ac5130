//! Windowed novelty scoring for grouped document corpora, and the
//! statistical models that relate novelty to reception.

pub mod corpus;
pub mod novelty;
pub mod pipeline;
pub mod stats;
pub mod synth;
pub mod term;
pub mod text;
pub mod topic;
