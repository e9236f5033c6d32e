//! Document model, tokenization, JSONL I/O, and corpus statistics.

mod document;
mod io;
mod labels;
mod stats;
mod tokenize;

pub use document::{Document, Snapshot};
pub use io::{
    read_corpus, read_jsonl_file, write_jsonl, write_jsonl_file, DocumentReader, LineError,
    ReadOptions, ReadOutcome,
};
pub use labels::{
    bin_index, bin_labels, check_toxicity, Attribute, AttributeLabels, Domain, LabelPolicy,
    Quality, RawLabels, ToxicityBins, TypeOfSpeech, HIGH_TOXICITY, UNKNOWN, UNLIKELY_TOXIC,
};
pub use stats::{compute_stats, compute_stats_par, CorpusManifest, SourceStats, StatsAccumulator};
pub use tokenize::{count_tokens, TokenizerScheme};
