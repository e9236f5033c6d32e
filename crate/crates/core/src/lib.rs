//! Streaming toolkit for turning a raw multi-source document collection into a
//! pretraining mixture.
//!
//! The stages mirror the usual corpus-construction flow:
//!
//! - [`corpus`]: the document model, JSONL I/O, tokenization, and per-source statistics.
//! - [`curation`]: exact and MinHash/LSH deduplication, heuristic and code filters,
//!   and an n-gram language model used for perplexity filtering.
//! - [`selection`]: importance resampling over hashed n-gram features (DSIR).
//! - [`sampling`]: alpha, UniMax, and DoReMi weights, attribute buckets, and the
//!   final mixture manifest.
//! - [`attributes`]: label ingestion and attribute cross-tabulation reports.
//! - [`pipeline`]: config-driven orchestration with resumable, digest-tracked stages.

// `!(x > 0.0)` also rejects NaN, which is the point
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod attributes;
pub mod corpus;
pub mod curation;
mod error;
pub mod hashing;
pub mod pipeline;
pub mod sampling;
pub mod selection;

pub use error::{Error, Result};
