use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ngram_lm::NgramLm;
use crate::corpus::Document;
use crate::{Error, Result};

/// One line of the perplexity report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerplexityRecord {
    pub id: String,
    pub perplexity: f64,
    pub kept: bool,
}

/// Keeps documents whose per-token perplexity is at most `threshold`.
/// Use `f64::INFINITY` to keep everything while still scoring.
pub fn perplexity_filter(
    corpus: Vec<Document>,
    model: &NgramLm,
    threshold: f64,
) -> Result<(Vec<Document>, Vec<PerplexityRecord>)> {
    if !(threshold > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "perplexity threshold must be positive, got {threshold}"
        )));
    }
    let scores: Vec<f64> = corpus.par_iter().map(|d| model.perplexity(&d.text)).collect();
    let mut kept = Vec::with_capacity(corpus.len());
    let mut report = Vec::with_capacity(corpus.len());
    for (doc, perplexity) in corpus.into_iter().zip(scores) {
        let keep = perplexity <= threshold;
        report.push(PerplexityRecord {
            id: doc.id.clone(),
            perplexity,
            kept: keep,
        });
        if keep {
            kept.push(doc);
        }
    }
    Ok((kept, report))
}
