use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tables::{Axis, AttributeAxis, CrossTab};
use crate::corpus::{bin_index, bin_labels, Attribute, Document, Quality, ToxicityBins};
use crate::curation::NgramLm;
use crate::{Error, Result};

pub const DEFAULT_PERPLEXITY_EDGES: [f64; 4] = [0.0, 1000.0, 5000.0, f64::INFINITY];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityPerplexityReport {
    pub table: CrossTab,
    /// `(#High in the lowest bin + #Low in the highest bin) / (#High + #Low)`;
    /// absent when no document is High or Low.
    pub agreement: Option<f64>,
}

/// Precomputed perplexity bin per document position.
struct PerplexityAxis {
    edges: Vec<f64>,
    bins: Vec<Option<usize>>,
}

impl Axis for PerplexityAxis {
    fn name(&self) -> String {
        "perplexity".into()
    }

    fn vocabulary(&self) -> Vec<String> {
        bin_labels(&self.edges)
    }

    fn index_of(&self, pos: usize, _: &Document) -> Option<usize> {
        self.bins[pos]
    }
}

pub fn validate_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[0] < w[1])) || edges.iter().any(|e| e.is_nan()) {
        return Err(Error::InvalidParameter(format!(
            "perplexity edges must be at least two strictly increasing values, got {edges:?}"
        )));
    }
    Ok(())
}

/// Quality classes against binned model perplexity. Every bin is a column.
pub fn quality_perplexity_agreement(docs: &[Document], model: &NgramLm, edges: &[f64]) -> Result<QualityPerplexityReport> {
    validate_edges(edges)?;
    let bins: Vec<Option<usize>> = docs
        .par_iter()
        .map(|d| {
            let quality = d.attributes.as_ref().and_then(|a| a.quality);
            quality.and_then(|_| bin_index(edges, model.perplexity(&d.text)))
        })
        .collect();
    let cols = PerplexityAxis { edges: edges.to_vec(), bins };
    let quality_bins = ToxicityBins::default();
    let rows = AttributeAxis::new(Attribute::Quality, &quality_bins);
    let table = CrossTab::build(docs, &rows, &cols, true);

    let high = table.row_labels.iter().position(|l| l == Quality::High.name());
    let low = table.row_labels.iter().position(|l| l == Quality::Low.name());
    let last = table.col_labels.len() - 1;
    let hits = high.map_or(0, |r| table.counts[r][0]) + low.map_or(0, |r| table.counts[r][last]);
    let total = high.map_or(0, |r| table.row_total(r)) + low.map_or(0, |r| table.row_total(r));
    let agreement = (total > 0).then(|| hits as f64 / total as f64);
    Ok(QualityPerplexityReport { table, agreement })
}
