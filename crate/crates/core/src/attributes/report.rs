use std::fs::{self, File};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::agreement::{quality_perplexity_agreement, QualityPerplexityReport, DEFAULT_PERPLEXITY_EDGES};
use super::tables::{attribute_distribution, cross_tab, CrossTab, Histogram, RowOrder};
use crate::corpus::{Attribute, Document, Quality, ToxicityBins, HIGH_TOXICITY};
use crate::curation::NgramLm;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub toxicity_bins: ToxicityBins,
    /// Split point for the domain-by-toxicity table.
    pub toxicity_cutoff: f64,
    pub perplexity_edges: Vec<f64>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            toxicity_bins: ToxicityBins::default(),
            toxicity_cutoff: HIGH_TOXICITY,
            perplexity_edges: DEFAULT_PERPLEXITY_EDGES.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub documents: usize,
    pub distributions: Vec<Histogram>,
    pub domain_quality: CrossTab,
    pub domain_toxicity: CrossTab,
    pub tos_quality: CrossTab,
    pub domain_tos: CrossTab,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quality_perplexity: Option<QualityPerplexityReport>,
}

pub fn analyze(docs: &[Document], model: Option<&NgramLm>, config: &AnalysisConfig) -> Result<AnalysisReport> {
    let bins = &config.toxicity_bins;
    let high = RowOrder::ByColumn(Quality::High.name());
    let cutoff = ToxicityBins::cutoff(config.toxicity_cutoff)?;
    let toxic_label = cutoff.labels().pop().expect("two bins");
    Ok(AnalysisReport {
        documents: docs.len(),
        distributions: Attribute::ALL.iter().map(|&a| attribute_distribution(docs, a, bins)).collect(),
        domain_quality: cross_tab(docs, Attribute::Domain, Attribute::Quality, bins, high)?,
        domain_toxicity: cross_tab(docs, Attribute::Domain, Attribute::Toxicity, &cutoff, RowOrder::ByColumn(&toxic_label))?,
        tos_quality: cross_tab(docs, Attribute::TypeOfSpeech, Attribute::Quality, bins, high)?,
        domain_tos: cross_tab(docs, Attribute::Domain, Attribute::TypeOfSpeech, bins, RowOrder::Vocabulary)?,
        quality_perplexity: model
            .map(|m| quality_perplexity_agreement(docs, m, &config.perplexity_edges))
            .transpose()?,
    })
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(f))
}

/// Long format: one line per cell.
pub fn write_cross_tab(path: &Path, t: &CrossTab) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record([t.row_attribute.as_str(), t.col_attribute.as_str(), "count", "row_fraction"])?;
    for (r, row) in t.row_labels.iter().enumerate() {
        for (c, col) in t.col_labels.iter().enumerate() {
            w.write_record([
                row.clone(),
                col.clone(),
                t.counts[r][c].to_string(),
                format!("{:.6}", t.fractions[r][c]),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_distributions(path: &Path, hs: &[Histogram]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["attribute", "label", "count", "fraction"])?;
    for h in hs {
        for r in &h.rows {
            w.write_record([h.attribute.clone(), r.label.clone(), r.count.to_string(), format!("{:.6}", r.fraction)])?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes the CSV tables and `analysis.json` into `dir`; returns the paths written.
pub fn write_reports(dir: &Path, report: &AnalysisReport) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let p = dir.join("distribution.csv");
    write_distributions(&p, &report.distributions)?;
    written.push(p);
    let mut tables = vec![
        ("domain_quality.csv", &report.domain_quality),
        ("domain_toxicity.csv", &report.domain_toxicity),
        ("tos_quality.csv", &report.tos_quality),
        ("domain_tos.csv", &report.domain_tos),
    ];
    if let Some(qp) = &report.quality_perplexity {
        tables.push(("quality_perplexity.csv", &qp.table));
    }
    for (name, t) in tables {
        let p = dir.join(name);
        write_cross_tab(&p, t)?;
        written.push(p);
    }
    let p = dir.join("analysis.json");
    let f = File::create(&p).map_err(|e| Error::io(&p, e))?;
    serde_json::to_writer_pretty(f, report)?;
    written.push(p);
    Ok(written)
}
