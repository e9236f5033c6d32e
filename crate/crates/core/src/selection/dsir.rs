use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Gumbel;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::distribution::{fit_features, importance_log_weight, NgramDistribution};
use super::features::{featurize, FeatureConfig, HashedNgramFeatures, DEFAULT_BUCKETS};
use crate::corpus::Document;
use crate::hashing::digest_hex;
use crate::{Error, Result};

pub const DEFAULT_RATE: f64 = 0.95;
pub const DEFAULT_SMOOTHING: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionMode {
    Corpus,
    #[default]
    PerSource,
}

impl FromStr for SelectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "corpus" => Ok(SelectionMode::Corpus),
            "per-source" | "source" => Ok(SelectionMode::PerSource),
            _ => Err(Error::InvalidParameter(format!("unknown selection mode `{s}`"))),
        }
    }
}

impl fmt::Display for SelectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionMode::Corpus => "corpus",
            SelectionMode::PerSource => "per-source",
        })
    }
}

/// Target documents come from files or from an attribute predicate over the corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetSpec {
    Paths(Vec<PathBuf>),
    Predicate(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectionPlan {
    #[serde(default)]
    pub mode: SelectionMode,
    #[serde(default = "default_rate")]
    pub rate: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_buckets", alias = "B")]
    pub buckets: usize,
    #[serde(default = "default_orders")]
    pub ngram_orders: Vec<usize>,
    #[serde(default = "default_smoothing")]
    pub smoothing: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetSpec>,
}

fn default_rate() -> f64 {
    DEFAULT_RATE
}
fn default_buckets() -> usize {
    DEFAULT_BUCKETS
}
fn default_orders() -> Vec<usize> {
    vec![1, 2]
}
fn default_smoothing() -> f64 {
    DEFAULT_SMOOTHING
}

impl Default for SelectionPlan {
    fn default() -> Self {
        SelectionPlan {
            mode: SelectionMode::default(),
            rate: DEFAULT_RATE,
            seed: 0,
            buckets: DEFAULT_BUCKETS,
            ngram_orders: default_orders(),
            smoothing: DEFAULT_SMOOTHING,
            target: None,
        }
    }
}

impl SelectionPlan {
    pub fn validate(&self) -> Result<()> {
        if !(self.rate > 0.0 && self.rate <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "selection rate must be in (0, 1], got {}",
                self.rate
            )));
        }
        if !(self.smoothing > 0.0) || !self.smoothing.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "smoothing must be positive and finite, got {}",
                self.smoothing
            )));
        }
        self.features().validate()
    }

    pub fn features(&self) -> FeatureConfig {
        FeatureConfig {
            buckets: self.buckets,
            seed: self.seed,
            orders: self.ngram_orders.clone(),
        }
    }
}

/// `ceil(rate * n)`, guarded against float noise just above an integer.
pub fn selection_quota(rate: f64, n: usize) -> usize {
    ((rate * n as f64 - 1e-9).ceil().max(0.0) as usize).min(n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRecord {
    pub id: String,
    pub source: String,
    pub log_weight: f64,
    pub selected: bool,
}

#[derive(Debug, Clone)]
pub struct SelectionOutcome {
    /// Selected documents in input order.
    pub selected: Vec<Document>,
    /// One record per input document, in input order.
    pub report: Vec<SelectionRecord>,
    pub target: NgramDistribution,
}

fn featurize_all(docs: &[Document], cfg: &FeatureConfig) -> Vec<HashedNgramFeatures> {
    docs.par_iter().map(|d| featurize(&d.text, cfg)).collect()
}

fn ids_digest<'a>(ids: impl Iterator<Item = &'a str>) -> String {
    let mut buf = Vec::new();
    for id in ids {
        buf.extend_from_slice(id.as_bytes());
        buf.push(0);
    }
    digest_hex(&buf)
}

pub fn fit_target(target: &[Document], plan: &SelectionPlan) -> Result<NgramDistribution> {
    if target.is_empty() {
        return Err(Error::EmptyCorpus("empty target"));
    }
    let cfg = plan.features();
    let feats = featurize_all(target, &cfg);
    fit_features(&feats, &cfg, plan.smoothing, &ids_digest(target.iter().map(|d| d.id.as_str())))
}

/// Groups of document indices that share a raw distribution, keyed by source
/// in per-source mode.
fn groups(corpus: &[Document], mode: SelectionMode) -> BTreeMap<&str, Vec<usize>> {
    let mut out: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, d) in corpus.iter().enumerate() {
        let key = match mode {
            SelectionMode::Corpus => "",
            SelectionMode::PerSource => d.source.as_str(),
        };
        out.entry(key).or_default().push(i);
    }
    out
}

/// Log-importance weights of every corpus document against `target`.
pub fn log_weights(corpus: &[Document], target: &NgramDistribution, plan: &SelectionPlan) -> Result<Vec<f64>> {
    let cfg = plan.features();
    let feats = featurize_all(corpus, &cfg);
    let mut weights = vec![0.0; corpus.len()];
    for members in groups(corpus, plan.mode).values() {
        let ids = ids_digest(members.iter().map(|&i| corpus[i].id.as_str()));
        let raw = fit_features(members.iter().map(|&i| &feats[i]), &cfg, plan.smoothing, &ids)?;
        let w: Vec<f64> = members
            .par_iter()
            .map(|&i| importance_log_weight(&feats[i], target, &raw))
            .collect::<Result<_>>()?;
        for (&i, w) in members.iter().zip(w) {
            weights[i] = w;
        }
    }
    Ok(weights)
}

/// Importance resampling by Gumbel-top-k over log-weights.
pub fn dsir_select(corpus: Vec<Document>, plan: &SelectionPlan, target: &[Document]) -> Result<SelectionOutcome> {
    plan.validate()?;
    let target = fit_target(target, plan)?;
    let weights = log_weights(&corpus, &target, plan)?;

    let gumbel = Gumbel::new(0.0, 1.0).expect("unit Gumbel");
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let keys: Vec<f64> = weights.iter().map(|w| w + rng.sample(gumbel)).collect();

    let mut chosen = vec![false; corpus.len()];
    for members in groups(&corpus, plan.mode).values() {
        let k = selection_quota(plan.rate, members.len());
        let mut order = members.clone();
        order.sort_by(|&a, &b| keys[b].total_cmp(&keys[a]).then(a.cmp(&b)));
        for &i in &order[..k] {
            chosen[i] = true;
        }
    }

    let report = corpus
        .iter()
        .zip(&weights)
        .zip(&chosen)
        .map(|((d, &log_weight), &selected)| SelectionRecord {
            id: d.id.clone(),
            source: d.source.clone(),
            log_weight,
            selected,
        })
        .collect();
    let selected = corpus
        .into_iter()
        .zip(&chosen)
        .filter_map(|(d, &c)| c.then_some(d))
        .collect();
    Ok(SelectionOutcome { selected, report, target })
}

/// Summary of the corpus log-weight distribution against one candidate target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetComparison {
    pub target: String,
    pub target_docs: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub median: f64,
    pub max: f64,
    /// KL(raw || target) over hashed n-gram buckets.
    pub kl_raw_to_target: f64,
}

/// Scores the same corpus against several candidate targets side by side.
pub fn compare_targets(
    corpus: &[Document],
    plan: &SelectionPlan,
    targets: &[(String, Vec<Document>)],
) -> Result<Vec<TargetComparison>> {
    plan.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus("cannot compare targets on an empty corpus"));
    }
    let cfg = plan.features();
    let feats = featurize_all(corpus, &cfg);
    let raw = fit_features(&feats, &cfg, plan.smoothing, "raw")?;
    targets
        .iter()
        .map(|(name, docs)| {
            let target = fit_target(docs, plan)?;
            let mut w = log_weights(corpus, &target, plan)?;
            w.sort_by(f64::total_cmp);
            let n = w.len() as f64;
            let mean = w.iter().sum::<f64>() / n;
            let var = w.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
            let mid = w.len() / 2;
            let median = if w.len() % 2 == 1 { w[mid] } else { (w[mid - 1] + w[mid]) / 2.0 };
            Ok(TargetComparison {
                target: name.clone(),
                target_docs: docs.len(),
                mean,
                std_dev: var.sqrt(),
                min: w[0],
                median,
                max: w[w.len() - 1],
                kl_raw_to_target: super::distribution::kl_divergence(&raw, &target)?,
            })
        })
        .collect()
}
