use serde::{Deserialize, Serialize};

use super::features::{featurize, FeatureConfig, HashedNgramFeatures};
use crate::corpus::Document;
use crate::hashing::digest_hex;
use crate::{Error, Result};

/// Additively smoothed categorical distribution over hash buckets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NgramDistribution {
    pub log_probs: Vec<f64>,
    pub smoothing: f64,
    pub buckets: usize,
    pub seed: u64,
    /// Digest of the fitted document ids.
    pub fitted_on: String,
}

impl NgramDistribution {
    /// `log((c_j + alpha) / (sum c + alpha * B))` for aggregate counts `c`.
    pub fn from_counts(counts: &[u64], smoothing: f64, seed: u64, fitted_on: String) -> Result<Self> {
        if !(smoothing > 0.0) || !smoothing.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "smoothing must be positive and finite, got {smoothing}"
            )));
        }
        let total: f64 = counts.iter().map(|&c| c as f64).sum();
        let denom = (total + smoothing * counts.len() as f64).ln();
        let log_probs = counts
            .iter()
            .map(|&c| (c as f64 + smoothing).ln() - denom)
            .collect();
        Ok(NgramDistribution {
            log_probs,
            smoothing,
            buckets: counts.len(),
            seed,
            fitted_on,
        })
    }

    pub fn probs(&self) -> Vec<f64> {
        self.log_probs.iter().map(|l| l.exp()).collect()
    }

    pub fn compatible(&self, other: &NgramDistribution) -> Result<()> {
        if self.buckets != other.buckets || self.seed != other.seed {
            return Err(Error::FeaturizationMismatch(format!(
                "({} buckets, seed {}) vs ({} buckets, seed {})",
                self.buckets, self.seed, other.buckets, other.seed
            )));
        }
        Ok(())
    }
}

/// Sums sparse features into dense bucket counts.
pub fn aggregate<'a, I>(features: I, buckets: usize) -> Vec<u64>
where
    I: IntoIterator<Item = &'a HashedNgramFeatures>,
{
    let mut counts = vec![0u64; buckets];
    for f in features {
        for &(b, c) in &f.counts {
            counts[b as usize] += c as u64;
        }
    }
    counts
}

pub fn fit_distribution<'a, I>(corpus: I, config: &FeatureConfig, smoothing: f64) -> Result<NgramDistribution>
where
    I: IntoIterator<Item = &'a Document>,
{
    config.validate()?;
    let mut counts = vec![0u64; config.buckets];
    let mut ids = Vec::new();
    let mut n = 0usize;
    for doc in corpus {
        n += 1;
        ids.extend_from_slice(doc.id.as_bytes());
        ids.push(0);
        for (b, c) in featurize(&doc.text, config).counts {
            counts[b as usize] += c as u64;
        }
    }
    if n == 0 {
        return Err(Error::EmptyCorpus("cannot fit a distribution to no documents"));
    }
    NgramDistribution::from_counts(&counts, smoothing, config.seed, digest_hex(&ids))
}

/// Fits from precomputed features, all produced with `config`.
pub fn fit_features<'a, I>(features: I, config: &FeatureConfig, smoothing: f64, fitted_on: &str) -> Result<NgramDistribution>
where
    I: IntoIterator<Item = &'a HashedNgramFeatures>,
{
    let mut n = 0usize;
    let counts = aggregate(features.into_iter().inspect(|_| n += 1), config.buckets);
    if n == 0 {
        return Err(Error::EmptyCorpus("cannot fit a distribution to no documents"));
    }
    NgramDistribution::from_counts(&counts, smoothing, config.seed, fitted_on.to_string())
}

/// `sum_j count_j * (log p_target[j] - log p_raw[j])`.
pub fn importance_log_weight(
    features: &HashedNgramFeatures,
    target: &NgramDistribution,
    raw: &NgramDistribution,
) -> Result<f64> {
    target.compatible(raw)?;
    if features.buckets != target.buckets || features.seed != target.seed {
        return Err(Error::FeaturizationMismatch(format!(
            "features ({} buckets, seed {}) vs distributions ({} buckets, seed {})",
            features.buckets, features.seed, target.buckets, target.seed
        )));
    }
    Ok(features
        .counts
        .iter()
        .map(|&(b, c)| c as f64 * (target.log_probs[b as usize] - raw.log_probs[b as usize]))
        .sum())
}

/// `KL(p || q)` in nats.
pub fn kl_divergence(p: &NgramDistribution, q: &NgramDistribution) -> Result<f64> {
    p.compatible(q)?;
    Ok(p
        .log_probs
        .iter()
        .zip(&q.log_probs)
        .map(|(lp, lq)| lp.exp() * (lp - lq))
        .sum())
}
