use serde::{Deserialize, Serialize};

use crate::hashing::hash64;
use crate::{Error, Result};

pub const DEFAULT_BUCKETS: usize = 10_007;

/// Hashed n-gram featurization settings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub buckets: usize,
    pub seed: u64,
    pub orders: Vec<usize>,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            buckets: DEFAULT_BUCKETS,
            seed: 0,
            orders: vec![1, 2],
        }
    }
}

impl FeatureConfig {
    pub fn new(buckets: usize, seed: u64) -> Result<Self> {
        let cfg = FeatureConfig {
            buckets,
            seed,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.buckets < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 hash buckets, got {}",
                self.buckets
            )));
        }
        if self.buckets > u32::MAX as usize {
            return Err(Error::InvalidParameter("too many hash buckets".into()));
        }
        if self.orders.is_empty() || self.orders.contains(&0) {
            return Err(Error::InvalidParameter("n-gram orders must be positive".into()));
        }
        Ok(())
    }

    pub fn bucket_of(&self, ngram: &str) -> u32 {
        (hash64(ngram.as_bytes(), self.seed) % self.buckets as u64) as u32
    }
}

/// Lowercased word n-grams of the configured orders, words joined by a space.
pub fn ngrams(text: &str, orders: &[usize]) -> Vec<String> {
    let words: Vec<String> = text.split_whitespace().map(str::to_lowercase).collect();
    let mut out = Vec::new();
    for &n in orders {
        if n == 0 || words.len() < n {
            continue;
        }
        out.extend(words.windows(n).map(|w| w.join(" ")));
    }
    out
}

/// Sparse bucket counts: `(bucket, count)` pairs in ascending bucket order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashedNgramFeatures {
    pub buckets: usize,
    pub seed: u64,
    pub counts: Vec<(u32, u32)>,
    pub total: u64,
}

impl HashedNgramFeatures {
    pub fn dense(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.buckets];
        for &(b, c) in &self.counts {
            v[b as usize] += c as u64;
        }
        v
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }
}

pub fn featurize(text: &str, config: &FeatureConfig) -> HashedNgramFeatures {
    let mut buckets: Vec<u32> = ngrams(text, &config.orders)
        .iter()
        .map(|g| config.bucket_of(g))
        .collect();
    buckets.sort_unstable();
    let total = buckets.len() as u64;
    let mut counts: Vec<(u32, u32)> = Vec::new();
    for b in buckets {
        match counts.last_mut() {
            Some((last, c)) if *last == b => *c += 1,
            _ => counts.push((b, 1)),
        }
    }
    HashedNgramFeatures {
        buckets: config.buckets,
        seed: config.seed,
        counts,
        total,
    }
}
