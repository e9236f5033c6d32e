use std::collections::{HashMap, HashSet};
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::weights::{WeightEntry, WeightMethod, WeightVector};
use crate::corpus::{SourceStats, TokenizerScheme};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketAllocation {
    pub name: String,
    pub tokens: u64,
    pub weight: f64,
    pub quota: u64,
    /// `quota / tokens`.
    pub epochs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureManifest {
    pub method: WeightMethod,
    #[serde(default)]
    pub params: Map<String, Value>,
    pub seed: u64,
    pub tokenizer: TokenizerScheme,
    pub budget: u64,
    pub buckets: Vec<BucketAllocation>,
}

impl MixtureManifest {
    pub fn weights(&self) -> Result<WeightVector> {
        WeightVector::new(
            self.method,
            self.buckets
                .iter()
                .map(|b| WeightEntry { name: b.name.clone(), weight: b.weight })
                .collect(),
            self.params.clone(),
        )
    }

    pub fn bucket(&self, name: &str) -> Option<&BucketAllocation> {
        self.buckets.iter().find(|b| b.name == name)
    }

    /// CSV table: bucket, tokens, weight, quota, epochs.
    pub fn write_table<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["bucket", "tokens", "weight", "quota", "epochs"])?;
        for b in &self.buckets {
            w.write_record([
                b.name.clone(),
                b.tokens.to_string(),
                format!("{:.6}", b.weight),
                b.quota.to_string(),
                format!("{:.4}", b.epochs),
            ])?;
        }
        w.flush().map_err(Error::from)
    }
}

/// Rounds `weights * total` to integers summing exactly to `total`; every
/// result is within one of its real share. Remainder ties go to the earlier entry.
pub fn largest_remainder(weights: &[f64], total: u64) -> Vec<u64> {
    let exact: Vec<f64> = weights.iter().map(|w| w * total as f64).collect();
    let mut quotas: Vec<u64> = exact.iter().map(|x| x.floor() as u64).collect();
    let assigned: u64 = quotas.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let short = total.saturating_sub(assigned) as usize;
    for &i in order.iter().cycle().take(short) {
        quotas[i] += 1;
    }
    quotas
}

pub fn emit_manifest(
    weights: &WeightVector,
    stats: &[SourceStats],
    budget: u64,
    seed: u64,
    tokenizer: TokenizerScheme,
) -> Result<MixtureManifest> {
    let tokens: HashMap<&str, u64> = stats.iter().map(|s| (s.source.as_str(), s.token_count)).collect();
    let names: HashSet<&str> = weights.names().into_iter().collect();
    let stat_names: HashSet<&str> = tokens.keys().copied().collect();
    if names != stat_names || stats.len() != stat_names.len() {
        let mut missing: Vec<&str> = names.symmetric_difference(&stat_names).copied().collect();
        missing.sort_unstable();
        return Err(Error::NameMismatch(format!(
            "weights and bucket stats disagree on {}",
            if missing.is_empty() { "duplicate names".to_string() } else { missing.join(", ") }
        )));
    }
    let quotas = largest_remainder(&weights.weights(), budget);
    let buckets = weights
        .entries
        .iter()
        .zip(quotas)
        .map(|(e, quota)| {
            let t = tokens[e.name.as_str()];
            if t == 0 && quota > 0 {
                return Err(Error::InvalidParameter(format!(
                    "bucket `{}` has no tokens but a quota of {quota}",
                    e.name
                )));
            }
            Ok(BucketAllocation {
                name: e.name.clone(),
                tokens: t,
                weight: e.weight,
                quota,
                epochs: if t == 0 { 0.0 } else { quota as f64 / t as f64 },
            })
        })
        .collect::<Result<_>>()?;
    Ok(MixtureManifest {
        method: weights.method,
        params: weights.params.clone(),
        seed,
        tokenizer,
        budget,
        buckets,
    })
}
