use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::corpus::SourceStats;
use crate::{Error, Result};

pub const SIMPLEX_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_ALPHA: f64 = 1.3;
pub const DEFAULT_SOURCE_EPOCH_CAP: f64 = 1.0;
pub const DEFAULT_BUCKET_EPOCH_CAP: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMethod {
    Alpha,
    Unimax,
    Doremi,
    Preference,
    Proportional,
}

impl WeightMethod {
    pub fn name(self) -> &'static str {
        match self {
            WeightMethod::Alpha => "alpha",
            WeightMethod::Unimax => "unimax",
            WeightMethod::Doremi => "doremi",
            WeightMethod::Preference => "preference",
            WeightMethod::Proportional => "proportional",
        }
    }
}

impl fmt::Display for WeightMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeightMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "alpha" => Ok(WeightMethod::Alpha),
            "unimax" => Ok(WeightMethod::Unimax),
            "doremi" => Ok(WeightMethod::Doremi),
            "preference" => Ok(WeightMethod::Preference),
            "proportional" => Ok(WeightMethod::Proportional),
            _ => Err(Error::InvalidParameter(format!("unknown weighting method `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub name: String,
    pub weight: f64,
}

/// Sampling weights over named buckets, in a fixed order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeightVector")]
pub struct WeightVector {
    pub method: WeightMethod,
    #[serde(default)]
    pub params: Map<String, Value>,
    pub entries: Vec<WeightEntry>,
}

#[derive(Deserialize)]
struct RawWeightVector {
    method: WeightMethod,
    #[serde(default)]
    params: Map<String, Value>,
    entries: Vec<WeightEntry>,
}

impl TryFrom<RawWeightVector> for WeightVector {
    type Error = Error;

    fn try_from(raw: RawWeightVector) -> Result<Self> {
        WeightVector::new(raw.method, raw.entries, raw.params)
    }
}

impl WeightVector {
    /// Validates non-empty, unique names and the simplex.
    pub fn new(method: WeightMethod, entries: Vec<WeightEntry>, params: Map<String, Value>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::NotSimplex("no entries".into()));
        }
        let mut seen = HashSet::new();
        for e in &entries {
            if !seen.insert(e.name.as_str()) {
                return Err(Error::NotSimplex(format!("duplicate bucket `{}`", e.name)));
            }
            if !(e.weight >= 0.0) || !e.weight.is_finite() {
                return Err(Error::NotSimplex(format!("weight of `{}` is {}", e.name, e.weight)));
            }
        }
        let sum: f64 = entries.iter().map(|e| e.weight).sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::NotSimplex(format!("weights sum to {sum}")));
        }
        Ok(WeightVector { method, params, entries })
    }

    pub fn from_pairs<S: Into<String>>(
        method: WeightMethod,
        pairs: impl IntoIterator<Item = (S, f64)>,
        params: Map<String, Value>,
    ) -> Result<Self> {
        let entries = pairs
            .into_iter()
            .map(|(name, weight)| WeightEntry { name: name.into(), weight })
            .collect();
        WeightVector::new(method, entries, params)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.weight)
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.weight).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn params(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

/// Drops zero-token entries with a warning; every weighting method expects
/// positive token counts.
pub fn drop_empty(stats: &[SourceStats]) -> Vec<SourceStats> {
    stats
        .iter()
        .filter(|s| {
            if s.token_count == 0 {
                log::warn!("dropping `{}`: it has no tokens", s.source);
            }
            s.token_count > 0
        })
        .cloned()
        .collect()
}

fn check_positive(stats: &[SourceStats]) -> Result<()> {
    if stats.is_empty() {
        return Err(Error::EmptyCorpus("no sources to weight"));
    }
    match stats.iter().find(|s| s.token_count == 0) {
        Some(s) => Err(Error::InvalidParameter(format!("source `{}` has zero tokens", s.source))),
        None => Ok(()),
    }
}

/// `a_k = t_k^alpha / sum_j t_j^alpha`, evaluated in log space.
pub fn alpha_weights(stats: &[SourceStats], alpha: f64) -> Result<WeightVector> {
    check_positive(stats)?;
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha must be finite and non-negative, got {alpha}")));
    }
    let logs: Vec<f64> = stats.iter().map(|s| alpha * (s.token_count as f64).ln()).collect();
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + logs.iter().map(|l| (l - max).exp()).sum::<f64>().ln();
    WeightVector::from_pairs(
        WeightMethod::Alpha,
        stats.iter().zip(&logs).map(|(s, l)| (s.source.clone(), (l - lse).exp())),
        params(json!({ "alpha": alpha })),
    )
}

pub fn proportional_weights(stats: &[SourceStats]) -> Result<WeightVector> {
    let mut w = alpha_weights(stats, 1.0)?;
    w.method = WeightMethod::Proportional;
    w.params = Map::new();
    Ok(w)
}

/// Hand-set weights; only the simplex is checked.
pub fn preference_weights<S: Into<String>>(pairs: impl IntoIterator<Item = (S, f64)>) -> Result<WeightVector> {
    WeightVector::from_pairs(WeightMethod::Preference, pairs, Map::new())
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnimaxOutcome {
    pub weights: WeightVector,
    /// Token allocations in input order.
    pub allocations: Vec<f64>,
    /// Total capacity fell short of the budget.
    pub under_budget: bool,
}

/// Uniform allocation of `budget` tokens, capped at `epoch_cap` epochs per
/// source, by ascending-capacity waterfilling. The result does not depend on
/// input order.
pub fn unimax_weights(stats: &[SourceStats], budget: f64, epoch_cap: f64) -> Result<UnimaxOutcome> {
    if stats.is_empty() {
        return Err(Error::EmptyCorpus("no sources to weight"));
    }
    if !(budget > 0.0) || !budget.is_finite() {
        return Err(Error::InvalidParameter(format!("budget must be positive, got {budget}")));
    }
    if !(epoch_cap > 0.0) {
        return Err(Error::InvalidParameter(format!("epoch cap must be positive, got {epoch_cap}")));
    }
    let capacity = |s: &SourceStats| {
        if epoch_cap.is_infinite() {
            f64::INFINITY
        } else {
            epoch_cap * s.token_count as f64
        }
    };
    let mut order: Vec<usize> = (0..stats.len()).collect();
    order.sort_by(|&a, &b| {
        capacity(&stats[a])
            .total_cmp(&capacity(&stats[b]))
            .then_with(|| stats[a].source.cmp(&stats[b].source))
    });
    let mut allocations = vec![0.0; stats.len()];
    let mut remaining = budget;
    for (done, &i) in order.iter().enumerate() {
        let share = remaining / (order.len() - done) as f64;
        let b = capacity(&stats[i]).min(share);
        allocations[i] = b;
        remaining -= b;
    }
    let total: f64 = allocations.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidParameter("every source has zero capacity".into()));
    }
    let under_budget = total < budget * (1.0 - 1e-12);
    if under_budget {
        log::warn!("total capacity {total} is below the budget {budget}; weights are normalized capacities");
    }
    let weights = WeightVector::from_pairs(
        WeightMethod::Unimax,
        stats.iter().zip(&allocations).map(|(s, b)| (s.source.clone(), b / total)),
        params(json!({
            "budget": budget,
            "epoch_cap": if epoch_cap.is_infinite() { Value::from("inf") } else { Value::from(epoch_cap) },
            "under_budget": under_budget,
        })),
    )?;
    Ok(UnimaxOutcome { weights, allocations, under_budget })
}
