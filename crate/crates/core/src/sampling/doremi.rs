use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::weights::{WeightMethod, WeightVector};
use crate::corpus::read_jsonl_file;
use crate::{Error, Result};

pub const DEFAULT_LEARNING_RATE: f64 = 1.0;
pub const DEFAULT_DOREMI_SMOOTHING: f64 = 1e-3;

/// Supplies per-domain excess losses, one vector per step, aligned with the
/// domain order the oracle was built for.
pub trait LossOracle {
    fn domains(&self) -> &[String];
    fn excess_losses(&mut self, step: usize) -> Result<Vec<f64>>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossRecord {
    pub step: u64,
    pub domain: String,
    pub proxy_loss: f64,
    pub reference_loss: f64,
}

/// Replays recorded proxy and reference losses. Step `i` of the loop reads the
/// `i`-th distinct step value in ascending order.
#[derive(Debug, Clone)]
pub struct FileLossOracle {
    domains: Vec<String>,
    steps: Vec<Vec<f64>>,
}

impl FileLossOracle {
    pub fn from_records(domains: &[String], records: &[LossRecord]) -> Result<Self> {
        let index: HashMap<&str, usize> = domains.iter().enumerate().map(|(i, d)| (d.as_str(), i)).collect();
        let mut by_step: BTreeMap<u64, Vec<Option<f64>>> = BTreeMap::new();
        for r in records {
            let &i = index
                .get(r.domain.as_str())
                .ok_or_else(|| Error::Oracle(format!("unknown domain `{}` at step {}", r.domain, r.step)))?;
            if !r.proxy_loss.is_finite() || !r.reference_loss.is_finite() {
                return Err(Error::Oracle(format!("non-finite loss for `{}` at step {}", r.domain, r.step)));
            }
            let row = by_step.entry(r.step).or_insert_with(|| vec![None; domains.len()]);
            if row[i].replace((r.proxy_loss - r.reference_loss).max(0.0)).is_some() {
                return Err(Error::Oracle(format!("duplicate record for `{}` at step {}", r.domain, r.step)));
            }
        }
        let steps = by_step
            .into_iter()
            .map(|(step, row)| {
                row.into_iter()
                    .zip(domains)
                    .map(|(v, d)| v.ok_or_else(|| Error::Oracle(format!("no loss for `{d}` at step {step}"))))
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(FileLossOracle { domains: domains.to_vec(), steps })
    }

    pub fn open(path: &Path, domains: &[String]) -> Result<Self> {
        let records: Vec<LossRecord> = read_jsonl_file(path)?;
        Self::from_records(domains, &records)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl LossOracle for FileLossOracle {
    fn domains(&self) -> &[String] {
        &self.domains
    }

    fn excess_losses(&mut self, step: usize) -> Result<Vec<f64>> {
        self.steps
            .get(step)
            .cloned()
            .ok_or_else(|| Error::Oracle(format!("loss file has {} steps, step {} requested", self.steps.len(), step + 1)))
    }
}

/// Fixed excess losses, optionally perturbed by seeded uniform noise.
#[derive(Debug, Clone)]
pub struct SyntheticOracle {
    domains: Vec<String>,
    base: Vec<f64>,
    noise: f64,
    rng: ChaCha8Rng,
}

impl SyntheticOracle {
    pub fn constant(domains: &[String], base: Vec<f64>) -> Result<Self> {
        Self::noisy(domains, base, 0.0, 0)
    }

    pub fn noisy(domains: &[String], base: Vec<f64>, noise: f64, seed: u64) -> Result<Self> {
        if base.len() != domains.len() {
            return Err(Error::Oracle(format!("{} losses for {} domains", base.len(), domains.len())));
        }
        Ok(SyntheticOracle {
            domains: domains.to_vec(),
            base,
            noise,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }
}

impl LossOracle for SyntheticOracle {
    fn domains(&self) -> &[String] {
        &self.domains
    }

    fn excess_losses(&mut self, _step: usize) -> Result<Vec<f64>> {
        let noise = self.noise;
        let rng = &mut self.rng;
        Ok(self
            .base
            .iter()
            .map(|b| if noise > 0.0 { b + noise * rng.random_range(-1.0..1.0) } else { *b })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoremiConfig {
    pub steps: usize,
    pub learning_rate: f64,
    pub smoothing: f64,
    /// Uniform when absent.
    pub init: Option<Vec<f64>>,
}

impl Default for DoremiConfig {
    fn default() -> Self {
        DoremiConfig {
            steps: 100,
            learning_rate: DEFAULT_LEARNING_RATE,
            smoothing: DEFAULT_DOREMI_SMOOTHING,
            init: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoremiState {
    pub step: usize,
    pub learning_rate: f64,
    pub smoothing: f64,
    pub excess_losses: Vec<f64>,
    pub weights: Vec<f64>,
    pub running_average: Vec<f64>,
}

/// Exponentiated-gradient updates on clipped excess losses, mixed with the
/// uniform distribution each step. The returned weights average every step.
pub fn doremi_weights(oracle: &mut dyn LossOracle, config: &DoremiConfig) -> Result<(WeightVector, Vec<DoremiState>)> {
    let domains = oracle.domains().to_vec();
    let n = domains.len();
    if n == 0 {
        return Err(Error::InvalidParameter("no domains".into()));
    }
    if config.steps == 0 {
        return Err(Error::InvalidParameter("steps must be positive".into()));
    }
    if !config.learning_rate.is_finite() || config.learning_rate < 0.0 {
        return Err(Error::InvalidParameter(format!("learning rate {} is invalid", config.learning_rate)));
    }
    if !(0.0..=1.0).contains(&config.smoothing) {
        return Err(Error::InvalidParameter(format!("smoothing {} is outside [0, 1]", config.smoothing)));
    }
    let mut w = match &config.init {
        Some(init) => {
            if init.len() != n {
                return Err(Error::InvalidParameter(format!("init has {} entries for {n} domains", init.len())));
            }
            WeightVector::from_pairs(WeightMethod::Doremi, domains.iter().cloned().zip(init.iter().cloned()), Default::default())?;
            init.clone()
        }
        None => vec![1.0 / n as f64; n],
    };
    let uniform = 1.0 / n as f64;
    let mut sum = vec![0.0; n];
    let mut trace = Vec::with_capacity(config.steps);
    for step in 0..config.steps {
        let losses = oracle.excess_losses(step)?;
        if losses.len() != n {
            return Err(Error::Oracle(format!("step {step}: {} losses for {n} domains", losses.len())));
        }
        let losses: Vec<f64> = losses.into_iter().map(|l| l.max(0.0)).collect();
        if losses.iter().any(|l| !l.is_finite()) {
            return Err(Error::Oracle(format!("step {step}: non-finite loss")));
        }
        // log-space update for stability
        let logs: Vec<f64> = w.iter().zip(&losses).map(|(wk, l)| wk.ln() + config.learning_rate * l).collect();
        let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let z: f64 = logs.iter().map(|l| (l - max).exp()).sum();
        w = logs
            .iter()
            .map(|l| (1.0 - config.smoothing) * (l - max).exp() / z + config.smoothing * uniform)
            .collect();
        for (s, wk) in sum.iter_mut().zip(&w) {
            *s += wk;
        }
        let running_average = sum.iter().map(|s| s / (step + 1) as f64).collect();
        trace.push(DoremiState {
            step: step + 1,
            learning_rate: config.learning_rate,
            smoothing: config.smoothing,
            excess_losses: losses,
            weights: w.clone(),
            running_average,
        });
    }
    let avg = &trace.last().expect("steps > 0").running_average;
    let total: f64 = avg.iter().sum();
    let weights = WeightVector::from_pairs(
        WeightMethod::Doremi,
        domains.into_iter().zip(avg.iter().map(|a| a / total)),
        match json!({
            "steps": config.steps,
            "learning_rate": config.learning_rate,
            "smoothing": config.smoothing,
        }) {
            serde_json::Value::Object(m) => m,
            _ => unreachable!(),
        },
    )?;
    Ok((weights, trace))
}
