//! Importance resampling moves a two-topic corpus toward its target.

use std::collections::HashMap;

use corpusmix_core::corpus::Document;
use corpusmix_core::selection::{dsir_select, fit_distribution, kl_divergence, SelectionMode, SelectionPlan};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::common::{coin, ensure, random_words, vocabulary};

const RATES: [f64; 4] = [0.5, 0.8, 0.875, 0.95];
const SEEDS: u64 = 5;
const UNIFORM_SEEDS: u64 = 200;
const UNIFORM_DOCS: usize = 20;
const UNIFORM_SIGMAS: f64 = 3.0;

fn topic_corpus(seed: u64, n: usize, p_target_topic: f64, prefix: &str) -> Vec<Document> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = vocabulary(400, 6);
    let (science, sports) = all.split_at(200);
    (0..n)
        .map(|i| {
            let (vocab, source) = if coin(&mut rng, p_target_topic) { (science, "a") } else { (sports, "b") };
            Document::new(format!("{prefix}{i}"), source, random_words(&mut rng, vocab, 60).join(" "))
        })
        .collect()
}

fn plan(rate: f64, seed: u64) -> SelectionPlan {
    SelectionPlan { mode: SelectionMode::Corpus, rate, seed, buckets: 4096, ..Default::default() }
}

pub fn run() -> Result<String, String> {
    let err = |e: corpusmix_core::Error| e.to_string();
    let raw = topic_corpus(1, 600, 0.3, "r");
    let target = topic_corpus(2, 200, 1.0, "t");
    let mut worst_ratio = 0.0f64;
    for rate in RATES {
        for seed in 0..SEEDS {
            let p = plan(rate, seed);
            let out = dsir_select(raw.clone(), &p, &target).map_err(err)?;
            let f = p.features();
            let sel = fit_distribution(&out.selected, &f, p.smoothing).map_err(err)?;
            let all = fit_distribution(&raw, &f, p.smoothing).map_err(err)?;
            let (ks, kr) = (kl_divergence(&sel, &out.target).map_err(err)?, kl_divergence(&all, &out.target).map_err(err)?);
            ensure!(ks < kr, "rate {rate} seed {seed}: KL selected {ks} >= raw {kr}");
            worst_ratio = worst_ratio.max(ks / kr);
        }
    }

    let out = dsir_select(raw.clone(), &plan(1.0, 3), &target).map_err(err)?;
    let mut got: Vec<&str> = out.selected.iter().map(|d| d.id.as_str()).collect();
    let mut want: Vec<&str> = raw.iter().map(|d| d.id.as_str()).collect();
    got.sort_unstable();
    want.sort_unstable();
    ensure!(got == want, "rate 1 is not the identity");

    // target equal to the raw corpus: every document is equally likely
    let small = topic_corpus(3, UNIFORM_DOCS, 0.5, "u");
    let mut counts: HashMap<String, u64> = HashMap::new();
    for seed in 0..UNIFORM_SEEDS {
        for d in dsir_select(small.clone(), &plan(0.5, seed), &small).map_err(err)?.selected {
            *counts.entry(d.id).or_default() += 1;
        }
    }
    let (mean, sd) = (UNIFORM_SEEDS as f64 * 0.5, (UNIFORM_SEEDS as f64 * 0.25).sqrt());
    let worst_z = small
        .iter()
        .map(|d| (counts.get(&d.id).copied().unwrap_or(0) as f64 - mean).abs() / sd)
        .fold(0.0, f64::max);
    ensure!(worst_z <= UNIFORM_SIGMAS, "a document's selection count is {worst_z:.2} sd from {mean}");
    Ok(format!(
        "KL(selected||target) < KL(raw||target) for {} runs (worst ratio {worst_ratio:.3}); rate 1 is identity; uniform target max |z| {worst_z:.2}",
        RATES.len() as u64 * SEEDS
    ))
}
