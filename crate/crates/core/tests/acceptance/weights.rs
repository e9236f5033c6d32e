//! Weight methods against closed forms and high-precision reference values.

use corpusmix_core::corpus::SourceStats;
use corpusmix_core::sampling::{alpha_weights, doremi_weights, unimax_weights, DoremiConfig, SyntheticOracle};

use crate::common::ensure;

const ALPHA_TOLERANCE: f64 = 1e-12;
const UNIMAX_TOLERANCE: f64 = 1e-12;
const DOREMI_TOLERANCE: f64 = 1e-9;
const SIMPLEX_TOLERANCE: f64 = 1e-9;
const LONG_RUN_STEPS: usize = 10_000;

fn stats(tokens: &[u64]) -> Vec<SourceStats> {
    tokens
        .iter()
        .enumerate()
        .map(|(i, &t)| SourceStats { source: format!("s{i}"), doc_count: 1, token_count: t, age_rank: i })
        .collect()
}

/// Reference values computed with 40-digit arithmetic.
fn alpha_cases() -> Vec<(Vec<u64>, f64, Vec<f64>)> {
    vec![
        (vec![50, 30, 10], 1.3, vec![0.6104420658975859771336, 0.314225248924899994474, 0.07533268517751402839243]),
        (
            vec![1_000_003, 20_000_000_017, 7, 123_456_789],
            1.0,
            vec![0.00004969093124565454606802, 0.9938156443109038198251, 3.478354752131561830076e-10, 0.006134664410015050415659],
        ),
        (
            vec![1_000_003, 20_000_000_017, 7, 123_456_789],
            1.3,
            vec![0.000002559053224052856233524, 0.9986576189756068641819, 5.08985109194592333709e-13, 0.001339821970660097852662],
        ),
        (
            (1..=10).collect(),
            1.3,
            vec![
                0.01031996601586594958304,
                0.0254107370126855150409,
                0.04304630695946471438978,
                0.06256857382428931793089,
                0.08362560500629138315689,
                0.105992440656550745699,
                0.1295107204076159658847,
                0.1540619002294655149522,
                0.1795533570556022949798,
                0.2059103928321685983829,
            ],
        ),
        (vec![50, 30, 10], 0.0, vec![1.0 / 3.0; 3]),
        (vec![50, 30, 10], 1.0, vec![5.0 / 9.0, 3.0 / 9.0, 1.0 / 9.0]),
    ]
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn run() -> Result<String, String> {
    let err = |e: corpusmix_core::Error| e.to_string();
    let mut worst_alpha = 0.0f64;
    for (tokens, alpha, want) in alpha_cases() {
        let got = alpha_weights(&stats(&tokens), alpha).map_err(err)?.weights();
        let gap = max_gap(&got, &want);
        ensure!(gap <= ALPHA_TOLERANCE, "alpha {alpha} on {tokens:?}: {got:?} vs {want:?}");
        worst_alpha = worst_alpha.max(gap);
    }

    let u = unimax_weights(&stats(&[50, 30, 10]), 60.0, 1.0).map_err(err)?;
    let want = [25.0 / 60.0, 25.0 / 60.0, 10.0 / 60.0];
    ensure!(max_gap(&u.weights.weights(), &want) <= UNIMAX_TOLERANCE && !u.under_budget, "unimax T=60: {:?}", u.weights.weights());
    let u = unimax_weights(&stats(&[50, 30, 10]), 100.0, 1.0).map_err(err)?;
    let want = [5.0 / 9.0, 3.0 / 9.0, 1.0 / 9.0];
    ensure!(max_gap(&u.weights.weights(), &want) <= UNIMAX_TOLERANCE, "unimax T=100: {:?}", u.weights.weights());
    ensure!(u.under_budget, "T=100 exceeds capacity 90 but under_budget is not set");

    let domains = vec!["a".to_string(), "b".to_string()];
    let mut oracle = SyntheticOracle::constant(&domains, vec![1.0, 0.0]).map_err(err)?;
    let cfg = DoremiConfig { steps: 1, learning_rate: 1.0, smoothing: 0.0, init: None };
    let (w, _) = doremi_weights(&mut oracle, &cfg).map_err(err)?;
    let e = std::f64::consts::E;
    let want = [e / (e + 1.0), 1.0 / (e + 1.0)];
    let one_step = max_gap(&w.weights(), &want);
    ensure!(one_step <= DOREMI_TOLERANCE, "one step: {:?} vs {want:?}", w.weights());

    let five: Vec<String> = (0..5).map(|i| format!("d{i}")).collect();
    let mut noisy = SyntheticOracle::noisy(&five, vec![0.5, 0.1, 2.0, 0.0, 1.0], 0.5, 3).map_err(err)?;
    let cfg = DoremiConfig { steps: LONG_RUN_STEPS, learning_rate: 1.0, smoothing: 1e-3, init: None };
    let (w, trace) = doremi_weights(&mut noisy, &cfg).map_err(err)?;
    for s in trace.iter().map(|s| &s.weights).chain(std::iter::once(&w.weights())) {
        let sum: f64 = s.iter().sum();
        ensure!((sum - 1.0).abs() <= SIMPLEX_TOLERANCE && s.iter().all(|x| *x >= 0.0 && x.is_finite()), "left the simplex: {s:?}");
    }
    Ok(format!(
        "{} alpha cases within {worst_alpha:.1e}; unimax closed forms; one-step DoReMi within {one_step:.1e}; simplex held over {LONG_RUN_STEPS} noisy steps",
        alpha_cases().len()
    ))
}
