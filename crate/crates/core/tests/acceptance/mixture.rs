//! Token accounting of emitted mixtures.

use std::collections::{BTreeMap, HashMap};

use corpusmix_core::corpus::{compute_stats, count_tokens, Attribute, Document, LabelPolicy, TokenizerScheme};
use corpusmix_core::sampling::{
    alpha_weights, emit_manifest, fine_grained_buckets, unimax_weights, Bucket, MixtureManifest, MixtureSampler,
    WeightMethod, WeightVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::buckets::random_labeled_corpus;
use crate::common::ensure;

const CORPORA: u64 = 100;
const SCHEME: TokenizerScheme = TokenizerScheme::WhitespaceWords;

fn members(docs: &[Document], buckets: &[Bucket]) -> BTreeMap<String, Vec<Document>> {
    let by_id: HashMap<&str, &Document> = docs.iter().map(|d| (d.id.as_str(), d)).collect();
    buckets.iter().map(|b| (b.name.clone(), b.doc_ids.iter().map(|i| by_id[i.as_str()].clone()).collect())).collect()
}

type Emission = (BTreeMap<String, u64>, HashMap<String, u64>);

/// Emitted tokens per bucket, and per-document emission counts.
fn drain(manifest: &MixtureManifest, m: BTreeMap<String, Vec<Document>>, bucket_of: &HashMap<String, String>) -> Result<Emission, String> {
    let mut tokens: BTreeMap<String, u64> = BTreeMap::new();
    let mut times: HashMap<String, u64> = HashMap::new();
    for d in MixtureSampler::new(manifest, m).map_err(|e| e.to_string())? {
        *tokens.entry(bucket_of[&d.id].clone()).or_default() += count_tokens(&d.text, SCHEME);
        *times.entry(d.id).or_default() += 1;
    }
    Ok((tokens, times))
}

pub fn run() -> Result<String, String> {
    let err = |e: corpusmix_core::Error| e.to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut worst_overshoot = 0.0f64;
    for c in 0..CORPORA {
        let docs = random_labeled_corpus(&mut rng, c);
        let manifest = compute_stats(docs.iter(), SCHEME, None);
        let buckets = fine_grained_buckets(&manifest, &docs, Attribute::Quality, LabelPolicy::Lenient).map_err(err)?;
        let stats = Bucket::stats(&buckets);
        let capacity: u64 = stats.iter().map(|s| s.token_count).sum();
        let budget = rng.random_range(1..=3 * capacity);
        let weights = if c % 2 == 0 {
            alpha_weights(&stats, rng.random_range(0.0..2.0)).map_err(err)?
        } else {
            // cap high enough that every budget fits
            unimax_weights(&stats, budget as f64, 4.0).map_err(err)?.weights
        };
        let mix = emit_manifest(&weights, &stats, budget, c, SCHEME).map_err(err)?;
        let quota_sum: u64 = mix.buckets.iter().map(|b| b.quota).sum();
        ensure!(quota_sum == budget, "corpus {c}: quotas sum {quota_sum} != budget {budget}");

        let bucket_of: HashMap<String, String> =
            buckets.iter().flat_map(|b| b.doc_ids.iter().map(move |i| (i.clone(), b.name.clone()))).collect();
        let (emitted, _) = drain(&mix, members(&docs, &buckets), &bucket_of)?;
        for (alloc, b) in mix.buckets.iter().zip(&buckets) {
            let got = emitted.get(&alloc.name).copied().unwrap_or(0);
            let largest = b.doc_ids.iter().map(|i| count_tokens(&docs.iter().find(|d| &d.id == i).unwrap().text, SCHEME)).max().unwrap_or(0);
            ensure!(got >= alloc.quota, "corpus {c}, {}: emitted {got} < quota {}", alloc.name, alloc.quota);
            ensure!(alloc.quota == 0 || got - alloc.quota < largest.max(1), "corpus {c}, {}: emitted {got} for quota {} (largest doc {largest})", alloc.name, alloc.quota);
            if largest > 0 {
                worst_overshoot = worst_overshoot.max((got - alloc.quota) as f64 / largest as f64);
            }
        }

        // quota of exactly two epochs: every document twice
        let twice: Vec<(String, f64)> = stats.iter().map(|s| (s.source.clone(), s.token_count as f64 / capacity as f64)).collect();
        let w = WeightVector::from_pairs(WeightMethod::Proportional, twice, Default::default()).map_err(err)?;
        let mut mix = emit_manifest(&w, &stats, 2 * capacity, c, SCHEME).map_err(err)?;
        for (a, s) in mix.buckets.iter_mut().zip(&stats) {
            a.quota = 2 * s.token_count;
        }
        let (_, times) = drain(&mix, members(&docs, &buckets), &bucket_of)?;
        for d in &docs {
            let n = times.get(&d.id).copied().unwrap_or(0);
            ensure!(n == 2, "corpus {c}: {} emitted {n} times over two epochs", d.id);
        }
    }
    Ok(format!(
        "{CORPORA} corpora: quotas sum to budget; overshoot below one document (worst {worst_overshoot:.2} of largest doc); two-epoch quotas emit each document twice"
    ))
}
