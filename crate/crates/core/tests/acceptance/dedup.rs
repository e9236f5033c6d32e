//! 10k documents with planted exact-duplicate groups and near-duplicate pairs.

use std::collections::{HashMap, HashSet};
use std::time::Instant;

use corpusmix_core::corpus::Document;
use corpusmix_core::curation::{
    collision_probability, exact_dedup, fuzzy_dedup, shingle_hashes, shingle_tokens, FuzzyConfig, SourcePriority,
};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::common::{ensure, random_words, vocabulary};

const DOCS: usize = 10_000;
const EXACT_GROUPS: usize = 1_000;
const NEAR_PAIRS: usize = 500;
const WORDS_PER_DOC: usize = 200;
const MIN_PLANTED_JACCARD: f64 = 0.9;
const MIN_NEAR_RECALL: f64 = 0.92;
const MAX_RANDOM_PAIR_RATE: f64 = 0.02;
const RANDOM_PAIRS: usize = 20_000;
const MAX_SECONDS: f64 = 60.0;

fn jaccard(a: &str, b: &str) -> f64 {
    let sa: HashSet<u64> = shingle_hashes(&shingle_tokens(a), 5).into_iter().collect();
    let sb: HashSet<u64> = shingle_hashes(&shingle_tokens(b), 5).into_iter().collect();
    sa.intersection(&sb).count() as f64 / sa.union(&sb).count() as f64
}

struct Planted {
    docs: Vec<Document>,
    groups: Vec<Vec<String>>,
    pairs: Vec<(String, String)>,
    singles: Vec<String>,
}

fn corpus(seed: u64) -> Planted {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = vocabulary(5_000, 6);
    let sources = ["old", "new"];
    let mut docs = Vec::with_capacity(DOCS);
    let mut next = 0usize;
    let fresh = |rng: &mut ChaCha8Rng| random_words(rng, &vocab, WORDS_PER_DOC);
    let mut push = |docs: &mut Vec<Document>, text: String, rng: &mut ChaCha8Rng| {
        let id = format!("d{next:05}");
        next += 1;
        docs.push(Document::new(id.clone(), *sources.choose(rng).unwrap(), text));
        id
    };

    let mut groups = Vec::new();
    for g in 0..EXACT_GROUPS {
        let text = fresh(&mut rng).join(" ");
        let size = 2 + g % 2;
        groups.push((0..size).map(|_| push(&mut docs, text.clone(), &mut rng)).collect());
    }
    let mut pairs = Vec::new();
    for _ in 0..NEAR_PAIRS {
        let words = fresh(&mut rng);
        let mut edited = words.clone();
        let at = rng.random_range(0..WORDS_PER_DOC);
        edited[at] = "planted".to_string();
        let a = push(&mut docs, words.join(" "), &mut rng);
        let b = push(&mut docs, edited.join(" "), &mut rng);
        pairs.push((a, b));
    }
    let mut singles = Vec::new();
    while docs.len() < DOCS {
        let text = fresh(&mut rng).join(" ");
        singles.push(push(&mut docs, text, &mut rng));
    }
    docs.shuffle(&mut rng);
    Planted { docs, groups, pairs, singles }
}

pub fn run() -> Result<String, String> {
    let planted = corpus(1);
    ensure!(planted.docs.len() == DOCS, "built {} documents", planted.docs.len());
    let texts: HashMap<&str, &str> = planted.docs.iter().map(|d| (d.id.as_str(), d.text.as_str())).collect();
    let min_j = planted
        .pairs
        .iter()
        .map(|(a, b)| jaccard(texts[a.as_str()], texts[b.as_str()]))
        .fold(f64::INFINITY, f64::min);
    ensure!(min_j >= MIN_PLANTED_JACCARD, "planted pair Jaccard {min_j} below {MIN_PLANTED_JACCARD}");

    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let config = FuzzyConfig { seed: 11, ..FuzzyConfig::default() };
    let priority = SourcePriority::from_order(vec!["old".into(), "new".into()]);
    let (exact_kept, fuzzy) = pool.install(|| {
        let (kept, _) = exact_dedup(planted.docs.clone());
        let survivors = kept.iter().map(|d| d.id.clone()).collect::<Vec<_>>();
        (survivors, fuzzy_dedup(kept, &config, &priority))
    });
    let fuzzy = fuzzy.map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();

    let kept: HashSet<&str> = exact_kept.iter().map(String::as_str).collect();
    for g in &planted.groups {
        let n = g.iter().filter(|id| kept.contains(id.as_str())).count();
        ensure!(n == 1, "exact group {g:?} kept {n} members");
    }
    let expected_kept = DOCS - planted.groups.iter().map(|g| g.len() - 1).sum::<usize>();
    ensure!(kept.len() == expected_kept, "exact dedup kept {} of expected {expected_kept}", kept.len());

    let mut cluster_of: HashMap<&str, usize> = HashMap::new();
    for (i, c) in fuzzy.clusters.iter().enumerate() {
        for id in c.member_ids() {
            cluster_of.insert(id, i);
        }
    }
    let together = |a: &str, b: &str| matches!((cluster_of.get(a), cluster_of.get(b)), (Some(x), Some(y)) if x == y);
    let recall = planted.pairs.iter().filter(|(a, b)| together(a, b)).count() as f64 / NEAR_PAIRS as f64;

    // unrelated pairs: singles and one representative per exact group
    let mut unrelated: Vec<&str> = planted.singles.iter().map(String::as_str).collect();
    unrelated.extend(planted.groups.iter().filter_map(|g| g.iter().find(|id| kept.contains(id.as_str())).map(String::as_str)));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut false_pairs = 0usize;
    let mut max_j = 0.0f64;
    for _ in 0..RANDOM_PAIRS {
        let pick: Vec<&&str> = unrelated.choose_multiple(&mut rng, 2).collect();
        if together(pick[0], pick[1]) {
            false_pairs += 1;
        }
        if rng.random::<f64>() < 0.01 {
            max_j = max_j.max(jaccard(texts[*pick[0]], texts[*pick[1]]));
        }
    }
    let false_rate = false_pairs as f64 / RANDOM_PAIRS as f64;
    let (b, r) = (config.bands, config.rows);
    let detail = format!(
        "exact kept {}/{DOCS}; near recall {:.3} (S({min_j:.3})={:.5}); unrelated rate {:.4} (S({max_j:.3})={:.2e}); {secs:.1}s on 1 thread",
        kept.len(),
        recall,
        collision_probability(min_j, b, r),
        false_rate,
        collision_probability(max_j, b, r),
    );
    ensure!(recall >= MIN_NEAR_RECALL, "near-duplicate recall too low: {detail}");
    ensure!(false_rate < MAX_RANDOM_PAIR_RATE, "unrelated pairs clustered: {detail}");
    ensure!(secs < MAX_SECONDS, "too slow: {detail}");
    Ok(detail)
}
