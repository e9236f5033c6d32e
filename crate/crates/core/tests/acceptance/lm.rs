//! Normalization, a direct-summation reference model, and the
//! in-order vs shuffled perplexity gap.

use std::collections::HashSet;

use corpusmix_core::corpus::Document;
use corpusmix_core::curation::{sentences, NgramLm, BOS, EOS, UNK};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::common::{ensure, vocabulary};

const MASS_TOLERANCE: f64 = 1e-6;
const REFERENCE_TOLERANCE: f64 = 1e-9;
const CONTEXTS: usize = 100;
const SHUFFLE_TRIALS: usize = 100;
const ORDER: usize = 3;
const D: f64 = 0.75;

/// Interpolated absolute discounting computed by rescanning the padded
/// training sentences for every count it needs.
struct Reference {
    padded: Vec<Vec<String>>,
    vocab: Vec<String>,
}

impl Reference {
    fn new(docs: &[Document]) -> Self {
        let mut padded = Vec::new();
        let mut vocab: Vec<String> = vec![UNK.into(), EOS.into()];
        for d in docs {
            for s in sentences(&d.text) {
                let mut seq = vec![BOS.to_string(); ORDER - 1];
                for w in s {
                    if !vocab.contains(&w) {
                        vocab.push(w.clone());
                    }
                    seq.push(w);
                }
                seq.push(EOS.into());
                padded.push(seq);
            }
        }
        Reference { padded, vocab }
    }

    /// Every (history, next) event with a history of exactly `h.len()` words.
    fn events<'a>(&'a self, h: &'a [String]) -> impl Iterator<Item = &'a String> + 'a {
        self.padded.iter().flat_map(move |seq| {
            (ORDER - 1..seq.len()).filter(move |&pos| pos >= h.len() && seq[pos - h.len()..pos] == *h).map(move |pos| &seq[pos])
        })
    }

    fn prob(&self, w: &str, history: &[String]) -> f64 {
        let w = if self.vocab.iter().any(|v| v == w) { w } else { UNK };
        let mut p = 1.0 / self.vocab.len() as f64;
        for k in 0..ORDER {
            let h = &history[history.len() - k..];
            let next: Vec<&String> = self.events(h).collect();
            if next.is_empty() {
                continue;
            }
            let total = next.len() as f64;
            let c = next.iter().filter(|n| n.as_str() == w).count() as f64;
            let distinct = next.iter().collect::<HashSet<_>>().len() as f64;
            p = (c - D).max(0.0) / total + D * distinct / total * p;
        }
        p
    }
}

/// Short sentences from a first-order chain so word order carries signal.
pub fn chain_corpus(rng: &mut ChaCha8Rng, vocab: &[String], docs: usize, sentences: usize) -> Vec<Document> {
    let next = |w: usize, r: &mut ChaCha8Rng| (w * 7 + r.random_range(0..3)) % vocab.len();
    (0..docs)
        .map(|i| {
            let lines: Vec<String> = (0..sentences)
                .map(|_| {
                    let mut w = rng.random_range(0..vocab.len());
                    let mut s = Vec::new();
                    for _ in 0..rng.random_range(6..14) {
                        s.push(vocab[w].clone());
                        w = next(w, rng);
                    }
                    s.join(" ")
                })
                .collect();
            Document::new(format!("lm{i}"), "ref", lines.join("\n"))
        })
        .collect()
}

pub fn run() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let vocab = vocabulary(60, 5);
    let train = chain_corpus(&mut rng, &vocab, 40, 20);
    let lm = NgramLm::train(&train, ORDER).map_err(|e| e.to_string())?;

    // histories mixing seen words, sentence starts, and unseen words
    let mut pool: Vec<String> = vocab.clone();
    pool.extend([BOS.to_string(), "unseenword".into(), "zzzz".into()]);
    let mut worst_mass = 0.0f64;
    for _ in 0..CONTEXTS {
        let h: Vec<&str> = (0..ORDER - 1).map(|_| pool.choose(&mut rng).unwrap().as_str()).collect();
        worst_mass = worst_mass.max((lm.total_mass(&h) - 1.0).abs());
    }
    ensure!(worst_mass <= MASS_TOLERANCE, "mass off by {worst_mass:e}");

    let small = chain_corpus(&mut rng, &vocab[..12], 10, 1);
    let small_lm = NgramLm::train(&small, ORDER).map_err(|e| e.to_string())?;
    let reference = Reference::new(&small);
    ensure!(small_lm.vocab_size() == reference.vocab.len(), "vocab {} vs {}", small_lm.vocab_size(), reference.vocab.len());
    let mut worst_ref = 0.0f64;
    let mut queries = 0;
    let mut probes: Vec<String> = vocab[..14].to_vec();
    probes.extend([EOS.to_string(), "unseenword".into()]);
    for _ in 0..50 {
        let h: Vec<String> = (0..ORDER - 1)
            .map(|_| if rng.random_bool(0.2) { BOS.to_string() } else { vocab[rng.random_range(0..12)].clone() })
            .collect();
        let hs: Vec<&str> = h.iter().map(String::as_str).collect();
        for w in &probes {
            let got = small_lm.prob(w, &hs);
            let want = reference.prob(w, &h);
            worst_ref = worst_ref.max((got - want).abs());
            queries += 1;
        }
    }
    ensure!(worst_ref <= REFERENCE_TOLERANCE, "reference disagreement {worst_ref:e}");

    // whole-text log-probs: the training sentences plus one with unseen words
    let mut texts: Vec<String> = small.iter().map(|d| d.text.clone()).collect();
    texts.push(format!("{} unseenword {}", vocab[0], vocab[1]));
    let mut tokens = 0;
    for t in &texts {
        let got = small_lm.token_log_probs(t);
        let mut want = Vec::new();
        for s in sentences(t) {
            let mut seq = vec![BOS.to_string(); ORDER - 1];
            seq.extend(s);
            seq.push(EOS.into());
            for pos in ORDER - 1..seq.len() {
                want.push(reference.prob(&seq[pos], &seq[pos + 1 - ORDER..pos]).ln());
            }
        }
        ensure!(got.len() == want.len(), "{} log-probs vs {} reference", got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            worst_ref = worst_ref.max((g - w).abs());
        }
        tokens += got.len();
    }
    ensure!(worst_ref <= REFERENCE_TOLERANCE, "reference log-prob disagreement {worst_ref:e}");

    let mut lower = 0;
    for t in 0..SHUFFLE_TRIALS {
        let doc = &train[t % train.len()];
        let mut tokens: Vec<&str> = doc.text.split_whitespace().collect();
        tokens.shuffle(&mut rng);
        // same sentence lengths, shuffled tokens
        let mut it = tokens.into_iter();
        let shuffled: Vec<String> =
            doc.text.lines().map(|l| (0..l.split_whitespace().count()).map(|_| it.next().unwrap()).collect::<Vec<_>>().join(" ")).collect();
        if lm.perplexity(&doc.text) < lm.perplexity(&shuffled.join("\n")) {
            lower += 1;
        }
    }
    ensure!(lower == SHUFFLE_TRIALS, "in-order text lower in {lower}/{SHUFFLE_TRIALS}");
    Ok(format!(
        "mass within {worst_mass:.1e} over {CONTEXTS} contexts; {queries} probabilities and {tokens} token log-probs within {worst_ref:.1e} of the reference; in-order perplexity lower {lower}/{SHUFFLE_TRIALS}"
    ))
}
