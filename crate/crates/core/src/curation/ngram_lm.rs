//! Backoff n-gram language model with interpolated absolute discounting.
//!
//! For an n-gram order `k` and history `h` of length `k - 1`:
//!
//! ```text
//! P_k(w | h) = max(c(h, w) - D, 0) / c(h) + D * N1+(h .) / c(h) * P_{k-1}(w | h')
//! ```
//!
//! where `h'` drops the oldest word of `h`, `c(h) = sum_w c(h, w)`, and
//! `N1+(h .)` is the number of distinct successors of `h`. Unseen histories
//! back off entirely. The recursion bottoms out at the uniform distribution
//! over the vocabulary, which includes `</s>` and `<unk>`, so every
//! conditional distribution sums to one and unknown words get non-zero mass.
//!
//! Text is lowercased and split on whitespace; every non-empty line is a
//! sentence padded with `order - 1` start markers and one end marker.

use std::collections::HashMap;

use serde::Serialize;

use crate::corpus::Document;
use crate::hashing::digest_hex;
use crate::{Error, Result};

pub const UNK: &str = "<unk>";
pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";

const UNK_ID: u32 = 0;
const EOS_ID: u32 = 1;
const BOS_ID: u32 = 2;

pub const DEFAULT_DISCOUNT: f64 = 0.75;
pub const DEFAULT_ORDER: usize = 3;

#[derive(Debug, Clone, Default)]
struct HistoryCounts {
    total: u64,
    successors: HashMap<u32, u64>,
}

#[derive(Debug, Clone)]
pub struct NgramLm {
    order: usize,
    discount: f64,
    ids: HashMap<String, u32>,
    words: Vec<String>,
    /// `levels[k]` maps histories of length `k` to successor counts.
    levels: Vec<HashMap<Vec<u32>, HistoryCounts>>,
    corpus_id: String,
}

/// Sentences of a text as lowercased whitespace tokens.
pub fn sentences(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split_whitespace().map(str::to_lowercase).collect::<Vec<_>>())
        .filter(|s| !s.is_empty())
        .collect()
}

impl NgramLm {
    pub fn train<'a, I>(corpus: I, order: usize) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Document>,
    {
        Self::train_with_discount(corpus, order, DEFAULT_DISCOUNT)
    }

    pub fn train_with_discount<'a, I>(corpus: I, order: usize, discount: f64) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Document>,
    {
        if order == 0 {
            return Err(Error::InvalidParameter("n-gram order must be at least 1".into()));
        }
        if !(discount > 0.0 && discount < 1.0) {
            return Err(Error::InvalidParameter("discount must lie in (0, 1)".into()));
        }
        let mut lm = NgramLm {
            order,
            discount,
            ids: HashMap::new(),
            words: vec![UNK.into(), EOS.into(), BOS.into()],
            levels: vec![HashMap::new(); order],
            corpus_id: String::new(),
        };
        for (i, w) in lm.words.iter().enumerate() {
            lm.ids.insert(w.clone(), i as u32);
        }
        let mut fingerprint = Vec::new();
        let mut any = false;
        for doc in corpus {
            fingerprint.extend_from_slice(doc.id.as_bytes());
            fingerprint.push(0);
            for sentence in sentences(&doc.text) {
                any = true;
                let ids: Vec<u32> = sentence.iter().map(|w| lm.intern(w)).collect();
                lm.count_sentence(&ids);
            }
        }
        if !any {
            return Err(Error::EmptyCorpus("n-gram training corpus has no tokens"));
        }
        lm.corpus_id = digest_hex(&fingerprint);
        Ok(lm)
    }

    fn intern(&mut self, word: &str) -> u32 {
        if let Some(&id) = self.ids.get(word) {
            return id;
        }
        let id = self.words.len() as u32;
        self.words.push(word.to_string());
        self.ids.insert(word.to_string(), id);
        id
    }

    fn padded(&self, ids: &[u32]) -> Vec<u32> {
        let mut seq = vec![BOS_ID; self.order - 1];
        seq.extend_from_slice(ids);
        seq.push(EOS_ID);
        seq
    }

    fn count_sentence(&mut self, ids: &[u32]) {
        let seq = self.padded(ids);
        let pad = self.order - 1;
        for pos in pad..seq.len() {
            let w = seq[pos];
            for k in 0..self.order {
                let h = seq[pos - k..pos].to_vec();
                let entry = self.levels[k].entry(h).or_default();
                entry.total += 1;
                *entry.successors.entry(w).or_default() += 1;
            }
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn discount(&self) -> f64 {
        self.discount
    }

    /// Digest of the training document ids.
    pub fn corpus_id(&self) -> &str {
        &self.corpus_id
    }

    /// Number of predictable tokens: training words plus `</s>` and `<unk>`.
    pub fn vocab_size(&self) -> usize {
        self.words.len() - 1
    }

    /// Predictable vocabulary in id order.
    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.words
            .iter()
            .enumerate()
            .filter(|(i, _)| *i as u32 != BOS_ID)
            .map(|(_, w)| w.as_str())
    }

    fn id_of(&self, word: &str) -> u32 {
        match self.ids.get(word) {
            Some(&BOS_ID) | None => UNK_ID,
            Some(&id) => id,
        }
    }

    fn history_id(&self, word: &str) -> u32 {
        self.ids.get(word).copied().unwrap_or(UNK_ID)
    }

    fn prob_ids(&self, w: u32, history: &[u32]) -> f64 {
        let mut p = 1.0 / self.vocab_size() as f64;
        for k in 0..self.order {
            if k > history.len() {
                break;
            }
            let h = &history[history.len() - k..];
            if let Some(hc) = self.levels[k].get(h) {
                let total = hc.total as f64;
                let c = hc.successors.get(&w).copied().unwrap_or(0) as f64;
                let backoff = self.discount * hc.successors.len() as f64 / total;
                p = (c - self.discount).max(0.0) / total + backoff * p;
            }
        }
        p
    }

    /// `P(word | history)`; the history may include `<s>` markers and is
    /// truncated to the last `order - 1` words.
    pub fn prob(&self, word: &str, history: &[&str]) -> f64 {
        let h: Vec<u32> = history.iter().map(|w| self.history_id(w)).collect();
        let start = h.len().saturating_sub(self.order - 1);
        self.prob_ids(self.id_of(word), &h[start..])
    }

    pub fn log_prob(&self, word: &str, history: &[&str]) -> f64 {
        self.prob(word, history).ln()
    }

    /// Sum of `P(w | history)` over the whole vocabulary.
    pub fn total_mass(&self, history: &[&str]) -> f64 {
        self.vocabulary().map(|w| self.prob(w, history)).sum()
    }

    /// Natural-log probability of every predicted token (words and `</s>`).
    pub fn token_log_probs(&self, text: &str) -> Vec<f64> {
        let mut out = Vec::new();
        for sentence in sentences(text) {
            let ids: Vec<u32> = sentence.iter().map(|w| self.id_of(w)).collect();
            let seq = self.padded(&ids);
            let pad = self.order - 1;
            for pos in pad..seq.len() {
                out.push(self.prob_ids(seq[pos], &seq[pos - pad..pos]).ln());
            }
        }
        out
    }

    /// Per-token perplexity `exp(-mean log p)`. Infinite for a text with no tokens.
    pub fn perplexity(&self, text: &str) -> f64 {
        let lps = self.token_log_probs(text);
        if lps.is_empty() {
            return f64::INFINITY;
        }
        (-lps.iter().sum::<f64>() / lps.len() as f64).exp()
    }

    /// Model summary for reports.
    pub fn summary(&self) -> LmSummary {
        LmSummary {
            order: self.order,
            discount: self.discount,
            vocab_size: self.vocab_size(),
            corpus_id: self.corpus_id.clone(),
            smoothing: "interpolated-absolute-discount".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LmSummary {
    pub order: usize,
    pub discount: f64,
    pub vocab_size: usize,
    pub corpus_id: String,
    pub smoothing: String,
}
