//! MinHash signatures over word shingles.
//!
//! A shingle is `k` consecutive lowercased whitespace tokens. Each shingle is
//! hashed once to 64 bits; permutation `i` is simulated by
//! `mix64(h ^ seed_i)`, which is a bijection on u64 for every seed.

use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::hashing::{hash64, mix64};
use crate::{Error, Result};

const SHINGLE_SEP: u8 = 0x1f;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinHashSignature {
    pub values: Vec<u64>,
    pub shingle_size: usize,
}

impl MinHashSignature {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Fraction of coordinates on which the two signatures agree.
    pub fn agreement(&self, other: &MinHashSignature) -> f64 {
        assert_eq!(self.len(), other.len(), "signature lengths differ");
        let same = self
            .values
            .iter()
            .zip(&other.values)
            .filter(|(a, b)| a == b)
            .count();
        same as f64 / self.len() as f64
    }
}

/// Lowercased whitespace tokens used for shingling.
pub fn shingle_tokens(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_lowercase).collect()
}

/// 64-bit hashes of every `k`-token window.
pub fn shingle_hashes(tokens: &[String], k: usize) -> Vec<u64> {
    if k == 0 || tokens.len() < k {
        return Vec::new();
    }
    let mut buf = Vec::with_capacity(64);
    tokens
        .windows(k)
        .map(|w| {
            buf.clear();
            for (i, t) in w.iter().enumerate() {
                if i > 0 {
                    buf.push(SHINGLE_SEP);
                }
                buf.extend_from_slice(t.as_bytes());
            }
            hash64(&buf, 0)
        })
        .collect()
}

/// Precomputed permutation seeds; reuse one hasher across a corpus.
#[derive(Debug, Clone)]
pub struct MinHasher {
    shingle_size: usize,
    seeds: Vec<u64>,
}

impl MinHasher {
    pub fn new(shingle_size: usize, permutations: usize, seed: u64) -> Result<Self> {
        if shingle_size == 0 || permutations == 0 {
            return Err(Error::InvalidParameter(
                "shingle size and permutation count must be positive".into(),
            ));
        }
        let mut state = mix64(seed);
        let seeds = (0..permutations)
            .map(|_| {
                state = mix64(state);
                state
            })
            .collect();
        Ok(MinHasher {
            shingle_size,
            seeds,
        })
    }

    pub fn shingle_size(&self) -> usize {
        self.shingle_size
    }

    pub fn permutations(&self) -> usize {
        self.seeds.len()
    }

    /// Signature of raw text; `None` when there are fewer than `k` tokens.
    pub fn sign_text(&self, text: &str) -> Option<MinHashSignature> {
        let tokens = shingle_tokens(text);
        let shingles = shingle_hashes(&tokens, self.shingle_size);
        if shingles.is_empty() {
            return None;
        }
        let values = self
            .seeds
            .iter()
            .map(|&s| shingles.iter().map(|&h| mix64(h ^ s)).min().expect("non-empty"))
            .collect();
        Some(MinHashSignature {
            values,
            shingle_size: self.shingle_size,
        })
    }

    pub fn sign(&self, doc: &Document) -> Result<MinHashSignature> {
        self.sign_text(&doc.text).ok_or_else(|| Error::TooShort {
            id: doc.id.clone(),
            tokens: doc.text.split_whitespace().count(),
            shingle_size: self.shingle_size,
        })
    }
}

pub fn minhash_signature(
    doc: &Document,
    shingle_size: usize,
    permutations: usize,
    seed: u64,
) -> Result<MinHashSignature> {
    MinHasher::new(shingle_size, permutations, seed)?.sign(doc)
}
