use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::manifest::MixtureManifest;
use crate::corpus::{count_tokens, Document};
use crate::hashing::derive_seed;
use crate::{Error, Result};

struct BucketCursor {
    name: String,
    docs: Vec<(Document, u64)>,
    order: Vec<usize>,
    pos: usize,
    epoch: u64,
    quota: u64,
    emitted: u64,
    seed: u64,
}

impl BucketCursor {
    fn reshuffle(&mut self) {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed, &format!("{}/epoch/{}", self.name, self.epoch)));
        self.order = (0..self.docs.len()).collect();
        self.order.shuffle(&mut rng);
        self.pos = 0;
    }

    fn done(&self) -> bool {
        self.emitted >= self.quota
    }

    fn next_doc(&mut self) -> Document {
        if self.pos == self.order.len() {
            self.epoch += 1;
            self.reshuffle();
        }
        let (doc, tokens) = &self.docs[self.order[self.pos]];
        self.pos += 1;
        self.emitted += tokens;
        doc.clone()
    }
}

/// Streams documents until every bucket's emitted tokens reach its quota.
/// Each bucket is read in a fresh seeded shuffle per epoch; buckets are
/// interleaved by a seeded choice weighted by remaining quota.
pub struct MixtureSampler {
    buckets: Vec<BucketCursor>,
    rng: ChaCha8Rng,
}

impl MixtureSampler {
    /// `members` maps bucket name to its documents, in any stable order.
    pub fn new(manifest: &MixtureManifest, mut members: BTreeMap<String, Vec<Document>>) -> Result<Self> {
        let mut buckets = Vec::with_capacity(manifest.buckets.len());
        for alloc in &manifest.buckets {
            let docs = members.remove(&alloc.name).unwrap_or_default();
            let docs: Vec<(Document, u64)> = docs
                .into_iter()
                .map(|d| {
                    let t = count_tokens(&d.text, manifest.tokenizer);
                    (d, t)
                })
                .collect();
            let total: u64 = docs.iter().map(|(_, t)| t).sum();
            if alloc.quota > 0 && total == 0 {
                return Err(Error::InvalidParameter(format!(
                    "bucket `{}` has a quota of {} tokens but no tokens to draw from",
                    alloc.name, alloc.quota
                )));
            }
            let mut cursor = BucketCursor {
                name: alloc.name.clone(),
                docs,
                order: Vec::new(),
                pos: 0,
                epoch: 0,
                quota: alloc.quota,
                emitted: 0,
                seed: manifest.seed,
            };
            cursor.reshuffle();
            buckets.push(cursor);
        }
        if let Some(extra) = members.keys().next() {
            return Err(Error::NameMismatch(format!("documents for bucket `{extra}` absent from the manifest")));
        }
        Ok(MixtureSampler {
            buckets,
            rng: ChaCha8Rng::seed_from_u64(derive_seed(manifest.seed, "interleave")),
        })
    }

    /// Per-bucket `(name, emitted tokens, quota)`.
    pub fn progress(&self) -> Vec<(String, u64, u64)> {
        self.buckets.iter().map(|b| (b.name.clone(), b.emitted, b.quota)).collect()
    }
}

impl Iterator for MixtureSampler {
    type Item = Document;

    fn next(&mut self) -> Option<Document> {
        let open: Vec<usize> = (0..self.buckets.len()).filter(|&i| !self.buckets[i].done()).collect();
        if open.is_empty() {
            return None;
        }
        let remaining = open.iter().map(|&i| (self.buckets[i].quota - self.buckets[i].emitted) as f64);
        let pick = WeightedIndex::new(remaining).expect("open buckets have positive remaining quota");
        let i = open[pick.sample(&mut self.rng)];
        Some(self.buckets[i].next_doc())
    }
}

pub fn sample_mixture(manifest: &MixtureManifest, members: BTreeMap<String, Vec<Document>>) -> Result<MixtureSampler> {
    MixtureSampler::new(manifest, members)
}
