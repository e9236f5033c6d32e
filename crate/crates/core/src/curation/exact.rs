use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::corpus::Document;
use crate::hashing::digest128;

/// 128-bit digest of NFC-normalized text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactHash(pub u128);

impl ExactHash {
    pub fn of(text: &str) -> Self {
        let normalized: String = text.nfc().collect();
        ExactHash(digest128(normalized.as_bytes()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DedupMethod {
    Exact,
    Fuzzy,
}

/// One line of the dedup report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DedupRecord {
    pub keeper_id: String,
    pub removed_ids: Vec<String>,
    pub cluster_size: usize,
    pub method: DedupMethod,
}

/// Streaming exact deduplicator. Keeps the first document seen per digest.
#[derive(Debug, Default)]
pub struct ExactDeduper {
    keepers: HashMap<ExactHash, usize>,
    groups: Vec<(String, Vec<String>)>,
}

impl ExactDeduper {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the document if it is the first with its digest.
    pub fn push(&mut self, doc: Document) -> Option<Document> {
        let digest = ExactHash::of(&doc.text);
        match self.keepers.get(&digest) {
            Some(&group) => {
                self.groups[group].1.push(doc.id);
                None
            }
            None => {
                self.keepers.insert(digest, self.groups.len());
                self.groups.push((doc.id.clone(), Vec::new()));
                Some(doc)
            }
        }
    }

    /// Groups that removed at least one document, in keeper order.
    pub fn into_report(self) -> Vec<DedupRecord> {
        self.groups
            .into_iter()
            .filter(|(_, removed)| !removed.is_empty())
            .map(|(keeper_id, removed_ids)| DedupRecord {
                keeper_id,
                cluster_size: removed_ids.len() + 1,
                removed_ids,
                method: DedupMethod::Exact,
            })
            .collect()
    }
}

pub fn exact_dedup<I>(corpus: I) -> (Vec<Document>, Vec<DedupRecord>)
where
    I: IntoIterator<Item = Document>,
{
    let mut dedup = ExactDeduper::new();
    let kept = corpus.into_iter().filter_map(|d| dedup.push(d)).collect();
    (kept, dedup.into_report())
}
