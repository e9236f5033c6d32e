use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact::{DedupMethod, DedupRecord};
use super::lsh::{lsh_clusters, ClusterMember, DuplicateCluster, SignedDoc};
use super::minhash::MinHasher;
use super::priority::{resolve_keepers, SourcePriority};
use crate::corpus::Document;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FuzzyConfig {
    pub shingle_size: usize,
    pub permutations: usize,
    pub bands: usize,
    pub rows: usize,
    pub seed: u64,
}

impl Default for FuzzyConfig {
    fn default() -> Self {
        FuzzyConfig {
            shingle_size: 5,
            permutations: 128,
            bands: 16,
            rows: 8,
            seed: 0,
        }
    }
}

impl FuzzyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bands * self.rows != self.permutations || self.bands == 0 {
            return Err(Error::BandMismatch {
                bands: self.bands,
                rows: self.rows,
                permutations: self.permutations,
            });
        }
        if self.shingle_size == 0 {
            return Err(Error::InvalidParameter("shingle size must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Default)]
pub struct FuzzyOutcome {
    /// Survivors in input order.
    pub kept: Vec<Document>,
    pub records: Vec<DedupRecord>,
    pub clusters: Vec<DuplicateCluster>,
    /// Documents with fewer than `shingle_size` tokens; kept untouched.
    pub bypassed: Vec<String>,
}

/// MinHash + LSH near-duplicate removal. Each cluster keeps its
/// best-priority member and drops the other `|cluster| - 1`.
pub fn fuzzy_dedup(
    corpus: Vec<Document>,
    config: &FuzzyConfig,
    priority: &SourcePriority,
) -> Result<FuzzyOutcome> {
    config.validate()?;
    let hasher = MinHasher::new(config.shingle_size, config.permutations, config.seed)?;
    let signatures: Vec<_> = corpus.par_iter().map(|d| hasher.sign_text(&d.text)).collect();

    let mut bypassed = Vec::new();
    let mut signed = Vec::with_capacity(corpus.len());
    for (doc, sig) in corpus.iter().zip(signatures) {
        match sig {
            Some(signature) => signed.push(SignedDoc {
                member: ClusterMember {
                    id: doc.id.clone(),
                    source: doc.source.clone(),
                },
                signature,
            }),
            None => bypassed.push(doc.id.clone()),
        }
    }

    let clusters = resolve_keepers(lsh_clusters(&signed, config.bands, config.rows)?, priority)?;
    let mut removed: HashSet<&str> = HashSet::new();
    let mut records = Vec::with_capacity(clusters.len());
    for c in &clusters {
        let keeper = c.keeper_id.clone().expect("keeper resolved");
        let removed_ids: Vec<String> = c
            .member_ids()
            .filter(|id| *id != keeper)
            .map(str::to_string)
            .collect();
        for id in c.member_ids().filter(|id| *id != keeper) {
            removed.insert(id);
        }
        records.push(DedupRecord {
            keeper_id: keeper,
            cluster_size: c.members.len(),
            removed_ids,
            method: DedupMethod::Fuzzy,
        });
    }
    let drop: Vec<bool> = corpus.iter().map(|d| removed.contains(d.id.as_str())).collect();
    let kept = corpus
        .into_iter()
        .zip(drop)
        .filter_map(|(d, gone)| (!gone).then_some(d))
        .collect();
    Ok(FuzzyOutcome {
        kept,
        records,
        clusters,
        bypassed,
    })
}
