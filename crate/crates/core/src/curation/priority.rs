use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lsh::DuplicateCluster;
use crate::{Error, Result};

/// Which sources win when near-duplicates span several of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PriorityRegime {
    #[default]
    OldToRecent,
    RecentToOld,
    Random,
}

impl FromStr for PriorityRegime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "old-to-recent" => Ok(PriorityRegime::OldToRecent),
            "recent-to-old" => Ok(PriorityRegime::RecentToOld),
            "random" => Ok(PriorityRegime::Random),
            other => Err(Error::InvalidParameter(format!("unknown priority regime `{other}`"))),
        }
    }
}

impl fmt::Display for PriorityRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PriorityRegime::OldToRecent => "old-to-recent",
            PriorityRegime::RecentToOld => "recent-to-old",
            PriorityRegime::Random => "random",
        })
    }
}

/// Total order over sources; rank 0 is kept first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourcePriority {
    order: Vec<String>,
    ranks: HashMap<String, usize>,
}

impl SourcePriority {
    pub fn from_order(order: Vec<String>) -> Self {
        let ranks = order
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        SourcePriority { order, ranks }
    }

    /// `oldest_first` lists sources by age rank.
    pub fn from_regime(regime: PriorityRegime, oldest_first: &[String], seed: u64) -> Self {
        let mut order = oldest_first.to_vec();
        match regime {
            PriorityRegime::OldToRecent => {}
            PriorityRegime::RecentToOld => order.reverse(),
            PriorityRegime::Random => order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
        }
        SourcePriority::from_order(order)
    }

    pub fn rank(&self, source: &str) -> Option<usize> {
        self.ranks.get(source).copied()
    }

    pub fn order(&self) -> &[String] {
        &self.order
    }
}

/// Sets each cluster's keeper to the member from the best-ranked source,
/// breaking ties by the lexicographically smallest id.
pub fn resolve_keepers(
    clusters: Vec<DuplicateCluster>,
    priority: &SourcePriority,
) -> Result<Vec<DuplicateCluster>> {
    clusters
        .into_iter()
        .map(|mut c| {
            let mut best: Option<(usize, &str)> = None;
            for m in &c.members {
                let rank = priority
                    .rank(&m.source)
                    .ok_or_else(|| Error::UnknownSource(m.source.clone()))?;
                if best.is_none_or(|b| (rank, m.id.as_str()) < b) {
                    best = Some((rank, m.id.as_str()));
                }
            }
            c.keeper_id = best.map(|(_, id)| id.to_string());
            Ok(c)
        })
        .collect()
}
