//! Keeper choice under the three source-priority regimes.

use std::collections::HashSet;

use corpusmix_core::curation::{resolve_keepers, ClusterMember, DuplicateCluster, PriorityRegime, SourcePriority};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::common::ensure;

const CLUSTERS: usize = 1_000;
const SOURCES: [&str; 5] = ["cc-2013", "cc-2016", "cc-2019", "cc-2021", "cc-2023"];
const REGIME_SEED: u64 = 5;

fn clusters(seed: u64) -> Vec<DuplicateCluster> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..CLUSTERS)
        .map(|c| DuplicateCluster {
            members: (0..rng.random_range(1..=6))
                .map(|m| ClusterMember {
                    id: format!("c{c}-m{m}-{}", rng.random_range(0..1000)),
                    source: SOURCES[rng.random_range(0..SOURCES.len())].to_string(),
                })
                .collect(),
            keeper_id: None,
        })
        .collect()
}

/// Smallest (position in `order`, id) over the members.
fn oracle_keeper(c: &DuplicateCluster, order: &[String]) -> String {
    let mut best: Option<(usize, &str)> = None;
    for m in &c.members {
        let rank = order.iter().position(|s| *s == m.source).expect("known source");
        let cand = (rank, m.id.as_str());
        if best.is_none_or(|b| cand < b) {
            best = Some(cand);
        }
    }
    best.unwrap().1.to_string()
}

pub fn run() -> Result<String, String> {
    let input = clusters(3);
    let oldest_first: Vec<String> = SOURCES.iter().map(|s| s.to_string()).collect();
    let mut keepers = Vec::new();
    for regime in [PriorityRegime::OldToRecent, PriorityRegime::RecentToOld, PriorityRegime::Random] {
        let priority = SourcePriority::from_regime(regime, &oldest_first, REGIME_SEED);
        let expected_order: Vec<String> = match regime {
            PriorityRegime::OldToRecent => oldest_first.clone(),
            PriorityRegime::RecentToOld => oldest_first.iter().rev().cloned().collect(),
            PriorityRegime::Random => priority.order().to_vec(),
        };
        ensure!(priority.order() == expected_order, "{regime}: order {:?}", priority.order());
        let resolved = resolve_keepers(input.clone(), &priority).map_err(|e| e.to_string())?;
        let mut ks = Vec::with_capacity(CLUSTERS);
        for (c, r) in input.iter().zip(&resolved) {
            let want = oracle_keeper(c, &expected_order);
            ensure!(r.keeper_id.as_deref() == Some(want.as_str()), "{regime}: keeper {:?}, oracle {want}", r.keeper_id);
            ks.push(want);
        }
        keepers.push(ks);
    }

    let multi: Vec<usize> = (0..CLUSTERS)
        .filter(|&i| input[i].members.iter().map(|m| &m.source).collect::<HashSet<_>>().len() >= 2)
        .collect();
    let differ = |a: usize, b: usize| multi.iter().filter(|&&i| keepers[a][i] != keepers[b][i]).count();
    let (old_new, old_rand, new_rand) = (differ(0, 1), differ(0, 2), differ(1, 2));
    let detail = format!(
        "{} multi-source clusters; keepers differ old/recent {old_new}, old/random {old_rand}, recent/random {new_rand}",
        multi.len()
    );
    ensure!(old_new == multi.len(), "old-to-recent and recent-to-old agree somewhere: {detail}");
    ensure!(old_rand > 0 && new_rand > 0, "random regime matches a fixed regime: {detail}");
    Ok(detail)
}
