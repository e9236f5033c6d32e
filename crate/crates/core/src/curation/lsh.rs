use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::minhash::MinHashSignature;
use super::union_find::UnionFind;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClusterMember {
    pub id: String,
    pub source: String,
}

/// A connected group of near-duplicates. Singletons never form a cluster.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuplicateCluster {
    pub members: Vec<ClusterMember>,
    pub keeper_id: Option<String>,
}

impl DuplicateCluster {
    pub fn member_ids(&self) -> impl Iterator<Item = &str> {
        self.members.iter().map(|m| m.id.as_str())
    }

    pub fn keeper(&self) -> Option<&ClusterMember> {
        let k = self.keeper_id.as_deref()?;
        self.members.iter().find(|m| m.id == k)
    }
}

/// A signed document handed to [`lsh_clusters`].
#[derive(Debug, Clone)]
pub struct SignedDoc {
    pub member: ClusterMember,
    pub signature: MinHashSignature,
}

/// Probability that a pair with Jaccard `j` collides in at least one band.
pub fn collision_probability(j: f64, bands: usize, rows: usize) -> f64 {
    1.0 - (1.0 - j.powi(rows as i32)).powi(bands as i32)
}

/// Connected components of the band-collision graph, as index groups.
///
/// Two signatures collide when some band's `rows` values are identical; bands
/// are compared by value, so there are no false collisions from band hashing.
pub fn lsh_components(
    signatures: &[&MinHashSignature],
    bands: usize,
    rows: usize,
) -> Result<Vec<Vec<usize>>> {
    let mut uf = UnionFind::new(signatures.len());
    for sig in signatures {
        if bands == 0 || rows == 0 || bands * rows != sig.len() {
            return Err(Error::BandMismatch {
                bands,
                rows,
                permutations: sig.len(),
            });
        }
    }
    for band in 0..bands {
        let mut first: HashMap<&[u64], usize> = HashMap::with_capacity(signatures.len());
        for (i, sig) in signatures.iter().enumerate() {
            let key = &sig.values[band * rows..(band + 1) * rows];
            match first.get(key) {
                Some(&j) => {
                    uf.union(i, j);
                }
                None => {
                    first.insert(key, i);
                }
            }
        }
    }
    Ok(uf.groups(2))
}

/// Clusters of documents connected by chains of band collisions, keeper unset.
pub fn lsh_clusters(docs: &[SignedDoc], bands: usize, rows: usize) -> Result<Vec<DuplicateCluster>> {
    let sigs: Vec<&MinHashSignature> = docs.iter().map(|d| &d.signature).collect();
    Ok(lsh_components(&sigs, bands, rows)?
        .into_iter()
        .map(|group| DuplicateCluster {
            members: group.into_iter().map(|i| docs[i].member.clone()).collect(),
            keeper_id: None,
        })
        .collect())
}
