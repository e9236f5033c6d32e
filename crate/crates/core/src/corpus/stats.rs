use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::document::{Document, Snapshot};
use super::tokenize::{count_tokens, TokenizerScheme};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceStats {
    pub source: String,
    pub doc_count: u64,
    pub token_count: u64,
    /// 0 is the oldest source.
    pub age_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub tokenizer: TokenizerScheme,
    /// Ordered by age rank.
    pub sources: Vec<SourceStats>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub shards: BTreeMap<String, Vec<PathBuf>>,
    pub total_tokens: u64,
}

impl CorpusManifest {
    pub fn source(&self, name: &str) -> Option<&SourceStats> {
        self.sources.iter().find(|s| s.source == name)
    }

    /// Source names, oldest first.
    pub fn age_order(&self) -> Vec<String> {
        self.sources.iter().map(|s| s.source.clone()).collect()
    }
}

#[derive(Debug, Clone, Default)]
struct Partial {
    first_seen: usize,
    docs: u64,
    tokens: u64,
    oldest: Option<Snapshot>,
}

/// Associative accumulator behind [`compute_stats`]; partial results from
/// workers combine with [`StatsAccumulator::merge`].
#[derive(Debug, Clone, Default)]
pub struct StatsAccumulator {
    scheme: TokenizerScheme,
    per_source: HashMap<String, Partial>,
}

impl StatsAccumulator {
    pub fn new(scheme: TokenizerScheme) -> Self {
        StatsAccumulator {
            scheme,
            per_source: HashMap::new(),
        }
    }

    /// `position` is the document's index in the stream; it orders sources by
    /// first appearance when no other age information exists.
    pub fn add(&mut self, position: usize, doc: &Document) {
        let tokens = count_tokens(&doc.text, self.scheme);
        let entry = self
            .per_source
            .entry(doc.source.clone())
            .or_insert_with(|| Partial {
                first_seen: position,
                ..Default::default()
            });
        entry.first_seen = entry.first_seen.min(position);
        entry.docs += 1;
        entry.tokens += tokens;
        if let Some(s) = &doc.snapshot {
            if entry.oldest.as_ref().is_none_or(|o| s < o) {
                entry.oldest = Some(s.clone());
            }
        }
    }

    pub fn merge(mut self, other: StatsAccumulator) -> StatsAccumulator {
        for (source, p) in other.per_source {
            match self.per_source.get_mut(&source) {
                None => {
                    self.per_source.insert(source, p);
                }
                Some(e) => {
                    e.first_seen = e.first_seen.min(p.first_seen);
                    e.docs += p.docs;
                    e.tokens += p.tokens;
                    e.oldest = match (e.oldest.take(), p.oldest) {
                        (Some(a), Some(b)) => Some(a.min(b)),
                        (a, b) => a.or(b),
                    };
                }
            }
        }
        self
    }

    /// Assigns age ranks. Sources listed in `source_order` take that order
    /// (oldest first); the rest follow, ordered by oldest snapshot and then
    /// by first appearance.
    pub fn finish(self, source_order: Option<&[String]>) -> CorpusManifest {
        let mut entries: Vec<(String, Partial)> = self.per_source.into_iter().collect();
        let configured = |name: &str| source_order.and_then(|o| o.iter().position(|s| s == name));
        entries.sort_by(|(na, a), (nb, b)| {
            let key_a = (configured(na).unwrap_or(usize::MAX), a.oldest.is_none());
            let key_b = (configured(nb).unwrap_or(usize::MAX), b.oldest.is_none());
            key_a
                .cmp(&key_b)
                .then_with(|| a.oldest.cmp(&b.oldest))
                .then_with(|| a.first_seen.cmp(&b.first_seen))
                .then_with(|| na.cmp(nb))
        });
        let sources: Vec<SourceStats> = entries
            .into_iter()
            .enumerate()
            .map(|(rank, (source, p))| SourceStats {
                source,
                doc_count: p.docs,
                token_count: p.tokens,
                age_rank: rank,
            })
            .collect();
        CorpusManifest {
            tokenizer: self.scheme,
            total_tokens: sources.iter().map(|s| s.token_count).sum(),
            sources,
            shards: BTreeMap::new(),
        }
    }
}

pub fn compute_stats<'a, I>(
    corpus: I,
    scheme: TokenizerScheme,
    source_order: Option<&[String]>,
) -> CorpusManifest
where
    I: IntoIterator<Item = &'a Document>,
{
    let mut acc = StatsAccumulator::new(scheme);
    for (i, doc) in corpus.into_iter().enumerate() {
        acc.add(i, doc);
    }
    acc.finish(source_order)
}

/// Parallel map + merge over an in-memory corpus. Same result as [`compute_stats`].
pub fn compute_stats_par(
    corpus: &[Document],
    scheme: TokenizerScheme,
    source_order: Option<&[String]>,
) -> CorpusManifest {
    corpus
        .par_iter()
        .enumerate()
        .fold(
            || StatsAccumulator::new(scheme),
            |mut acc, (i, d)| {
                acc.add(i, d);
                acc
            },
        )
        .reduce(|| StatsAccumulator::new(scheme), StatsAccumulator::merge)
        .finish(source_order)
}
