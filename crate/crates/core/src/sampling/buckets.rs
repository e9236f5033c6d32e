use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{count_tokens, Attribute, CorpusManifest, Document, LabelPolicy, SourceStats, ToxicityBins, UNKNOWN};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BucketMode {
    /// One bucket per source.
    #[default]
    Source,
    /// One bucket per (source, label).
    FineGrained,
    /// One bucket per label across all sources.
    Grouped,
}

impl FromStr for BucketMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "source" => Ok(BucketMode::Source),
            "fine-grained" | "fine" => Ok(BucketMode::FineGrained),
            "grouped" => Ok(BucketMode::Grouped),
            _ => Err(Error::InvalidParameter(format!("unknown bucket mode `{s}`"))),
        }
    }
}

impl fmt::Display for BucketMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BucketMode::Source => "source",
            BucketMode::FineGrained => "fine-grained",
            BucketMode::Grouped => "grouped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BucketMember {
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bucket {
    pub name: String,
    pub members: Vec<BucketMember>,
    pub doc_count: u64,
    pub token_count: u64,
    pub doc_ids: Vec<String>,
}

impl Bucket {
    /// Stats view used by the weighting methods; `age_rank` is the bucket index.
    pub fn stats(buckets: &[Bucket]) -> Vec<SourceStats> {
        buckets
            .iter()
            .enumerate()
            .map(|(i, b)| SourceStats {
                source: b.name.clone(),
                doc_count: b.doc_count,
                token_count: b.token_count,
                age_rank: i,
            })
            .collect()
    }
}

/// How documents map to buckets.
#[derive(Debug, Clone, PartialEq)]
pub struct Bucketing {
    pub mode: BucketMode,
    pub attribute: Option<Attribute>,
    pub bins: ToxicityBins,
    pub policy: LabelPolicy,
}

impl Bucketing {
    pub fn sources() -> Self {
        Bucketing {
            mode: BucketMode::Source,
            attribute: None,
            bins: ToxicityBins::default(),
            policy: LabelPolicy::Lenient,
        }
    }

    pub fn by_attribute(mode: BucketMode, attribute: Attribute, policy: LabelPolicy) -> Self {
        Bucketing {
            mode,
            attribute: Some(attribute),
            bins: ToxicityBins::default(),
            policy,
        }
    }

    fn label(&self, doc: &Document) -> Result<String> {
        let attribute = self
            .attribute
            .ok_or_else(|| Error::InvalidParameter(format!("{} buckets need an attribute", self.mode)))?;
        match attribute.label_of(doc.attributes.as_ref(), &self.bins) {
            Some(l) if l != UNKNOWN || self.policy == LabelPolicy::Lenient => Ok(l),
            _ => match self.policy {
                LabelPolicy::Lenient => Ok(UNKNOWN.to_string()),
                LabelPolicy::Strict => Err(Error::MissingLabel {
                    id: doc.id.clone(),
                    attribute: attribute.name().to_string(),
                }),
            },
        }
    }

    pub fn member(&self, doc: &Document) -> Result<BucketMember> {
        let label = match self.mode {
            BucketMode::Source => None,
            _ => Some(self.label(doc)?),
        };
        Ok(BucketMember { source: doc.source.clone(), label })
    }

    pub fn name_of(&self, member: &BucketMember) -> String {
        match (self.mode, &member.label) {
            (BucketMode::FineGrained, Some(l)) => format!("{}-{}", member.source, l),
            (BucketMode::Grouped, Some(l)) => l.clone(),
            _ => member.source.clone(),
        }
    }

    pub fn bucket_name(&self, doc: &Document) -> Result<String> {
        Ok(self.name_of(&self.member(doc)?))
    }

    /// Groups documents into buckets. Output order: sources by age, then
    /// labels by vocabulary order (`Unknown` last).
    pub fn build<'a, I>(&self, manifest: &CorpusManifest, corpus: I) -> Result<Vec<Bucket>>
    where
        I: IntoIterator<Item = &'a Document>,
    {
        let source_rank: HashMap<&str, usize> = manifest
            .sources
            .iter()
            .enumerate()
            .map(|(i, s)| (s.source.as_str(), i))
            .collect();
        let label_rank: HashMap<String, usize> = self
            .attribute
            .map(|a| a.vocabulary(&self.bins))
            .unwrap_or_default()
            .into_iter()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect();
        let mut groups: BTreeMap<(usize, usize), Bucket> = BTreeMap::new();
        for doc in corpus {
            let &src = source_rank
                .get(doc.source.as_str())
                .ok_or_else(|| Error::UnknownSource(doc.source.clone()))?;
            let member = self.member(doc)?;
            let lab = member.label.as_ref().map_or(0, |l| label_rank.get(l).copied().unwrap_or(usize::MAX));
            let key = match self.mode {
                BucketMode::Source => (src, 0),
                BucketMode::FineGrained => (src, lab),
                BucketMode::Grouped => (0, lab),
            };
            let bucket = groups.entry(key).or_insert_with(|| Bucket {
                name: self.name_of(&member),
                members: Vec::new(),
                doc_count: 0,
                token_count: 0,
                doc_ids: Vec::new(),
            });
            bucket.doc_count += 1;
            bucket.token_count += count_tokens(&doc.text, manifest.tokenizer);
            bucket.doc_ids.push(doc.id.clone());
            if !bucket.members.contains(&member) {
                bucket.members.push(member);
            }
        }
        let mut out: Vec<Bucket> = groups.into_values().collect();
        for b in &mut out {
            b.members.sort_by_key(|m| source_rank[m.source.as_str()]);
        }
        Ok(out)
    }
}

pub fn fine_grained_buckets<'a, I>(
    manifest: &CorpusManifest,
    corpus: I,
    attribute: Attribute,
    policy: LabelPolicy,
) -> Result<Vec<Bucket>>
where
    I: IntoIterator<Item = &'a Document>,
{
    Bucketing::by_attribute(BucketMode::FineGrained, attribute, policy).build(manifest, corpus)
}

pub fn grouped_buckets<'a, I>(
    manifest: &CorpusManifest,
    corpus: I,
    attribute: Attribute,
    policy: LabelPolicy,
) -> Result<Vec<Bucket>>
where
    I: IntoIterator<Item = &'a Document>,
{
    Bucketing::by_attribute(BucketMode::Grouped, attribute, policy).build(manifest, corpus)
}
