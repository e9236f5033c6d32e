use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::labels::{AttributeLabels, LabelPolicy, RawLabels};
use crate::{Error, Result};

/// Snapshot date (ISO-8601) or an ordinal age rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Snapshot {
    Ordinal(i64),
    Date(String),
}

impl PartialOrd for Snapshot {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Snapshot {
    // ISO dates order lexicographically; ordinals sort before dates.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Snapshot::Ordinal(a), Snapshot::Ordinal(b)) => a.cmp(b),
            (Snapshot::Date(a), Snapshot::Date(b)) => a.cmp(b),
            (Snapshot::Ordinal(_), Snapshot::Date(_)) => Ordering::Less,
            (Snapshot::Date(_), Snapshot::Ordinal(_)) => Ordering::Greater,
        }
    }
}

/// One text record. Immutable once parsed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<Snapshot>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attributes: Option<AttributeLabels>,
}

impl Document {
    pub fn new(id: impl Into<String>, source: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            text: text.into(),
            source: source.into(),
            snapshot: None,
            language: None,
            url: None,
            attributes: None,
        }
    }

    pub fn with_attributes(mut self, labels: AttributeLabels) -> Self {
        self.attributes = Some(labels);
        self
    }

    /// True when the document is English or carries no language tag.
    pub fn is_english(&self) -> bool {
        match self.language.as_deref() {
            None => true,
            Some(l) => l.eq_ignore_ascii_case("en") || l.to_ascii_lowercase().starts_with("en-"),
        }
    }
}

/// A JSONL line before validation.
#[derive(Debug, Deserialize)]
pub(crate) struct RawDocument {
    id: Option<String>,
    text: Option<String>,
    source: Option<String>,
    #[serde(default)]
    snapshot: Option<Snapshot>,
    #[serde(default)]
    language: Option<String>,
    #[serde(default)]
    url: Option<String>,
    #[serde(default)]
    attributes: Option<RawLabels>,
}

impl RawDocument {
    pub(crate) fn into_document(self, policy: LabelPolicy) -> Result<Document> {
        let missing = |field: &str| Error::InvalidParameter(format!("missing field `{field}`"));
        let id = self.id.ok_or_else(|| missing("id"))?;
        let text = self.text.ok_or_else(|| missing("text"))?;
        let source = self.source.ok_or_else(|| missing("source"))?;
        if id.is_empty() {
            return Err(Error::InvalidParameter("empty id".into()));
        }
        if text.trim().is_empty() {
            return Err(Error::InvalidParameter(format!("document {id} has empty text")));
        }
        let attributes = self
            .attributes
            .map(|raw| raw.resolve(policy))
            .transpose()?
            .filter(|l| !l.is_empty());
        Ok(Document {
            id,
            text,
            source,
            snapshot: self.snapshot,
            language: self.language,
            url: self.url,
            attributes,
        })
    }
}
