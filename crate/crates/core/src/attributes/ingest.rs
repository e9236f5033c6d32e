use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{AttributeLabels, Document, LabelPolicy, RawLabels};
use crate::{Error, Result};

/// One row of a label file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelRow {
    pub id: String,
    #[serde(flatten)]
    pub labels: RawLabels,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub rows: usize,
    pub matched: usize,
    pub unmatched: usize,
    pub invalid: usize,
    /// Up to [`MAX_REPORTED_IDS`] examples, sorted.
    pub unmatched_ids: Vec<String>,
    pub invalid_ids: Vec<String>,
}

pub const MAX_REPORTED_IDS: usize = 20;

fn note(list: &mut Vec<String>, id: &str) {
    list.push(id.to_string());
}

/// Attaches labels to documents by id. Present fields overwrite existing ones.
///
/// Under `Strict` the first unmatched id, malformed value, or duplicate id is
/// an error and nothing is attached. Under `Lenient` those rows are skipped
/// and counted; out-of-vocabulary names become `Unknown`. Every row of a
/// duplicated id is rejected, so the result does not depend on row order.
pub fn ingest_labels(corpus: &mut [Document], rows: &[LabelRow], policy: LabelPolicy) -> Result<IngestReport> {
    let index: HashMap<&str, usize> = corpus.iter().enumerate().map(|(i, d)| (d.id.as_str(), i)).collect();
    let mut occurrences: HashMap<&str, usize> = HashMap::new();
    for r in rows {
        *occurrences.entry(r.id.as_str()).or_default() += 1;
    }
    let mut report = IngestReport { rows: rows.len(), ..Default::default() };
    let mut updates: Vec<(usize, AttributeLabels)> = Vec::new();
    for r in rows {
        if occurrences[r.id.as_str()] > 1 {
            if policy == LabelPolicy::Strict {
                return Err(Error::InvalidLabel(format!("id `{}` is labeled more than once", r.id)));
            }
            report.invalid += 1;
            note(&mut report.invalid_ids, &r.id);
            continue;
        }
        let Some(&doc) = index.get(r.id.as_str()) else {
            if policy == LabelPolicy::Strict {
                return Err(Error::UnmatchedId(r.id.clone()));
            }
            report.unmatched += 1;
            note(&mut report.unmatched_ids, &r.id);
            continue;
        };
        match r.labels.resolve(policy) {
            Ok(labels) => {
                report.matched += 1;
                updates.push((doc, labels));
            }
            Err(e) => {
                if policy == LabelPolicy::Strict {
                    return Err(e);
                }
                report.invalid += 1;
                note(&mut report.invalid_ids, &r.id);
            }
        }
    }
    for (i, new) in updates {
        let merged = match corpus[i].attributes.take() {
            None => new,
            Some(old) => AttributeLabels {
                toxicity: new.toxicity.or(old.toxicity),
                quality: new.quality.or(old.quality),
                domain: new.domain.or(old.domain),
                type_of_speech: new.type_of_speech.or(old.type_of_speech),
            },
        };
        corpus[i].attributes = (!merged.is_empty()).then_some(merged);
    }
    for list in [&mut report.unmatched_ids, &mut report.invalid_ids] {
        list.sort_unstable();
        list.dedup();
        list.truncate(MAX_REPORTED_IDS);
    }
    if report.unmatched + report.invalid > 0 {
        log::warn!(
            "labels: {} matched, {} unmatched, {} invalid of {} rows",
            report.matched,
            report.unmatched,
            report.invalid,
            report.rows
        );
    }
    Ok(report)
}

/// Reads label rows. Malformed lines fail under `Strict` and are counted
/// under `Lenient`.
pub fn read_label_file(path: &Path, policy: LabelPolicy) -> Result<(Vec<LabelRow>, usize)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    let mut malformed = 0;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<LabelRow>(&line) {
            Ok(r) => rows.push(r),
            Err(e) if policy == LabelPolicy::Strict => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: e.to_string(),
                })
            }
            Err(e) => {
                log::warn!("{}:{}: {}", path.display(), i + 1, e);
                malformed += 1;
            }
        }
    }
    Ok((rows, malformed))
}

/// Reads every file and ingests the rows together; malformed lines count as invalid.
pub fn ingest_label_files<P: AsRef<Path>>(
    corpus: &mut [Document],
    paths: &[P],
    policy: LabelPolicy,
) -> Result<IngestReport> {
    let mut rows = Vec::new();
    let mut malformed = 0;
    for p in paths {
        let (r, m) = read_label_file(p.as_ref(), policy)?;
        rows.extend(r);
        malformed += m;
    }
    let mut report = ingest_labels(corpus, &rows, policy)?;
    report.rows += malformed;
    report.invalid += malformed;
    Ok(report)
}
