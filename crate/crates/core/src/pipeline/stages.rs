//! Stage bodies. Each reads its inputs and writes every output into `dir`.

use std::collections::{BTreeMap, HashSet};
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{CurateConfig, CurateStep, PipelineConfig, SelectConfig, WeightsConfig};
use crate::attributes::{analyze, ingest_label_files, write_reports, IngestReport};
use crate::corpus::{
    compute_stats, read_corpus, read_jsonl_file, write_jsonl_file, Document, LabelPolicy, ReadOptions, TokenizerScheme,
};
use crate::curation::{
    code_filter, exact_dedup, fuzzy_dedup, heuristic_filter, perplexity_filter, FilterRecord, NgramLm,
    PerplexityRecord, SourcePriority,
};
use crate::hashing::derive_seed;
use crate::sampling::{
    alpha_weights, doremi_weights, drop_empty, emit_manifest, preference_weights, proportional_weights,
    sample_mixture, unimax_weights, Bucket, BucketMember, BucketMode, Bucketing, DoremiConfig, FileLossOracle,
    LossOracle, MixtureManifest, SyntheticOracle, WeightMethod, DEFAULT_BUCKET_EPOCH_CAP, DEFAULT_SOURCE_EPOCH_CAP,
};
use crate::selection::{
    build_attribute_target, compare_targets, dsir_select, Predicate, SelectionPlan, TargetSpec,
};
use crate::{Error, Result};

pub const DOCUMENTS: &str = "documents.jsonl";
pub const BUCKETS: &str = "buckets.json";
pub const ASSIGNMENTS: &str = "assignments.jsonl";
pub const MANIFEST: &str = "manifest.json";

pub(crate) fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(f);
    serde_json::to_writer_pretty(&mut w, value)?;
    std::io::Write::write_all(&mut w, b"\n").map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub(crate) fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Reads documents written by an earlier stage.
pub(crate) fn read_documents(path: &Path) -> Result<Vec<Document>> {
    Ok(read_corpus(&[path], ReadOptions { strict: true, labels: LabelPolicy::Lenient })?.documents)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadReport {
    pub documents: usize,
    pub malformed_lines: usize,
    pub duplicate_ids: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<IngestReport>,
}

/// Reads every source in config order. The configured source name replaces
/// each document's `source`; an id seen in an earlier source is dropped.
pub fn load_sources(cfg: &PipelineConfig) -> Result<(Vec<Document>, LoadReport)> {
    let policy = cfg.labels_policy();
    let mut docs = Vec::new();
    let mut report = LoadReport::default();
    let mut seen = HashSet::new();
    for s in &cfg.sources {
        let out = read_corpus(&s.paths, ReadOptions { strict: false, labels: policy })?;
        report.malformed_lines += out.errors.len();
        for mut d in out.documents {
            if !seen.insert(d.id.clone()) {
                log::warn!("dropping duplicate id `{}` in source `{}`", d.id, s.name);
                report.duplicate_ids += 1;
                continue;
            }
            d.source = s.name.clone();
            docs.push(d);
        }
    }
    if let Some(l) = cfg.labels.as_ref().filter(|l| !l.paths.is_empty()) {
        report.labels = Some(ingest_label_files(&mut docs, &l.paths, l.policy)?);
    }
    report.documents = docs.len();
    Ok((docs, report))
}

fn write_stats(dir: &Path, docs: &[Document], cfg: &PipelineConfig) -> Result<()> {
    let order = cfg.age_order();
    let manifest = compute_stats(docs, cfg.tokenizer, Some(&order));
    write_json(&dir.join("stats.json"), &manifest)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepSummary {
    pub step: String,
    pub documents_in: usize,
    pub documents_out: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn train_lm(c: &CurateConfig) -> Result<Option<NgramLm>> {
    if c.lm_training.is_empty() {
        return Ok(None);
    }
    let docs = read_corpus(&c.lm_training, ReadOptions::default())?.documents;
    NgramLm::train(&docs, c.lm_order).map(Some)
}

pub fn curate(cfg: &PipelineConfig, c: &CurateConfig, mut docs: Vec<Document>, dir: &Path) -> Result<()> {
    let code: HashSet<&str> = cfg.sources.iter().filter(|s| s.code).map(|s| s.name.as_str()).collect();
    let mut dedup = Vec::new();
    let mut quality: Vec<FilterRecord> = Vec::new();
    let mut scores: Vec<PerplexityRecord> = Vec::new();
    let mut steps = Vec::new();
    let lm = if c.steps.contains(&CurateStep::Perplexity) { train_lm(c)? } else { None };
    for step in &c.steps {
        let before = docs.len();
        let mut note = None;
        docs = match step {
            CurateStep::Exact => {
                let (kept, records) = exact_dedup(docs);
                dedup.extend(records);
                kept
            }
            CurateStep::Fuzzy => {
                let mut fc = c.fuzzy;
                fc.seed = derive_seed(cfg.seed, "curate/minhash");
                let priority =
                    SourcePriority::from_regime(c.priority, &cfg.age_order(), derive_seed(cfg.seed, "curate/priority"));
                let out = fuzzy_dedup(docs, &fc, &priority)?;
                if !out.bypassed.is_empty() {
                    note = Some(format!("{} documents shorter than one shingle were not compared", out.bypassed.len()));
                }
                dedup.extend(out.records);
                out.kept
            }
            CurateStep::Quality => {
                let mut code_t = c.code.clone();
                code_t.tokenizer = cfg.tokenizer;
                let verdicts: Vec<FilterRecord> = docs
                    .iter()
                    .map(|d| {
                        let v = if code.contains(d.source.as_str()) {
                            code_filter(d, &code_t)
                        } else {
                            heuristic_filter(d, &c.thresholds, d.is_english())
                        };
                        FilterRecord::new(&d.id, v)
                    })
                    .collect();
                let kept = docs.into_iter().zip(&verdicts).filter_map(|(d, v)| v.kept.then_some(d)).collect();
                quality.extend(verdicts);
                kept
            }
            CurateStep::Perplexity => match &lm {
                None => {
                    log::warn!("perplexity step skipped: curate.lm_training is empty");
                    note = Some("skipped: no language-model training data".into());
                    docs
                }
                Some(lm) => {
                    // code is scored by its own filters only
                    let text: Vec<Document> =
                        docs.iter().filter(|d| !code.contains(d.source.as_str())).cloned().collect();
                    let (kept, records) = perplexity_filter(text, lm, c.perplexity_threshold())?;
                    scores.extend(records);
                    let keep: HashSet<String> = kept.into_iter().map(|d| d.id).collect();
                    docs.retain(|d| code.contains(d.source.as_str()) || keep.contains(&d.id));
                    docs
                }
            },
        };
        steps.push(StepSummary { step: step.name().into(), documents_in: before, documents_out: docs.len(), note });
    }
    write_jsonl_file(&dir.join(DOCUMENTS), &docs)?;
    write_jsonl_file(&dir.join("dedup.jsonl"), &dedup)?;
    write_jsonl_file(&dir.join("quality.jsonl"), &quality)?;
    write_jsonl_file(&dir.join("perplexity.jsonl"), &scores)?;
    if let Some(lm) = &lm {
        write_json(&dir.join("lm.json"), &lm.summary())?;
    }
    write_json(&dir.join("summary.json"), &steps)?;
    write_stats(dir, &docs, cfg)
}

fn target_documents(cfg: &PipelineConfig, spec: &TargetSpec, corpus: &[Document]) -> Result<(Vec<Document>, usize)> {
    match spec {
        TargetSpec::Paths(paths) => {
            let out = read_corpus(paths, ReadOptions { strict: false, labels: cfg.labels_policy() })?;
            Ok((out.documents, 0))
        }
        TargetSpec::Predicate(expr) => {
            let p = Predicate::parse(expr)?;
            let t = build_attribute_target(corpus, &p, cfg.labels_policy())?;
            Ok((t.documents, t.missing_labels))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectSummary {
    pub documents_in: usize,
    pub selected: usize,
    pub target_documents: usize,
    pub target_missing_labels: usize,
    pub per_source: BTreeMap<String, (usize, usize)>,
}

pub fn select(cfg: &PipelineConfig, s: &SelectConfig, docs: Vec<Document>, dir: &Path) -> Result<()> {
    let plan = SelectionPlan {
        mode: s.mode,
        rate: s.rate,
        seed: derive_seed(cfg.seed, "select"),
        buckets: s.buckets,
        ngram_orders: s.ngram_orders.clone(),
        smoothing: s.smoothing,
        target: Some(s.target.clone()),
    };
    let (target, missing) = target_documents(cfg, &s.target, &docs)?;
    if !s.compare.is_empty() {
        let mut targets = vec![("target".to_string(), target.clone())];
        for (name, spec) in &s.compare {
            targets.push((name.clone(), target_documents(cfg, spec, &docs)?.0));
        }
        write_json(&dir.join("target_comparison.json"), &compare_targets(&docs, &plan, &targets)?)?;
    }
    let n = docs.len();
    let out = dsir_select(docs, &plan, &target)?;
    let mut per_source: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for r in &out.report {
        let e = per_source.entry(r.source.clone()).or_default();
        e.0 += 1;
        e.1 += r.selected as usize;
    }
    write_jsonl_file(&dir.join(DOCUMENTS), &out.selected)?;
    write_jsonl_file(&dir.join("report.jsonl"), &out.report)?;
    // the recorded plan names target files relative to the config directory
    let portable = cfg.portable();
    let target_spec = portable.select.as_ref().map(|p| p.target.clone());
    write_json(&dir.join("plan.json"), &SelectionPlan { target: target_spec, ..plan })?;
    write_json(
        &dir.join("summary.json"),
        &SelectSummary {
            documents_in: n,
            selected: out.selected.len(),
            target_documents: target.len(),
            target_missing_labels: missing,
            per_source,
        },
    )?;
    write_stats(dir, &out.selected, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketSummary {
    pub name: String,
    pub members: Vec<BucketMember>,
    pub doc_count: u64,
    pub token_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub id: String,
    pub bucket: String,
}

pub fn bucketing(cfg: &PipelineConfig) -> Bucketing {
    Bucketing {
        mode: cfg.buckets.mode,
        attribute: cfg.buckets.attribute,
        bins: cfg.buckets.toxicity_bins.clone(),
        policy: cfg.labels_policy(),
    }
}

pub fn buckets(cfg: &PipelineConfig, docs: &[Document], dir: &Path) -> Result<()> {
    let order = cfg.age_order();
    let manifest = compute_stats(docs, cfg.tokenizer, Some(&order));
    let bucketing = bucketing(cfg);
    let built = bucketing.build(&manifest, docs)?;
    let assignments: Vec<Assignment> = docs
        .iter()
        .map(|d| Ok(Assignment { id: d.id.clone(), bucket: bucketing.bucket_name(d)? }))
        .collect::<Result<_>>()?;
    let summary: Vec<BucketSummary> = built
        .into_iter()
        .map(|b| BucketSummary { name: b.name, members: b.members, doc_count: b.doc_count, token_count: b.token_count })
        .collect();
    write_json(&dir.join(BUCKETS), &summary)?;
    write_jsonl_file(&dir.join(ASSIGNMENTS), &assignments)
}

pub fn weights(cfg: &PipelineConfig, w: &WeightsConfig, buckets_path: &Path, dir: &Path) -> Result<()> {
    let summary: Vec<BucketSummary> = read_json(buckets_path)?;
    let all: Vec<Bucket> = summary
        .into_iter()
        .map(|b| Bucket { name: b.name, members: b.members, doc_count: b.doc_count, token_count: b.token_count, doc_ids: Vec::new() })
        .collect();
    let stats = drop_empty(&Bucket::stats(&all));
    if stats.is_empty() {
        return Err(Error::EmptyCorpus("no bucket has any tokens"));
    }
    let mut budget = w.budget.unwrap_or_else(|| stats.iter().map(|s| s.token_count).sum());
    let vector = match w.method {
        WeightMethod::Alpha => alpha_weights(&stats, w.alpha)?,
        WeightMethod::Proportional => proportional_weights(&stats)?,
        WeightMethod::Unimax => {
            let default_cap = match cfg.buckets.mode {
                BucketMode::Source => DEFAULT_SOURCE_EPOCH_CAP,
                _ => DEFAULT_BUCKET_EPOCH_CAP,
            };
            let out = unimax_weights(&stats, budget as f64, w.epoch_cap.unwrap_or(default_cap))?;
            if out.under_budget {
                // spending the full budget would push every bucket past its cap
                let capacity = out.allocations.iter().sum::<f64>().floor() as u64;
                log::warn!("manifest budget reduced from {budget} to the capped capacity {capacity}");
                budget = capacity;
            }
            out.weights
        }
        WeightMethod::Preference => {
            let known: HashSet<&str> = stats.iter().map(|s| s.source.as_str()).collect();
            if let Some(extra) = w.preference.keys().find(|k| !known.contains(k.as_str())) {
                return Err(Error::NameMismatch(format!("preference weight for unknown bucket `{extra}`")));
            }
            preference_weights(stats.iter().map(|s| (s.source.clone(), w.preference.get(&s.source).copied().unwrap_or(0.0))))?
        }
        WeightMethod::Doremi => {
            let domains: Vec<String> = stats.iter().map(|s| s.source.clone()).collect();
            let mut oracle: Box<dyn LossOracle> = match (&w.doremi.losses, &w.doremi.synthetic) {
                (Some(path), _) => Box::new(FileLossOracle::open(path, &domains)?),
                (None, Some(losses)) => Box::new(SyntheticOracle::constant(&domains, losses.clone())?),
                (None, None) => return Err(Error::Oracle("no loss source configured".into())),
            };
            let dc = DoremiConfig {
                steps: w.doremi.steps,
                learning_rate: w.doremi.learning_rate,
                smoothing: w.doremi.smoothing,
                init: None,
            };
            let (vector, trace) = doremi_weights(oracle.as_mut(), &dc)?;
            write_jsonl_file(&dir.join("doremi_trace.jsonl"), &trace)?;
            vector
        }
    };
    let manifest = emit_manifest(&vector, &stats, budget, derive_seed(cfg.seed, "sample"), cfg.tokenizer)?;
    write_json(&dir.join("weights.json"), &vector)?;
    write_json(&dir.join(MANIFEST), &manifest)?;
    let f = File::create(dir.join("weights.csv")).map_err(|e| Error::io(dir.join("weights.csv"), e))?;
    manifest.write_table(f)
}

pub fn analyze_stage(cfg: &PipelineConfig, docs: &[Document], dir: &Path) -> Result<()> {
    let a = cfg.analyze_config().expect("analyze stage runs only when enabled");
    let lm = match cfg.curate.as_ref() {
        Some(c) => train_lm(c)?,
        None => None,
    };
    let report = analyze(docs, lm.as_ref(), &a.analysis())?;
    write_reports(dir, &report)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmittedBucket {
    pub name: String,
    pub quota: u64,
    pub emitted_tokens: u64,
    pub documents: u64,
}

pub fn sample(
    manifest_path: &Path,
    assignments_path: &Path,
    docs: Vec<Document>,
    tokenizer: TokenizerScheme,
    dir: &Path,
) -> Result<()> {
    let manifest: MixtureManifest = read_json(manifest_path)?;
    if manifest.tokenizer != tokenizer {
        return Err(Error::InvalidParameter(format!(
            "manifest counts `{}` tokens but the config uses `{}`",
            manifest.tokenizer, tokenizer
        )));
    }
    let assignments: Vec<Assignment> = read_jsonl_file(assignments_path)?;
    let bucket_of: BTreeMap<String, String> = assignments.into_iter().map(|a| (a.id, a.bucket)).collect();
    let in_manifest: HashSet<&str> = manifest.buckets.iter().map(|b| b.name.as_str()).collect();
    let mut members: BTreeMap<String, Vec<Document>> = BTreeMap::new();
    for d in docs {
        let b = bucket_of
            .get(&d.id)
            .ok_or_else(|| Error::NameMismatch(format!("document `{}` has no bucket assignment", d.id)))?;
        // buckets dropped for having no tokens are absent from the manifest
        if in_manifest.contains(b.as_str()) {
            members.entry(b.clone()).or_default().push(d);
        }
    }
    let mut emitted: BTreeMap<String, EmittedBucket> = manifest
        .buckets
        .iter()
        .map(|b| (b.name.clone(), EmittedBucket { name: b.name.clone(), quota: b.quota, emitted_tokens: 0, documents: 0 }))
        .collect();
    let sampler = sample_mixture(&manifest, members)?;
    let path = dir.join("mixture.jsonl");
    let f = File::create(&path).map_err(|e| Error::io(&path, e))?;
    let mut w = BufWriter::new(f);
    for doc in sampler {
        let e = emitted.get_mut(&bucket_of[&doc.id]).expect("sampled documents come from manifest buckets");
        e.emitted_tokens += crate::corpus::count_tokens(&doc.text, tokenizer);
        e.documents += 1;
        serde_json::to_writer(&mut w, &doc)?;
        std::io::Write::write_all(&mut w, b"\n").map_err(|e| Error::io(&path, e))?;
    }
    std::io::Write::flush(&mut w).map_err(|e| Error::io(&path, e))?;
    let summary: Vec<EmittedBucket> = manifest.buckets.iter().map(|b| emitted[&b.name].clone()).collect();
    write_json(&dir.join("summary.json"), &summary)
}
