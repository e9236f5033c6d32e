use std::fmt;
use std::fs::{self, File};
use std::io::{BufReader, Read};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use xxhash_rust::xxh3::Xxh3;

use super::config::PipelineConfig;
use super::stages::{self, read_documents, read_json, write_json, ASSIGNMENTS, BUCKETS, DOCUMENTS, MANIFEST};
use crate::corpus::Document;
use crate::hashing::{digest_hex, DIGEST_NAME};
use crate::{Error, Result};

pub const RUN_INDEX: &str = "run.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Curate,
    Select,
    Buckets,
    Weights,
    Analyze,
    Sample,
}

impl Stage {
    /// Execution order.
    pub const ALL: [Stage; 6] = [Stage::Curate, Stage::Select, Stage::Buckets, Stage::Weights, Stage::Analyze, Stage::Sample];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Curate => "curate",
            Stage::Select => "select",
            Stage::Buckets => "buckets",
            Stage::Weights => "weights",
            Stage::Analyze => "analyze",
            Stage::Sample => "sample",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown stage `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputEntry {
    /// Relative to the output directory, `/`-separated.
    pub path: String,
    pub bytes: u64,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageEntry {
    pub stage: Stage,
    /// Digest of everything the stage's output depends on.
    pub input_digest: String,
    pub outputs: Vec<OutputEntry>,
}

/// Top-level `run.json`. Contains no timestamps or machine-local paths so
/// identical runs produce identical bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunIndex {
    pub tool: String,
    pub version: String,
    pub digest_algorithm: String,
    pub seed: u64,
    pub config_digest: String,
    pub inputs_digest: String,
    pub stages: Vec<StageEntry>,
}

impl RunIndex {
    pub fn stage(&self, stage: Stage) -> Option<&StageEntry> {
        self.stages.iter().find(|s| s.stage == stage)
    }

    fn record(&mut self, entry: StageEntry) {
        self.stages.retain(|s| s.stage != entry.stage);
        self.stages.push(entry);
        self.stages.sort_by_key(|s| s.stage);
    }
}

pub fn digest_file(path: &Path) -> Result<(u64, String)> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(f);
    let mut h = Xxh3::new();
    let mut buf = vec![0u8; 1 << 16];
    let mut total = 0u64;
    loop {
        let n = r.read(&mut buf).map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        total += n as u64;
        h.update(&buf[..n]);
    }
    Ok((total, format!("{:032x}", h.digest128())))
}

fn digest_outputs(root: &Path, dir: &Path) -> Result<Vec<OutputEntry>> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).map_err(|e| Error::io(&d, e))? {
            let p = e.map_err(|e| Error::io(&d, e))?.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                files.push(p);
            }
        }
    }
    let mut out: Vec<OutputEntry> = files
        .iter()
        .map(|p| {
            let (bytes, digest) = digest_file(p)?;
            let rel = p.strip_prefix(root).expect("under root");
            let path = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
            Ok(OutputEntry { path, bytes, digest })
        })
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageStatus {
    Ran,
    UpToDate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageOutcome {
    pub stage: Stage,
    pub status: StageStatus,
}

pub struct Pipeline {
    cfg: PipelineConfig,
    out: PathBuf,
    index: RunIndex,
    force: bool,
}

impl Pipeline {
    pub fn new(cfg: PipelineConfig) -> Result<Self> {
        let out = cfg.output_dir.clone();
        let mut inputs = Vec::new();
        for p in cfg.input_paths() {
            let (_, d) = digest_file(&p)?;
            inputs.extend_from_slice(d.as_bytes());
            inputs.push(b'\n');
        }
        let fresh = RunIndex {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            digest_algorithm: DIGEST_NAME.into(),
            seed: cfg.seed,
            config_digest: digest_hex(cfg.canonical().as_bytes()),
            inputs_digest: digest_hex(&inputs),
            stages: Vec::new(),
        };
        let index = match read_json::<RunIndex>(&out.join(RUN_INDEX)) {
            // stage entries stay valid across config edits; their input digests decide reuse
            Ok(old) => RunIndex { stages: old.stages, ..fresh },
            Err(_) => fresh,
        };
        Ok(Pipeline { cfg, out, index, force: false })
    }

    /// Rerun requested stages even when their recorded inputs match.
    pub fn force(mut self, force: bool) -> Self {
        self.force = force;
        self
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    pub fn output_dir(&self) -> &Path {
        &self.out
    }

    pub fn index(&self) -> &RunIndex {
        &self.index
    }

    pub fn enabled(&self, stage: Stage) -> bool {
        match stage {
            Stage::Curate => self.cfg.curate_config().is_some(),
            Stage::Select => self.cfg.select_config().is_some(),
            Stage::Buckets => true,
            Stage::Weights => self.cfg.weights_config().is_some(),
            Stage::Analyze => self.cfg.analyze_config().is_some(),
            Stage::Sample => self.cfg.sample_enabled(),
        }
    }

    pub fn enabled_stages(&self) -> Vec<Stage> {
        Stage::ALL.into_iter().filter(|&s| self.enabled(s)).collect()
    }

    /// The stage whose `documents.jsonl` feeds `stage`, or `None` for raw sources.
    fn document_source(&self, stage: Stage) -> Option<Stage> {
        let candidates: &[Stage] = match stage {
            Stage::Curate => &[],
            Stage::Select => &[Stage::Curate],
            _ => &[Stage::Select, Stage::Curate],
        };
        candidates.iter().copied().find(|&s| self.enabled(s))
    }

    fn upstream(&self, stage: Stage) -> Vec<Stage> {
        let mut up: Vec<Stage> = self.document_source(stage).into_iter().collect();
        match stage {
            Stage::Weights => up = vec![Stage::Buckets],
            Stage::Sample => up.extend([Stage::Buckets, Stage::Weights]),
            _ => {}
        }
        up
    }

    fn section(&self, stage: Stage) -> String {
        #[derive(Serialize)]
        struct Key<'a, T: Serialize> {
            stage: Stage,
            seed: u64,
            tokenizer: crate::corpus::TokenizerScheme,
            section: Option<&'a T>,
        }
        fn render<T: Serialize>(stage: Stage, cfg: &PipelineConfig, section: Option<&T>) -> String {
            toml::to_string(&Key { stage, seed: cfg.seed, tokenizer: cfg.tokenizer, section }).expect("config serializes")
        }
        let portable = self.cfg.portable();
        let c = &portable;
        let mut s = match stage {
            Stage::Curate => render(stage, c, c.curate_config()),
            Stage::Select => render(stage, c, c.select_config()),
            Stage::Buckets => render(stage, c, Some(&c.buckets)),
            Stage::Weights => render(stage, c, c.weights_config()),
            Stage::Analyze => render(stage, c, c.analyze_config()),
            Stage::Sample => render(stage, c, Some(&c.sample)),
        };
        s.push_str(&format!("labels_policy = {:?}\n", c.labels_policy()));
        // the perplexity report depends on the curation model settings
        if stage == Stage::Analyze {
            s.push_str(&render(stage, c, c.curate.as_ref()));
        }
        s
    }

    fn input_digest(&self, stage: Stage) -> Result<String> {
        let mut material = self.section(stage);
        if self.document_source(stage).is_none() && stage != Stage::Weights {
            let c = self.cfg.portable();
            material.push_str(&toml::to_string(&SourcesKey { sources: &c.sources, labels: &c.labels }).expect("serializes"));
        }
        // raw inputs include label files, LM text, targets, and loss files
        material.push_str(&self.index.inputs_digest);
        for up in self.upstream(stage) {
            let entry = self.index.stage(up).ok_or_else(|| Error::Stage {
                stage: stage.name().to_string(),
                source: Box::new(Error::InvalidParameter(format!("missing `{up}` output; run `{up}` first"))),
            })?;
            material.push_str(&entry.input_digest);
            for o in &entry.outputs {
                material.push_str(&o.digest);
            }
        }
        Ok(digest_hex(material.as_bytes()))
    }

    fn up_to_date(&self, stage: Stage, key: &str) -> bool {
        let Some(entry) = self.index.stage(stage) else { return false };
        entry.input_digest == key
            && !entry.outputs.is_empty()
            && entry
                .outputs
                .iter()
                .all(|o| digest_file(&self.out.join(&o.path)).is_ok_and(|(b, d)| b == o.bytes && d == o.digest))
    }

    fn documents_for(&self, stage: Stage) -> Result<Vec<Document>> {
        match self.document_source(stage) {
            Some(up) => read_documents(&self.out.join(up.name()).join(DOCUMENTS)),
            None => {
                let (docs, report) = stages::load_sources(&self.cfg)?;
                write_json(&self.out.join(stage.name()).join("load.json"), &report)?;
                Ok(docs)
            }
        }
    }

    fn execute(&self, stage: Stage) -> Result<()> {
        let dir = self.out.join(stage.name());
        let cfg = &self.cfg;
        match stage {
            Stage::Curate => {
                let docs = self.documents_for(stage)?;
                stages::curate(cfg, cfg.curate_config().expect("enabled"), docs, &dir)
            }
            Stage::Select => {
                let docs = self.documents_for(stage)?;
                stages::select(cfg, cfg.select_config().expect("enabled"), docs, &dir)
            }
            Stage::Buckets => {
                let docs = self.documents_for(stage)?;
                stages::buckets(cfg, &docs, &dir)
            }
            Stage::Weights => stages::weights(
                cfg,
                cfg.weights_config().expect("enabled"),
                &self.out.join(Stage::Buckets.name()).join(BUCKETS),
                &dir,
            ),
            Stage::Analyze => {
                let docs = self.documents_for(stage)?;
                stages::analyze_stage(cfg, &docs, &dir)
            }
            Stage::Sample => {
                let docs = self.documents_for(stage)?;
                stages::sample(
                    &self.out.join(Stage::Weights.name()).join(MANIFEST),
                    &self.out.join(Stage::Buckets.name()).join(ASSIGNMENTS),
                    docs,
                    cfg.tokenizer,
                    &dir,
                )
            }
        }
    }

    fn write_index(&self) -> Result<()> {
        write_json(&self.out.join(RUN_INDEX), &self.index)
    }

    /// Runs one stage, or skips it when its recorded inputs and outputs match.
    pub fn run_stage(&mut self, stage: Stage) -> Result<StageOutcome> {
        if !self.enabled(stage) {
            return Err(Error::Config(format!("stage `{stage}` is disabled by the config")));
        }
        let key = self.input_digest(stage)?;
        if !self.force && self.up_to_date(stage, &key) {
            log::info!("{stage}: up to date");
            return Ok(StageOutcome { stage, status: StageStatus::UpToDate });
        }
        let dir = self.out.join(stage.name());
        let wrap = |e: Error| Error::Stage { stage: stage.name().to_string(), source: Box::new(e) };
        if dir.exists() {
            fs::remove_dir_all(&dir).map_err(|e| wrap(Error::io(&dir, e)))?;
        }
        fs::create_dir_all(&dir).map_err(|e| wrap(Error::io(&dir, e)))?;
        log::info!("{stage}: running");
        self.execute(stage).map_err(wrap)?;
        let outputs = digest_outputs(&self.out, &dir).map_err(wrap)?;
        self.index.record(StageEntry { stage, input_digest: key, outputs });
        // downstream entries keyed on the old outputs no longer match; leave
        // them so their digests decide whether to rerun
        self.write_index().map_err(wrap)?;
        Ok(StageOutcome { stage, status: StageStatus::Ran })
    }

    /// Runs the requested stages (all enabled ones when empty) in pipeline order.
    pub fn run(&mut self, requested: &[Stage]) -> Result<Vec<StageOutcome>> {
        fs::create_dir_all(&self.out).map_err(|e| Error::io(&self.out, e))?;
        let stages: Vec<Stage> = if requested.is_empty() {
            self.enabled_stages()
        } else {
            Stage::ALL.into_iter().filter(|s| requested.contains(s)).collect()
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.cfg.workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
        let mut outcomes = Vec::new();
        for s in stages {
            outcomes.push(pool.install(|| self.run_stage(s))?);
        }
        self.write_index()?;
        Ok(outcomes)
    }
}

#[derive(Serialize)]
struct SourcesKey<'a> {
    sources: &'a [super::config::SourceConfig],
    labels: &'a Option<super::config::LabelsConfig>,
}
