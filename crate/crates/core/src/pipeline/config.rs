use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::attributes::{validate_edges, AnalysisConfig, DEFAULT_PERPLEXITY_EDGES};
use crate::corpus::{Attribute, LabelPolicy, ToxicityBins, TokenizerScheme, HIGH_TOXICITY};
use crate::curation::{CodeThresholds, FuzzyConfig, HeuristicThresholds, PriorityRegime, DEFAULT_ORDER};
use crate::sampling::{BucketMode, WeightMethod, DEFAULT_ALPHA};
use crate::selection::{FeatureConfig, Predicate, SelectionMode, TargetSpec, DEFAULT_BUCKETS, DEFAULT_RATE, DEFAULT_SMOOTHING};
use crate::{Error, Result};

fn yes() -> bool {
    true
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    pub name: String,
    pub paths: Vec<PathBuf>,
    /// 0 is the oldest; unset sources follow ranked ones in listing order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub age_rank: Option<usize>,
    /// Code sources get the code filters instead of the text heuristics.
    #[serde(default)]
    pub code: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelsConfig {
    #[serde(default)]
    pub paths: Vec<PathBuf>,
    #[serde(default)]
    pub policy: LabelPolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurateStep {
    Exact,
    Fuzzy,
    Quality,
    Perplexity,
}

impl CurateStep {
    pub fn name(self) -> &'static str {
        match self {
            CurateStep::Exact => "exact",
            CurateStep::Fuzzy => "fuzzy",
            CurateStep::Quality => "quality",
            CurateStep::Perplexity => "perplexity",
        }
    }
}

fn default_steps() -> Vec<CurateStep> {
    vec![CurateStep::Exact, CurateStep::Fuzzy, CurateStep::Quality, CurateStep::Perplexity]
}

fn default_lm_order() -> usize {
    DEFAULT_ORDER
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurateConfig {
    #[serde(default = "yes")]
    pub enabled: bool,
    #[serde(default = "default_steps")]
    pub steps: Vec<CurateStep>,
    #[serde(default)]
    pub priority: PriorityRegime,
    /// The MinHash seed is derived from the global seed; a `seed` here is ignored.
    #[serde(default)]
    pub fuzzy: FuzzyConfig,
    #[serde(default)]
    pub thresholds: HeuristicThresholds,
    #[serde(default)]
    pub code: CodeThresholds,
    /// High-quality reference text for the perplexity model.
    #[serde(default)]
    pub lm_training: Vec<PathBuf>,
    #[serde(default = "default_lm_order")]
    pub lm_order: usize,
    /// Defaults to the `N-gram LM Perplexity` threshold.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perplexity_threshold: Option<f64>,
}

impl Default for CurateConfig {
    fn default() -> Self {
        CurateConfig {
            enabled: true,
            steps: default_steps(),
            priority: PriorityRegime::default(),
            fuzzy: FuzzyConfig::default(),
            thresholds: HeuristicThresholds::default(),
            code: CodeThresholds::default(),
            lm_training: Vec::new(),
            lm_order: DEFAULT_ORDER,
            perplexity_threshold: None,
        }
    }
}

impl CurateConfig {
    pub fn perplexity_threshold(&self) -> f64 {
        self.perplexity_threshold.unwrap_or(self.thresholds.perplexity)
    }
}

fn default_rate() -> f64 {
    DEFAULT_RATE
}
fn default_buckets() -> usize {
    DEFAULT_BUCKETS
}
fn default_orders() -> Vec<usize> {
    vec![1, 2]
}
fn default_smoothing() -> f64 {
    DEFAULT_SMOOTHING
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectConfig {
    #[serde(default = "yes")]
    pub enabled: bool,
    #[serde(default)]
    pub mode: SelectionMode,
    #[serde(default = "default_rate")]
    pub rate: f64,
    #[serde(default = "default_buckets", alias = "B")]
    pub buckets: usize,
    #[serde(default = "default_orders")]
    pub ngram_orders: Vec<usize>,
    #[serde(default = "default_smoothing")]
    pub smoothing: f64,
    pub target: TargetSpec,
    /// Extra targets scored side by side in `target_comparison.json`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub compare: BTreeMap<String, TargetSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BucketsConfig {
    #[serde(default)]
    pub mode: BucketMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attribute: Option<Attribute>,
    #[serde(default)]
    pub toxicity_bins: ToxicityBins,
}

impl Default for BucketsConfig {
    fn default() -> Self {
        BucketsConfig {
            mode: BucketMode::Source,
            attribute: None,
            toxicity_bins: ToxicityBins::default(),
        }
    }
}

fn default_steps_doremi() -> usize {
    100
}
fn default_eta() -> f64 {
    crate::sampling::DEFAULT_LEARNING_RATE
}
fn default_c() -> f64 {
    crate::sampling::DEFAULT_DOREMI_SMOOTHING
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoremiSettings {
    #[serde(default = "default_steps_doremi")]
    pub steps: usize,
    #[serde(default = "default_eta")]
    pub learning_rate: f64,
    #[serde(default = "default_c")]
    pub smoothing: f64,
    /// JSONL of `{step, domain, proxy_loss, reference_loss}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub losses: Option<PathBuf>,
    /// Constant per-bucket excess losses, in bucket order; for dry runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<Vec<f64>>,
}

impl Default for DoremiSettings {
    fn default() -> Self {
        DoremiSettings {
            steps: default_steps_doremi(),
            learning_rate: default_eta(),
            smoothing: default_c(),
            losses: None,
            synthetic: None,
        }
    }
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsConfig {
    #[serde(default = "yes")]
    pub enabled: bool,
    pub method: WeightMethod,
    /// Training tokens; defaults to the bucketed corpus size.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Defaults to 1 for source buckets and 2 for attribute buckets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epoch_cap: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub preference: BTreeMap<String, f64>,
    #[serde(default)]
    pub doremi: DoremiSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    #[serde(default = "yes")]
    pub enabled: bool,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { enabled: true }
    }
}

fn default_cutoff() -> f64 {
    HIGH_TOXICITY
}
fn default_edges() -> Vec<f64> {
    DEFAULT_PERPLEXITY_EDGES.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeConfig {
    #[serde(default = "yes")]
    pub enabled: bool,
    #[serde(default)]
    pub toxicity_bins: ToxicityBins,
    #[serde(default = "default_cutoff")]
    pub toxicity_cutoff: f64,
    #[serde(default = "default_edges")]
    pub perplexity_edges: Vec<f64>,
}

impl AnalyzeConfig {
    pub fn analysis(&self) -> AnalysisConfig {
        AnalysisConfig {
            toxicity_bins: self.toxicity_bins.clone(),
            toxicity_cutoff: self.toxicity_cutoff,
            perplexity_edges: self.perplexity_edges.clone(),
        }
    }
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub tokenizer: TokenizerScheme,
    /// Worker threads; 0 uses every core.
    #[serde(default)]
    pub workers: usize,
    pub sources: Vec<SourceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<LabelsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curate: Option<CurateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub select: Option<SelectConfig>,
    #[serde(default)]
    pub buckets: BucketsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsConfig>,
    #[serde(default)]
    pub sample: SampleConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analyze: Option<AnalyzeConfig>,
    /// Directory relative paths were resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

/// Splits `a.b."c.d"` into `["a", "b", "c.d"]`.
fn split_key(key: &str) -> Result<Vec<String>> {
    let mut parts = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    for c in key.chars() {
        match c {
            '"' => quoted = !quoted,
            '.' if !quoted => parts.push(std::mem::take(&mut cur)),
            c => cur.push(c),
        }
    }
    parts.push(cur);
    if quoted || parts.iter().any(|p| p.trim().is_empty()) {
        return Err(config_err(format!("malformed key `{key}`")));
    }
    Ok(parts.into_iter().map(|p| p.trim().to_string()).collect())
}

/// Parses a value as TOML, falling back to a bare string.
fn parse_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

/// Applies a `key=value` override to a parsed config table.
pub fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, value) = assignment
        .split_once('=')
        .ok_or_else(|| config_err(format!("override `{assignment}` is not key=value")))?;
    let parts = split_key(key.trim())?;
    let (last, parents) = parts.split_last().expect("split_key yields at least one part");
    let mut cur = table;
    for p in parents {
        let entry = cur.entry(p.clone()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| config_err(format!("`{p}` in `{key}` is not a table")))?;
    }
    cur.insert(last.clone(), parse_value(value.trim()));
    Ok(())
}

impl PipelineConfig {
    /// Reads, overrides, resolves relative paths against the file's directory,
    /// and validates.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, base, overrides)
    }

    pub fn from_toml(text: &str, base: &Path, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let mut cfg: PipelineConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| config_err(e.to_string()))?;
        cfg.resolve_paths(base);
        cfg.validate()?;
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        self.base_dir = base.to_path_buf();
        self.map_paths(|p| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        });
    }

    fn map_paths(&mut self, mut fix: impl FnMut(&mut PathBuf)) {
        fix(&mut self.output_dir);
        for s in &mut self.sources {
            s.paths.iter_mut().for_each(&mut fix);
        }
        if let Some(l) = &mut self.labels {
            l.paths.iter_mut().for_each(&mut fix);
        }
        if let Some(c) = &mut self.curate {
            c.lm_training.iter_mut().for_each(&mut fix);
        }
        if let Some(s) = &mut self.select {
            for t in std::iter::once(&mut s.target).chain(s.compare.values_mut()) {
                if let TargetSpec::Paths(ps) = t {
                    ps.iter_mut().for_each(&mut fix);
                }
            }
        }
        if let Some(w) = &mut self.weights {
            if let Some(p) = &mut w.doremi.losses {
                fix(p);
            }
        }
    }

    /// Copy with paths made relative to the config directory again, so
    /// digests do not depend on where the project is checked out.
    pub fn portable(&self) -> Self {
        let mut c = self.clone();
        let base = self.base_dir.clone();
        c.map_paths(|p| {
            if let Ok(rel) = p.strip_prefix(&base) {
                *p = rel.to_path_buf();
            }
        });
        c
    }

    fn referenced_paths(&self) -> Vec<&Path> {
        let mut out: Vec<&Path> = Vec::new();
        out.extend(self.sources.iter().flat_map(|s| s.paths.iter().map(PathBuf::as_path)));
        if let Some(l) = &self.labels {
            out.extend(l.paths.iter().map(PathBuf::as_path));
        }
        if let Some(c) = self.curate_config() {
            out.extend(c.lm_training.iter().map(PathBuf::as_path));
        }
        if let Some(s) = self.select_config() {
            for t in std::iter::once(&s.target).chain(s.compare.values()) {
                if let TargetSpec::Paths(ps) = t {
                    out.extend(ps.iter().map(PathBuf::as_path));
                }
            }
        }
        if let Some(w) = self.weights_config() {
            out.extend(w.doremi.losses.as_deref());
        }
        out
    }

    /// Every input path the config reads, in a fixed order.
    pub fn input_paths(&self) -> Vec<PathBuf> {
        self.referenced_paths().into_iter().map(Path::to_path_buf).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.sources.is_empty() {
            return Err(config_err("at least one source is required"));
        }
        let mut names = HashSet::new();
        for s in &self.sources {
            if s.name.trim().is_empty() {
                return Err(config_err("source names must be non-empty"));
            }
            if !names.insert(s.name.as_str()) {
                return Err(config_err(format!("duplicate source `{}`", s.name)));
            }
            if s.paths.is_empty() {
                return Err(config_err(format!("source `{}` lists no paths", s.name)));
            }
        }
        for p in self.referenced_paths() {
            if !p.is_file() {
                return Err(config_err(format!("missing input file {}", p.display())));
            }
        }
        if let Some(c) = self.curate_config() {
            c.fuzzy.validate().map_err(|e| config_err(format!("curate.fuzzy: {e}")))?;
            if c.lm_order == 0 {
                return Err(config_err("curate.lm_order must be at least 1"));
            }
            if !(c.perplexity_threshold() > 0.0) {
                return Err(config_err("perplexity threshold must be positive"));
            }
            let mut seen = HashSet::new();
            if let Some(dup) = c.steps.iter().find(|s| !seen.insert(**s)) {
                return Err(config_err(format!("curate step `{}` listed twice", dup.name())));
            }
        }
        if let Some(s) = self.select_config() {
            if !(s.rate > 0.0 && s.rate <= 1.0) {
                return Err(config_err(format!("select.rate must be in (0, 1], got {}", s.rate)));
            }
            if !(s.smoothing > 0.0) || !s.smoothing.is_finite() {
                return Err(config_err("select.smoothing must be positive"));
            }
            FeatureConfig { buckets: s.buckets, seed: 0, orders: s.ngram_orders.clone() }
                .validate()
                .map_err(|e| config_err(format!("select: {e}")))?;
            for t in std::iter::once(&s.target).chain(s.compare.values()) {
                match t {
                    TargetSpec::Predicate(p) => {
                        Predicate::parse(p).map_err(|e| config_err(format!("select target: {e}")))?;
                    }
                    TargetSpec::Paths(ps) if ps.is_empty() => {
                        return Err(config_err("select target lists no paths"));
                    }
                    TargetSpec::Paths(_) => {}
                }
            }
        }
        if self.buckets.mode != BucketMode::Source && self.buckets.attribute.is_none() {
            return Err(config_err(format!("{} buckets need buckets.attribute", self.buckets.mode)));
        }
        if let Some(w) = self.weights_config() {
            if w.budget == Some(0) {
                return Err(config_err("weights.budget must be positive"));
            }
            if !(w.alpha >= 0.0) || !w.alpha.is_finite() {
                return Err(config_err("weights.alpha must be finite and non-negative"));
            }
            if let Some(e) = w.epoch_cap {
                if !(e > 0.0) {
                    return Err(config_err("weights.epoch_cap must be positive"));
                }
            }
            match w.method {
                WeightMethod::Preference if w.preference.is_empty() => {
                    return Err(config_err("preference weighting needs a [weights.preference] table"));
                }
                WeightMethod::Doremi => {
                    if w.doremi.losses.is_some() == w.doremi.synthetic.is_some() {
                        return Err(config_err("doremi needs exactly one of weights.doremi.losses or weights.doremi.synthetic"));
                    }
                    if w.doremi.steps == 0 {
                        return Err(config_err("weights.doremi.steps must be positive"));
                    }
                }
                _ => {}
            }
        }
        if let Some(a) = self.analyze_config() {
            validate_edges(&a.perplexity_edges).map_err(|e| config_err(e.to_string()))?;
            if !(a.toxicity_cutoff > 0.0 && a.toxicity_cutoff < 1.0) {
                return Err(config_err("analyze.toxicity_cutoff must be in (0, 1)"));
            }
        }
        Ok(())
    }

    pub fn curate_config(&self) -> Option<&CurateConfig> {
        self.curate.as_ref().filter(|c| c.enabled)
    }

    pub fn select_config(&self) -> Option<&SelectConfig> {
        self.select.as_ref().filter(|c| c.enabled)
    }

    pub fn weights_config(&self) -> Option<&WeightsConfig> {
        self.weights.as_ref().filter(|c| c.enabled)
    }

    pub fn analyze_config(&self) -> Option<&AnalyzeConfig> {
        self.analyze.as_ref().filter(|c| c.enabled)
    }

    pub fn sample_enabled(&self) -> bool {
        self.sample.enabled && self.weights_config().is_some()
    }

    /// Source names ordered oldest first.
    pub fn age_order(&self) -> Vec<String> {
        let mut idx: Vec<usize> = (0..self.sources.len()).collect();
        idx.sort_by_key(|&i| (self.sources[i].age_rank.unwrap_or(usize::MAX), i));
        idx.into_iter().map(|i| self.sources[i].name.clone()).collect()
    }

    pub fn labels_policy(&self) -> LabelPolicy {
        self.labels.as_ref().map(|l| l.policy).unwrap_or_default()
    }

    /// TOML rendering without machine-local settings (output directory and
    /// worker count), used for digests.
    pub fn canonical(&self) -> String {
        let mut c = self.portable();
        c.output_dir = PathBuf::new();
        c.workers = 0;
        toml::to_string(&c).expect("config serializes")
    }
}
