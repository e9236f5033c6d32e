//! Config-driven orchestration with resumable, digest-indexed stages.

mod config;
mod run;
mod stages;

pub use config::{
    apply_override, AnalyzeConfig, BucketsConfig, CurateConfig, CurateStep, DoremiSettings, LabelsConfig,
    PipelineConfig, SampleConfig, SelectConfig, SourceConfig, WeightsConfig,
};
pub use run::{digest_file, OutputEntry, Pipeline, RunIndex, Stage, StageEntry, StageOutcome, StageStatus, RUN_INDEX};
pub use stages::{load_sources, Assignment, BucketSummary, EmittedBucket, LoadReport, SelectSummary, StepSummary};
