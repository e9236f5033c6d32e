//! Importance-resampling data selection over hashed n-gram features.

mod distribution;
mod dsir;
mod features;
mod predicate;

pub use distribution::{aggregate, fit_distribution, fit_features, importance_log_weight, kl_divergence, NgramDistribution};
pub use dsir::{
    compare_targets, dsir_select, fit_target, log_weights, selection_quota, SelectionMode, SelectionOutcome,
    SelectionPlan, SelectionRecord, TargetComparison, TargetSpec, DEFAULT_RATE, DEFAULT_SMOOTHING,
};
pub use features::{featurize, ngrams, FeatureConfig, HashedNgramFeatures, DEFAULT_BUCKETS};
pub use predicate::{build_attribute_target, CmpOp, Operand, Predicate, TargetSet};
