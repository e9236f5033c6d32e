//! Mixture weighting, bucket construction, and mixture sampling.

mod buckets;
mod doremi;
mod manifest;
mod mixture;
mod weights;

pub use buckets::{fine_grained_buckets, grouped_buckets, Bucket, BucketMember, BucketMode, Bucketing};
pub use doremi::{
    doremi_weights, DoremiConfig, DoremiState, FileLossOracle, LossOracle, LossRecord, SyntheticOracle,
    DEFAULT_DOREMI_SMOOTHING, DEFAULT_LEARNING_RATE,
};
pub use manifest::{emit_manifest, largest_remainder, BucketAllocation, MixtureManifest};
pub use mixture::{sample_mixture, MixtureSampler};
pub use weights::{
    alpha_weights, drop_empty, preference_weights, proportional_weights, unimax_weights, UnimaxOutcome, WeightEntry,
    WeightMethod, WeightVector, DEFAULT_ALPHA, DEFAULT_BUCKET_EPOCH_CAP, DEFAULT_SOURCE_EPOCH_CAP, SIMPLEX_TOLERANCE,
};
