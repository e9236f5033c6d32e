//! Hash helpers shared across stages.
//!
//! Every hash in the crate is xxh3 (64- or 128-bit) so results are stable
//! across platforms and releases.

use xxhash_rust::xxh3::{xxh3_128, xxh3_64_with_seed};

/// Name recorded in reports for the exact-dedup and provenance digests.
pub const DIGEST_NAME: &str = "xxh3-128";

pub fn digest128(bytes: &[u8]) -> u128 {
    xxh3_128(bytes)
}

pub fn digest_hex(bytes: &[u8]) -> String {
    format!("{:032x}", xxh3_128(bytes))
}

pub fn hash64(bytes: &[u8], seed: u64) -> u64 {
    xxh3_64_with_seed(bytes, seed)
}

/// SplitMix64 finalizer. A bijection on u64 with good avalanche.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable sub-seed for a named consumer of the global seed.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    hash64(label.as_bytes(), mix64(seed))
}
