//! Deduplication, heuristic and code filtering, and perplexity filtering.

mod code;
mod exact;
mod fuzzy;
mod heuristics;
mod lsh;
mod minhash;
mod ngram_lm;
mod perplexity;
mod priority;
mod union_find;

pub use code::{
    code_filter, comment_chars, evaluate_code, CodeMetrics, CodeThresholds, CommentSyntax,
    MinBound, CHARS_PER_TOKEN, COMMENT_FRACTION, LINES_OF_CODE,
};
pub use exact::{exact_dedup, DedupMethod, DedupRecord, ExactDeduper, ExactHash};
pub use fuzzy::{fuzzy_dedup, FuzzyConfig, FuzzyOutcome};
pub use heuristics::{
    heuristic_filter, FilterRecord, FilterVerdict, HeuristicThresholds, Range, Rule, RuleViolation,
    TextMetrics, BOILERPLATE_PATTERNS, BULLETS, COMMON_ENGLISH_WORDS, PORN_URL_TERMS,
};
pub use lsh::{collision_probability, lsh_clusters, lsh_components, ClusterMember, DuplicateCluster, SignedDoc};
pub use minhash::{minhash_signature, shingle_hashes, shingle_tokens, MinHashSignature, MinHasher};
pub use ngram_lm::{sentences, LmSummary, NgramLm, BOS, DEFAULT_DISCOUNT, DEFAULT_ORDER, EOS, UNK};
pub use perplexity::{perplexity_filter, PerplexityRecord};
pub use priority::{resolve_keepers, PriorityRegime, SourcePriority};
pub use union_find::UnionFind;
