//! Label ingestion and attribute analysis reports.

mod agreement;
mod ingest;
mod report;
mod tables;

pub use agreement::{quality_perplexity_agreement, validate_edges, QualityPerplexityReport, DEFAULT_PERPLEXITY_EDGES};
pub use ingest::{ingest_label_files, ingest_labels, read_label_file, IngestReport, LabelRow, MAX_REPORTED_IDS};
pub use report::{analyze, write_cross_tab, write_distributions, write_reports, AnalysisConfig, AnalysisReport};
pub use tables::{attribute_distribution, count_pairs, cross_tab, histogram, AttributeAxis, Axis, CrossTab, Histogram, HistogramRow, RowOrder};
