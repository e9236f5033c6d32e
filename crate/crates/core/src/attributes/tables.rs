use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Attribute, Document, ToxicityBins};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub label: String,
    pub count: u64,
    pub fraction: f64,
}

/// Label counts over documents that carry the attribute, in vocabulary order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub attribute: String,
    pub total: u64,
    pub rows: Vec<HistogramRow>,
}

impl Histogram {
    pub fn fraction(&self, label: &str) -> Option<f64> {
        self.rows.iter().find(|r| r.label == label).map(|r| r.fraction)
    }

    pub fn count(&self, label: &str) -> u64 {
        self.rows.iter().find(|r| r.label == label).map_or(0, |r| r.count)
    }
}

/// Assigns each document at most one label from a fixed vocabulary.
/// `pos` is the document's index in the slice being counted.
pub trait Axis: Sync {
    fn name(&self) -> String;
    fn vocabulary(&self) -> Vec<String>;
    fn index_of(&self, pos: usize, doc: &Document) -> Option<usize>;
}

pub struct AttributeAxis<'a> {
    pub attribute: Attribute,
    pub bins: &'a ToxicityBins,
    vocab: Vec<String>,
    index: HashMap<String, usize>,
}

impl<'a> AttributeAxis<'a> {
    pub fn new(attribute: Attribute, bins: &'a ToxicityBins) -> Self {
        let vocab = attribute.vocabulary(bins);
        let index = vocab.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        AttributeAxis { attribute, bins, vocab, index }
    }
}

impl Axis for AttributeAxis<'_> {
    fn name(&self) -> String {
        self.attribute.name().to_string()
    }

    fn vocabulary(&self) -> Vec<String> {
        self.vocab.clone()
    }

    fn index_of(&self, _: usize, doc: &Document) -> Option<usize> {
        let label = self.attribute.label_of(doc.attributes.as_ref(), self.bins)?;
        self.index.get(&label).copied()
    }
}

fn merge(mut a: HashMap<(usize, usize), u64>, b: HashMap<(usize, usize), u64>) -> HashMap<(usize, usize), u64> {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

/// Parallel two-key count; documents missing either key are skipped.
pub fn count_pairs(docs: &[Document], rows: &dyn Axis, cols: &dyn Axis) -> HashMap<(usize, usize), u64> {
    docs.par_iter()
        .enumerate()
        .fold(HashMap::new, |mut acc, (i, d)| {
            if let (Some(r), Some(c)) = (rows.index_of(i, d), cols.index_of(i, d)) {
                *acc.entry((r, c)).or_default() += 1;
            }
            acc
        })
        .reduce(HashMap::new, merge)
}

fn ratio(n: u64, d: u64) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

pub fn histogram(docs: &[Document], axis: &dyn Axis) -> Histogram {
    struct Unit;
    impl Axis for Unit {
        fn name(&self) -> String {
            String::new()
        }
        fn vocabulary(&self) -> Vec<String> {
            vec![String::new()]
        }
        fn index_of(&self, _: usize, _: &Document) -> Option<usize> {
            Some(0)
        }
    }
    let counts = count_pairs(docs, axis, &Unit);
    let total: u64 = counts.values().sum();
    let rows = axis
        .vocabulary()
        .into_iter()
        .enumerate()
        .filter_map(|(i, label)| {
            let count = counts.get(&(i, 0)).copied().unwrap_or(0);
            (count > 0).then(|| HistogramRow { label, count, fraction: ratio(count, total) })
        })
        .collect();
    Histogram { attribute: axis.name(), total, rows }
}

pub fn attribute_distribution(docs: &[Document], attribute: Attribute, bins: &ToxicityBins) -> Histogram {
    histogram(docs, &AttributeAxis::new(attribute, bins))
}

/// Counts with row-normalized fractions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossTab {
    pub row_attribute: String,
    pub col_attribute: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
    pub fractions: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RowOrder<'a> {
    #[default]
    Vocabulary,
    /// Descending fraction of the named column; ties keep vocabulary order.
    ByColumn(&'a str),
}

impl CrossTab {
    /// Rows and columns are present labels only unless `all_cols` is set.
    pub fn build(docs: &[Document], rows: &dyn Axis, cols: &dyn Axis, all_cols: bool) -> CrossTab {
        let counts = count_pairs(docs, rows, cols);
        let row_vocab = rows.vocabulary();
        let col_vocab = cols.vocabulary();
        let row_keep: Vec<usize> = (0..row_vocab.len())
            .filter(|r| counts.keys().any(|k| k.0 == *r))
            .collect();
        let col_keep: Vec<usize> = (0..col_vocab.len())
            .filter(|c| all_cols || counts.keys().any(|k| k.1 == *c))
            .collect();
        let matrix: Vec<Vec<u64>> = row_keep
            .iter()
            .map(|&r| col_keep.iter().map(|&c| counts.get(&(r, c)).copied().unwrap_or(0)).collect())
            .collect();
        let fractions = matrix
            .iter()
            .map(|row| {
                let total: u64 = row.iter().sum();
                row.iter().map(|&c| ratio(c, total)).collect()
            })
            .collect();
        CrossTab {
            row_attribute: rows.name(),
            col_attribute: cols.name(),
            row_labels: row_keep.iter().map(|&r| row_vocab[r].clone()).collect(),
            col_labels: col_keep.iter().map(|&c| col_vocab[c].clone()).collect(),
            counts: matrix,
            fractions,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_total(&self, row: usize) -> u64 {
        self.counts[row].iter().sum()
    }

    pub fn count(&self, row: &str, col: &str) -> u64 {
        match (self.row_labels.iter().position(|r| r == row), self.col_labels.iter().position(|c| c == col)) {
            (Some(r), Some(c)) => self.counts[r][c],
            _ => 0,
        }
    }

    pub fn sort_rows(&mut self, order: RowOrder<'_>) -> Result<()> {
        let RowOrder::ByColumn(col) = order else {
            return Ok(());
        };
        let Some(c) = self.col_labels.iter().position(|l| l == col) else {
            // an absent column means every row has fraction 0
            if self.col_labels.is_empty() {
                return Ok(());
            }
            return Err(Error::InvalidLabel(format!("`{col}` is not a column of this table")));
        };
        let mut idx: Vec<usize> = (0..self.row_labels.len()).collect();
        idx.sort_by(|&a, &b| self.fractions[b][c].total_cmp(&self.fractions[a][c]).then(a.cmp(&b)));
        self.row_labels = idx.iter().map(|&i| self.row_labels[i].clone()).collect();
        self.counts = idx.iter().map(|&i| self.counts[i].clone()).collect();
        self.fractions = idx.iter().map(|&i| self.fractions[i].clone()).collect();
        Ok(())
    }
}

pub fn cross_tab(
    docs: &[Document],
    row: Attribute,
    col: Attribute,
    bins: &ToxicityBins,
    order: RowOrder<'_>,
) -> Result<CrossTab> {
    let mut t = CrossTab::build(docs, &AttributeAxis::new(row, bins), &AttributeAxis::new(col, bins), false);
    t.sort_rows(order)?;
    Ok(t)
}
