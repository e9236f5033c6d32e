//! Bucket partitions over random labeled corpora.

use std::collections::{BTreeMap, BTreeSet};

use corpusmix_core::corpus::{
    compute_stats, count_tokens, Attribute, AttributeLabels, Document, Domain, LabelPolicy, Quality, TokenizerScheme,
    ToxicityBins, UNKNOWN,
};
use corpusmix_core::sampling::{fine_grained_buckets, grouped_buckets, Bucket};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::common::{coin, ensure, word};

const CORPORA: u64 = 100;
const SCHEME: TokenizerScheme = TokenizerScheme::WhitespaceWords;

pub fn random_labeled_corpus(rng: &mut ChaCha8Rng, tag: u64) -> Vec<Document> {
    let sources = rng.random_range(1..=4);
    let n = rng.random_range(1..=60);
    (0..n)
        .map(|i| {
            let len = rng.random_range(1..40);
            let text: Vec<String> = (0..len).map(|j| word(i * 41 + j, 4)).collect();
            let mut d = Document::new(format!("c{tag}-{i}"), format!("src{}", rng.random_range(0..sources)), text.join(" "));
            if !coin(rng, 0.1) {
                d.attributes = Some(AttributeLabels {
                    quality: coin(rng, 0.9).then(|| *Quality::ALL.choose(rng).unwrap()),
                    domain: coin(rng, 0.9).then(|| *Domain::ALL[..5].choose(rng).unwrap()),
                    toxicity: coin(rng, 0.9).then(|| rng.random::<f64>()),
                    type_of_speech: None,
                });
            }
            d
        })
        .collect()
}

fn ids(b: &Bucket) -> BTreeSet<String> {
    b.doc_ids.iter().cloned().collect()
}

/// Brute-force group-by on (source, label).
fn group_by(docs: &[Document], attribute: Attribute) -> BTreeMap<(String, String), BTreeSet<String>> {
    let mut out: BTreeMap<(String, String), BTreeSet<String>> = BTreeMap::new();
    for d in docs {
        let label = attribute.label_of(d.attributes.as_ref(), &ToxicityBins::default()).unwrap_or_else(|| UNKNOWN.into());
        out.entry((d.source.clone(), label)).or_default().insert(d.id.clone());
    }
    out
}

fn check(docs: &[Document], attribute: Attribute) -> Result<(), String> {
    let manifest = compute_stats(docs.iter(), SCHEME, None);
    let fine = fine_grained_buckets(&manifest, docs, attribute, LabelPolicy::Lenient).map_err(|e| e.to_string())?;
    let grouped = grouped_buckets(&manifest, docs, attribute, LabelPolicy::Lenient).map_err(|e| e.to_string())?;
    let all: BTreeSet<String> = docs.iter().map(|d| d.id.clone()).collect();
    let tokens: BTreeMap<&str, u64> = docs.iter().map(|d| (d.id.as_str(), count_tokens(&d.text, SCHEME))).collect();

    for (kind, buckets) in [("fine", &fine), ("grouped", &grouped)] {
        let total: usize = buckets.iter().map(|b| b.doc_ids.len()).sum();
        let union: BTreeSet<String> = buckets.iter().flat_map(ids).collect();
        ensure!(total == all.len() && union == all, "{kind} buckets are not a partition");
        for b in buckets.iter() {
            let t: u64 = b.doc_ids.iter().map(|i| tokens[i.as_str()]).sum();
            ensure!(b.doc_count as usize == b.doc_ids.len() && b.token_count == t, "{kind} bucket {} totals", b.name);
        }
    }

    let oracle = group_by(docs, attribute);
    ensure!(fine.len() == oracle.len(), "{} fine buckets, {} groups", fine.len(), oracle.len());
    let mut by_label: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for b in &fine {
        ensure!(b.members.len() == 1, "fine bucket {} has {} members", b.name, b.members.len());
        let m = &b.members[0];
        let label = m.label.clone().ok_or("fine bucket without label")?;
        let key = (m.source.clone(), label.clone());
        ensure!(oracle.get(&key) == Some(&ids(b)), "fine bucket {} differs from group-by", b.name);
        by_label.entry(label).or_default().extend(ids(b));
    }
    ensure!(grouped.len() == by_label.len(), "{} grouped vs {} labels", grouped.len(), by_label.len());
    for g in &grouped {
        let label = g.members.first().and_then(|m| m.label.clone()).ok_or("grouped bucket without label")?;
        ensure!(g.members.iter().all(|m| m.label.as_deref() == Some(label.as_str())), "mixed labels in {}", g.name);
        ensure!(by_label.get(&label) == Some(&ids(g)), "grouped {label} is not the union of its fine buckets");
    }
    Ok(())
}

pub fn run() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut docs = 0;
    for c in 0..CORPORA {
        let corpus = random_labeled_corpus(&mut rng, c);
        docs += corpus.len();
        for a in [Attribute::Quality, Attribute::Domain, Attribute::Toxicity] {
            check(&corpus, a).map_err(|e| format!("corpus {c}, {}: {e}", a.name()))?;
        }
    }
    Ok(format!("{CORPORA} corpora ({docs} docs) on quality, domain, toxicity: partitions and group unions hold"))
}
