//! Document-level quality heuristics.
//!
//! Every rule is measured on every document so the report is complete. A
//! document is rejected by a fraction rule when its measured value exceeds
//! the threshold; range rules reject outside `[min, max]`.
//!
//! Definitions that are not self-explanatory:
//!
//! - *common English words*: distinct members of [`COMMON_ENGLISH_WORDS`]
//!   present after lowercasing and trimming punctuation from each word.
//! - *boilerplate content*: characters on lines matching [`BOILERPLATE_PATTERNS`].
//! - *repeating top n-gram*: for n in 2..=4, characters covered by all
//!   occurrences of the most frequent word n-gram over total word characters;
//!   the largest value over n is reported.
//! - *repeating duplicate n-gram*: for n in 5..=10, characters of words covered
//!   by any n-gram that occurs more than once; the largest value over n.
//! - *lines starting with bullets*: first non-space character in `• - * ‣`.
//! - *symbols to words*: the larger of `#` count and ellipsis count, per word.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::corpus::Document;

pub const COMMON_ENGLISH_WORDS: [&str; 8] = ["the", "be", "to", "of", "and", "that", "have", "with"];

pub const BULLETS: [char; 4] = ['•', '-', '*', '‣'];

const TERMINAL_PUNCTUATION: [char; 7] = ['.', '!', '?', '"', '\'', '\u{201d}', '\u{2026}'];

pub const BOILERPLATE_PATTERNS: &[&str] = &[
    r"(?i)\bcookies?\b",
    r"(?i)privacy (policy|notice|settings)",
    r"(?i)terms (of|and) (use|service|conditions)",
    r"(?i)all rights reserved",
    r"(?i)copyright\b|©",
    r"(?i)\bgdpr\b",
    r"(?i)google analytics",
    r"(?i)(enable|requires?) javascript",
    r"(?i)^\s*(sign in|sign up|log ?in|log ?out|register|subscribe)\b",
    r"(?i)^\s*(home|about|about us|contact|contact us|menu|search|skip to (main )?content)\s*$",
    r"(?i)no search results?",
    r"(?i)</?(br|tr|td|th|html|body|div|span|table|p)\b[^>]*>",
];

pub const PORN_URL_TERMS: &[&str] = &[
    "porn", "porno", "xxx", "sex", "nude", "nudes", "hentai", "escort", "camgirl", "nsfw", "milf",
];

static BOILERPLATE: LazyLock<Vec<Regex>> = LazyLock::new(|| {
    BOILERPLATE_PATTERNS
        .iter()
        .map(|p| Regex::new(p).expect("valid boilerplate pattern"))
        .collect()
});

static URL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\b(?:https?://|www\.)\S+").expect("valid url pattern"));

static PARAGRAPH_BREAK: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\n[ \t\r]*\n").expect("valid paragraph pattern"));

/// Rule names match the threshold config keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    NonAlphanumericFraction,
    WordsWithoutAlphabetsFraction,
    NumbersFraction,
    UrlFraction,
    BulletLinesFraction,
    WhitespaceFraction,
    ParenthesesFraction,
    SymbolToWordRatio,
    LongWord,
    WordCount,
    CommonEnglishWords,
    MeanWordLength,
    BoilerplateFraction,
    DuplicateLineFraction,
    DuplicateParagraphFraction,
    DuplicateLineCharFraction,
    DuplicateParagraphCharFraction,
    TopNgramFraction,
    DuplicateNgramFraction,
    NoPunctuationLineFraction,
    EllipsisLineFraction,
    PornographicUrl,
}

impl Rule {
    pub const ALL: [Rule; 22] = [
        Rule::NonAlphanumericFraction,
        Rule::WordsWithoutAlphabetsFraction,
        Rule::NumbersFraction,
        Rule::UrlFraction,
        Rule::BulletLinesFraction,
        Rule::WhitespaceFraction,
        Rule::ParenthesesFraction,
        Rule::SymbolToWordRatio,
        Rule::LongWord,
        Rule::WordCount,
        Rule::CommonEnglishWords,
        Rule::MeanWordLength,
        Rule::BoilerplateFraction,
        Rule::DuplicateLineFraction,
        Rule::DuplicateParagraphFraction,
        Rule::DuplicateLineCharFraction,
        Rule::DuplicateParagraphCharFraction,
        Rule::TopNgramFraction,
        Rule::DuplicateNgramFraction,
        Rule::NoPunctuationLineFraction,
        Rule::EllipsisLineFraction,
        Rule::PornographicUrl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::NonAlphanumericFraction => "Fraction of non-alpha-numeric characters",
            Rule::WordsWithoutAlphabetsFraction => "Fraction of words without alphabets",
            Rule::NumbersFraction => "Fraction of numbers (in characters)",
            Rule::UrlFraction => "Fraction of URLs (in characters)",
            Rule::BulletLinesFraction => "Fraction of lines starting with bullets",
            Rule::WhitespaceFraction => "Fraction of whitespaces (in characters)",
            Rule::ParenthesesFraction => "Fraction of parentheses (in characters)",
            Rule::SymbolToWordRatio => "The ratio of symbols to words",
            Rule::LongWord => "Contains a word >1000 characters",
            Rule::WordCount => "Contains <50 or >100k words",
            Rule::CommonEnglishWords => "Contains less than 2 common English words",
            Rule::MeanWordLength => "Mean word length <3 or >10 characters",
            Rule::BoilerplateFraction => "Fraction of boilerplate content (in characters)",
            Rule::DuplicateLineFraction => "Duplicate line fraction",
            Rule::DuplicateParagraphFraction => "Duplicate paragraph fraction",
            Rule::DuplicateLineCharFraction => "Duplicate lines (by character fraction)",
            Rule::DuplicateParagraphCharFraction => "Duplicate paragraph (by character fraction)",
            Rule::TopNgramFraction => "Repeating top n-gram fraction",
            Rule::DuplicateNgramFraction => "Repeating duplicate n-gram fraction",
            Rule::NoPunctuationLineFraction => "Fraction of lines that do not end with punctuation",
            Rule::EllipsisLineFraction => "Fraction of lines that end with ellipsis",
            Rule::PornographicUrl => "Documents containing Pornographic content in URLs",
        }
    }

    /// Rules that only make sense for English text.
    pub fn english_only(self) -> bool {
        matches!(
            self,
            Rule::NonAlphanumericFraction
                | Rule::WordsWithoutAlphabetsFraction
                | Rule::CommonEnglishWords
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

/// Thresholds keyed by rule name. Defaults are the standard web-text values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeuristicThresholds {
    /// Consumed by the perplexity filter, kept here so one file holds every threshold.
    #[serde(rename = "N-gram LM Perplexity")]
    pub perplexity: f64,
    #[serde(rename = "Fraction of non-alpha-numeric characters")]
    pub non_alphanumeric_fraction: f64,
    #[serde(rename = "Fraction of words without alphabets")]
    pub words_without_alphabets_fraction: f64,
    #[serde(rename = "Fraction of numbers (in characters)")]
    pub numbers_fraction: f64,
    #[serde(rename = "Fraction of URLs (in characters)")]
    pub url_fraction: f64,
    #[serde(rename = "Fraction of lines starting with bullets")]
    pub bullet_lines_fraction: f64,
    #[serde(rename = "Fraction of whitespaces (in characters)")]
    pub whitespace_fraction: f64,
    #[serde(rename = "Fraction of parentheses (in characters)")]
    pub parentheses_fraction: f64,
    #[serde(rename = "The ratio of symbols to words")]
    pub symbol_to_word_ratio: f64,
    #[serde(rename = "Contains a word >1000 characters")]
    pub max_word_length: f64,
    #[serde(rename = "Contains <50 or >100k words")]
    pub word_count: Range,
    #[serde(rename = "Contains less than 2 common English words")]
    pub min_common_english_words: f64,
    #[serde(rename = "Mean word length <3 or >10 characters")]
    pub mean_word_length: Range,
    #[serde(rename = "Fraction of boilerplate content (in characters)")]
    pub boilerplate_fraction: f64,
    #[serde(rename = "Duplicate line fraction")]
    pub duplicate_line_fraction: f64,
    #[serde(rename = "Duplicate paragraph fraction")]
    pub duplicate_paragraph_fraction: f64,
    #[serde(rename = "Duplicate lines (by character fraction)")]
    pub duplicate_line_char_fraction: f64,
    #[serde(rename = "Duplicate paragraph (by character fraction)")]
    pub duplicate_paragraph_char_fraction: f64,
    #[serde(rename = "Repeating top n-gram fraction")]
    pub top_ngram_fraction: f64,
    #[serde(rename = "Repeating duplicate n-gram fraction")]
    pub duplicate_ngram_fraction: f64,
    #[serde(rename = "Fraction of lines that do not end with punctuation")]
    pub no_punctuation_line_fraction: f64,
    #[serde(rename = "Fraction of lines that end with ellipsis")]
    pub ellipsis_line_fraction: f64,
    #[serde(rename = "Documents containing Pornographic content in URLs")]
    pub reject_pornographic_urls: bool,
}

impl Default for HeuristicThresholds {
    fn default() -> Self {
        HeuristicThresholds {
            perplexity: 5000.0,
            non_alphanumeric_fraction: 0.25,
            words_without_alphabets_fraction: 0.20,
            numbers_fraction: 0.15,
            url_fraction: 0.20,
            bullet_lines_fraction: 0.90,
            whitespace_fraction: 0.25,
            parentheses_fraction: 0.10,
            symbol_to_word_ratio: 0.10,
            max_word_length: 1000.0,
            word_count: Range { min: 50.0, max: 100_000.0 },
            min_common_english_words: 2.0,
            mean_word_length: Range { min: 3.0, max: 10.0 },
            boilerplate_fraction: 0.40,
            duplicate_line_fraction: 0.30,
            duplicate_paragraph_fraction: 0.30,
            duplicate_line_char_fraction: 0.20,
            duplicate_paragraph_char_fraction: 0.10,
            top_ngram_fraction: 0.20,
            duplicate_ngram_fraction: 0.20,
            no_punctuation_line_fraction: 0.85,
            ellipsis_line_fraction: 0.30,
            reject_pornographic_urls: true,
        }
    }
}

/// One violated rule with the value that violated it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleViolation {
    pub rule: String,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterVerdict {
    pub kept: bool,
    pub failed_rules: Vec<RuleViolation>,
}

impl FilterVerdict {
    pub fn from_violations(failed_rules: Vec<RuleViolation>) -> Self {
        FilterVerdict {
            kept: failed_rules.is_empty(),
            failed_rules,
        }
    }

    pub fn failed(&self, rule_name: &str) -> bool {
        self.failed_rules.iter().any(|v| v.rule == rule_name)
    }
}

/// One line of the filter report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterRecord {
    pub id: String,
    pub kept: bool,
    pub failed_rules: Vec<RuleViolation>,
}

impl FilterRecord {
    pub fn new(id: &str, verdict: FilterVerdict) -> Self {
        FilterRecord {
            id: id.to_string(),
            kept: verdict.kept,
            failed_rules: verdict.failed_rules,
        }
    }
}

/// Every heuristic measurement for one document.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TextMetrics {
    pub chars: usize,
    pub words: usize,
    pub lines: usize,
    pub non_alphanumeric_fraction: f64,
    pub words_without_alphabets_fraction: f64,
    pub numbers_fraction: f64,
    pub url_fraction: f64,
    pub bullet_lines_fraction: f64,
    pub whitespace_fraction: f64,
    pub parentheses_fraction: f64,
    pub symbol_to_word_ratio: f64,
    pub longest_word: usize,
    pub common_english_words: usize,
    pub mean_word_length: f64,
    pub boilerplate_fraction: f64,
    pub duplicate_line_fraction: f64,
    pub duplicate_paragraph_fraction: f64,
    pub duplicate_line_char_fraction: f64,
    pub duplicate_paragraph_char_fraction: f64,
    pub top_ngram_fraction: f64,
    pub duplicate_ngram_fraction: f64,
    pub no_punctuation_line_fraction: f64,
    pub ellipsis_line_fraction: f64,
    pub pornographic_url: bool,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn char_len(s: &str) -> usize {
    s.chars().count()
}

/// Fraction of items that repeat an earlier item, by count and by characters.
fn duplicate_fractions(items: &[&str], total_chars: usize) -> (f64, f64) {
    let mut seen = HashSet::new();
    let (mut dup_items, mut dup_chars) = (0usize, 0usize);
    for item in items {
        if !seen.insert(*item) {
            dup_items += 1;
            dup_chars += char_len(item);
        }
    }
    (ratio(dup_items, items.len()), ratio(dup_chars, total_chars))
}

fn top_ngram_fraction(words: &[&str], total: usize) -> f64 {
    let mut best = 0.0f64;
    for n in 2..=4 {
        if words.len() < n {
            break;
        }
        let mut counts: HashMap<&[&str], usize> = HashMap::new();
        for w in words.windows(n) {
            *counts.entry(w).or_default() += 1;
        }
        // most frequent n-gram; ties go to the longer one, then lexicographic
        let Some((top, _)) = counts
            .iter()
            .filter(|(_, &c)| c > 1)
            .max_by(|(a, ca), (b, cb)| {
                let len = |g: &[&str]| g.iter().map(|w| char_len(w)).sum::<usize>();
                ca.cmp(cb).then(len(a).cmp(&len(b))).then(b.cmp(a))
            })
        else {
            continue;
        };
        // overlapping occurrences are counted once per word
        let mut covered = vec![false; words.len()];
        for (i, w) in words.windows(n).enumerate() {
            if w == *top {
                covered[i..i + n].iter_mut().for_each(|c| *c = true);
            }
        }
        let chars: usize = covered
            .iter()
            .zip(words)
            .filter(|(c, _)| **c)
            .map(|(_, w)| char_len(w))
            .sum();
        best = best.max(ratio(chars, total));
    }
    best
}

fn duplicate_ngram_fraction(words: &[&str], word_chars: &[usize], total: usize) -> f64 {
    let mut best = 0.0f64;
    for n in 5..=10 {
        if words.len() < n {
            break;
        }
        let mut counts: HashMap<&[&str], usize> = HashMap::new();
        for w in words.windows(n) {
            *counts.entry(w).or_default() += 1;
        }
        let mut covered = vec![false; words.len()];
        for (i, w) in words.windows(n).enumerate() {
            if counts[w] > 1 {
                covered[i..i + n].iter_mut().for_each(|c| *c = true);
            }
        }
        let chars: usize = covered
            .iter()
            .zip(word_chars)
            .filter(|(c, _)| **c)
            .map(|(_, &n)| n)
            .sum();
        best = best.max(ratio(chars, total));
    }
    best
}

fn is_pornographic_url(url: &str) -> bool {
    let url = url.to_lowercase();
    url.contains("porn")
        || url
            .split(|c: char| !c.is_alphanumeric())
            .any(|tok| PORN_URL_TERMS.contains(&tok))
}

impl TextMetrics {
    pub fn measure(text: &str, url: Option<&str>) -> Self {
        let chars = char_len(text);
        let (mut alnum_other, mut digits, mut spaces, mut parens) = (0usize, 0usize, 0usize, 0usize);
        for c in text.chars() {
            if c.is_whitespace() {
                spaces += 1;
            } else if !c.is_alphanumeric() {
                alnum_other += 1;
            }
            if c.is_numeric() {
                digits += 1;
            }
            if matches!(c, '(' | ')' | '[' | ']' | '{' | '}') {
                parens += 1;
            }
        }

        let words: Vec<&str> = text.split_whitespace().collect();
        let word_chars: Vec<usize> = words.iter().map(|w| char_len(w)).collect();
        let total_word_chars: usize = word_chars.iter().sum();
        let no_alpha = words
            .iter()
            .filter(|w| !w.chars().any(char::is_alphabetic))
            .count();
        let common: HashSet<String> = words
            .iter()
            .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase())
            .filter(|w| COMMON_ENGLISH_WORDS.contains(&w.as_str()))
            .collect();
        let hashes = text.matches('#').count();
        let ellipses = text.matches("...").count() + text.matches('\u{2026}').count();

        let url_chars: usize = URL.find_iter(text).map(|m| char_len(m.as_str())).sum();

        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let bullets = lines
            .iter()
            .filter(|l| l.starts_with(|c: char| BULLETS.contains(&c)))
            .count();
        let no_punct = lines
            .iter()
            .filter(|l| !l.ends_with(|c: char| TERMINAL_PUNCTUATION.contains(&c)))
            .count();
        let ellipsis_lines = lines
            .iter()
            .filter(|l| l.ends_with("...") || l.ends_with('\u{2026}'))
            .count();
        let boilerplate_chars: usize = lines
            .iter()
            .filter(|l| BOILERPLATE.iter().any(|re| re.is_match(l)))
            .map(|l| char_len(l))
            .sum();

        let paragraphs: Vec<&str> = PARAGRAPH_BREAK
            .split(text)
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .collect();
        let (dup_lines, dup_line_chars) = duplicate_fractions(&lines, chars);
        let (dup_paras, dup_para_chars) = duplicate_fractions(&paragraphs, chars);

        TextMetrics {
            chars,
            words: words.len(),
            lines: lines.len(),
            non_alphanumeric_fraction: ratio(alnum_other, chars),
            words_without_alphabets_fraction: ratio(no_alpha, words.len()),
            numbers_fraction: ratio(digits, chars),
            url_fraction: ratio(url_chars, chars),
            bullet_lines_fraction: ratio(bullets, lines.len()),
            whitespace_fraction: ratio(spaces, chars),
            parentheses_fraction: ratio(parens, chars),
            symbol_to_word_ratio: ratio(hashes.max(ellipses), words.len()),
            longest_word: word_chars.iter().copied().max().unwrap_or(0),
            common_english_words: common.len(),
            mean_word_length: ratio(total_word_chars, words.len()),
            boilerplate_fraction: ratio(boilerplate_chars, chars),
            duplicate_line_fraction: dup_lines,
            duplicate_paragraph_fraction: dup_paras,
            duplicate_line_char_fraction: dup_line_chars,
            duplicate_paragraph_char_fraction: dup_para_chars,
            top_ngram_fraction: top_ngram_fraction(&words, total_word_chars),
            duplicate_ngram_fraction: duplicate_ngram_fraction(&words, &word_chars, total_word_chars),
            no_punctuation_line_fraction: ratio(no_punct, lines.len()),
            ellipsis_line_fraction: ratio(ellipsis_lines, lines.len()),
            pornographic_url: url.is_some_and(is_pornographic_url),
        }
    }

    /// Measured value of `rule`, in the units its threshold uses.
    pub fn value(&self, rule: Rule) -> f64 {
        match rule {
            Rule::NonAlphanumericFraction => self.non_alphanumeric_fraction,
            Rule::WordsWithoutAlphabetsFraction => self.words_without_alphabets_fraction,
            Rule::NumbersFraction => self.numbers_fraction,
            Rule::UrlFraction => self.url_fraction,
            Rule::BulletLinesFraction => self.bullet_lines_fraction,
            Rule::WhitespaceFraction => self.whitespace_fraction,
            Rule::ParenthesesFraction => self.parentheses_fraction,
            Rule::SymbolToWordRatio => self.symbol_to_word_ratio,
            Rule::LongWord => self.longest_word as f64,
            Rule::WordCount => self.words as f64,
            Rule::CommonEnglishWords => self.common_english_words as f64,
            Rule::MeanWordLength => self.mean_word_length,
            Rule::BoilerplateFraction => self.boilerplate_fraction,
            Rule::DuplicateLineFraction => self.duplicate_line_fraction,
            Rule::DuplicateParagraphFraction => self.duplicate_paragraph_fraction,
            Rule::DuplicateLineCharFraction => self.duplicate_line_char_fraction,
            Rule::DuplicateParagraphCharFraction => self.duplicate_paragraph_char_fraction,
            Rule::TopNgramFraction => self.top_ngram_fraction,
            Rule::DuplicateNgramFraction => self.duplicate_ngram_fraction,
            Rule::NoPunctuationLineFraction => self.no_punctuation_line_fraction,
            Rule::EllipsisLineFraction => self.ellipsis_line_fraction,
            Rule::PornographicUrl => f64::from(u8::from(self.pornographic_url)),
        }
    }
}

impl HeuristicThresholds {
    /// The violated bound for `rule` given a measured `value`, if any.
    pub fn check(&self, rule: Rule, value: f64) -> Option<f64> {
        let above = |t: f64| (value > t).then_some(t);
        let outside = |r: Range| {
            if value < r.min {
                Some(r.min)
            } else if value > r.max {
                Some(r.max)
            } else {
                None
            }
        };
        match rule {
            Rule::NonAlphanumericFraction => above(self.non_alphanumeric_fraction),
            Rule::WordsWithoutAlphabetsFraction => above(self.words_without_alphabets_fraction),
            Rule::NumbersFraction => above(self.numbers_fraction),
            Rule::UrlFraction => above(self.url_fraction),
            Rule::BulletLinesFraction => above(self.bullet_lines_fraction),
            Rule::WhitespaceFraction => above(self.whitespace_fraction),
            Rule::ParenthesesFraction => above(self.parentheses_fraction),
            Rule::SymbolToWordRatio => above(self.symbol_to_word_ratio),
            Rule::LongWord => above(self.max_word_length),
            Rule::WordCount => outside(self.word_count),
            Rule::CommonEnglishWords => {
                (value < self.min_common_english_words).then_some(self.min_common_english_words)
            }
            Rule::MeanWordLength => outside(self.mean_word_length),
            Rule::BoilerplateFraction => above(self.boilerplate_fraction),
            Rule::DuplicateLineFraction => above(self.duplicate_line_fraction),
            Rule::DuplicateParagraphFraction => above(self.duplicate_paragraph_fraction),
            Rule::DuplicateLineCharFraction => above(self.duplicate_line_char_fraction),
            Rule::DuplicateParagraphCharFraction => above(self.duplicate_paragraph_char_fraction),
            Rule::TopNgramFraction => above(self.top_ngram_fraction),
            Rule::DuplicateNgramFraction => above(self.duplicate_ngram_fraction),
            Rule::NoPunctuationLineFraction => above(self.no_punctuation_line_fraction),
            Rule::EllipsisLineFraction => above(self.ellipsis_line_fraction),
            Rule::PornographicUrl => (self.reject_pornographic_urls && value >= 1.0).then_some(1.0),
        }
    }

    pub fn evaluate(&self, metrics: &TextMetrics, english_mode: bool) -> FilterVerdict {
        let violations = Rule::ALL
            .iter()
            .filter(|r| english_mode || !r.english_only())
            .filter_map(|&rule| {
                let value = metrics.value(rule);
                self.check(rule, value).map(|threshold| RuleViolation {
                    rule: rule.name().to_string(),
                    value,
                    threshold,
                })
            })
            .collect();
        FilterVerdict::from_violations(violations)
    }
}

/// Applies every rule to `doc`. English-only rules run when `english_mode`.
pub fn heuristic_filter(doc: &Document, config: &HeuristicThresholds, english_mode: bool) -> FilterVerdict {
    let metrics = TextMetrics::measure(&doc.text, doc.url.as_deref());
    config.evaluate(&metrics, english_mode)
}
