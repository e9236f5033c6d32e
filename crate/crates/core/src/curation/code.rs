//! File-level filters for source code.

use serde::{Deserialize, Serialize};

use super::heuristics::{FilterVerdict, Range, RuleViolation};
use crate::corpus::{count_tokens, Document, TokenizerScheme};

pub const COMMENT_FRACTION: &str = "Fraction of comments (in characters)";
pub const LINES_OF_CODE: &str = "Number of lines of code";
pub const CHARS_PER_TOKEN: &str = "Ratio of characters to tokens";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinBound {
    pub min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodeThresholds {
    #[serde(rename = "Fraction of comments (in characters)")]
    pub comment_fraction: Range,
    #[serde(rename = "Number of lines of code")]
    pub lines_of_code: Range,
    #[serde(rename = "Ratio of characters to tokens")]
    pub chars_per_token: MinBound,
    #[serde(skip)]
    pub tokenizer: TokenizerScheme,
}

impl Default for CodeThresholds {
    fn default() -> Self {
        CodeThresholds {
            comment_fraction: Range { min: 0.001, max: 0.85 },
            lines_of_code: Range { min: 5.0, max: 20_000.0 },
            chars_per_token: MinBound { min: 2.0 },
            tokenizer: TokenizerScheme::WhitespaceWords,
        }
    }
}

/// Comment markers for a language family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommentSyntax {
    pub line: &'static [&'static str],
    pub block: Option<(&'static str, &'static str)>,
}

impl CommentSyntax {
    pub const C_LIKE: CommentSyntax = CommentSyntax { line: &["//"], block: Some(("/*", "*/")) };
    pub const HASH: CommentSyntax = CommentSyntax { line: &["#"], block: None };
    pub const DASH: CommentSyntax = CommentSyntax { line: &["--"], block: None };
    pub const LISP: CommentSyntax = CommentSyntax { line: &[";"], block: None };
    pub const HTML: CommentSyntax = CommentSyntax { line: &[], block: Some(("<!--", "-->")) };

    /// Picks markers from a language name; unknown languages get C-style comments.
    pub fn for_language(language: Option<&str>) -> Self {
        let lang = language.unwrap_or("").to_ascii_lowercase();
        match lang.as_str() {
            "python" | "py" | "shell" | "bash" | "sh" | "ruby" | "rb" | "perl" | "r" | "yaml"
            | "toml" | "makefile" | "dockerfile" | "julia" | "powershell" | "cmake" | "elixir"
            | "nim" | "tcl" => CommentSyntax::HASH,
            "sql" | "haskell" | "hs" | "lua" | "ada" | "elm" | "vhdl" => CommentSyntax::DASH,
            "lisp" | "scheme" | "clojure" | "racket" | "assembly" | "asm" => CommentSyntax::LISP,
            "html" | "xml" | "markdown" => CommentSyntax::HTML,
            _ => CommentSyntax::C_LIKE,
        }
    }
}

/// Number of characters inside comments, including the markers.
///
/// String literals delimited by `"` or `'` (with backslash escapes) are
/// skipped so markers inside them do not count.
pub fn comment_chars(source: &str, syntax: CommentSyntax) -> usize {
    let chars: Vec<char> = source.chars().collect();
    let starts_with = |i: usize, pat: &str| pat.chars().enumerate().all(|(j, p)| chars.get(i + j) == Some(&p));
    let mut count = 0;
    let mut i = 0;
    let mut quote: Option<char> = None;
    while i < chars.len() {
        let c = chars[i];
        if let Some(q) = quote {
            if c == '\\' {
                i += 2;
                continue;
            }
            if c == q || c == '\n' {
                quote = None;
            }
            i += 1;
            continue;
        }
        if let Some((open, close)) = syntax.block {
            if starts_with(i, open) {
                let start = i;
                i += open.chars().count();
                while i < chars.len() && !starts_with(i, close) {
                    i += 1;
                }
                i = (i + close.chars().count()).min(chars.len());
                count += i - start;
                continue;
            }
        }
        if syntax.line.iter().any(|m| starts_with(i, m)) {
            let start = i;
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            count += i - start;
            continue;
        }
        if c == '"' || c == '\'' {
            quote = Some(c);
        }
        i += 1;
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CodeMetrics {
    pub comment_fraction: f64,
    pub lines: usize,
    pub chars_per_token: f64,
}

impl CodeMetrics {
    pub fn measure(source: &str, syntax: CommentSyntax, tokenizer: TokenizerScheme) -> Self {
        let chars = source.chars().count();
        let tokens = count_tokens(source, tokenizer);
        CodeMetrics {
            comment_fraction: if chars == 0 {
                0.0
            } else {
                comment_chars(source, syntax) as f64 / chars as f64
            },
            lines: source.lines().count(),
            chars_per_token: if tokens == 0 { 0.0 } else { chars as f64 / tokens as f64 },
        }
    }
}

pub fn evaluate_code(metrics: &CodeMetrics, t: &CodeThresholds) -> FilterVerdict {
    let mut failed = Vec::new();
    let mut range = |rule: &str, value: f64, r: Range| {
        let bound = if value < r.min {
            Some(r.min)
        } else if value > r.max {
            Some(r.max)
        } else {
            None
        };
        if let Some(threshold) = bound {
            failed.push(RuleViolation { rule: rule.into(), value, threshold });
        }
    };
    range(COMMENT_FRACTION, metrics.comment_fraction, t.comment_fraction);
    range(LINES_OF_CODE, metrics.lines as f64, t.lines_of_code);
    range(
        CHARS_PER_TOKEN,
        metrics.chars_per_token,
        Range { min: t.chars_per_token.min, max: f64::INFINITY },
    );
    FilterVerdict::from_violations(failed)
}

/// Code filter for a caller-designated source-code document. The comment
/// syntax comes from the document's `language` tag.
pub fn code_filter(doc: &Document, thresholds: &CodeThresholds) -> FilterVerdict {
    let syntax = CommentSyntax::for_language(doc.language.as_deref());
    evaluate_code(&CodeMetrics::measure(&doc.text, syntax, thresholds.tokenizer), thresholds)
}
