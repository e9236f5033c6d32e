use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use unicode_segmentation::UnicodeSegmentation;

use crate::Error;

/// How token counts are measured. Only count ratios matter downstream, so
/// word counts stand in for a subword tokenizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TokenizerScheme {
    #[default]
    #[serde(rename = "whitespace-words")]
    WhitespaceWords,
    #[serde(rename = "unicode-words")]
    UnicodeWords,
}

impl TokenizerScheme {
    pub fn id(self) -> &'static str {
        match self {
            TokenizerScheme::WhitespaceWords => "whitespace-words",
            TokenizerScheme::UnicodeWords => "unicode-words",
        }
    }
}

impl fmt::Display for TokenizerScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for TokenizerScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "whitespace-words" | "whitespace" => Ok(TokenizerScheme::WhitespaceWords),
            "unicode-words" | "unicode" => Ok(TokenizerScheme::UnicodeWords),
            other => Err(Error::InvalidParameter(format!("unknown tokenizer scheme `{other}`"))),
        }
    }
}

pub fn count_tokens(text: &str, scheme: TokenizerScheme) -> u64 {
    match scheme {
        TokenizerScheme::WhitespaceWords => text.split_whitespace().count() as u64,
        TokenizerScheme::UnicodeWords => text.unicode_words().count() as u64,
    }
}
