//! Text ingestion: tokenization and word-frequency tables.
//!
//! Every input in a batch is pooled into a single corpus. Per-file tables can
//! be built independently (in parallel) and combined with [`merge`], which is
//! associative and commutative.

use std::collections::HashMap;
use std::io::{self, Read};
use std::num::NonZeroUsize;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use unicode_segmentation::UnicodeSegmentation;

/// How raw text is split into words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum TokenRule {
    /// Unicode word boundaries (UAX #29); punctuation is discarded.
    #[default]
    UnicodeWords,
    /// Maximal runs of non-whitespace characters, kept verbatim.
    Whitespace,
}

impl TokenRule {
    pub fn as_str(self) -> &'static str {
        match self {
            TokenRule::UnicodeWords => "unicode_words",
            TokenRule::Whitespace => "whitespace",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    /// Tokens with fewer characters than this are dropped.
    pub min_token_length: NonZeroUsize,
    pub token_rule: TokenRule,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            lowercase: true,
            min_token_length: NonZeroUsize::MIN,
            token_rule: TokenRule::UnicodeWords,
        }
    }
}

/// Split `text` into words in document order.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> Vec<String> {
    let min_len = config.min_token_length.get();
    let raw: Box<dyn Iterator<Item = &str>> = match config.token_rule {
        TokenRule::UnicodeWords => Box::new(text.unicode_words()),
        TokenRule::Whitespace => Box::new(text.split_whitespace()),
    };
    raw.filter(|t| min_len <= 1 || t.chars().count() >= min_len)
        .map(|t| {
            if config.lowercase {
                t.to_lowercase()
            } else {
                t.to_owned()
            }
        })
        .collect()
}

/// Word occurrence counts `fr(w)` with cached aggregates.
///
/// `total_tokens` is `N = Σ fr(w)` and `max_frequency` is `M`, the largest
/// count (0 for an empty table). Every stored count is at least 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: HashMap<String, u64>,
    total_tokens: u64,
    max_frequency: u64,
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build a table from `(word, count)` pairs. Repeated words are summed and
    /// zero counts are ignored.
    pub fn from_counts<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut table = FrequencyTable::new();
        for (word, count) in pairs {
            table.add(word.into(), count);
        }
        table
    }

    fn add(&mut self, word: String, count: u64) {
        if count == 0 {
            return;
        }
        let slot = self.counts.entry(word).or_insert(0);
        *slot += count;
        self.total_tokens += count;
        self.max_frequency = self.max_frequency.max(*slot);
    }

    pub fn get(&self, word: &str) -> Option<u64> {
        self.counts.get(word).copied()
    }

    /// `(word, count)` pairs in unspecified order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> + '_ {
        self.counts.iter().map(|(w, &c)| (w.as_str(), c))
    }

    /// Counts only, in unspecified order.
    pub fn counts(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts.values().copied()
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn max_frequency(&self) -> u64 {
        self.max_frequency
    }

    pub fn vocab_size(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Fold `other` into `self`, summing counts pointwise.
    pub fn merge_from(&mut self, other: &FrequencyTable) {
        self.counts.reserve(other.counts.len());
        for (word, &count) in &other.counts {
            self.add(word.clone(), count);
        }
    }

    /// The same table with every count multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> FrequencyTable {
        FrequencyTable::from_counts(self.iter().map(|(w, c)| (w, c * factor)))
    }
}

impl<S: AsRef<str>> FromIterator<S> for FrequencyTable {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut table = FrequencyTable::new();
        for token in iter {
            let token = token.as_ref();
            match table.counts.get_mut(token) {
                Some(slot) => {
                    *slot += 1;
                    table.total_tokens += 1;
                    table.max_frequency = table.max_frequency.max(*slot);
                }
                None => table.add(token.to_owned(), 1),
            }
        }
        table
    }
}

/// Count occurrences of each token.
pub fn count_frequencies<I, S>(tokens: I) -> FrequencyTable
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    tokens.into_iter().collect()
}

/// Pointwise sum of any number of tables.
pub fn merge<'a, I>(tables: I) -> FrequencyTable
where
    I: IntoIterator<Item = &'a FrequencyTable>,
{
    let mut out = FrequencyTable::new();
    for t in tables {
        out.merge_from(t);
    }
    out
}

/// Read a file as UTF-8, replacing invalid sequences with U+FFFD.
pub fn read_text_lossy(path: &Path) -> io::Result<String> {
    let bytes = std::fs::read(path)?;
    Ok(into_string_lossy(bytes))
}

pub fn read_to_string_lossy<R: Read>(mut reader: R) -> io::Result<String> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    Ok(into_string_lossy(bytes))
}

fn into_string_lossy(bytes: Vec<u8>) -> String {
    match String::from_utf8(bytes) {
        Ok(s) => s,
        Err(e) => String::from_utf8_lossy(e.as_bytes()).into_owned(),
    }
}

/// Tokenize and count each file concurrently. Results keep input order; the
/// first read failure is returned along with its path.
pub fn count_files<P>(
    paths: &[P],
    config: &TokenizerConfig,
) -> Result<Vec<FrequencyTable>, (std::path::PathBuf, io::Error)>
where
    P: AsRef<Path> + Sync,
{
    paths
        .par_iter()
        .map(|p| {
            let p = p.as_ref();
            read_text_lossy(p)
                .map(|text| count_frequencies(tokenize(&text, config)))
                .map_err(|e| (p.to_path_buf(), e))
        })
        .collect()
}
