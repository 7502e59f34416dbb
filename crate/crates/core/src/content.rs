//! Title controls: word count, Flesch reading ease, promotional share.

use std::collections::HashSet;
use std::path::Path;

use crate::error::{CoreError, Result};

/// Identifies the syllable rule below; recorded with every metric table.
pub const SYLLABLE_HEURISTIC: &str = "vowel-runs-v1";

pub const DEFAULT_LEXICON: &str = include_str!("../data/promotional_lexicon.txt");

/// Whitespace tokens with non-alphanumeric characters trimmed from both
/// edges. Inner punctuation stays, so hyphenated compounds are one token.
pub fn tokenize(title: &str) -> Vec<&str> {
    title
        .split_whitespace()
        .map(|t| t.trim_matches(|c: char| !c.is_alphanumeric()))
        .filter(|t| !t.is_empty())
        .collect()
}

pub fn title_word_count(title: &str) -> usize {
    tokenize(title).len()
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Maximal runs of a/e/i/o/u/y, minus one for a lone final 'e' after a
/// consonant, never below 1.
pub fn count_syllables(word: &str) -> usize {
    let letters: Vec<char> = word
        .chars()
        .flat_map(char::to_lowercase)
        .filter(|c| c.is_alphabetic())
        .collect();
    let mut runs = 0usize;
    let mut prev = false;
    for &c in &letters {
        let v = is_vowel(c);
        if v && !prev {
            runs += 1;
        }
        prev = v;
    }
    let n = letters.len();
    if n >= 2 && letters[n - 1] == 'e' && !is_vowel(letters[n - 2]) {
        runs = runs.saturating_sub(1);
    }
    runs.max(1)
}

fn sentence_count(title: &str) -> usize {
    title
        .split_whitespace()
        .filter(|t| {
            t.trim_end_matches(['"', '\'', ')', ']', '\u{201d}', '\u{2019}'])
                .ends_with(['.', '!', '?'])
        })
        .count()
        .max(1)
}

/// 206.835 - 1.015 (words / sentences) - 84.6 (syllables / words).
pub fn flesch_reading_ease(title: &str) -> Option<f64> {
    let tokens = tokenize(title);
    if tokens.is_empty() {
        return None;
    }
    let words = tokens.len() as f64;
    let syllables: usize = tokens.iter().map(|t| count_syllables(t)).sum();
    let sentences = sentence_count(title) as f64;
    Some(206.835 - 1.015 * (words / sentences) - 84.6 * (syllables as f64 / words))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    words: HashSet<String>,
}

impl Lexicon {
    /// One word per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        Self { words }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CoreError::Config(format!("cannot read lexicon {}: {e}", path.display())))?;
        Ok(Self::parse(&text))
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_LEXICON)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(&token.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Percentage of title tokens found in the lexicon; missing for empty titles.
pub fn promotional_fraction(title: &str, lexicon: &Lexicon) -> Option<f64> {
    let tokens = tokenize(title);
    if tokens.is_empty() {
        return None;
    }
    let hits = tokens.iter().filter(|t| lexicon.contains(t)).count();
    Some(100.0 * hits as f64 / tokens.len() as f64)
}
