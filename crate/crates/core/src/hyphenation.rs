//! Universal hyphenation: split a word into syllables around its vowel blocks.
//!
//! All four variants agree on the outer consonants (leading ones join the
//! first syllable, trailing ones the last) and differ only in how each inner
//! consonant group is shared between its two neighbouring vowel blocks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::alphabet::{SymbolTable, Unit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum HyphenationVariant {
    /// Inner consonants all go to the preceding syllable.
    Left,
    /// Inner consonants all go to the following syllable.
    Right,
    /// Even split, odd surplus to the left; a lone consonant goes right.
    MiddleLeft,
    /// Even split, odd surplus to the right.
    #[default]
    MiddleRight,
}

impl HyphenationVariant {
    pub const ALL: [HyphenationVariant; 4] = [
        HyphenationVariant::Left,
        HyphenationVariant::Right,
        HyphenationVariant::MiddleLeft,
        HyphenationVariant::MiddleRight,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            HyphenationVariant::Left => "ul",
            HyphenationVariant::Right => "ur",
            HyphenationVariant::MiddleLeft => "uml",
            HyphenationVariant::MiddleRight => "umr",
        }
    }

    /// How many of `n` inner consonant units stay left and go right.
    pub fn split(self, n: usize) -> (usize, usize) {
        match self {
            HyphenationVariant::Left => (n, 0),
            HyphenationVariant::Right => (0, n),
            HyphenationVariant::MiddleLeft if n == 1 => (0, 1),
            HyphenationVariant::MiddleLeft => (n.div_ceil(2), n / 2),
            HyphenationVariant::MiddleRight => (n / 2, n.div_ceil(2)),
        }
    }
}

impl fmt::Display for HyphenationVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HyphenationVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ul" => Ok(HyphenationVariant::Left),
            "ur" => Ok(HyphenationVariant::Right),
            "uml" => Ok(HyphenationVariant::MiddleLeft),
            "umr" => Ok(HyphenationVariant::MiddleRight),
            other => Err(format!("unknown hyphenation variant {other:?} (expected ul, ur, uml or umr)")),
        }
    }
}

/// A word's decomposition into syllables. Never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyphenation<'a> {
    syllables: Vec<&'a str>,
}

impl<'a> Hyphenation<'a> {
    pub fn syllables(&self) -> &[&'a str] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn join(&self, sep: &str) -> String {
        self.syllables.join(sep)
    }
}

/// Maximal runs of vowel units as half-open `(start, end)` unit indices.
pub fn vowel_blocks(units: &[Unit<'_>]) -> Vec<(usize, usize)> {
    let mut blocks = Vec::new();
    let mut start = None;
    for (i, u) in units.iter().enumerate() {
        match (u.is_vowel(), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                blocks.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        blocks.push((s, units.len()));
    }
    blocks
}

pub fn hyphenate<'a>(
    word: &'a str,
    variant: HyphenationVariant,
    table: &SymbolTable,
) -> Hyphenation<'a> {
    let units = table.cluster_consonants(word);
    let blocks = vowel_blocks(&units);
    if blocks.len() <= 1 {
        return Hyphenation { syllables: vec![word] };
    }

    let mut offsets = Vec::with_capacity(units.len() + 1);
    let mut pos = 0;
    for u in &units {
        offsets.push(pos);
        pos += u.as_str().len();
    }
    offsets.push(pos);

    let mut syllables = Vec::with_capacity(blocks.len());
    let mut start = 0;
    for pair in blocks.windows(2) {
        let (_, prev_end) = pair[0];
        let (next_start, _) = pair[1];
        let (left, _) = variant.split(next_start - prev_end);
        let cut = offsets[prev_end + left];
        syllables.push(&word[start..cut]);
        start = cut;
    }
    syllables.push(&word[start..]);
    Hyphenation { syllables }
}

/// Tallies syllable occurrences over already segmented words.
pub fn syllabify_corpus<I, S>(
    words: I,
    variant: HyphenationVariant,
    table: &SymbolTable,
) -> BTreeMap<String, u64>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut counts = BTreeMap::new();
    for w in words {
        for syl in hyphenate(w.as_ref(), variant, table).syllables() {
            *counts.entry((*syl).to_owned()).or_insert(0) += 1;
        }
    }
    counts
}
