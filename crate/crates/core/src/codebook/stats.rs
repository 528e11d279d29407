use std::collections::HashMap;

use crate::alphabet::{SymbolClass, SymbolTable};
use crate::hyphenation::{hyphenate, HyphenationVariant};

use super::Level;

/// Per-level token counts gathered from a training corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyModel {
    levels: [HashMap<String, u64>; 4],
    total_chars: u64,
}

impl FrequencyModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn level(&self, level: Level) -> &HashMap<String, u64> {
        &self.levels[level.index()]
    }

    pub fn total_chars(&self) -> u64 {
        self.total_chars
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(HashMap::is_empty)
    }

    /// Adds one token occurrence by hand; mostly useful for tests and tools.
    pub fn add(&mut self, level: Level, token: &str, count: u64) {
        if count > 0 {
            *self.levels[level.index()].entry(token.to_owned()).or_insert(0) += count;
        }
    }

    pub fn observe(&mut self, text: &str, variant: HyphenationVariant, table: &SymbolTable) {
        let mut prev_space = false;
        let mut digram = String::with_capacity(8);
        for c in text.chars() {
            self.total_chars += 1;
            let mut buf = [0u8; 4];
            self.bump(Level::Symbol, c.encode_utf8(&mut buf));

            let is_space = table.classify(c) == SymbolClass::Space;
            if prev_space && !is_space {
                digram.push(c);
                self.bump(Level::Digram, &digram);
            }
            if is_space {
                digram.clear();
                digram.push(c);
            }
            prev_space = is_space;
        }

        for run in table.segment(text).into_iter().filter(|r| r.is_word()) {
            for syl in hyphenate(run.text, variant, table).syllables() {
                if syl.chars().nth(1).is_some() {
                    self.bump(Level::Syllable, syl);
                }
            }
            if run.text.chars().nth(1).is_some() {
                self.bump(Level::Word, run.text);
            }
        }
    }

    fn bump(&mut self, level: Level, token: &str) {
        let map = &mut self.levels[level.index()];
        match map.get_mut(token) {
            Some(n) => *n += 1,
            None => {
                map.insert(token.to_owned(), 1);
            }
        }
    }

    pub fn merge(&mut self, other: FrequencyModel) {
        self.total_chars += other.total_chars;
        for (mine, theirs) in self.levels.iter_mut().zip(other.levels) {
            if mine.len() < theirs.len() {
                let small = std::mem::replace(mine, theirs);
                for (k, v) in small {
                    *mine.entry(k).or_insert(0) += v;
                }
            } else {
                for (k, v) in theirs {
                    *mine.entry(k).or_insert(0) += v;
                }
            }
        }
    }
}

pub fn collect_statistics_sequential<S: AsRef<str>>(
    corpus: &[S],
    variant: HyphenationVariant,
    table: &SymbolTable,
) -> FrequencyModel {
    let mut model = FrequencyModel::new();
    for text in corpus {
        model.observe(text.as_ref(), variant, table);
    }
    model
}

/// Builds one model per rayon split and merges them.
#[cfg(feature = "parallel")]
pub fn collect_statistics_parallel<S: AsRef<str> + Sync>(
    corpus: &[S],
    variant: HyphenationVariant,
    table: &SymbolTable,
) -> FrequencyModel {
    use rayon::prelude::*;

    corpus
        .par_iter()
        .fold(FrequencyModel::new, |mut m, text| {
            m.observe(text.as_ref(), variant, table);
            m
        })
        .reduce(FrequencyModel::new, |mut a, b| {
            a.merge(b);
            a
        })
}

/// Gathers frequency statistics, in parallel when the `parallel` feature is on.
pub fn collect_statistics<S: AsRef<str> + Sync>(
    corpus: &[S],
    variant: HyphenationVariant,
    table: &SymbolTable,
) -> FrequencyModel {
    #[cfg(feature = "parallel")]
    {
        collect_statistics_parallel(corpus, variant, table)
    }
    #[cfg(not(feature = "parallel"))]
    {
        collect_statistics_sequential(corpus, variant, table)
    }
}
