use std::collections::HashMap;

use super::stats::FrequencyModel;
use super::Level;

/// Maximum number of entries kept at each multi-symbol level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectionLimits {
    pub digrams: usize,
    pub syllables: usize,
    pub words: usize,
}

impl Default for SelectionLimits {
    fn default() -> Self {
        Self { digrams: 512, syllables: 1024, words: 256 }
    }
}

impl SelectionLimits {
    pub fn for_level(&self, level: Level) -> usize {
        match level {
            Level::Symbol => usize::MAX,
            Level::Digram => self.digrams,
            Level::Syllable => self.syllables,
            Level::Word => self.words,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Selected {
    pub token: String,
    pub level: Level,
    pub count: u64,
}

/// Characters saved by coding `token` as a unit rather than symbol by symbol.
pub fn selection_score(token: &str, count: u64) -> u64 {
    count.saturating_mul(token.chars().count().saturating_sub(1) as u64)
}

/// Picks codebook entries: every level-1 symbol, then the best-scoring
/// tokens of levels 2-4. A token chosen at several levels keeps the highest.
/// The result is sorted by token.
pub fn select_entries(model: &FrequencyModel, limits: &SelectionLimits, min_count: u64) -> Vec<Selected> {
    let min_count = min_count.max(1);
    let mut chosen: HashMap<&str, (Level, u64)> = HashMap::new();

    for (token, &count) in model.level(Level::Symbol) {
        if count > 0 {
            chosen.insert(token, (Level::Symbol, count));
        }
    }

    for level in [Level::Digram, Level::Syllable, Level::Word] {
        let mut candidates: Vec<(&str, u64, u64)> = model
            .level(level)
            .iter()
            .filter(|(t, &c)| c >= min_count && t.chars().nth(1).is_some())
            .map(|(t, &c)| (t.as_str(), c, selection_score(t, c)))
            .collect();
        candidates.sort_unstable_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(b.0)));
        candidates.truncate(limits.for_level(level));
        for (token, count, _) in candidates {
            // levels are visited in ascending order, so this keeps the highest
            chosen.insert(token, (level, count));
        }
    }

    let mut out: Vec<Selected> = chosen
        .into_iter()
        .map(|(token, (level, count))| Selected { token: token.to_owned(), level, count })
        .collect();
    out.sort_unstable_by(|a, b| a.token.cmp(&b.token));
    out
}
