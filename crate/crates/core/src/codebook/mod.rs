//! The static knowledge base: corpus statistics, four-level entry selection
//! and a single canonical prefix code shared by every level plus an escape.

mod format;
mod huffman;
mod select;
mod stats;

use std::fmt;
use std::str::FromStr;

use crate::alphabet::SymbolTable;
use crate::codec::index::CodebookIndex;
use crate::error::{BuildError, MetricError, ParseError};
use crate::hyphenation::HyphenationVariant;

pub use format::fnv1a64;
pub use huffman::{canonical_codewords, code_lengths, entropy, kraft_numerator, KRAFT_ONE};
pub use select::{select_entries, selection_score, Selected, SelectionLimits};
#[cfg(feature = "parallel")]
pub use stats::collect_statistics_parallel;
pub use stats::{collect_statistics, collect_statistics_sequential, FrequencyModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    /// Single code points.
    Symbol = 1,
    /// A space merged with the code point after it.
    Digram = 2,
    Syllable = 3,
    Word = 4,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Symbol, Level::Digram, Level::Syllable, Level::Word];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Level::Symbol),
            2 => Some(Level::Digram),
            3 => Some(Level::Syllable),
            4 => Some(Level::Word),
            _ => None,
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize - 1
    }
}

/// Up to 64 bits, stored right-aligned, most significant bit sent first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Codeword {
    bits: u64,
    len: u8,
}

impl Codeword {
    pub fn new(bits: u64, len: u8) -> Self {
        assert!((1..=64).contains(&len), "codeword length {len} out of range");
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Codeword { bits: bits & mask, len }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> u8 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit `i`, counting from the first transmitted bit.
    pub fn bit(&self, i: u8) -> bool {
        (self.bits >> (self.len - 1 - i)) & 1 == 1
    }

    /// Left-aligned in a u64, for lexicographic comparison.
    pub fn aligned(&self) -> u64 {
        self.bits << (64 - self.len as u32)
    }

    pub fn is_prefix_of(&self, other: &Codeword) -> bool {
        self.len <= other.len && other.bits >> (other.len - self.len) == self.bits
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Codeword {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        if s.is_empty() || s.len() > 64 {
            return Err(());
        }
        let mut bits = 0u64;
        for b in s.bytes() {
            bits = (bits << 1)
                | match b {
                    b'0' => 0,
                    b'1' => 1,
                    _ => return Err(()),
                };
        }
        Ok(Codeword::new(bits, s.len() as u8))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodebookEntry {
    pub token: String,
    pub level: Level,
    pub count: u64,
    /// count / (Σ entry counts + escape count)
    pub probability: f64,
    pub codeword: Codeword,
}

impl CodebookEntry {
    pub fn code_length(&self) -> usize {
        self.codeword.len() as usize
    }
}

/// Synthetic weight given to the escape symbol.
pub fn escape_count(total: u64) -> u64 {
    total.div_ceil(1000).max(1)
}

/// An immutable, validated codebook.
#[derive(Clone)]
pub struct Codebook {
    entries: Vec<CodebookEntry>,
    escape: Codeword,
    escape_count: u64,
    variant: HyphenationVariant,
    id: u64,
    pub(crate) index: CodebookIndex,
}

impl PartialEq for Codebook {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
            && self.escape == other.escape
            && self.escape_count == other.escape_count
            && self.variant == other.variant
            && self.id == other.id
    }
}

impl fmt::Debug for Codebook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Codebook")
            .field("id", &format_args!("{:016x}", self.id))
            .field("variant", &self.variant)
            .field("entries", &self.entries.len())
            .field("escape", &self.escape.to_string())
            .finish()
    }
}

/// Raw entry as read from a file or produced by the code assigner.
pub(crate) struct RawEntry {
    pub token: String,
    pub level: Level,
    pub count: u64,
    pub codeword: Codeword,
}

impl Codebook {
    /// Validates prefix-freeness and Kraft completeness, then sorts entries
    /// by (code length, token) and computes derived fields.
    pub(crate) fn from_raw(
        mut raw: Vec<RawEntry>,
        escape: Codeword,
        variant: HyphenationVariant,
    ) -> Result<Self, ParseError> {
        let mut words: Vec<Codeword> = raw.iter().map(|e| e.codeword).collect();
        words.push(escape);
        words.sort_unstable_by_key(|c| (c.aligned(), c.len()));
        if words.windows(2).any(|w| w[0].is_prefix_of(&w[1])) {
            return Err(ParseError::PrefixViolation);
        }
        if kraft_numerator(words.iter().map(|c| c.len() as usize)) != Some(KRAFT_ONE) {
            return Err(ParseError::KraftViolation);
        }

        raw.sort_by(|a, b| a.codeword.len().cmp(&b.codeword.len()).then_with(|| a.token.cmp(&b.token)));
        let total: u64 = raw.iter().map(|e| e.count).sum();
        let escape_count = escape_count(total);
        let denom = (total + escape_count) as f64;
        let entries: Vec<CodebookEntry> = raw
            .into_iter()
            .map(|e| CodebookEntry {
                probability: e.count as f64 / denom,
                token: e.token,
                level: e.level,
                count: e.count,
                codeword: e.codeword,
            })
            .collect();
        let mut cb = Codebook {
            index: CodebookIndex::new(&entries, escape),
            entries,
            escape,
            escape_count,
            variant,
            id: 0,
        };
        cb.id = fnv1a64(cb.serialize_unchecked().as_bytes());
        Ok(cb)
    }

    pub fn entries(&self) -> &[CodebookEntry] {
        &self.entries
    }

    pub fn entry(&self, index: usize) -> Option<&CodebookEntry> {
        self.entries.get(index)
    }

    pub fn escape_codeword(&self) -> Codeword {
        self.escape
    }

    pub fn escape_count(&self) -> u64 {
        self.escape_count
    }

    pub fn escape_probability(&self) -> f64 {
        self.escape_count as f64 / (self.total_count() + self.escape_count) as f64
    }

    pub fn total_count(&self) -> u64 {
        self.entries.iter().map(|e| e.count).sum()
    }

    pub fn variant(&self) -> HyphenationVariant {
        self.variant
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn level_counts(&self) -> [usize; 4] {
        let mut out = [0; 4];
        for e in &self.entries {
            out[e.level.index()] += 1;
        }
        out
    }

    /// Every codeword, escape last.
    pub fn codewords(&self) -> impl Iterator<Item = Codeword> + '_ {
        self.entries.iter().map(|e| e.codeword).chain(std::iter::once(self.escape))
    }

    /// Entry probabilities followed by the escape probability.
    pub fn probabilities(&self) -> Vec<f64> {
        let mut p: Vec<f64> = self.entries.iter().map(|e| e.probability).collect();
        p.push(self.escape_probability());
        p
    }

    pub fn average_length(&self) -> f64 {
        average_length(self)
    }

    pub fn entropy(&self) -> f64 {
        entropy(&self.probabilities()).expect("codebook probabilities are normalized")
    }
}

/// Huffman-codes the selection plus an escape symbol and assigns canonical
/// codewords.
pub fn assign_codes(selected: &[Selected], variant: HyphenationVariant) -> Result<Codebook, BuildError> {
    if selected.is_empty() {
        return Err(BuildError::EmptyAlphabet);
    }
    if let Some(s) = selected.iter().find(|s| s.count == 0) {
        return Err(BuildError::ZeroCount(s.token.clone()));
    }

    // tie-break order: tokens ascending, escape last
    let mut order: Vec<&Selected> = selected.iter().collect();
    order.sort_by(|a, b| a.token.cmp(&b.token));
    let total: u64 = order.iter().map(|s| s.count).sum();
    let mut counts: Vec<u64> = order.iter().map(|s| s.count).collect();
    counts.push(escape_count(total));

    let lengths = code_lengths(&counts);
    if let Some(&max) = lengths.iter().max() {
        if max > 64 {
            return Err(BuildError::CodeTooLong(max));
        }
    }

    // canonical order: (length, token), escape last among its length
    let n = order.len();
    let mut ranked: Vec<usize> = (0..=n).collect();
    ranked.sort_by(|&a, &b| {
        lengths[a].cmp(&lengths[b]).then_with(|| match (a == n, b == n) {
            (true, true) => std::cmp::Ordering::Equal,
            (true, false) => std::cmp::Ordering::Greater,
            (false, true) => std::cmp::Ordering::Less,
            (false, false) => order[a].token.cmp(&order[b].token),
        })
    });
    let sorted_lengths: Vec<usize> = ranked.iter().map(|&i| lengths[i]).collect();
    let codewords = canonical_codewords(&sorted_lengths);

    let mut escape = None;
    let mut raw = Vec::with_capacity(n);
    for (&i, cw) in ranked.iter().zip(codewords) {
        if i == n {
            escape = Some(cw);
        } else {
            raw.push(RawEntry {
                token: order[i].token.clone(),
                level: order[i].level,
                count: order[i].count,
                codeword: cw,
            });
        }
    }
    Ok(Codebook::from_raw(raw, escape.expect("escape is always coded"), variant)
        .expect("canonical Huffman codes are complete and prefix-free"))
}

/// Σ L_i · P(i) over every codeword, escape included.
pub fn average_length(cb: &Codebook) -> f64 {
    cb.entries
        .iter()
        .map(|e| e.code_length() as f64 * e.probability)
        .sum::<f64>()
        + cb.escape.len() as f64 * cb.escape_probability()
}

/// Parameters for building a codebook from a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub variant: HyphenationVariant,
    pub limits: SelectionLimits,
    pub min_count: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            variant: HyphenationVariant::MiddleRight,
            limits: SelectionLimits::default(),
            min_count: 2,
        }
    }
}

/// Statistics, selection and code assignment in one call.
pub fn build_codebook<S: AsRef<str> + Sync>(
    corpus: &[S],
    options: &BuildOptions,
    table: &SymbolTable,
) -> Result<Codebook, BuildError> {
    let model = collect_statistics(corpus, options.variant, table);
    let selected = select_entries(&model, &options.limits, options.min_count);
    assign_codes(&selected, options.variant)
}

/// Summary numbers printed by `build` and `stats`.
#[derive(Debug, Clone, PartialEq)]
pub struct CodebookSummary {
    pub level_counts: [usize; 4],
    pub average_length: f64,
    pub entropy: f64,
    pub max_code_length: usize,
}

impl CodebookSummary {
    pub fn of(cb: &Codebook) -> Result<Self, MetricError> {
        Ok(Self {
            level_counts: cb.level_counts(),
            average_length: average_length(cb),
            entropy: entropy(&cb.probabilities())?,
            max_code_length: cb.codewords().map(|c| c.len() as usize).max().unwrap_or(0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::default_table;

    fn sel(items: &[(&str, u64)]) -> Vec<Selected> {
        items
            .iter()
            .map(|(t, c)| Selected {
                token: t.to_string(),
                level: if t.chars().count() == 1 { Level::Symbol } else { Level::Word },
                count: *c,
            })
            .collect()
    }

    #[test]
    fn codeword_basics() {
        let c: Codeword = "101".parse().unwrap();
        assert_eq!(c.bits(), 0b101);
        assert_eq!(c.len(), 3);
        assert_eq!(c.to_string(), "101");
        assert!("10".parse::<Codeword>().unwrap().is_prefix_of(&c));
        assert!(!"11".parse::<Codeword>().unwrap().is_prefix_of(&c));
        assert!(!c.is_prefix_of(&"10".parse().unwrap()));
        assert!("".parse::<Codeword>().is_err());
        assert!("102".parse::<Codeword>().is_err());
        let long = "1".repeat(64);
        assert_eq!(long.parse::<Codeword>().unwrap().to_string(), long);
        assert!("1".repeat(65).parse::<Codeword>().is_err());
    }

    #[test]
    fn single_entry_gets_zero() {
        let cb = assign_codes(&sel(&[("s", 1)]), HyphenationVariant::MiddleRight).unwrap();
        assert_eq!(cb.entries()[0].codeword.to_string(), "0");
        assert_eq!(cb.escape_codeword().to_string(), "1");
    }

    #[test]
    fn two_equal_symbols_plus_escape() {
        let cb = assign_codes(&sel(&[("x", 1), ("y", 1)]), HyphenationVariant::MiddleRight).unwrap();
        let lens: Vec<usize> = cb.codewords().map(|c| c.len() as usize).collect();
        assert!(lens.iter().all(|l| (1..=2).contains(l)));
        assert_eq!(kraft_numerator(lens.iter().copied()), Some(KRAFT_ONE));
        // x and y are the two lowest in tie-break order and are siblings
        assert_eq!(cb.entries().iter().find(|e| e.token == "x").unwrap().code_length(), 2);
        assert_eq!(cb.entries().iter().find(|e| e.token == "y").unwrap().code_length(), 2);
        assert_eq!(cb.escape_codeword().len(), 1);
    }

    #[test]
    fn empty_selection_fails() {
        assert_eq!(assign_codes(&[], HyphenationVariant::Left).unwrap_err(), BuildError::EmptyAlphabet);
        assert!(matches!(
            assign_codes(&sel(&[("a", 0)]), HyphenationVariant::Left),
            Err(BuildError::ZeroCount(_))
        ));
    }

    #[test]
    fn average_length_examples() {
        // {a:2, b:1, escape:1}: probabilities 0.5/0.25/0.25, lengths 1/2/2
        let cb = assign_codes(&sel(&[("a", 2), ("b", 1)]), HyphenationVariant::Left).unwrap();
        assert_eq!(cb.escape_count(), 1);
        assert!((average_length(&cb) - 1.5).abs() < 1e-12);
        assert!((cb.entropy() - 1.5).abs() < 1e-12);

        let cb = assign_codes(&sel(&[("s", 1)]), HyphenationVariant::Left).unwrap();
        assert!((average_length(&cb) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let cb = assign_codes(&sel(&[("a", 7), ("b", 3), ("cd", 2), ("e", 1)]), HyphenationVariant::Left)
            .unwrap();
        let sum: f64 = cb.probabilities().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert_eq!(cb.total_count(), 13);
    }

    #[test]
    fn escape_weight() {
        assert_eq!(escape_count(0), 1);
        assert_eq!(escape_count(999), 1);
        assert_eq!(escape_count(1000), 1);
        assert_eq!(escape_count(1001), 2);
        assert_eq!(escape_count(25_000), 25);
    }

    #[test]
    fn entries_are_in_canonical_order() {
        let cb = build_codebook(
            &["the cat sat on the mat with the hat"],
            &BuildOptions { min_count: 1, ..Default::default() },
            default_table(),
        )
        .unwrap();
        let keys: Vec<(usize, &str)> =
            cb.entries().iter().map(|e| (e.code_length(), e.token.as_str())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        let summary = CodebookSummary::of(&cb).unwrap();
        assert!(summary.entropy <= summary.average_length);
        assert!(summary.average_length < summary.entropy + 1.0);
    }
}
