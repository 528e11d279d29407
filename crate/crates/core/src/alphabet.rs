//! Code point classification, word segmentation and conjunct clustering.
//!
//! Every Unicode scalar value maps to exactly one [`SymbolClass`]. Words are
//! maximal runs of vowel, consonant and virama code points; Bengali
//! combining marks (candrabindu, anusvara, visarga, nukta) and the zero-width
//! joiners are classified `Other` but stay inside the word they follow.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::sync::OnceLock;

use crate::error::TableError;

pub const VIRAMA: char = '\u{09CD}';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolClass {
    Vowel,
    Consonant,
    Virama,
    Space,
    Digit,
    Other,
}

impl SymbolClass {
    pub fn name(self) -> &'static str {
        match self {
            SymbolClass::Vowel => "vowel",
            SymbolClass::Consonant => "consonant",
            SymbolClass::Virama => "virama",
            SymbolClass::Space => "space",
            SymbolClass::Digit => "digit",
            SymbolClass::Other => "other",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s.to_ascii_lowercase().as_str() {
            "vowel" => SymbolClass::Vowel,
            "consonant" => SymbolClass::Consonant,
            "virama" => SymbolClass::Virama,
            "space" => SymbolClass::Space,
            "digit" => SymbolClass::Digit,
            "other" => SymbolClass::Other,
            _ => return None,
        })
    }

    /// Vowel, consonant and virama code points make up words.
    pub fn is_word(self) -> bool {
        matches!(self, SymbolClass::Vowel | SymbolClass::Consonant | SymbolClass::Virama)
    }
}

/// Sorted, non-overlapping code point intervals plus single code point overrides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTable {
    ranges: Vec<(RangeInclusive<u32>, SymbolClass)>,
    overrides: BTreeMap<u32, SymbolClass>,
}

impl Default for SymbolTable {
    fn default() -> Self {
        Self::bengali()
    }
}

impl SymbolTable {
    /// Builds a table, rejecting overlapping or inverted intervals.
    pub fn new(
        mut ranges: Vec<(RangeInclusive<u32>, SymbolClass)>,
        overrides: BTreeMap<u32, SymbolClass>,
    ) -> Result<Self, String> {
        ranges.sort_by_key(|(r, _)| *r.start());
        for (r, _) in &ranges {
            if r.start() > r.end() {
                return Err(format!("inverted interval {:04X}-{:04X}", r.start(), r.end()));
            }
        }
        for pair in ranges.windows(2) {
            if pair[1].0.start() <= pair[0].0.end() {
                return Err(format!(
                    "interval {:04X}-{:04X} overlaps {:04X}-{:04X}",
                    pair[1].0.start(),
                    pair[1].0.end(),
                    pair[0].0.start(),
                    pair[0].0.end()
                ));
            }
        }
        Ok(Self { ranges, overrides })
    }

    /// The compiled-in table: Bengali block, ASCII letters, digits and space.
    pub fn bengali() -> Self {
        use SymbolClass::*;
        let ranges = vec![
            (0x30..=0x39, Digit),
            (0x41..=0x5A, Consonant),
            (0x61..=0x7A, Consonant),
            (0x0985..=0x0994, Vowel),
            (0x0995..=0x09B9, Consonant),
            (0x09BE..=0x09CC, Vowel),
            (0x09CD..=0x09CD, Virama),
            (0x09CE..=0x09CE, Consonant),
            (0x09D7..=0x09D7, Vowel),
            (0x09DC..=0x09DF, Consonant),
            (0x09E0..=0x09E3, Vowel),
            (0x09E6..=0x09EF, Digit),
            (0x09F0..=0x09F1, Consonant),
        ];
        let mut overrides = BTreeMap::new();
        overrides.insert(' ' as u32, Space);
        for c in "aeiouAEIOU".chars() {
            overrides.insert(c as u32, Vowel);
        }
        Self::new(ranges, overrides).expect("built-in table is well formed")
    }

    /// Parses the `<hex-lo>[-<hex-hi>]<TAB><role>` text format. Single code
    /// point lines become overrides; ranged lines become intervals.
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut ranges = Vec::new();
        let mut overrides = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| TableError { line, message };
            let trimmed = raw.trim_end_matches('\r');
            if trimmed.trim().is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (span, role) = trimmed
                .split_once('\t')
                .ok_or_else(|| err("expected <code point>\\t<role>".into()))?;
            let role = SymbolClass::parse(role.trim())
                .ok_or_else(|| err(format!("unknown role {:?}", role.trim())))?;
            let hex = |s: &str| {
                let v = u32::from_str_radix(s.trim(), 16)
                    .map_err(|_| err(format!("bad hex code point {s:?}")))?;
                if char::from_u32(v).is_none() {
                    return Err(err(format!("{v:04X} is not a Unicode scalar value")));
                }
                Ok(v)
            };
            match span.split_once('-') {
                Some((lo, hi)) => ranges.push((hex(lo)?..=hex(hi)?, role)),
                None => {
                    overrides.insert(hex(span)?, role);
                }
            }
        }
        Self::new(ranges, overrides).map_err(|message| TableError { line: 0, message })
    }

    /// Renders the table in the file format accepted by [`SymbolTable::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (r, role) in &self.ranges {
            out.push_str(&format!("{:04X}-{:04X}\t{}\n", r.start(), r.end(), role.name()));
        }
        for (cp, role) in &self.overrides {
            out.push_str(&format!("{:04X}\t{}\n", cp, role.name()));
        }
        out
    }

    pub fn classify(&self, c: char) -> SymbolClass {
        let cp = c as u32;
        if let Some(role) = self.overrides.get(&cp) {
            return *role;
        }
        let idx = self.ranges.partition_point(|(r, _)| *r.end() < cp);
        match self.ranges.get(idx) {
            Some((r, role)) if r.contains(&cp) => *role,
            _ => SymbolClass::Other,
        }
    }

    /// True for `Other` code points that continue a word they follow.
    pub fn is_word_mark(&self, c: char) -> bool {
        is_combining_mark(c) && self.classify(c) == SymbolClass::Other
    }

    pub fn segment<'a>(&self, text: &'a str) -> Vec<Run<'a>> {
        let mut runs = Vec::new();
        let mut start = 0;
        let mut current: Option<RunKind> = None;
        for (i, c) in text.char_indices() {
            let kind = if self.classify(c).is_word()
                || (current == Some(RunKind::Word) && self.is_word_mark(c))
            {
                RunKind::Word
            } else {
                RunKind::Separator
            };
            match current {
                Some(k) if k == kind => {}
                Some(k) => {
                    runs.push(Run { kind: k, text: &text[start..i] });
                    start = i;
                    current = Some(kind);
                }
                None => current = Some(kind),
            }
        }
        if let Some(k) = current {
            runs.push(Run { kind: k, text: &text[start..] });
        }
        runs
    }

    pub fn cluster_consonants<'a>(&self, word: &'a str) -> Vec<Unit<'a>> {
        // (is_vowel, start, end, open for a conjunct continuation)
        let mut spans: Vec<(bool, usize, usize, bool)> = Vec::new();
        for (i, c) in word.char_indices() {
            let end = i + c.len_utf8();
            match self.classify(c) {
                SymbolClass::Vowel => spans.push((true, i, end, false)),
                SymbolClass::Consonant => match spans.last_mut() {
                    Some(last) if !last.0 && last.3 => {
                        last.2 = end;
                        last.3 = false;
                    }
                    _ => spans.push((false, i, end, false)),
                },
                SymbolClass::Virama => match spans.last_mut() {
                    Some(last) => {
                        last.2 = end;
                        last.3 = !last.0;
                    }
                    None => spans.push((false, i, end, true)),
                },
                _ => match spans.last_mut() {
                    Some(last) => last.2 = end,
                    None => spans.push((false, i, end, false)),
                },
            }
        }
        spans
            .into_iter()
            .map(|(vowel, s, e, _)| {
                if vowel {
                    Unit::Vowel(&word[s..e])
                } else {
                    Unit::Consonant(&word[s..e])
                }
            })
            .collect()
    }
}

fn is_combining_mark(c: char) -> bool {
    matches!(c, '\u{0981}'..='\u{0983}' | '\u{09BC}' | '\u{200C}' | '\u{200D}')
}

/// The shared compiled-in table.
pub fn default_table() -> &'static SymbolTable {
    static TABLE: OnceLock<SymbolTable> = OnceLock::new();
    TABLE.get_or_init(SymbolTable::bengali)
}

pub fn classify(c: char, table: &SymbolTable) -> SymbolClass {
    table.classify(c)
}

/// Splits `text` with the default table.
pub fn segment(text: &str) -> Vec<Run<'_>> {
    default_table().segment(text)
}

pub fn cluster_consonants<'a>(word: &'a str, table: &SymbolTable) -> Vec<Unit<'a>> {
    table.cluster_consonants(word)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    Word,
    Separator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run<'a> {
    pub kind: RunKind,
    pub text: &'a str,
}

impl<'a> Run<'a> {
    pub fn word(text: &'a str) -> Self {
        Run { kind: RunKind::Word, text }
    }

    pub fn separator(text: &'a str) -> Self {
        Run { kind: RunKind::Separator, text }
    }

    pub fn is_word(&self) -> bool {
        self.kind == RunKind::Word
    }
}

/// One phonological unit of a word. A consonant unit is a single consonant
/// or a virama-joined conjunct; trailing marks ride along with either kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit<'a> {
    Consonant(&'a str),
    Vowel(&'a str),
}

impl<'a> Unit<'a> {
    pub fn as_str(&self) -> &'a str {
        match self {
            Unit::Consonant(s) | Unit::Vowel(s) => s,
        }
    }

    pub fn is_vowel(&self) -> bool {
        matches!(self, Unit::Vowel(_))
    }
}
