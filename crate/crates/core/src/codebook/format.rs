//! Text serialization of codebooks.
//!
//! ```text
//! SHOTIKCB 1 umr
//! ESCAPE 110101
//! 1  \s  10482  000
//! 4  করে  120  0010110
//! ```
//!
//! Entry lines are `<level>\t<token>\t<count>\t<bits>`, sorted by code length
//! then token. Tokens escape tab, newline, backslash and space.

use std::collections::HashSet;

use crate::error::ParseError;
use crate::hyphenation::HyphenationVariant;

use super::{Codebook, Codeword, Level, RawEntry};

const MAGIC: &str = "SHOTIKCB";
const VERSION: &str = "1";

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes.iter().fold(OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(PRIME))
}

fn escape_token(token: &str, out: &mut String) {
    for c in token.chars() {
        match c {
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\\' => out.push_str("\\\\"),
            ' ' => out.push_str("\\s"),
            c => out.push(c),
        }
    }
}

fn unescape_token(s: &str) -> Option<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        out.push(match chars.next()? {
            't' => '\t',
            'n' => '\n',
            '\\' => '\\',
            's' => ' ',
            _ => return None,
        });
    }
    Some(out)
}

impl Codebook {
    pub(crate) fn serialize_unchecked(&self) -> String {
        let mut out = String::with_capacity(self.entries.len() * 24 + 64);
        out.push_str(&format!("{MAGIC} {VERSION} {}\n", self.variant));
        out.push_str(&format!("ESCAPE {}\n", self.escape));
        for e in &self.entries {
            out.push_str(&format!("{}\t", e.level.number()));
            escape_token(&e.token, &mut out);
            out.push_str(&format!("\t{}\t{}\n", e.count, e.codeword));
        }
        out
    }

    pub fn serialize(&self) -> Vec<u8> {
        self.serialize_unchecked().into_bytes()
    }

    pub fn deserialize(bytes: &[u8]) -> Result<Codebook, ParseError> {
        let text = std::str::from_utf8(bytes).map_err(|_| ParseError::InvalidUtf8)?;
        // every line, the last included, is newline-terminated
        let Some(body) = text.strip_suffix('\n') else {
            return Err(ParseError::UnexpectedEof);
        };
        let mut lines = body.split('\n');

        let header = lines.next().ok_or(ParseError::UnexpectedEof)?;
        let mut fields = header.split(' ');
        if fields.next() != Some(MAGIC) {
            return Err(ParseError::BadMagic);
        }
        match fields.next() {
            Some(VERSION) => {}
            Some(v) => return Err(ParseError::UnsupportedVersion(v.to_owned())),
            None => return Err(ParseError::UnexpectedEof),
        }
        let variant: HyphenationVariant = match (fields.next(), fields.next()) {
            (Some(v), None) => v.parse().map_err(|_| ParseError::BadVariant(v.to_owned()))?,
            (None, _) => return Err(ParseError::UnexpectedEof),
            (Some(_), Some(_)) => return Err(ParseError::BadVariant(header.to_owned())),
        };

        let escape_line = lines.next().ok_or(ParseError::UnexpectedEof)?;
        let escape: Codeword = escape_line
            .strip_prefix("ESCAPE ")
            .and_then(|bits| bits.parse().ok())
            .ok_or(ParseError::MalformedEscape)?;

        let mut raw = Vec::new();
        let mut seen = HashSet::new();
        for (i, line) in lines.enumerate() {
            let line_no = i + 3;
            let bad = |reason: &str| ParseError::MalformedEntry { line: line_no, reason: reason.to_owned() };
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 4 {
                return Err(bad("expected four tab-separated fields"));
            }
            let level = f[0]
                .parse::<u8>()
                .ok()
                .and_then(Level::from_number)
                .ok_or_else(|| bad("level must be 1-4"))?;
            let token = unescape_token(f[1]).ok_or_else(|| bad("bad token escape"))?;
            let n = token.chars().count();
            match level {
                Level::Symbol if n != 1 => return Err(bad("level-1 token must be one code point")),
                Level::Digram | Level::Syllable | Level::Word if n < 2 => {
                    return Err(bad("multi-symbol token must have at least two code points"))
                }
                _ => {}
            }
            let count = f[2].parse::<u64>().ok().filter(|&c| c > 0).ok_or_else(|| bad("count must be positive"))?;
            let codeword: Codeword = f[3].parse().map_err(|_| bad("bits must be 1-64 binary digits"))?;
            if !seen.insert(token.clone()) {
                return Err(ParseError::DuplicateToken { line: line_no });
            }
            raw.push(RawEntry { token, level, count, codeword });
        }

        Codebook::from_raw(raw, escape, variant)
    }
}
