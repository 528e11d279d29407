//! Compression and decompression against a fixed codebook.
//!
//! Compression scans left to right taking the longest codebook token at each
//! position; a space followed by a character is covered by a level-2 digram
//! when one exists. Characters with no entry are escaped as the escape
//! codeword followed by the 21-bit scalar value.
//!
//! Wire format: `"SK"`, version `0x01`, codebook id (8 bytes BE), bit count
//! (4 bytes BE), then the MSB-first payload padded with zero bits.

pub mod bits;
pub(crate) mod index;

use std::borrow::Cow;

use crate::codebook::{Codebook, Level};
use crate::error::{CodecError, MetricError};

use bits::{BitReader, BitWriter};
use index::{Slot, Symbol};

pub const MAGIC: [u8; 2] = *b"SK";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 15;
pub const ESCAPE_PAYLOAD_BITS: u8 = 21;

/// Reference to an entry of a particular codebook.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EntryRef {
    codebook: u64,
    index: u32,
}

impl EntryRef {
    pub fn new(codebook: u64, index: u32) -> Self {
        Self { codebook, index }
    }

    pub fn codebook_id(&self) -> u64 {
        self.codebook
    }

    pub fn index(&self) -> usize {
        self.index as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Token {
    Entry(EntryRef),
    Escape(char),
}

impl Token {
    /// The text this token stands for. Panics if an entry token is used with
    /// a codebook it does not belong to.
    pub fn text<'a>(&self, cb: &'a Codebook) -> Cow<'a, str> {
        match self {
            Token::Entry(r) => Cow::Borrowed(&cb.entries()[r.index()].token),
            Token::Escape(c) => Cow::Owned(c.to_string()),
        }
    }

    /// `None` for escapes.
    pub fn level(&self, cb: &Codebook) -> Option<Level> {
        match self {
            Token::Entry(r) => cb.entry(r.index()).map(|e| e.level),
            Token::Escape(_) => None,
        }
    }
}

/// Greedy longest-match tokenization.
pub fn tokenize(text: &str, cb: &Codebook) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut rest = text;
    while let Some(c) = rest.chars().next() {
        match cb.index.longest_match(rest) {
            Some((idx, len)) => {
                tokens.push(Token::Entry(EntryRef::new(cb.id(), idx)));
                rest = &rest[len..];
            }
            None => {
                tokens.push(Token::Escape(c));
                rest = &rest[c.len_utf8()..];
            }
        }
    }
    tokens
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedMessage {
    pub version: u8,
    pub codebook_id: u64,
    pub bit_count: u32,
    pub payload: Vec<u8>,
}

impl CompressedMessage {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len());
        out.extend_from_slice(&MAGIC);
        out.push(self.version);
        out.extend_from_slice(&self.codebook_id.to_be_bytes());
        out.extend_from_slice(&self.bit_count.to_be_bytes());
        out.extend_from_slice(&self.payload);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CodecError> {
        if bytes.len() >= 2 && bytes[..2] != MAGIC {
            return Err(CodecError::BadMagic);
        }
        if bytes.len() < HEADER_LEN {
            return Err(CodecError::CorruptPayload);
        }
        if bytes[2] != VERSION {
            return Err(CodecError::UnsupportedVersion(bytes[2]));
        }
        let codebook_id = u64::from_be_bytes(bytes[3..11].try_into().unwrap());
        let bit_count = u32::from_be_bytes(bytes[11..15].try_into().unwrap());
        let payload = bytes[HEADER_LEN..].to_vec();
        if payload.len() as u64 != (bit_count as u64).div_ceil(8) {
            return Err(CodecError::CorruptPayload);
        }
        Ok(Self { version: bytes[2], codebook_id, bit_count, payload })
    }

    /// Total size on the wire, header included.
    pub fn wire_len(&self) -> usize {
        HEADER_LEN + self.payload.len()
    }
}

pub fn encode(tokens: &[Token], cb: &Codebook) -> Result<CompressedMessage, CodecError> {
    let mut w = BitWriter::new();
    let escape = cb.escape_codeword();
    for t in tokens {
        match t {
            Token::Entry(r) => {
                let entry = cb
                    .entry(r.index())
                    .filter(|_| r.codebook_id() == cb.id())
                    .ok_or(CodecError::CodebookMismatch)?;
                w.write(entry.codeword.bits(), entry.codeword.len());
            }
            Token::Escape(c) => {
                w.write(escape.bits(), escape.len());
                w.write(*c as u64, ESCAPE_PAYLOAD_BITS);
            }
        }
    }
    let (payload, bit_count) = w.finish();
    let bit_count = u32::try_from(bit_count).map_err(|_| CodecError::TooLong(bit_count))?;
    Ok(CompressedMessage { version: VERSION, codebook_id: cb.id(), bit_count, payload })
}

pub fn decode(msg: &CompressedMessage, cb: &Codebook) -> Result<String, CodecError> {
    if msg.codebook_id != cb.id() {
        return Err(CodecError::WrongCodebook);
    }
    let bit_count = msg.bit_count as u64;
    if msg.payload.len() as u64 != bit_count.div_ceil(8) {
        return Err(CodecError::CorruptPayload);
    }
    let pad = (8 - bit_count % 8) % 8;
    if pad > 0 {
        let last = *msg.payload.last().unwrap();
        if last & ((1u8 << pad) - 1) != 0 {
            return Err(CodecError::CorruptPadding);
        }
    }

    let mut out = String::new();
    let mut r = BitReader::new(&msg.payload, bit_count);
    while r.remaining() > 0 {
        let mut node = 0usize;
        let symbol = loop {
            let bit = r.read_bit().ok_or(CodecError::CorruptPayload)?;
            match cb.index.step(node, bit) {
                Slot::Node(n) => node = n as usize,
                Slot::Leaf(s) => break s,
                Slot::Empty => return Err(CodecError::CorruptPayload),
            }
        };
        match symbol {
            Symbol::Entry(i) => out.push_str(&cb.entries()[i as usize].token),
            Symbol::Escape => {
                let v = r.read_bits(ESCAPE_PAYLOAD_BITS).ok_or(CodecError::CorruptPayload)?;
                out.push(char::from_u32(v as u32).ok_or(CodecError::CorruptPayload)?);
            }
        }
    }
    Ok(out)
}

pub fn compress(text: &str, cb: &Codebook) -> CompressedMessage {
    encode(&tokenize(text, cb), cb).expect("tokens come from the same codebook")
}

pub fn decompress(bytes: &[u8], cb: &Codebook) -> Result<String, CodecError> {
    decode(&CompressedMessage::from_bytes(bytes)?, cb)
}

pub fn compress_batch_sequential<S: AsRef<str>>(texts: &[S], cb: &Codebook) -> Vec<CompressedMessage> {
    texts.iter().map(|t| compress(t.as_ref(), cb)).collect()
}

#[cfg(feature = "parallel")]
pub fn compress_batch_parallel<S: AsRef<str> + Sync>(texts: &[S], cb: &Codebook) -> Vec<CompressedMessage> {
    use rayon::prelude::*;
    texts.par_iter().map(|t| compress(t.as_ref(), cb)).collect()
}

/// Compresses many messages; output order matches input order.
pub fn compress_batch<S: AsRef<str> + Sync>(texts: &[S], cb: &Codebook) -> Vec<CompressedMessage> {
    #[cfg(feature = "parallel")]
    {
        compress_batch_parallel(texts, cb)
    }
    #[cfg(not(feature = "parallel"))]
    {
        compress_batch_sequential(texts, cb)
    }
}

/// Compressed size as a percentage of the source size.
pub fn compression_ratio(original: u64, compressed: u64) -> Result<f64, MetricError> {
    if original == 0 {
        return Err(MetricError::EmptySource);
    }
    Ok(compressed as f64 / original as f64 * 100.0)
}

pub fn bits_per_char(text: &str, msg: &CompressedMessage) -> Result<f64, MetricError> {
    let chars = text.chars().count();
    if chars == 0 {
        return Err(MetricError::EmptySource);
    }
    Ok(msg.bit_count as f64 / chars as f64)
}

/// How many tokens of each level, and how many escapes, a stream used.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TokenUsage {
    pub levels: [u64; 4],
    pub escapes: u64,
}

impl TokenUsage {
    pub fn of(tokens: &[Token], cb: &Codebook) -> Self {
        let mut u = TokenUsage::default();
        for t in tokens {
            match t.level(cb) {
                Some(l) => u.levels[l as usize - 1] += 1,
                None => u.escapes += 1,
            }
        }
        u
    }

    pub fn add(&mut self, other: &TokenUsage) {
        for (a, b) in self.levels.iter_mut().zip(other.levels) {
            *a += b;
        }
        self.escapes += other.escapes;
    }

    pub fn total(&self) -> u64 {
        self.levels.iter().sum::<u64>() + self.escapes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::default_table;
    use crate::codebook::{assign_codes, build_codebook, BuildOptions, Selected};
    use crate::hyphenation::HyphenationVariant;
    use proptest::prelude::*;

    fn selected(items: &[(&str, Level, u64)]) -> Vec<Selected> {
        items
            .iter()
            .map(|(t, l, c)| Selected { token: t.to_string(), level: *l, count: *c })
            .collect()
    }

    fn ab_codebook() -> Codebook {
        assign_codes(
            &selected(&[
                ("a", Level::Symbol, 2),
                ("b", Level::Symbol, 2),
                (" ", Level::Symbol, 1),
                (" a", Level::Digram, 1),
                ("ab", Level::Word, 2),
            ]),
            HyphenationVariant::MiddleRight,
        )
        .unwrap()
    }

    fn bengali_codebook() -> Codebook {
        build_codebook(
            &["আমার সোনার বাংলা, আমি তোমায় ভালোবাসি। চিরদিন তোমার আকাশ, তোমার বাতাস, আমার প্রাণে বাজায় বাঁশি।"],
            &BuildOptions { min_count: 1, ..Default::default() },
            default_table(),
        )
        .unwrap()
    }

    fn texts(tokens: &[Token], cb: &Codebook) -> Vec<String> {
        tokens.iter().map(|t| t.text(cb).into_owned()).collect()
    }

    #[test]
    fn greedy_longest_match() {
        let cb = ab_codebook();
        let tokens = tokenize("ab ab", &cb);
        assert_eq!(texts(&tokens, &cb), vec!["ab", " a", "b"]);
        assert!(tokenize("", &cb).is_empty());
        assert_eq!(tokenize("☃", &cb), vec![Token::Escape('☃')]);
    }

    #[test]
    fn encode_examples() {
        let cb = ab_codebook();
        let empty = encode(&[], &cb).unwrap();
        assert_eq!(empty.bit_count, 0);
        assert!(empty.payload.is_empty());
        assert_eq!(decode(&empty, &cb).unwrap(), "");

        let msg = encode(&[Token::Escape('A')], &cb).unwrap();
        let esc = cb.escape_codeword();
        assert_eq!(msg.bit_count as u64, esc.len() as u64 + 21);
        // independent bit-string builder
        let expected: String = format!("{esc}{:021b}", 0x41);
        let mut got = String::new();
        for byte in &msg.payload {
            got.push_str(&format!("{byte:08b}"));
        }
        assert_eq!(&got[..expected.len()], expected);
        assert!(got[expected.len()..].chars().all(|c| c == '0'));
    }

    #[test]
    fn three_bit_codeword_packing() {
        // a:4 b:2 c:1 d:1 (+escape 1) gives at least one 3-bit codeword
        let cb = assign_codes(
            &selected(&[("a", Level::Symbol, 8), ("b", Level::Symbol, 4), ("c", Level::Symbol, 2), ("d", Level::Symbol, 1)]),
            HyphenationVariant::Left,
        )
        .unwrap();
        let e = cb.entries().iter().find(|e| e.code_length() == 3).unwrap();
        let idx = cb.entries().iter().position(|x| x.token == e.token).unwrap();
        let msg = encode(&[Token::Entry(EntryRef::new(cb.id(), idx as u32))], &cb).unwrap();
        assert_eq!(msg.bit_count, 3);
        assert_eq!(msg.payload, vec![(e.codeword.bits() as u8) << 5]);
    }

    #[test]
    fn foreign_tokens_are_rejected() {
        let a = ab_codebook();
        let b = bengali_codebook();
        let tokens = tokenize("ab", &a);
        assert_eq!(encode(&tokens, &b), Err(CodecError::CodebookMismatch));
        let bogus = [Token::Entry(EntryRef::new(a.id(), 10_000))];
        assert_eq!(encode(&bogus, &a), Err(CodecError::CodebookMismatch));
    }

    #[test]
    fn round_trips() {
        let cb = bengali_codebook();
        for text in ["আমার সোনার বাংলা", "priesthood", "", "  double  spaces ", "emoji 🦀 and ৳৫০০"] {
            let msg = compress(text, &cb);
            assert_eq!(decode(&msg, &cb).unwrap(), text);
            assert_eq!(decompress(&msg.to_bytes(), &cb).unwrap(), text);
        }
    }

    #[test]
    fn decode_errors() {
        let cb = bengali_codebook();
        let other = ab_codebook();
        let msg = compress("আমার সোনার বাংলা", &cb);
        assert_eq!(decode(&msg, &other), Err(CodecError::WrongCodebook));

        let bytes = msg.to_bytes();
        assert_eq!(decompress(&bytes[..bytes.len() - 1], &cb), Err(CodecError::CorruptPayload));
        assert_eq!(decompress(&bytes[..10], &cb), Err(CodecError::CorruptPayload));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert_eq!(decompress(&bad, &cb), Err(CodecError::BadMagic));
        let mut bad = bytes.clone();
        bad[2] = 9;
        assert_eq!(decompress(&bad, &cb), Err(CodecError::UnsupportedVersion(9)));

        // truncated escape at the end of the payload
        let esc = cb.escape_codeword();
        let mut w = BitWriter::new();
        w.write(esc.bits(), esc.len());
        w.write(0x41 >> 11, 10);
        let (payload, n) = w.finish();
        let cut = CompressedMessage { version: VERSION, codebook_id: cb.id(), bit_count: n as u32, payload };
        assert_eq!(decode(&cut, &cb), Err(CodecError::CorruptPayload));
    }

    #[test]
    fn tampered_padding() {
        let cb = bengali_codebook();
        let mut msg = compress("আমার", &cb);
        if msg.bit_count.is_multiple_of(8) {
            msg = compress("আমার সোনার", &cb);
        }
        if !msg.bit_count.is_multiple_of(8) {
            *msg.payload.last_mut().unwrap() |= 1;
            assert_eq!(decode(&msg, &cb), Err(CodecError::CorruptPadding));
        }
    }

    #[test]
    fn escape_of_invalid_scalar_is_corrupt() {
        let cb = ab_codebook();
        let esc = cb.escape_codeword();
        let mut w = BitWriter::new();
        w.write(esc.bits(), esc.len());
        w.write(0xD800, 21);
        let (payload, n) = w.finish();
        let msg = CompressedMessage { version: VERSION, codebook_id: cb.id(), bit_count: n as u32, payload };
        assert_eq!(decode(&msg, &cb), Err(CodecError::CorruptPayload));
    }

    #[test]
    fn metrics() {
        assert_eq!(compression_ratio(200, 200).unwrap(), 100.0);
        assert_eq!(compression_ratio(200, 50).unwrap(), 25.0);
        assert_eq!(compression_ratio(0, 5), Err(MetricError::EmptySource));

        let msg = CompressedMessage { version: 1, codebook_id: 0, bit_count: 24, payload: vec![0; 3] };
        assert_eq!(bits_per_char("abcdefgh", &msg).unwrap(), 3.0);
        assert_eq!(bits_per_char("", &msg), Err(MetricError::EmptySource));

        // single escape with a 3-bit escape codeword
        let cb = assign_codes(
            &selected(&[("a", Level::Symbol, 8), ("b", Level::Symbol, 4), ("c", Level::Symbol, 2)]),
            HyphenationVariant::Left,
        )
        .unwrap();
        assert_eq!(cb.escape_codeword().len(), 3);
        let msg = compress("☃", &cb);
        assert_eq!(bits_per_char("☃", &msg).unwrap(), 24.0);
    }

    #[test]
    fn header_layout() {
        let msg = CompressedMessage { version: 1, codebook_id: 0x0102030405060708, bit_count: 9, payload: vec![0xAB, 0x80] };
        let bytes = msg.to_bytes();
        assert_eq!(bytes.len(), HEADER_LEN + 2);
        assert_eq!(&bytes[..3], &[0x53, 0x4B, 0x01]);
        assert_eq!(&bytes[3..11], &[1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(&bytes[11..15], &[0, 0, 0, 9]);
        assert_eq!(CompressedMessage::from_bytes(&bytes).unwrap(), msg);
    }

    #[test]
    fn batch_matches_single() {
        let cb = bengali_codebook();
        let texts = vec!["আমার সোনার বাংলা"; 20];
        let seq = compress_batch_sequential(&texts, &cb);
        assert_eq!(compress_batch(&texts, &cb), seq);
    }

    fn mixed_text() -> impl Strategy<Value = String> {
        proptest::collection::vec(
            prop_oneof![
                proptest::char::range('\u{0980}', '\u{09FF}'),
                proptest::char::range(' ', '~'),
                Just(' '),
                proptest::char::range('\u{10000}', '\u{10FFFF}'),
            ],
            0..200,
        )
        .prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        #[test]
        fn lossless(text in mixed_text()) {
            let cb = bengali_codebook();
            let tokens = tokenize(&text, &cb);
            prop_assert!(tokens.len() <= text.chars().count());
            let msg = encode(&tokens, &cb).unwrap();
            // size accounting
            let expected: u64 = tokens.iter().map(|t| match t {
                Token::Entry(r) => cb.entries()[r.index()].code_length() as u64,
                Token::Escape(_) => cb.escape_codeword().len() as u64 + 21,
            }).sum();
            prop_assert_eq!(msg.bit_count as u64, expected);
            prop_assert_eq!(decode(&msg, &cb).unwrap(), text);
        }

        #[test]
        fn greedy_dominance(text in mixed_text()) {
            let cb = bengali_codebook();
            let mut rest = text.as_str();
            for t in tokenize(&text, &cb) {
                let tok = t.text(&cb);
                // no codebook token longer than the chosen one matches here
                for e in cb.entries() {
                    if e.token.len() > tok.len() {
                        prop_assert!(!rest.starts_with(e.token.as_str()));
                    }
                }
                rest = &rest[tok.len()..];
            }
        }
    }
}
