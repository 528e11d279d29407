//! Lossless compression of short Bengali (and Latin) text messages with a
//! static, corpus-trained four-level codebook.
//!
//! The pipeline:
//!
//! 1. [`codebook::collect_statistics`] counts single code points, space
//!    digrams, syllables ([`hyphenation`]) and words over a training corpus.
//! 2. [`codebook::select_entries`] keeps every symbol plus the most useful
//!    multi-symbol tokens, and [`codebook::assign_codes`] gives them one
//!    canonical Huffman code together with an escape codeword.
//! 3. [`codec::tokenize`] matches messages greedily against the codebook and
//!    [`codec::encode`] / [`codec::decode`] move between text and bits.
//!
//! With the default `parallel` feature, corpus statistics, batch compression
//! and the benchmark harness run on the rayon pool; results are identical to
//! the sequential paths.

pub mod alphabet;
pub mod codebook;
pub mod codec;
pub mod error;
pub mod hyphenation;
pub mod report;

pub use alphabet::{SymbolClass, SymbolTable};
pub use codebook::{build_codebook, BuildOptions, Codebook, CodebookEntry, Codeword, Level, SelectionLimits};
pub use codec::{compress, decompress, CompressedMessage, Token};
pub use error::Error;
pub use hyphenation::{hyphenate, Hyphenation, HyphenationVariant};
