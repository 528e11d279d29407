//! Benchmark harness: cut test texts into short blocks, compress each block
//! as its own message and tabulate bits per character and size ratios.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{RunKind, SymbolTable};
use crate::codebook::Codebook;
use crate::codec::{self, TokenUsage, HEADER_LEN};
use crate::error::Error;

/// Rows at or above this many bits per character are flagged.
pub const FLAG_BITS_PER_CHAR: f64 = 8.0;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Maximum block length in code points.
    pub block_chars: usize,
    /// Blocks drawn per source; `None` uses every block.
    pub samples_per_source: Option<usize>,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self { block_chars: 1000, samples_per_source: None, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct Source {
    pub name: String,
    pub text: String,
}

impl Source {
    pub fn new(name: impl Into<String>, text: impl Into<String>) -> Self {
        Self { name: name.into(), text: text.into() }
    }
}

/// Externally measured numbers shown beside ours, keyed by source name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CompetitorColumn {
    pub name: String,
    pub values: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub source: String,
    pub blocks: usize,
    pub chars: u64,
    pub original_bytes: u64,
    pub payload_bits: u64,
    /// Payload bytes only.
    pub compressed_bytes: u64,
    /// Payload plus the fixed message header.
    pub wire_bytes: u64,
    pub bits_per_char: f64,
    pub ratio_percent: f64,
    pub wire_ratio_percent: f64,
    pub usage: TokenUsage,
}

impl ReportRow {
    pub fn flagged(&self) -> bool {
        self.bits_per_char >= FLAG_BITS_PER_CHAR
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub mean_bits_per_char: f64,
    pub mean_ratio_percent: f64,
    pub mean_wire_ratio_percent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressionReport {
    pub rows: Vec<ReportRow>,
    pub aggregate: Aggregate,
    pub competitors: Vec<CompetitorColumn>,
}

/// Splits `text` into consecutive blocks of at most `max_chars` code points.
/// Cuts fall before a word whenever possible; concatenating the blocks gives
/// back `text`.
pub fn split_blocks<'a>(text: &'a str, max_chars: usize, table: &SymbolTable) -> Vec<&'a str> {
    assert!(max_chars > 0, "block size must be positive");
    // pieces: a word together with the separator after it
    let mut pieces: Vec<(usize, usize, usize)> = Vec::new();
    let mut pos = 0;
    for run in table.segment(text) {
        let n = run.text.chars().count();
        let end = pos + run.text.len();
        match (run.kind, pieces.last_mut()) {
            (RunKind::Separator, Some(last)) if last.1 == pos => {
                last.1 = end;
                last.2 += n;
            }
            _ => pieces.push((pos, end, n)),
        }
        pos = end;
    }

    let mut blocks = Vec::new();
    let mut start = 0;
    let mut len = 0;
    for (s, e, n) in pieces {
        if len > 0 && len + n > max_chars {
            blocks.push(&text[start..s]);
            start = s;
            len = 0;
        }
        if n > max_chars {
            // hard cut on code point boundaries
            let piece = &text[s..e];
            let mut cut = s;
            for (k, (i, _)) in piece.char_indices().enumerate() {
                if k > 0 && k % max_chars == 0 {
                    blocks.push(&text[cut..s + i]);
                    cut = s + i;
                }
            }
            start = cut;
            len = text[cut..e].chars().count();
        } else {
            len += n;
        }
    }
    if start < text.len() {
        blocks.push(&text[start..]);
    }
    blocks
}

/// Picks the blocks to measure for source number `source_index`.
pub fn sample_blocks(n_blocks: usize, config: &BenchConfig, source_index: usize) -> Vec<usize> {
    match config.samples_per_source {
        Some(k) if k < n_blocks => {
            let seed = config.seed ^ (source_index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked = sample(&mut rng, n_blocks, k).into_vec();
            picked.sort_unstable();
            picked
        }
        _ => (0..n_blocks).collect(),
    }
}

struct BlockResult {
    chars: u64,
    bytes: u64,
    bits: u64,
    payload: u64,
    usage: TokenUsage,
}

fn measure(block: &str, cb: &Codebook) -> Result<BlockResult, Error> {
    let tokens = codec::tokenize(block, cb);
    let msg = codec::encode(&tokens, cb)?;
    let back = codec::decode(&msg, cb)?;
    if back != block {
        return Err(Error::Report("round trip mismatch".into()));
    }
    Ok(BlockResult {
        chars: block.chars().count() as u64,
        bytes: block.len() as u64,
        bits: msg.bit_count as u64,
        payload: msg.payload.len() as u64,
        usage: TokenUsage::of(&tokens, cb),
    })
}

#[cfg(feature = "parallel")]
fn measure_all(blocks: &[&str], cb: &Codebook) -> Vec<Result<BlockResult, Error>> {
    use rayon::prelude::*;
    blocks.par_iter().map(|b| measure(b, cb)).collect()
}

#[cfg(not(feature = "parallel"))]
fn measure_all(blocks: &[&str], cb: &Codebook) -> Vec<Result<BlockResult, Error>> {
    blocks.iter().map(|b| measure(b, cb)).collect()
}

/// Runs the benchmark. Every measured block is also decoded and compared.
pub fn run_bench(
    sources: &[Source],
    cb: &Codebook,
    config: &BenchConfig,
    table: &SymbolTable,
) -> Result<CompressionReport, Error> {
    if config.block_chars == 0 {
        return Err(Error::Report("block size must be positive".into()));
    }
    let mut jobs: Vec<(usize, &str)> = Vec::new();
    for (si, src) in sources.iter().enumerate() {
        let blocks = split_blocks(&src.text, config.block_chars, table);
        for bi in sample_blocks(blocks.len(), config, si) {
            jobs.push((si, blocks[bi]));
        }
    }
    if jobs.is_empty() {
        return Err(Error::Report("empty test set".into()));
    }

    let texts: Vec<&str> = jobs.iter().map(|(_, b)| *b).collect();
    let results = measure_all(&texts, cb);

    let mut rows = Vec::new();
    for (si, src) in sources.iter().enumerate() {
        let mut row = ReportRow {
            source: src.name.clone(),
            blocks: 0,
            chars: 0,
            original_bytes: 0,
            payload_bits: 0,
            compressed_bytes: 0,
            wire_bytes: 0,
            bits_per_char: 0.0,
            ratio_percent: 0.0,
            wire_ratio_percent: 0.0,
            usage: TokenUsage::default(),
        };
        for ((owner, _), res) in jobs.iter().zip(&results) {
            if *owner != si {
                continue;
            }
            let r = res.as_ref().map_err(|e| Error::Report(format!("{}: {e}", src.name)))?;
            row.blocks += 1;
            row.chars += r.chars;
            row.original_bytes += r.bytes;
            row.payload_bits += r.bits;
            row.compressed_bytes += r.payload;
            row.wire_bytes += r.payload + HEADER_LEN as u64;
            row.usage.add(&r.usage);
        }
        if row.blocks == 0 || row.chars == 0 {
            continue;
        }
        row.bits_per_char = row.payload_bits as f64 / row.chars as f64;
        row.ratio_percent = codec::compression_ratio(row.original_bytes, row.compressed_bytes)?;
        row.wire_ratio_percent = codec::compression_ratio(row.original_bytes, row.wire_bytes)?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Report("empty test set".into()));
    }

    let n = rows.len() as f64;
    let aggregate = Aggregate {
        mean_bits_per_char: rows.iter().map(|r| r.bits_per_char).sum::<f64>() / n,
        mean_ratio_percent: rows.iter().map(|r| r.ratio_percent).sum::<f64>() / n,
        mean_wire_ratio_percent: rows.iter().map(|r| r.wire_ratio_percent).sum::<f64>() / n,
    };
    Ok(CompressionReport { rows, aggregate, competitors: Vec::new() })
}

impl CompressionReport {
    /// Recomputes every derived figure from the raw sizes.
    pub fn check_consistency(&self) -> Result<(), String> {
        const TOL: f64 = 1e-9;
        for r in &self.rows {
            let bpc = r.payload_bits as f64 / r.chars as f64;
            let ratio = r.compressed_bytes as f64 / r.original_bytes as f64 * 100.0;
            let wire = r.wire_bytes as f64 / r.original_bytes as f64 * 100.0;
            if (bpc - r.bits_per_char).abs() > TOL
                || (ratio - r.ratio_percent).abs() > TOL
                || (wire - r.wire_ratio_percent).abs() > TOL
            {
                return Err(format!("row {} is inconsistent", r.source));
            }
            if r.compressed_bytes < r.payload_bits.div_ceil(8) {
                return Err(format!("row {} payload bytes cannot hold its bits", r.source));
            }
        }
        let n = self.rows.len() as f64;
        let mean = self.rows.iter().map(|r| r.bits_per_char).sum::<f64>() / n;
        if (mean - self.aggregate.mean_bits_per_char).abs() > TOL {
            return Err("aggregate bits/char is inconsistent".into());
        }
        Ok(())
    }

    pub fn with_competitors(mut self, columns: Vec<CompetitorColumn>) -> Self {
        self.competitors = columns;
        self
    }

    /// Aligned text table: source, competitor columns, then our figures.
    pub fn to_table(&self) -> String {
        let mut header: Vec<String> = vec!["Source".into()];
        header.extend(self.competitors.iter().map(|c| c.name.clone()));
        header.extend(
            ["Blocks", "Chars", "Bytes", "Payload", "Bits/char", "Ratio %", "Wire %", "L1", "L2", "L3", "L4", "Esc", ""]
                .map(String::from),
        );
        let mut body: Vec<Vec<String>> = Vec::new();
        for r in &self.rows {
            let mut line = vec![r.source.clone()];
            for c in &self.competitors {
                line.push(c.values.get(&r.source).map(|v| format!("{v:.2}")).unwrap_or_else(|| "-".into()));
            }
            line.extend([
                r.blocks.to_string(),
                r.chars.to_string(),
                r.original_bytes.to_string(),
                r.compressed_bytes.to_string(),
                format!("{:.4}", r.bits_per_char),
                format!("{:.2}", r.ratio_percent),
                format!("{:.2}", r.wire_ratio_percent),
                r.usage.levels[0].to_string(),
                r.usage.levels[1].to_string(),
                r.usage.levels[2].to_string(),
                r.usage.levels[3].to_string(),
                r.usage.escapes.to_string(),
                if r.flagged() { "!".into() } else { String::new() },
            ]);
            body.push(line);
        }
        let mut mean = vec!["mean".to_string()];
        for c in &self.competitors {
            let vals: Vec<f64> = self.rows.iter().filter_map(|r| c.values.get(&r.source).copied()).collect();
            mean.push(if vals.is_empty() {
                "-".into()
            } else {
                format!("{:.2}", vals.iter().sum::<f64>() / vals.len() as f64)
            });
        }
        mean.extend(["", "", "", ""].map(String::from));
        mean.push(format!("{:.4}", self.aggregate.mean_bits_per_char));
        mean.push(format!("{:.2}", self.aggregate.mean_ratio_percent));
        mean.push(format!("{:.2}", self.aggregate.mean_wire_ratio_percent));
        mean.extend(["", "", "", "", "", ""].map(String::from));
        body.push(mean);

        let widths: Vec<usize> = (0..header.len())
            .map(|i| {
                std::iter::once(&header)
                    .chain(&body)
                    .map(|l| l[i].chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let mut emit = |line: &[String]| {
            let mut s = String::new();
            for (i, cell) in line.iter().enumerate() {
                let pad = widths[i] - cell.chars().count();
                if i == 0 {
                    s.push_str(cell);
                    s.push_str(&" ".repeat(pad));
                } else {
                    s.push_str("  ");
                    s.push_str(&" ".repeat(pad));
                    s.push_str(cell);
                }
            }
            out.push_str(s.trim_end());
            out.push('\n');
        };
        emit(&header);
        for line in &body {
            emit(line);
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("source");
        for c in &self.competitors {
            let _ = write!(out, ",{}", csv_field(&c.name));
        }
        out.push_str(",blocks,chars,original_bytes,payload_bits,compressed_bytes,wire_bytes,bits_per_char,ratio_percent,wire_ratio_percent,level1,level2,level3,level4,escapes\n");
        for r in &self.rows {
            out.push_str(&csv_field(&r.source));
            for c in &self.competitors {
                match c.values.get(&r.source) {
                    Some(v) => {
                        let _ = write!(out, ",{v}");
                    }
                    None => out.push(','),
                }
            }
            let _ = writeln!(
                out,
                ",{},{},{},{},{},{},{:.6},{:.6},{:.6},{},{},{},{},{}",
                r.blocks,
                r.chars,
                r.original_bytes,
                r.payload_bits,
                r.compressed_bytes,
                r.wire_bytes,
                r.bits_per_char,
                r.ratio_percent,
                r.wire_ratio_percent,
                r.usage.levels[0],
                r.usage.levels[1],
                r.usage.levels[2],
                r.usage.levels[3],
                r.usage.escapes
            );
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Parses `source,column,value` lines into competitor columns, keeping the
/// order in which columns first appear.
pub fn parse_competitors(text: &str) -> Result<Vec<CompetitorColumn>, String> {
    let mut columns: Vec<CompetitorColumn> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut f = line.rsplitn(3, ',');
        let (value, column, source) = match (f.next(), f.next(), f.next()) {
            (Some(v), Some(c), Some(s)) => (v.trim(), c.trim(), s.trim()),
            _ => return Err(format!("line {}: expected source,column,value", i + 1)),
        };
        let value: f64 = value.parse().map_err(|_| format!("line {}: bad number {value:?}", i + 1))?;
        let idx = match columns.iter().position(|c| c.name == column) {
            Some(idx) => idx,
            None => {
                columns.push(CompetitorColumn { name: column.to_owned(), values: BTreeMap::new() });
                columns.len() - 1
            }
        };
        columns[idx].values.insert(source.to_owned(), value);
    }
    Ok(columns)
}
