use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use shotik::codebook::{self, CodebookSummary};
use shotik::codec::{self, TokenUsage};
use shotik::report::{self, BenchConfig, Source};
use shotik::{BuildOptions, Codebook, HyphenationVariant, SelectionLimits, SymbolTable};

#[derive(Parser)]
#[command(name = "shotik", version, about = "Static codebook compression for short Bengali text messages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a codebook from training corpus files
    Build(BuildArgs),
    /// Compress a message
    Compress(CompressArgs),
    /// Decompress a message
    Decompress(DecompressArgs),
    /// Measure compression on held-out test files
    Bench(BenchArgs),
    /// Print the syllables of a word
    Hyphenate(HyphenateArgs),
    /// Summarize a codebook, optionally with token usage over files
    Stats(StatsArgs),
}

#[derive(Args)]
struct TableArg {
    /// Symbol table file replacing the built-in one
    #[arg(long, value_name = "PATH")]
    symbols: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(required = true, value_name = "CORPUS")]
    corpus: Vec<PathBuf>,
    #[arg(long, short)]
    output: PathBuf,
    #[arg(long, default_value = "umr")]
    variant: HyphenationVariant,
    #[arg(long, default_value_t = 512)]
    limit_digrams: usize,
    #[arg(long, default_value_t = 1024)]
    limit_syllables: usize,
    #[arg(long, default_value_t = 256)]
    limit_words: usize,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    min_count: u64,
    #[command(flatten)]
    table: TableArg,
}

#[derive(Args)]
struct CompressArgs {
    #[arg(long, short)]
    codebook: PathBuf,
    /// Input file, `-` for standard input
    #[arg(conflicts_with = "text", required_unless_present = "text")]
    input: Option<PathBuf>,
    /// Compress this text instead of a file
    #[arg(long)]
    text: Option<String>,
    /// Defaults to standard output
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DecompressArgs {
    #[arg(long, short)]
    codebook: PathBuf,
    /// Message file, `-` for standard input
    message: PathBuf,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, short)]
    codebook: PathBuf,
    #[arg(required = true, value_name = "TEST_FILE")]
    files: Vec<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum block length in characters
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    block_chars: u64,
    /// Blocks sampled per file; all blocks when omitted
    #[arg(long)]
    samples: Option<usize>,
    /// Emit comma-separated values instead of a table
    #[arg(long)]
    csv: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// `source,column,value` lines shown as extra columns
    #[arg(long, value_name = "PATH")]
    competitors: Option<PathBuf>,
    /// Training corpus files; test files must not repeat them
    #[arg(long = "corpus", value_name = "PATH")]
    corpus: Vec<PathBuf>,
    #[arg(long)]
    allow_overlap: bool,
    #[command(flatten)]
    table: TableArg,
}

#[derive(Args)]
struct HyphenateArgs {
    word: String,
    #[arg(long, default_value = "umr")]
    variant: HyphenationVariant,
    #[command(flatten)]
    table: TableArg,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long, short)]
    codebook: PathBuf,
    files: Vec<PathBuf>,
}

/// A failure that maps onto an exit status.
enum Failure {
    Usage(String),
    Data(String),
}

type CmdResult = Result<(), Failure>;

fn data<E: std::fmt::Display>(context: impl std::fmt::Display) -> impl FnOnce(E) -> Failure {
    move |e| Failure::Data(format!("{context}: {e}"))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(data("<stdin>"))?;
        return Ok(buf);
    }
    fs::read(path).map_err(data(path.display()))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    String::from_utf8(read_bytes(path)?)
        .map_err(|_| Failure::Data(format!("{}: invalid UTF-8", path.display())))
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> CmdResult {
    match path {
        Some(p) => fs::write(p, bytes).map_err(data(p.display())),
        None => io::stdout().write_all(bytes).map_err(data("<stdout>")),
    }
}

fn load_table(arg: &TableArg) -> Result<SymbolTable, Failure> {
    match &arg.symbols {
        Some(p) => SymbolTable::parse(&read_text(p)?).map_err(data(p.display())),
        None => Ok(SymbolTable::bengali()),
    }
}

fn load_codebook(path: &Path) -> Result<Codebook, Failure> {
    Codebook::deserialize(&read_bytes(path)?).map_err(data(path.display()))
}

fn print_summary(cb: &Codebook) -> CmdResult {
    let s = CodebookSummary::of(cb).map_err(data("codebook"))?;
    println!("codebook {:016x} ({})", cb.id(), cb.variant());
    for (i, n) in s.level_counts.iter().enumerate() {
        println!("level {}: {n} entries", i + 1);
    }
    println!("escape: {}", cb.escape_codeword());
    println!("average length: {:.4} bits/token", s.average_length);
    println!("entropy: {:.4} bits/token", s.entropy);
    println!("longest codeword: {} bits", s.max_code_length);
    Ok(())
}

fn cmd_build(args: BuildArgs) -> CmdResult {
    let table = load_table(&args.table)?;
    let corpus = args.corpus.iter().map(|p| read_text(p)).collect::<Result<Vec<_>, _>>()?;
    let options = BuildOptions {
        variant: args.variant,
        limits: SelectionLimits {
            digrams: args.limit_digrams,
            syllables: args.limit_syllables,
            words: args.limit_words,
        },
        min_count: args.min_count,
    };
    let cb = codebook::build_codebook(&corpus, &options, &table).map_err(data("build"))?;
    write_out(Some(&args.output), &cb.serialize())?;
    print_summary(&cb)
}

fn cmd_compress(args: CompressArgs) -> CmdResult {
    let cb = load_codebook(&args.codebook)?;
    let text = match (&args.text, &args.input) {
        (Some(t), _) => t.clone(),
        (None, Some(p)) => read_text(p)?,
        (None, None) => return Err(Failure::Usage("no input given".into())),
    };
    let msg = codec::compress(&text, &cb);
    write_out(args.output.as_deref(), &msg.to_bytes())?;
    if !text.is_empty() {
        let bpc = codec::bits_per_char(&text, &msg).map_err(data("metrics"))?;
        let ratio =
            codec::compression_ratio(text.len() as u64, msg.payload.len() as u64).map_err(data("metrics"))?;
        eprintln!(
            "{} chars, {} bits: {bpc:.4} bits/char, ratio {ratio:.2}% ({} bytes with header)",
            text.chars().count(),
            msg.bit_count,
            msg.wire_len()
        );
    }
    Ok(())
}

fn cmd_decompress(args: DecompressArgs) -> CmdResult {
    let cb = load_codebook(&args.codebook)?;
    let bytes = read_bytes(&args.message)?;
    let text = codec::decompress(&bytes, &cb).map_err(|e| Failure::Data(e.to_string()))?;
    write_out(args.output.as_deref(), text.as_bytes())
}

fn cmd_bench(args: BenchArgs) -> CmdResult {
    let table = load_table(&args.table)?;
    let cb = load_codebook(&args.codebook)?;
    let mut sources = Vec::new();
    for path in &args.files {
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        sources.push((path, Source::new(name, read_text(path)?)));
    }
    if !args.allow_overlap {
        for c in &args.corpus {
            let corpus = read_bytes(c)?;
            for (path, src) in &sources {
                let same_file = fs::canonicalize(c).ok().is_some() && fs::canonicalize(c).ok() == fs::canonicalize(path).ok();
                if same_file || corpus == src.text.as_bytes() {
                    return Err(Failure::Usage(format!(
                        "{} is part of the training corpus (use --allow-overlap to bench anyway)",
                        path.display()
                    )));
                }
            }
        }
    }
    let sources: Vec<Source> = sources.into_iter().map(|(_, s)| s).collect();
    let config = BenchConfig {
        block_chars: args.block_chars as usize,
        samples_per_source: args.samples,
        seed: args.seed,
    };
    let mut rep = report::run_bench(&sources, &cb, &config, &table).map_err(data("bench"))?;
    if let Some(p) = &args.competitors {
        let cols = report::parse_competitors(&read_text(p)?).map_err(data(p.display()))?;
        rep = rep.with_competitors(cols);
    }
    rep.check_consistency().map_err(data("report"))?;
    for row in rep.rows.iter().filter(|r| r.flagged()) {
        eprintln!("warning: {} averages {:.2} bits/char", row.source, row.bits_per_char);
    }
    let out = if args.csv { rep.to_csv() } else { rep.to_table() };
    write_out(args.output.as_deref(), out.as_bytes())
}

fn cmd_hyphenate(args: HyphenateArgs) -> CmdResult {
    if args.word.is_empty() {
        return Err(Failure::Usage("word must not be empty".into()));
    }
    let table = load_table(&args.table)?;
    let words: Vec<String> = table
        .segment(&args.word)
        .into_iter()
        .map(|run| {
            if run.is_word() {
                shotik::hyphenate(run.text, args.variant, &table).join("-")
            } else {
                run.text.to_owned()
            }
        })
        .collect();
    println!("{}", words.concat());
    Ok(())
}

fn cmd_stats(args: StatsArgs) -> CmdResult {
    let cb = load_codebook(&args.codebook)?;
    print_summary(&cb)?;
    for path in &args.files {
        let text = read_text(path)?;
        let tokens = codec::tokenize(&text, &cb);
        let usage = TokenUsage::of(&tokens, &cb);
        let msg = codec::encode(&tokens, &cb).map_err(data(path.display()))?;
        let bpc = codec::bits_per_char(&text, &msg).unwrap_or(0.0);
        println!(
            "{}: {} chars, {} tokens (L1 {}, L2 {}, L3 {}, L4 {}, escapes {}), {:.4} bits/char",
            path.display(),
            text.chars().count(),
            usage.total(),
            usage.levels[0],
            usage.levels[1],
            usage.levels[2],
            usage.levels[3],
            usage.escapes,
            bpc
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Compress(a) => cmd_compress(a),
        Command::Decompress(a) => cmd_decompress(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Hyphenate(a) => cmd_hyphenate(a),
        Command::Stats(a) => cmd_stats(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("shotik: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("shotik: {msg}");
            ExitCode::from(2)
        }
    }
}
