//! Command-line front end: argument parsing, output formats, benchmarking.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use streaming_iterator::StreamingIterator;
use thiserror::Error;

use crate::convert::{adj_list_from_ws, adj_matrix_from_ws, write_edge_line};
use crate::error::Error;
use crate::freegen::{free_trees, free_trees_partitions};
use crate::rootedgen::{
    init_cache, min_cache_order, rooted_trees, rooted_trees_partition, RootedCache,
};
use crate::wseq::{encode_decimal, encode_into, Weight, MAX_CHAR_WEIGHT};

/// Largest automatic cache bound in rooted mode. `B(18)` holds 1,721,159
/// sequences, about 31 MB flat.
pub const ROOTED_AUTO_CACHE_CAP: usize = 18;

/// Bytes per chunk handed from a worker to the writer in `--parallel` mode.
const CHUNK_BYTES: usize = 1 << 16;
/// Chunks a worker may queue ahead of the writer.
const CHUNKS_AHEAD: usize = 16;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Gen(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Gen(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Rooted,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Weight sequence, one character per vertex.
    Ws,
    /// Space-separated `i-j` edge tokens.
    Edges,
    /// Neighbor lists separated by `;`.
    Adjlist,
    /// 0/1 adjacency matrix rows, blank line between trees.
    Matrix,
}

#[derive(Debug, Parser)]
#[command(
    name = "treegen",
    version,
    about = "Enumerate unlabelled rooted and free trees"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All rooted trees of order N.
    Rooted(GenArgs),
    /// All free trees of order N.
    Free(GenArgs),
    /// Time full counting passes.
    Bench {
        #[arg(value_enum)]
        mode: Mode,
        #[command(flatten)]
        args: GenArgs,
    },
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Tree order.
    pub n: usize,
    /// Print only the number of trees.
    #[arg(long)]
    pub count: bool,
    #[arg(long, value_enum, default_value_t = Format::Ws)]
    pub format: Format,
    /// Largest cached order L (default: automatic).
    #[arg(long = "cache", value_name = "L")]
    pub cache: Option<usize>,
    /// Write trees here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Bench passes.
    #[arg(long, default_value_t = 3)]
    pub repeat: usize,
    /// Generate partitions on several threads; output order is unchanged.
    #[arg(long)]
    pub parallel: bool,
}

/// Everything one run needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub mode: Mode,
    pub n: usize,
    pub format: Format,
    pub count_only: bool,
    /// `None` picks the bound automatically.
    pub cache_l: Option<usize>,
    pub output: Option<PathBuf>,
    pub bench_repeat: usize,
    pub parallel: bool,
}

impl GenConfig {
    pub fn new(mode: Mode, n: usize) -> Self {
        GenConfig {
            mode,
            n,
            format: Format::Ws,
            count_only: false,
            cache_l: None,
            output: None,
            bench_repeat: 3,
            parallel: false,
        }
    }

    fn from_args(mode: Mode, args: GenArgs) -> Self {
        GenConfig {
            mode,
            n: args.n,
            format: args.format,
            count_only: args.count,
            cache_l: args.cache,
            output: args.output,
            bench_repeat: args.repeat,
            parallel: args.parallel,
        }
    }

    /// The cache bound this run will use.
    pub fn cache_order(&self) -> Result<usize, CliError> {
        let needed = min_cache_order(self.n);
        match self.cache_l {
            Some(l) if l < crate::rootedgen::MIN_CACHE_ORDER => Err(CliError::Usage(format!(
                "--cache must be at least 4, got {l}"
            ))),
            Some(l) if l < needed => Err(CliError::Usage(format!(
                "--cache {l} is too small for order {} (need at least {needed})",
                self.n
            ))),
            Some(l) => Ok(l),
            None => Ok(match self.mode {
                Mode::Free => needed,
                Mode::Rooted => self
                    .n
                    .saturating_sub(1)
                    .min(ROOTED_AUTO_CACHE_CAP)
                    .max(needed),
            }),
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.n == 0 {
            return Err(CliError::Usage("order must be at least 1".into()));
        }
        if self.n > Weight::MAX as usize {
            return Err(CliError::Usage(format!(
                "order must be at most {}",
                Weight::MAX
            )));
        }
        if self.bench_repeat == 0 {
            return Err(CliError::Usage("--repeat must be at least 1".into()));
        }
        self.cache_order().map(|_| ())
    }
}

/// Turns one sequence into one output record.
struct RecordWriter {
    format: Format,
    decimal: bool,
}

impl RecordWriter {
    fn new(format: Format, n: usize) -> Self {
        // weights never exceed the order
        RecordWriter {
            format,
            decimal: n as u32 > MAX_CHAR_WEIGHT,
        }
    }

    fn write(&self, s: &[Weight], out: &mut Vec<u8>) {
        match self.format {
            Format::Ws => {
                if self.decimal {
                    out.extend_from_slice(encode_decimal(s).as_bytes());
                } else {
                    encode_into(s, out).expect("weights fit the encoding");
                }
                out.push(b'\n');
            }
            Format::Edges => write_edge_line(s, out),
            Format::Adjlist => adj_list_from_ws(s)
                .expect("generated sequences are valid")
                .write_line(out),
            Format::Matrix => {
                adj_matrix_from_ws(s)
                    .expect("generated sequences are valid")
                    .write_block(out);
            }
        }
    }
}

type Stream<'c> = Box<dyn StreamingIterator<Item = [Weight]> + Send + 'c>;

fn full_stream<'c>(cfg: &GenConfig, cache: &'c RootedCache) -> Result<Stream<'c>, CliError> {
    Ok(match cfg.mode {
        Mode::Rooted => Box::new(rooted_trees(cfg.n, cache)?),
        Mode::Free => Box::new(free_trees(cfg.n, cache)?),
    })
}

fn partitions<'c>(cfg: &GenConfig, cache: &'c RootedCache) -> Result<Vec<Stream<'c>>, CliError> {
    let n = cfg.n;
    Ok(match cfg.mode {
        Mode::Rooted if n > 1 => (1..n)
            .rev()
            .map(|q| rooted_trees_partition(n, q, q, cache).map(|s| Box::new(s) as Stream))
            .collect::<Result<_, _>>()?,
        Mode::Rooted => vec![full_stream(cfg, cache)?],
        Mode::Free => {
            let chunks = rayon::current_num_threads().max(1) * 2;
            free_trees_partitions(n, chunks, cache)?
                .into_iter()
                .map(|s| Box::new(s) as Stream)
                .collect()
        }
    })
}

fn drain(mut s: Stream<'_>) -> u64 {
    let mut k = 0u64;
    while s.next().is_some() {
        k += 1;
    }
    k
}

fn count_with(cfg: &GenConfig, cache: &RootedCache) -> Result<u64, CliError> {
    if cfg.parallel {
        let parts = partitions(cfg, cache)?;
        Ok(parts.into_par_iter().map(drain).sum())
    } else {
        Ok(drain(full_stream(cfg, cache)?))
    }
}

fn write_sequential(
    cfg: &GenConfig,
    cache: &RootedCache,
    out: &mut dyn Write,
) -> Result<u64, CliError> {
    let writer = RecordWriter::new(cfg.format, cfg.n);
    let mut stream = full_stream(cfg, cache)?;
    let mut record = Vec::with_capacity(cfg.n * cfg.n + 1);
    let mut count = 0u64;
    while let Some(s) = stream.next() {
        record.clear();
        if cfg.format == Format::Matrix && count > 0 {
            record.push(b'\n');
        }
        writer.write(s, &mut record);
        out.write_all(&record)?;
        count += 1;
    }
    Ok(count)
}

/// Each partition runs on its own thread and hands formatted chunks to the
/// writer through a bounded channel; the writer drains the channels in
/// partition order, so bytes come out exactly as in the sequential path.
fn write_parallel(
    cfg: &GenConfig,
    cache: &RootedCache,
    out: &mut dyn Write,
) -> Result<u64, CliError> {
    let parts = partitions(cfg, cache)?;
    let writer = RecordWriter::new(cfg.format, cfg.n);
    let writer = &writer;
    std::thread::scope(|scope| {
        let mut receivers = Vec::with_capacity(parts.len());
        for mut stream in parts {
            let (tx, rx) = mpsc::sync_channel::<(Vec<u8>, u64)>(CHUNKS_AHEAD);
            receivers.push(rx);
            scope.spawn(move || {
                let mut chunk = Vec::with_capacity(CHUNK_BYTES + 4096);
                let mut in_chunk = 0u64;
                while let Some(s) = stream.next() {
                    if writer.format == Format::Matrix {
                        // separators are fixed up by the writer
                        chunk.push(b'\n');
                    }
                    writer.write(s, &mut chunk);
                    in_chunk += 1;
                    if chunk.len() >= CHUNK_BYTES {
                        let full =
                            std::mem::replace(&mut chunk, Vec::with_capacity(CHUNK_BYTES + 4096));
                        if tx.send((full, in_chunk)).is_err() {
                            return;
                        }
                        in_chunk = 0;
                    }
                }
                if in_chunk > 0 {
                    let _ = tx.send((chunk, in_chunk));
                }
            });
        }
        let mut count = 0u64;
        for rx in receivers {
            for (chunk, k) in rx {
                // every matrix record carries a leading blank line; drop the very first
                let bytes = if cfg.format == Format::Matrix && count == 0 {
                    &chunk[1..]
                } else {
                    &chunk[..]
                };
                out.write_all(bytes)?;
                count += k;
            }
        }
        Ok(count)
    })
}

/// Peak resident set size, where the platform reports it.
pub fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

/// Runs one configuration, writing data to `out` and diagnostics to `err`.
///
/// With `count_only` the count goes to `out` and the elapsed time to `err`.
/// Otherwise one record per tree goes to `out` (or to `cfg.output`).
pub fn run(cfg: &GenConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<u64, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let cache = init_cache(cfg.cache_order()?)?;
    if cfg.count_only {
        let count = count_with(cfg, &cache)?;
        writeln!(out, "{count}")?;
        writeln!(err, "elapsed: {} ms", start.elapsed().as_millis())?;
        if let Some(peak) = peak_rss_bytes() {
            writeln!(err, "peak rss: {} KiB", peak / 1024)?;
        }
        out.flush()?;
        return Ok(count);
    }
    if cfg.format == Format::Ws && cfg.n as u32 > MAX_CHAR_WEIGHT {
        writeln!(
            err,
            "warning: order {} exceeds {MAX_CHAR_WEIGHT}; writing dot-separated decimal weights",
            cfg.n
        )?;
    }
    let mut file;
    let mut stdout_buf;
    let sink: &mut dyn Write = match &cfg.output {
        Some(path) => {
            file = BufWriter::new(File::create(path)?);
            &mut file
        }
        None => {
            stdout_buf = BufWriter::with_capacity(1 << 16, out);
            &mut stdout_buf
        }
    };
    let count = if cfg.parallel {
        write_parallel(cfg, &cache, sink)?
    } else {
        write_sequential(cfg, &cache, sink)?
    };
    sink.flush()?;
    Ok(count)
}

/// Result of [`bench`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchReport {
    pub mode: Mode,
    pub n: usize,
    pub cache_l: usize,
    pub count: u64,
    pub times: Vec<Duration>,
}

impl BenchReport {
    pub fn min(&self) -> Duration {
        *self.times.iter().min().expect("at least one repeat")
    }

    pub fn median(&self) -> Duration {
        let mut t = self.times.clone();
        t.sort();
        let mid = t.len() / 2;
        if t.len() % 2 == 1 {
            t[mid]
        } else {
            (t[mid - 1] + t[mid]) / 2
        }
    }

    pub fn render(&self) -> String {
        let mode = match self.mode {
            Mode::Rooted => "rooted",
            Mode::Free => "free",
        };
        format!(
            "mode: {mode}\nn: {}\ncache: {}\ncount: {}\nrepeats: {}\nmin_ms: {:.3}\nmedian_ms: {:.3}\n",
            self.n,
            self.cache_l,
            self.count,
            self.times.len(),
            self.min().as_secs_f64() * 1e3,
            self.median().as_secs_f64() * 1e3,
        )
    }
}

/// Times `bench_repeat` full passes. Each pass builds its cache and counts
/// every tree; with `--format` other than `ws` each tree is also converted
/// to that representation in memory.
pub fn bench(cfg: &GenConfig) -> Result<BenchReport, CliError> {
    cfg.validate()?;
    let cache_l = cfg.cache_order()?;
    let mut times = Vec::with_capacity(cfg.bench_repeat);
    let mut count = None;
    for _ in 0..cfg.bench_repeat {
        let start = Instant::now();
        let cache = init_cache(cache_l)?;
        let c = match cfg.format {
            Format::Ws => count_with(cfg, &cache)?,
            Format::Edges | Format::Adjlist => convert_all(cfg, &cache, |s| {
                std::hint::black_box(adj_list_from_ws(s).expect("valid"));
            })?,
            Format::Matrix => convert_all(cfg, &cache, |s| {
                std::hint::black_box(adj_matrix_from_ws(s).expect("valid"));
            })?,
        };
        times.push(start.elapsed());
        if let Some(prev) = count {
            if prev != c {
                return Err(CliError::Usage(format!(
                    "count changed between repeats: {prev} vs {c}"
                )));
            }
        }
        count = Some(c);
    }
    Ok(BenchReport {
        mode: cfg.mode,
        n: cfg.n,
        cache_l,
        count: count.expect("repeat >= 1"),
        times,
    })
}

fn convert_all(
    cfg: &GenConfig,
    cache: &RootedCache,
    f: impl Fn(&[Weight]) + Sync,
) -> Result<u64, CliError> {
    let consume = |mut s: Stream<'_>| {
        let mut k = 0u64;
        while let Some(x) = s.next() {
            f(x);
            k += 1;
        }
        k
    };
    if cfg.parallel {
        Ok(partitions(cfg, cache)?.into_par_iter().map(consume).sum())
    } else {
        Ok(consume(full_stream(cfg, cache)?))
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Rooted(args) => {
            run(&GenConfig::from_args(Mode::Rooted, args), out, err).map(|_| ())
        }
        Command::Free(args) => run(&GenConfig::from_args(Mode::Free, args), out, err).map(|_| ()),
        Command::Bench { mode, args } => bench(&GenConfig::from_args(mode, args))
            .and_then(|report| Ok(out.write_all(report.render().as_bytes())?)),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
