use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use cistream_core::oracle::{self, Dataset};
use cistream_core::{Dictionary, Tid, Window, WindowConfig, WindowMode};
use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::fimi::{read_fimi, ParseError, StreamSource};
use crate::output::{write_snapshot, Format};
use crate::stats::{RunSummary, StatsRecord, StatsWriter};
use crate::verify::{Verifier, VerifyError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_DIVERGENCE: u8 = 3;
pub const EXIT_CAP: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "cistream",
    version,
    about = "Closed itemset mining over a sliding window of transactions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Sliding,
    Landmark,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replay a FIMI file through the window and emit the closed itemsets.
    Mine {
        #[arg(long)]
        input: PathBuf,
        /// Window capacity in transactions. Required in sliding mode.
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, value_enum, default_value = "sliding")]
        mode: ModeArg,
        /// Minimum support of emitted itemsets.
        #[arg(long, default_value_t = 1)]
        min_supp: u32,
        /// Final snapshot file. Standard output when omitted.
        #[arg(long)]
        emit_snapshot: Option<PathBuf>,
        /// Per-transaction counters as CSV.
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Also write `<emit-snapshot>.<shift>` every k transactions.
        #[arg(long, requires = "emit_snapshot")]
        snapshot_every: Option<usize>,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Replay a sliding window with the brute-force oracle checking every shift.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        window: usize,
        /// Abort with exit code 4 when the oracle family grows past this size.
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        max_cis: usize,
    },
    /// Print every closed itemset of the whole file, computed by brute force.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        max_cis: usize,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Open { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("{report}")]
    Divergence { report: String },
    #[error("oracle exceeded its cap of {0} closed itemsets")]
    CapExceeded(usize),
    #[error(transparent)]
    Mining(#[from] cistream_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Mining(cistream_core::Error::InvalidConfig(_)) => {
                EXIT_USAGE
            }
            CliError::Open { .. } | CliError::Parse { .. } | CliError::Write { .. } => EXIT_PARSE,
            CliError::Divergence { .. } | CliError::Mining(_) => EXIT_DIVERGENCE,
            CliError::CapExceeded(_) => EXIT_CAP,
        }
    }
}

/// Parses `args` and runs the command. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| CliError::Open {
            path: path.to_path_buf(),
            source,
        })
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        })
}

fn write_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    }
}

fn save(
    path: &Path,
    snapshot: &[(cistream_core::Itemset, u32)],
    dict: &Dictionary,
    format: Format,
) -> Result<(), CliError> {
    let mut out = create(path)?;
    write_snapshot(&mut out, snapshot, dict, format).map_err(write_err(path))?;
    out.flush().map_err(write_err(path))
}

fn numbered(path: &Path, shift: usize) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(format!(".{shift}"));
    PathBuf::from(s)
}

pub fn execute(
    command: Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    match command {
        Command::Mine {
            input,
            window,
            mode,
            min_supp,
            emit_snapshot,
            stats,
            snapshot_every,
            format,
        } => {
            let config = match (mode, window) {
                (ModeArg::Sliding, Some(w)) => WindowConfig::new(w, WindowMode::Sliding, min_supp)?,
                (ModeArg::Sliding, None) => {
                    return Err(CliError::Usage(
                        "--window is required in sliding mode".into(),
                    ))
                }
                (ModeArg::Landmark, _) => WindowConfig::landmark(min_supp)?,
            };
            if snapshot_every == Some(0) {
                return Err(CliError::Usage(
                    "--snapshot-every must be at least 1".into(),
                ));
            }
            mine(
                &input,
                config,
                emit_snapshot.as_deref(),
                stats.as_deref(),
                snapshot_every,
                format,
                stdout,
                stderr,
            )
        }
        Command::Verify {
            input,
            window,
            max_cis,
        } => verify(&input, window, max_cis, stdout),
        Command::Oracle {
            input,
            max_cis,
            format,
        } => {
            let fimi = read_fimi(open(&input)?).map_err(|source| CliError::Parse {
                path: input.clone(),
                source,
            })?;
            let d: Dataset = fimi
                .transactions
                .into_iter()
                .enumerate()
                .map(|(i, x)| (Tid(i as u64 + 1), x))
                .collect();
            let family = oracle::all_cis_capped(&d, max_cis).map_err(|e| match e {
                oracle::OracleError::CapExceeded(n) => CliError::CapExceeded(n),
                _ => CliError::Usage(e.to_string()),
            })?;
            let rows: Vec<_> = family.into_iter().collect();
            let mut out = BufWriter::new(stdout);
            write_snapshot(&mut out, &rows, &fimi.dictionary, format)
                .and_then(|()| out.flush())
                .map_err(write_err(Path::new("<stdout>")))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn mine(
    input: &Path,
    config: WindowConfig,
    emit: Option<&Path>,
    stats: Option<&Path>,
    every: Option<usize>,
    format: Format,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let mut src = StreamSource::new(open(input)?);
    let mut window = Window::new(config);
    let mut csv = stats
        .map(|p| create(p).and_then(|w| StatsWriter::new(w).map_err(write_err(p))))
        .transpose()?;
    let mut summary = RunSummary::default();
    while let Some(itemset) = src.next() {
        let itemset = itemset.map_err(|source| CliError::Parse {
            path: input.to_path_buf(),
            source,
        })?;
        let started = Instant::now();
        let outcome = window.push(itemset)?;
        let wall = started.elapsed();
        let step = window.stats(&outcome);
        summary.observe(&step, wall);
        if let (Some(w), Some(p)) = (csv.as_mut(), stats) {
            w.record(&StatsRecord::new(&step, wall))
                .map_err(write_err(p))?;
        }
        if let (Some(k), Some(p)) = (every, emit) {
            if step.shift % k == 0 {
                save(
                    &numbered(p, step.shift),
                    &window.snapshot(),
                    src.dictionary(),
                    format,
                )?;
            }
        }
    }
    if let (Some(w), Some(p)) = (csv, stats) {
        w.into_inner().flush().map_err(write_err(p))?;
    }
    summary.duplicates = src.duplicates();
    let snapshot = window.snapshot();
    match emit {
        Some(p) => save(p, &snapshot, src.dictionary(), format)?,
        None => {
            let mut out = BufWriter::new(stdout);
            write_snapshot(&mut out, &snapshot, src.dictionary(), format)
                .and_then(|()| out.flush())
                .map_err(write_err(Path::new("<stdout>")))?;
        }
    }
    let _ = writeln!(stderr, "{summary}");
    Ok(())
}

fn verify(
    input: &Path,
    window: usize,
    max_cis: usize,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let mut src = StreamSource::new(open(input)?);
    let mut v = Verifier::new(window, max_cis)?;
    for itemset in src.by_ref() {
        let itemset = itemset.map_err(|source| CliError::Parse {
            path: input.to_path_buf(),
            source,
        })?;
        match v.push(itemset) {
            Ok(()) => {}
            Err(VerifyError::Divergence(d)) => {
                return Err(CliError::Divergence {
                    report: d.report(src.dictionary()),
                });
            }
            Err(VerifyError::CapExceeded(n)) => return Err(CliError::CapExceeded(n)),
            Err(VerifyError::Mining(e)) => return Err(e.into()),
            Err(VerifyError::Oracle(e)) => return Err(CliError::Usage(e.to_string())),
        }
    }
    let _ = writeln!(
        stdout,
        "ok: {} shifts verified, {} closed itemsets in the final window",
        v.shifts(),
        v.family().len()
    );
    Ok(())
}
