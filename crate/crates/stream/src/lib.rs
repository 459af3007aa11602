//! File formats and command-line driver for the `cistream-core` miner.
//!
//! Reads FIMI transaction files, replays them through a window and writes
//! closed itemset snapshots (TSV or JSON lines) and per-shift counters
//! (CSV).

pub mod cli;
pub mod fimi;
pub mod output;
pub mod stats;
pub mod verify;

pub use fimi::{read_fimi, Fimi, ParseError, StreamSource};
pub use output::{write_snapshot, Format};
pub use stats::{Op, RunSummary, StatsRecord, StatsWriter, STATS_HEADER};
pub use verify::{Divergence, Verifier, VerifyError};
