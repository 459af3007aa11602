//! Per-shift counters as CSV and the end-of-run summary.

use std::fmt;
use std::io::{self, Write};
use std::time::Duration;

use cistream_core::{Footprint, StepStats, Tid};

pub const STATS_HEADER: &str =
    "shift,tid,op,new,promoted,obsolete,demoted,live_cis,trie_nodes,entries_scanned,wall_ns";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    /// Window not yet full: one incremental shift.
    Add,
    /// A decremental shift followed by an incremental one.
    Slide,
}

impl Op {
    pub fn as_str(self) -> &'static str {
        match self {
            Op::Add => "add",
            Op::Slide => "slide",
        }
    }
}

/// One row per incoming transaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StatsRecord {
    pub shift: usize,
    pub tid: Tid,
    pub op: Op,
    pub new: usize,
    pub promoted: usize,
    pub obsolete: usize,
    pub demoted: usize,
    pub live_cis: usize,
    pub trie_nodes: usize,
    pub entries_scanned: usize,
    /// Not a CSV column; reported in the summary.
    pub max_transaction_len: usize,
    pub wall: Duration,
}

impl StatsRecord {
    pub fn new(step: &StepStats, wall: Duration) -> Self {
        StatsRecord {
            shift: step.shift,
            tid: step.tid,
            op: if step.evicted { Op::Slide } else { Op::Add },
            new: step.new,
            promoted: step.promoted,
            obsolete: step.obsolete,
            demoted: step.demoted,
            live_cis: step.live_cis,
            trie_nodes: step.trie_nodes,
            entries_scanned: step.entries_scanned,
            max_transaction_len: step.max_transaction_len,
            wall,
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.shift,
            self.tid,
            self.op.as_str(),
            self.new,
            self.promoted,
            self.obsolete,
            self.demoted,
            self.live_cis,
            self.trie_nodes,
            self.entries_scanned,
            self.wall.as_nanos()
        )
    }
}

/// Writes the header, then one row per [`StatsWriter::record`] call.
#[derive(Debug)]
pub struct StatsWriter<W: Write> {
    out: W,
}

impl<W: Write> StatsWriter<W> {
    pub fn new(mut out: W) -> io::Result<Self> {
        writeln!(out, "{STATS_HEADER}")?;
        Ok(StatsWriter { out })
    }

    pub fn record(&mut self, r: &StatsRecord) -> io::Result<()> {
        r.write_csv(&mut self.out)
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub shifts: usize,
    pub live_cis: usize,
    /// Largest footprint total seen after any step.
    pub peak: Footprint,
    pub max_transaction_len: usize,
    pub duplicates: usize,
    pub wall: Duration,
}

impl RunSummary {
    pub fn observe(&mut self, step: &StepStats, wall: Duration) {
        self.shifts = step.shift;
        self.live_cis = step.live_cis;
        self.max_transaction_len = step.max_transaction_len;
        self.wall += wall;
        if step.footprint.total() > self.peak.total() {
            self.peak = step.footprint;
        }
    }
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "shifts={} live_cis={} peak_footprint={} (cis={} trie_nodes={} list_entries={}) \
             max_transaction_len={} duplicate_tokens={} mining_ms={:.3}",
            self.shifts,
            self.live_cis,
            self.peak.total(),
            self.peak.cis,
            self.peak.trie_nodes,
            self.peak.list_entries,
            self.max_transaction_len,
            self.duplicates,
            self.wall.as_secs_f64() * 1e3
        )
    }
}
