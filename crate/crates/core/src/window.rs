//! Stream replay: tid assignment, the FIFO window and shift sequencing.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::error::Error;
use crate::miner::{Footprint, ItemOrder, Miner, ShiftReport};
use crate::model::{Itemset, Tid, Transaction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowMode {
    /// Fixed capacity; the oldest transaction is evicted on overflow.
    Sliding,
    /// Unbounded; transactions are never evicted.
    Landmark,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowConfig {
    pub capacity: usize,
    pub mode: WindowMode,
    /// Emission-time support threshold.
    pub min_supp: u32,
}

impl WindowConfig {
    pub fn new(capacity: usize, mode: WindowMode, min_supp: u32) -> Result<Self, Error> {
        if capacity == 0 {
            return Err(Error::InvalidConfig("window capacity must be at least 1"));
        }
        if min_supp == 0 {
            return Err(Error::InvalidConfig("minimum support must be at least 1"));
        }
        Ok(WindowConfig {
            capacity,
            mode,
            min_supp,
        })
    }

    pub fn sliding(capacity: usize, min_supp: u32) -> Result<Self, Error> {
        Self::new(capacity, WindowMode::Sliding, min_supp)
    }

    pub fn landmark(min_supp: u32) -> Result<Self, Error> {
        Self::new(usize::MAX, WindowMode::Landmark, min_supp)
    }
}

/// Reports of the shifts triggered by one incoming transaction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushOutcome {
    pub removed: Option<ShiftReport>,
    pub added: ShiftReport,
}

/// Per-push counters, one row per incoming transaction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub shift: usize,
    pub tid: Tid,
    pub evicted: bool,
    pub new: usize,
    pub promoted: usize,
    pub obsolete: usize,
    pub demoted: usize,
    pub live_cis: usize,
    /// Trie nodes created over both shifts of the step.
    pub trie_nodes: usize,
    /// List entries scanned over both shifts of the step.
    pub entries_scanned: usize,
    pub max_transaction_len: usize,
    pub footprint: Footprint,
}

#[derive(Debug, Clone)]
pub struct Window {
    config: WindowConfig,
    miner: Miner,
    buffer: VecDeque<Transaction>,
    next_tid: u64,
    shifts: usize,
    max_len: usize,
}

impl Window {
    pub fn new(config: WindowConfig) -> Self {
        Window {
            config,
            miner: Miner::new(),
            buffer: VecDeque::new(),
            next_tid: 1,
            shifts: 0,
            max_len: 0,
        }
    }

    pub fn with_item_order(mut self, order: ItemOrder) -> Self {
        self.miner.set_item_order(order);
        self
    }

    pub fn config(&self) -> &WindowConfig {
        &self.config
    }

    pub fn miner(&self) -> &Miner {
        &self.miner
    }

    /// Transactions in the window, oldest first.
    pub fn contents(&self) -> impl ExactSizeIterator<Item = &Transaction> {
        self.buffer.iter()
    }

    pub fn len(&self) -> usize {
        self.buffer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buffer.is_empty()
    }

    /// Number of pushes so far.
    pub fn shifts(&self) -> usize {
        self.shifts
    }

    /// Largest transaction seen so far.
    pub fn max_transaction_len(&self) -> usize {
        self.max_len
    }

    /// CIs at or above the configured threshold.
    pub fn snapshot(&self) -> Vec<(Itemset, u32)> {
        self.miner.snapshot(self.config.min_supp)
    }

    /// Appends a transaction, evicting the oldest one first when a sliding
    /// window is full.
    pub fn push(&mut self, itemset: Itemset) -> Result<PushOutcome, Error> {
        let removed = match self.config.mode {
            WindowMode::Sliding if self.buffer.len() >= self.config.capacity => {
                let old = self
                    .buffer
                    .pop_front()
                    .ok_or(Error::Invariant("full window is empty"))?;
                Some(self.miner.shift_remove(&old)?)
            }
            _ => None,
        };
        let t = Transaction::new(Tid(self.next_tid), itemset);
        self.next_tid += 1;
        self.max_len = self.max_len.max(t.itemset.len());
        let added = self.miner.shift_add(&t)?;
        self.buffer.push_back(t);
        self.shifts += 1;
        Ok(PushOutcome { removed, added })
    }

    pub fn stats(&self, outcome: &PushOutcome) -> StepStats {
        let (obsolete, demoted, nodes, scanned) = match &outcome.removed {
            Some(r) => (
                r.obsolete.len(),
                r.demoted.len(),
                r.counters.trie_nodes,
                r.counters.entries_scanned,
            ),
            None => (0, 0, 0, 0),
        };
        let a = &outcome.added;
        StepStats {
            shift: self.shifts,
            tid: a.tid,
            evicted: outcome.removed.is_some(),
            new: a.new_cis.len(),
            promoted: a.promoted.len(),
            obsolete,
            demoted,
            live_cis: self.miner.len(),
            trie_nodes: nodes + a.counters.trie_nodes,
            entries_scanned: scanned + a.counters.entries_scanned,
            max_transaction_len: self.max_len,
            footprint: self.miner.footprint(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReplayStep {
    pub stats: StepStats,
    pub outcome: PushOutcome,
    /// Present every `snapshot_every` steps.
    pub snapshot: Option<Vec<(Itemset, u32)>>,
}

/// Deterministic replay of a transaction sequence through a [`Window`],
/// one step per transaction.
#[derive(Debug)]
pub struct Replay<I> {
    window: Window,
    source: I,
    snapshot_every: Option<usize>,
}

impl<I: Iterator<Item = Itemset>> Replay<I> {
    pub fn new<S: IntoIterator<IntoIter = I>>(window: Window, source: S) -> Self {
        Replay {
            window,
            source: source.into_iter(),
            snapshot_every: None,
        }
    }

    pub fn snapshot_every(mut self, k: usize) -> Self {
        self.snapshot_every = (k > 0).then_some(k);
        self
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn into_window(self) -> Window {
        self.window
    }

    /// Runs the replay to the end, discarding the steps.
    pub fn finish(mut self) -> Result<Window, Error> {
        for step in &mut self {
            step?;
        }
        Ok(self.window)
    }
}

impl<I: Iterator<Item = Itemset>> Iterator for Replay<I> {
    type Item = Result<ReplayStep, Error>;

    fn next(&mut self) -> Option<Self::Item> {
        let itemset = self.source.next()?;
        Some(self.window.push(itemset).map(|outcome| {
            let stats = self.window.stats(&outcome);
            let snapshot = self
                .snapshot_every
                .filter(|k| stats.shift % k == 0)
                .map(|_| self.window.snapshot());
            ReplayStep {
                stats,
                outcome,
                snapshot,
            }
        }))
    }
}
