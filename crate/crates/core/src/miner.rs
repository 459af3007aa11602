//! Window shift engines.
//!
//! A shift runs in three steps. First every item of the transaction is taken
//! in turn and each CI holding it has its trie cursor pushed one node down,
//! so that when the last item is done each cursor rests on the node of the
//! CI's intersection with the transaction. Second, the nodes with resting
//! cursors (the end nodes) are classified from their `min`/`gen` fields.
//! Third, the CI store and the inverted lists are updated.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::Error;
use crate::model::{self, CiId, CiStore, InvertedIndex, Item, Itemset, Tid, Transaction};
use crate::trie::{Mode, NodeId, Trie};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftKind {
    Add,
    Remove,
}

/// Order in which the items of a transaction are processed. The resulting CI
/// family does not depend on it; only the trie shape does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ItemOrder {
    #[default]
    Ascending,
    Descending,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ShiftCounters {
    /// Trie nodes created, root excluded.
    pub trie_nodes: usize,
    /// Inverted list entries visited, one sentinel visit per item included.
    pub entries_scanned: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewCi {
    pub id: CiId,
    pub itemset: Itemset,
    pub support: u32,
}

/// Categorized outcome of one shift. Add shifts fill `new_cis` and
/// `promoted`, remove shifts fill `obsolete` and `demoted`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftReport {
    pub kind: ShiftKind,
    pub tid: Tid,
    pub new_cis: Vec<NewCi>,
    pub promoted: Vec<CiId>,
    pub obsolete: Vec<(CiId, Itemset)>,
    pub demoted: Vec<CiId>,
    pub counters: ShiftCounters,
}

impl ShiftReport {
    fn empty(kind: ShiftKind, tid: Tid) -> Self {
        ShiftReport {
            kind,
            tid,
            new_cis: Vec::new(),
            promoted: Vec::new(),
            obsolete: Vec::new(),
            demoted: Vec::new(),
            counters: ShiftCounters::default(),
        }
    }

    /// Number of distinct non-empty intersections handled by the shift.
    pub fn intersections(&self) -> usize {
        self.new_cis.len() + self.promoted.len() + self.obsolete.len() + self.demoted.len()
    }
}

/// Live structural footprint of a miner.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Footprint {
    pub cis: usize,
    pub trie_nodes: usize,
    pub list_entries: usize,
}

impl Footprint {
    pub fn total(&self) -> usize {
        self.cis + self.trie_nodes + self.list_entries
    }
}

/// The closed itemset family of a window, maintained under additions and
/// removals of single transactions.
#[derive(Debug, Clone)]
pub struct Miner {
    store: CiStore,
    index: InvertedIndex,
    trie: Trie,
    resident: BTreeSet<Tid>,
    order: ItemOrder,
}

impl Default for Miner {
    fn default() -> Self {
        Self::new()
    }
}

impl Miner {
    pub fn new() -> Self {
        Miner {
            store: CiStore::new(),
            index: InvertedIndex::new(),
            trie: Trie::new(Mode::Increment),
            resident: BTreeSet::new(),
            order: ItemOrder::Ascending,
        }
    }

    pub fn with_item_order(mut self, order: ItemOrder) -> Self {
        self.order = order;
        self
    }

    pub fn set_item_order(&mut self, order: ItemOrder) {
        self.order = order;
    }

    pub fn store(&self) -> &CiStore {
        &self.store
    }

    pub fn index(&self) -> &InvertedIndex {
        &self.index
    }

    /// Trie of the most recent shift, kept until the next one starts.
    pub fn trie(&self) -> &Trie {
        &self.trie
    }

    pub fn contains(&self, tid: Tid) -> bool {
        self.resident.contains(&tid)
    }

    /// Number of transactions in the window.
    pub fn window_len(&self) -> usize {
        self.resident.len()
    }

    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.is_empty()
    }

    pub fn footprint(&self) -> Footprint {
        Footprint {
            cis: self.store.len(),
            trie_nodes: self.trie.len() - 1,
            list_entries: self.index.entries(),
        }
    }

    pub fn materialize(&self, c: CiId) -> Result<Itemset, Error> {
        model::materialize_itemset(&self.store, &self.index, c)
    }

    pub fn snapshot(&self, min_supp: u32) -> Vec<(Itemset, u32)> {
        model::snapshot(&self.store, &self.index, min_supp)
    }

    /// Every live CI as `(id, itemset, support)`, by ascending id.
    pub fn live_cis(&self) -> Vec<(CiId, Itemset, u32)> {
        model::materialize_all(&self.store, &self.index)
            .into_iter()
            .map(|(c, x)| {
                let s = self.store.record(c).support;
                (c, x, s)
            })
            .collect()
    }

    /// Checks that every live CI appears in exactly `size` lists and that
    /// no list names a dead CI.
    pub fn verify_index(&self) -> Result<(), Error> {
        let mut counts = alloc::vec![0u32; self.store.next_id().index()];
        for (_, list) in self.index.lists() {
            for &c in list {
                if self.store.get(c).is_none() {
                    return Err(Error::Invariant("inverted list names a dead CI"));
                }
                counts[c.index()] += 1;
            }
        }
        for c in self.store.live_ids() {
            let rec = self.store.record(c);
            if counts[c.index()] != rec.size || rec.support == 0 {
                return Err(Error::Invariant(
                    "CI size or support disagrees with the index",
                ));
            }
        }
        Ok(())
    }

    pub fn shift_add(&mut self, t: &Transaction) -> Result<ShiftReport, Error> {
        if self.resident.contains(&t.tid) {
            return Err(Error::DuplicateTid(t.tid));
        }
        self.resident.insert(t.tid);
        self.begin(Mode::Increment);
        let mut report = ShiftReport::empty(ShiftKind::Add, t.tid);
        if t.itemset.is_empty() {
            return Ok(report);
        }
        report.counters.entries_scanned = self.intersect(&t.itemset);
        report.counters.trie_nodes = self.trie.len() - 1;
        self.update_cis_inc(&mut report)?;
        Ok(report)
    }

    /// `t` must carry the itemset the transaction was added with.
    pub fn shift_remove(&mut self, t: &Transaction) -> Result<ShiftReport, Error> {
        if !self.resident.remove(&t.tid) {
            return Err(Error::NotInWindow(t.tid));
        }
        self.begin(Mode::Decrement);
        let mut report = ShiftReport::empty(ShiftKind::Remove, t.tid);
        if t.itemset.is_empty() {
            return Ok(report);
        }
        report.counters.entries_scanned = self.intersect(&t.itemset);
        report.counters.trie_nodes = self.trie.len() - 1;
        self.update_cis_dec(&mut report)?;
        Ok(report)
    }

    fn begin(&mut self, mode: Mode) {
        self.store.advance_shift();
        self.trie.init(mode);
    }

    /// Grows every intersection with `items` in the trie. Returns the number
    /// of list entries visited.
    fn intersect(&mut self, items: &Itemset) -> usize {
        let Miner {
            store,
            index,
            trie,
            order,
            ..
        } = self;
        let mut scanned = 0;
        let mut step = |a: Item| {
            expand_path(store, trie, CiId::SENTINEL, a);
            let list = index.list(a);
            for &c in list {
                expand_path(store, trie, c, a);
            }
            scanned += list.len() + 1;
        };
        match order {
            ItemOrder::Ascending => items.items().iter().copied().for_each(&mut step),
            ItemOrder::Descending => items.items().iter().rev().copied().for_each(&mut step),
        }
        debug_assert_eq!(trie.node(trie.root()).cpt(), 0);
        scanned
    }

    fn update_cis_inc(&mut self, report: &mut ShiftReport) -> Result<(), Error> {
        // Decide every end node against pre-shift supports, then apply.
        let mut promoted = Vec::new();
        let mut created = Vec::new();
        for n in self.trie.end_nodes() {
            let node = self.trie.node(n);
            let &[m] = node.min() else {
                return Err(Error::Invariant(
                    "increment end node without a single minimal CI",
                ));
            };
            let rec = self.store.record(m);
            if node.depth() == rec.size {
                promoted.push(m);
            } else {
                created.push((n, rec.support + 1));
            }
        }
        for &m in &promoted {
            self.store.record_mut(m).support += 1;
        }
        for (n, support) in created {
            let itemset = self.trie.path(n)?;
            let id = self.store.allocate(support, itemset.len() as u32);
            for &a in itemset.items() {
                self.index.insert(a, id);
            }
            report.new_cis.push(NewCi {
                id,
                itemset,
                support,
            });
        }
        report.promoted = promoted;
        Ok(())
    }

    fn update_cis_dec(&mut self, report: &mut ShiftReport) -> Result<(), Error> {
        let mut obsolete = Vec::new();
        let mut demoted = Vec::new();
        for n in self.trie.end_nodes() {
            let node = self.trie.node(n);
            let &[m] = node.min() else {
                return Err(Error::Invariant(
                    "decrement end node without a single minimal CI",
                ));
            };
            if m == CiId::SENTINEL {
                return Err(Error::Invariant("sentinel CI ended as a class minimum"));
            }
            // A gen member whose cursor still rests here lies outside the
            // transaction and witnesses that `m` loses its closedness.
            // Members that moved deeper are stale and ignored.
            if node.gen().iter().any(|&g| self.store.last(g) == Some(n)) {
                obsolete.push((n, m));
            } else {
                demoted.push(m);
            }
        }
        for &m in &demoted {
            self.store.record_mut(m).support -= 1;
        }
        for (n, m) in obsolete {
            let itemset = self.remove_ci(n, m)?;
            report.obsolete.push((m, itemset));
        }
        report.demoted = demoted;
        Ok(())
    }

    /// Drops `c`, whose itemset is the path of end node `n`, from the store
    /// and from the list of every item on that path.
    fn remove_ci(&mut self, n: NodeId, c: CiId) -> Result<Itemset, Error> {
        let itemset = self.trie.path(n)?;
        let rec = self.store.get(c).ok_or(Error::UnknownCi(c))?;
        if rec.size as usize != itemset.len() {
            return Err(Error::Invariant(
                "obsolete CI differs from its intersection",
            ));
        }
        for &a in itemset.items() {
            self.index.remove(a, c)?;
        }
        self.store.kill(c);
        Ok(itemset)
    }
}

/// Moves the cursor of `c` from its current node to the successor carrying
/// `a`, then offers `c` to that node's `min`/`gen` bookkeeping.
///
/// A cursor not set during this shift starts at the root. The root's counter
/// is bumped on entry so that every node's `cpt` stays the exact number of
/// cursors resting on it.
#[inline]
fn expand_path(store: &mut CiStore, trie: &mut Trie, c: CiId, a: Item) {
    let shift = store.shift_counter();
    let rec = store.record_mut(c);
    if rec.stamp != shift {
        rec.stamp = shift;
        rec.last = NodeId::ROOT;
        trie.node_mut(NodeId::ROOT).cpt += 1;
    }
    let from = rec.last;
    let n = trie.succ_for_current_item(from, a);
    trie.node_mut(from).cpt -= 1;
    rec.last = n;
    let support = rec.support;
    let mode = trie.mode();
    let node = trie.node_mut(n);
    node.cpt += 1;
    match mode {
        Mode::Increment => node.update_gen_inc(c, support),
        Mode::Decrement => node.update_gen_dec(c, support),
    }
}
