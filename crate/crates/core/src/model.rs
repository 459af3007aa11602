//! Persistent cross-shift state: item dictionary, CI records and the
//! inverted index.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::trie::NodeId;

/// Dense item code handed out by [`Dictionary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Item(pub u32);

impl Item {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Transaction identifier. Assigned by the window driver, never reused.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tid(pub u64);

impl fmt::Display for Tid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Closed itemset identifier. Id 0 is the sentinel CI holding every item
/// with support 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CiId(pub u32);

impl CiId {
    pub const SENTINEL: CiId = CiId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for CiId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of items, kept strictly ascending. The ordering derives from the
/// item sequence, so `Ord` is lexicographic.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Itemset(Vec<Item>);

impl Itemset {
    pub fn empty() -> Self {
        Itemset(Vec::new())
    }

    /// Sorts and deduplicates `items`.
    pub fn new(mut items: Vec<Item>) -> Self {
        items.sort_unstable();
        items.dedup();
        Itemset(items)
    }

    pub fn from_ids<I: IntoIterator<Item = u32>>(ids: I) -> Self {
        Self::new(ids.into_iter().map(Item).collect())
    }

    /// Wraps an already strictly ascending vector.
    pub(crate) fn from_sorted(items: Vec<Item>) -> Self {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        Itemset(items)
    }

    pub fn items(&self) -> &[Item] {
        &self.0
    }

    pub fn ids(&self) -> impl DoubleEndedIterator<Item = u32> + ExactSizeIterator + '_ {
        self.0.iter().map(|a| a.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: Item) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    pub fn into_vec(self) -> Vec<Item> {
        self.0
    }
}

impl FromIterator<Item> for Itemset {
    fn from_iter<I: IntoIterator<Item = Item>>(iter: I) -> Self {
        Itemset::new(iter.into_iter().collect())
    }
}

impl fmt::Display for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub tid: Tid,
    pub itemset: Itemset,
}

impl Transaction {
    pub fn new(tid: Tid, itemset: Itemset) -> Self {
        Transaction { tid, itemset }
    }
}

/// Maps raw input tokens to dense [`Item`] codes in first-seen order and
/// back.
#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    codes: BTreeMap<String, Item>,
    tokens: Vec<String>,
}

impl Dictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, token: &str) -> Item {
        if let Some(&a) = self.codes.get(token) {
            return a;
        }
        let a = Item(self.tokens.len() as u32);
        self.codes.insert(token.to_string(), a);
        self.tokens.push(token.to_string());
        a
    }

    pub fn get(&self, token: &str) -> Option<Item> {
        self.codes.get(token).copied()
    }

    pub fn token(&self, a: Item) -> Option<&str> {
        self.tokens.get(a.index()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Interns every token and returns the canonical itemset.
    pub fn itemset<'a, I: IntoIterator<Item = &'a str>>(&mut self, tokens: I) -> Itemset {
        tokens.into_iter().map(|t| self.intern(t)).collect()
    }
}

/// Size recorded for the sentinel CI, standing in for "every item".
pub const SENTINEL_SIZE: u32 = u32::MAX;

/// Bookkeeping for one closed itemset. The itemset itself lives only in the
/// inverted index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CiRecord {
    pub support: u32,
    pub size: u32,
    pub(crate) last: NodeId,
    pub(crate) stamp: u64,
    pub(crate) live: bool,
}

impl CiRecord {
    fn new(support: u32, size: u32) -> Self {
        CiRecord {
            support,
            size,
            last: NodeId::ROOT,
            stamp: 0,
            live: true,
        }
    }

    pub fn is_live(&self) -> bool {
        self.live
    }
}

/// CI records indexed by id, plus the shift stamp that validates each
/// record's trie cursor.
///
/// Ids are never recycled. Removed records stay behind as tombstones so the
/// cursor of a CI removed during the current shift can still be inspected.
#[derive(Debug, Clone)]
pub struct CiStore {
    records: Vec<CiRecord>,
    live: usize,
    shift: u64,
}

impl Default for CiStore {
    fn default() -> Self {
        Self::new()
    }
}

impl CiStore {
    pub fn new() -> Self {
        CiStore {
            records: vec![CiRecord::new(0, SENTINEL_SIZE)],
            live: 0,
            shift: 1,
        }
    }

    pub fn get(&self, c: CiId) -> Option<&CiRecord> {
        self.records.get(c.index()).filter(|r| r.live)
    }

    pub(crate) fn record_mut(&mut self, c: CiId) -> &mut CiRecord {
        &mut self.records[c.index()]
    }

    pub(crate) fn record(&self, c: CiId) -> &CiRecord {
        &self.records[c.index()]
    }

    /// Number of live CIs, the sentinel excluded.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Id the next allocated CI will receive.
    pub fn next_id(&self) -> CiId {
        CiId(self.records.len() as u32)
    }

    pub fn shift_counter(&self) -> u64 {
        self.shift
    }

    /// Invalidates every trie cursor at once.
    pub(crate) fn advance_shift(&mut self) -> u64 {
        self.shift += 1;
        self.shift
    }

    pub(crate) fn allocate(&mut self, support: u32, size: u32) -> CiId {
        let id = self.next_id();
        self.records.push(CiRecord::new(support, size));
        self.live += 1;
        id
    }

    pub(crate) fn kill(&mut self, c: CiId) {
        let rec = &mut self.records[c.index()];
        debug_assert!(rec.live && c != CiId::SENTINEL);
        rec.live = false;
        self.live -= 1;
    }

    /// Trie cursor of `c` for the current shift, if it was set during this
    /// shift. Also answers for CIs removed during the current shift.
    pub fn last(&self, c: CiId) -> Option<NodeId> {
        self.records
            .get(c.index())
            .filter(|r| r.stamp == self.shift)
            .map(|r| r.last)
    }

    /// Ids of live CIs in ascending order, sentinel excluded.
    pub fn live_ids(&self) -> impl Iterator<Item = CiId> + '_ {
        self.records
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, r)| r.live)
            .map(|(i, _)| CiId(i as u32))
    }
}

/// Item to CI-id lists. The sentinel CI is an implicit member of every list
/// and is not stored.
#[derive(Debug, Clone, Default)]
pub struct InvertedIndex {
    lists: Vec<Vec<CiId>>,
    entries: usize,
}

impl InvertedIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn list(&self, a: Item) -> &[CiId] {
        self.lists.get(a.index()).map_or(&[], Vec::as_slice)
    }

    /// Total number of list entries.
    pub fn entries(&self) -> usize {
        self.entries
    }

    /// Number of item slots allocated so far.
    pub fn item_slots(&self) -> usize {
        self.lists.len()
    }

    pub(crate) fn insert(&mut self, a: Item, c: CiId) {
        if self.lists.len() <= a.index() {
            self.lists.resize_with(a.index() + 1, Vec::new);
        }
        self.lists[a.index()].push(c);
        self.entries += 1;
    }

    /// Swap-with-last deletion; lists carry no order.
    pub(crate) fn remove(&mut self, a: Item, c: CiId) -> Result<(), Error> {
        let list = self
            .lists
            .get_mut(a.index())
            .ok_or(Error::Invariant("removing from an unknown item list"))?;
        let pos = list.iter().position(|&x| x == c).ok_or(Error::Invariant(
            "CI missing from the list of one of its items",
        ))?;
        list.swap_remove(pos);
        self.entries -= 1;
        Ok(())
    }

    pub(crate) fn lists(&self) -> impl Iterator<Item = (Item, &[CiId])> {
        self.lists
            .iter()
            .enumerate()
            .map(|(i, l)| (Item(i as u32), l.as_slice()))
    }
}

/// Rebuilds the itemset of a live CI from the inverted index.
pub fn materialize_itemset(
    store: &CiStore,
    index: &InvertedIndex,
    c: CiId,
) -> Result<Itemset, Error> {
    if c == CiId::SENTINEL {
        return Err(Error::Contract(
            "the sentinel CI has no materializable itemset",
        ));
    }
    let rec = store.get(c).ok_or(Error::UnknownCi(c))?;
    let items: Vec<Item> = index
        .lists()
        .filter(|(_, l)| l.contains(&c))
        .map(|(a, _)| a)
        .collect();
    if items.len() != rec.size as usize {
        return Err(Error::Invariant(
            "inverted index disagrees with the recorded CI size",
        ));
    }
    Ok(Itemset::from_sorted(items))
}

/// Materializes every live CI in one pass over the index, keyed by id.
pub(crate) fn materialize_all(store: &CiStore, index: &InvertedIndex) -> BTreeMap<CiId, Itemset> {
    let mut sets: BTreeMap<CiId, Vec<Item>> = store.live_ids().map(|c| (c, Vec::new())).collect();
    for (a, list) in index.lists() {
        for c in list {
            if let Some(v) = sets.get_mut(c) {
                v.push(a);
            }
        }
    }
    sets.into_iter()
        .map(|(c, v)| (c, Itemset::from_sorted(v)))
        .collect()
}

/// All live CIs with `support >= min_supp`, lexicographically ordered by
/// itemset.
pub fn snapshot(store: &CiStore, index: &InvertedIndex, min_supp: u32) -> Vec<(Itemset, u32)> {
    let mut out: Vec<(Itemset, u32)> = materialize_all(store, index)
        .into_iter()
        .filter_map(|(c, x)| {
            let s = store.record(c).support;
            (s >= min_supp).then_some((x, s))
        })
        .collect();
    out.sort_unstable();
    out
}
