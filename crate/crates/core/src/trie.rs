//! Per-shift intersection trie.
//!
//! Every CI touched by a shift owns a cursor (`last`) into this trie that
//! walks one node down per shared item. Nodes record how many cursors
//! currently rest on them (`cpt`), which arriving CIs carried the highest
//! support (`min`) and, when removing, which carried one less (`gen`). The
//! trie is rebuilt on every shift; the node arena keeps its capacity.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::Error;
use crate::model::{CiId, Item, Itemset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);
    const NONE: NodeId = NodeId(u32::MAX);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Which shift the trie serves; selects the `gen` bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Increment,
    Decrement,
}

/// Initial `max_supp`: far enough below zero that the first arrival always
/// lands in the flushing branch of the decrement update.
pub const UNSET_MAX_SUPP: i64 = -2;

#[derive(Debug, Clone)]
pub struct TrieNode {
    item: Item,
    parent: NodeId,
    first_child: NodeId,
    next_sibling: NodeId,
    depth: u32,
    pub(crate) cpt: i32,
    pub(crate) max_supp: i64,
    pub(crate) min: Vec<CiId>,
    pub(crate) gen: Vec<CiId>,
}

impl TrieNode {
    fn blank() -> Self {
        TrieNode {
            item: Item(u32::MAX),
            parent: NodeId::NONE,
            first_child: NodeId::NONE,
            next_sibling: NodeId::NONE,
            depth: 0,
            cpt: 0,
            max_supp: UNSET_MAX_SUPP,
            min: Vec::new(),
            gen: Vec::new(),
        }
    }

    fn reset(&mut self, item: Item, parent: NodeId, depth: u32) {
        self.item = item;
        self.parent = parent;
        self.first_child = NodeId::NONE;
        self.next_sibling = NodeId::NONE;
        self.depth = depth;
        self.cpt = 0;
        self.max_supp = UNSET_MAX_SUPP;
        self.min.clear();
        self.gen.clear();
    }

    /// Item carried by the node; `None` for the root.
    pub fn item(&self) -> Option<Item> {
        (self.depth > 0).then_some(self.item)
    }

    pub fn parent(&self) -> Option<NodeId> {
        (self.parent != NodeId::NONE).then_some(self.parent)
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn cpt(&self) -> i32 {
        self.cpt
    }

    pub fn max_supp(&self) -> i64 {
        self.max_supp
    }

    pub fn min(&self) -> &[CiId] {
        &self.min
    }

    pub fn gen(&self) -> &[CiId] {
        &self.gen
    }

    /// Increment update: keep the strictly best-supported arrival.
    pub fn update_gen_inc(&mut self, c: CiId, support: u32) {
        let s = i64::from(support);
        if s > self.max_supp {
            self.min.clear();
            self.min.push(c);
            self.max_supp = s;
        }
        debug_assert!(self.min.len() <= 1);
    }

    /// Decrement update: track the best-supported arrivals in `min` and the
    /// arrivals one unit below them in `gen`.
    pub fn update_gen_dec(&mut self, c: CiId, support: u32) {
        let s = i64::from(support);
        match s - self.max_supp {
            d if d >= 2 => {
                self.min.clear();
                self.min.push(c);
                self.gen.clear();
            }
            1 => {
                core::mem::swap(&mut self.gen, &mut self.min);
                self.min.clear();
                self.min.push(c);
            }
            0 => self.min.push(c),
            -1 => self.gen.push(c),
            _ => {}
        }
        self.max_supp = self.max_supp.max(s);
    }
}

#[derive(Debug, Clone)]
pub struct Trie {
    nodes: Vec<TrieNode>,
    len: usize,
    mode: Mode,
}

impl Trie {
    pub fn new(mode: Mode) -> Self {
        let mut root = TrieNode::blank();
        root.reset(Item(u32::MAX), NodeId::NONE, 0);
        Trie {
            nodes: alloc::vec![root],
            len: 1,
            mode,
        }
    }

    /// Drops every node but a fresh root. Allocations are kept.
    pub fn init(&mut self, mode: Mode) {
        self.mode = mode;
        self.len = 1;
        self.nodes[0].reset(Item(u32::MAX), NodeId::NONE, 0);
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn root(&self) -> NodeId {
        NodeId::ROOT
    }

    /// Number of nodes, root included.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 1
    }

    pub fn node(&self, n: NodeId) -> &TrieNode {
        debug_assert!(n.index() < self.len);
        &self.nodes[n.index()]
    }

    pub(crate) fn node_mut(&mut self, n: NodeId) -> &mut TrieNode {
        debug_assert!(n.index() < self.len);
        &mut self.nodes[n.index()]
    }

    pub fn children(&self, n: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let mut cur = self.node(n).first_child;
        core::iter::from_fn(move || {
            if cur == NodeId::NONE {
                return None;
            }
            let here = cur;
            cur = self.nodes[here.index()].next_sibling;
            Some(here)
        })
    }

    pub fn lookup_succ(&self, n: NodeId, a: Item) -> Option<NodeId> {
        self.children(n)
            .find(|&ch| self.nodes[ch.index()].item == a)
    }

    pub fn create_succ(&mut self, n: NodeId, a: Item) -> Result<NodeId, Error> {
        if self.lookup_succ(n, a).is_some() {
            return Err(Error::Invariant(
                "trie node already has a successor for this item",
            ));
        }
        Ok(self.push_child(n, a))
    }

    /// Successor of `n` for the item currently being processed, created on
    /// demand.
    ///
    /// Items are processed one at a time and each only once per shift, so all
    /// children carrying the current item are created during its iteration
    /// and the newest child of `n` is the only candidate.
    #[inline]
    pub(crate) fn succ_for_current_item(&mut self, n: NodeId, a: Item) -> NodeId {
        let first = self.nodes[n.index()].first_child;
        if first != NodeId::NONE && self.nodes[first.index()].item == a {
            return first;
        }
        debug_assert!(self.lookup_succ(n, a).is_none());
        self.push_child(n, a)
    }

    fn push_child(&mut self, parent: NodeId, a: Item) -> NodeId {
        let id = NodeId(self.len as u32);
        let depth = self.nodes[parent.index()].depth + 1;
        if self.len == self.nodes.len() {
            self.nodes.push(TrieNode::blank());
        }
        let sibling = self.nodes[parent.index()].first_child;
        let node = &mut self.nodes[id.index()];
        node.reset(a, parent, depth);
        node.next_sibling = sibling;
        self.nodes[parent.index()].first_child = id;
        self.len += 1;
        id
    }

    /// Items on the root-to-`n` path, ascending.
    pub fn path(&self, n: NodeId) -> Result<Itemset, Error> {
        if n == NodeId::ROOT {
            return Err(Error::Contract("the root has no path"));
        }
        let mut items = Vec::with_capacity(self.node(n).depth as usize);
        let mut cur = n;
        while cur != NodeId::ROOT {
            let node = self.node(cur);
            items.push(node.item);
            cur = node.parent;
        }
        Ok(Itemset::new(items))
    }

    /// Nodes where at least one cursor rests, in creation order.
    pub fn end_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (1..self.len)
            .map(|i| NodeId(i as u32))
            .filter(|&n| self.nodes[n.index()].cpt > 0)
    }

    /// Pre-order dump, children in ascending item order, one line per node:
    /// `depth item cpt max_supp min={ids} gen={ids}`. The root prints `-` as
    /// its item.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut stack = alloc::vec![NodeId::ROOT];
        while let Some(n) = stack.pop() {
            let node = self.node(n);
            let item = match node.item() {
                Some(a) => alloc::format!("{a}"),
                None => String::from("-"),
            };
            let _ = writeln!(
                out,
                "{} {} {} {} min={} gen={}",
                node.depth,
                item,
                node.cpt,
                node.max_supp,
                id_list(&node.min),
                id_list(&node.gen)
            );
            let mut kids: Vec<NodeId> = self.children(n).collect();
            kids.sort_by_key(|&k| core::cmp::Reverse(self.node(k).item));
            stack.extend(kids);
        }
        out
    }
}

fn id_list(ids: &[CiId]) -> String {
    let mut s = String::from("{");
    for (i, c) in ids.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{c}");
    }
    s.push('}');
    s
}
