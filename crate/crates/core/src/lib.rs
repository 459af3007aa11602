//! Closed itemset (CI) mining over a sliding window of transactions.
//!
//! The miner keeps every closed itemset of the current window and updates the
//! family one transaction at a time. Both directions of a window shift share a
//! single computing schema: the incoming (or outgoing) transaction is
//! intersected with every stored CI by growing the intersections item by item
//! in a per-shift trie, reached through per-item inverted lists. The end nodes
//! of the trie are exactly the distinct non-empty intersections; each one is
//! then classified as promoted or new (on addition) or as demoted or obsolete
//! (on removal).
//!
//! CI itemsets are never stored as such: the inverted lists are the only
//! persistent record of which items a CI holds.
//!
//! The crate is `no_std` (with `alloc`) so it can be embedded; IO and the
//! command line live in the `cistream` crate.
//!
//! ```
//! use cistream_core::{Itemset, Window, WindowConfig};
//!
//! let mut window = Window::new(WindowConfig::sliding(2, 1).unwrap());
//! for t in [[0, 1, 2].as_slice(), &[1, 2], &[2, 3]] {
//!     window.push(Itemset::from_ids(t.iter().copied())).unwrap();
//! }
//! let family: Vec<_> = window
//!     .snapshot()
//!     .into_iter()
//!     .map(|(x, s)| (x.ids().collect::<Vec<_>>(), s))
//!     .collect();
//! assert_eq!(family, vec![(vec![1, 2], 1), (vec![2], 2), (vec![2, 3], 1)]);
//! ```

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;
pub mod miner;
pub mod model;
pub mod oracle;
pub mod trie;
pub mod window;

pub use error::Error;
pub use miner::{Footprint, ItemOrder, Miner, NewCi, ShiftCounters, ShiftKind, ShiftReport};
pub use model::{
    CiId, CiRecord, CiStore, Dictionary, InvertedIndex, Item, Itemset, Tid, Transaction,
};
pub use trie::{Mode, NodeId, Trie, TrieNode};
pub use window::{PushOutcome, Replay, ReplayStep, StepStats, Window, WindowConfig, WindowMode};
