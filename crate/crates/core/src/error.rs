use core::fmt;

use crate::model::{CiId, Tid};

/// Errors raised by the miner and the window driver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A transaction with this tid is already in the window.
    DuplicateTid(Tid),
    /// The transaction to evict is not in the window.
    NotInWindow(Tid),
    /// The CI id is unknown or the CI has been removed.
    UnknownCi(CiId),
    /// A configuration value is out of range.
    InvalidConfig(&'static str),
    /// An operation was called outside of its contract.
    Contract(&'static str),
    /// Internal bookkeeping is inconsistent. Always a bug.
    Invariant(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DuplicateTid(t) => write!(f, "transaction {t} is already in the window"),
            Error::NotInWindow(t) => write!(f, "transaction {t} is not in the window"),
            Error::UnknownCi(c) => write!(f, "unknown closed itemset {c}"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::Invariant(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
