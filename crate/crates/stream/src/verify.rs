//! Sliding-window replay with the brute-force oracle recomputing the CI
//! family after every shift.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use cistream_core::oracle::{self, Dataset, Family, OracleError};
use cistream_core::{Dictionary, Item, Itemset, Miner, ShiftKind, ShiftReport, Tid, Transaction};
use thiserror::Error;

/// Disagreement between the miner and the oracle after one shift.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Divergence {
    pub shift: usize,
    pub removal: bool,
    pub tid: Tid,
    pub transaction: Itemset,
    /// In the oracle family only.
    pub missing: Vec<(Itemset, u32)>,
    /// Reported by the miner only.
    pub extra: Vec<(Itemset, u32)>,
    /// `(itemset, miner, oracle)`.
    pub support: Vec<(Itemset, u32, u32)>,
    /// Report categories that disagree, as `(category, miner, oracle)`.
    pub categories: Vec<(&'static str, BTreeSet<Itemset>, BTreeSet<Itemset>)>,
}

impl Divergence {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty()
            && self.extra.is_empty()
            && self.support.is_empty()
            && self.categories.is_empty()
    }

    /// Human-readable diff using the original tokens.
    pub fn report(&self, dict: &Dictionary) -> String {
        let show = |x: &Itemset| -> String {
            let tokens: Vec<String> = x
                .items()
                .iter()
                .map(|&a: &Item| {
                    dict.token(a)
                        .map_or_else(|| a.0.to_string(), str::to_string)
                })
                .collect();
            format!("{{{}}}", tokens.join(" "))
        };
        let mut s = String::new();
        let op = if self.removal { "removing" } else { "adding" };
        let _ = writeln!(
            s,
            "divergence at shift {} ({op} tid {} = {})",
            self.shift,
            self.tid,
            show(&self.transaction)
        );
        for (x, n) in &self.missing {
            let _ = writeln!(s, "  missing {}:{n}", show(x));
        }
        for (x, n) in &self.extra {
            let _ = writeln!(s, "  extra   {}:{n}", show(x));
        }
        for (x, got, want) in &self.support {
            let _ = writeln!(s, "  support {} miner {got} oracle {want}", show(x));
        }
        for (what, got, want) in &self.categories {
            let list = |xs: &BTreeSet<Itemset>| xs.iter().map(show).collect::<Vec<_>>().join(" ");
            let _ = writeln!(s, "  {what}: miner [{}] oracle [{}]", list(got), list(want));
        }
        s
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("miner and oracle diverge at shift {}", .0.shift)]
    Divergence(Box<Divergence>),
    #[error("oracle exceeded its cap of {0} closed itemsets")]
    CapExceeded(usize),
    #[error(transparent)]
    Oracle(OracleError),
    #[error(transparent)]
    Mining(#[from] cistream_core::Error),
}

impl From<OracleError> for VerifyError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::CapExceeded(n) => VerifyError::CapExceeded(n),
            e => VerifyError::Oracle(e),
        }
    }
}

/// Compares two families row by row.
pub fn diff(miner: &Family, oracle: &Family) -> Divergence {
    let mut d = Divergence::default();
    for (x, &want) in oracle {
        match miner.get(x) {
            None => d.missing.push((x.clone(), want)),
            Some(&got) if got != want => d.support.push((x.clone(), got, want)),
            Some(_) => {}
        }
    }
    d.extra = miner
        .iter()
        .filter(|(x, _)| !oracle.contains_key(*x))
        .map(|(x, &s)| (x.clone(), s))
        .collect();
    d
}

#[derive(Debug)]
pub struct Verifier {
    miner: Miner,
    window: VecDeque<Transaction>,
    capacity: usize,
    cap: usize,
    dataset: Dataset,
    family: Family,
    next_tid: u64,
    shifts: usize,
}

impl Verifier {
    pub fn new(capacity: usize, cap: usize) -> Result<Self, cistream_core::Error> {
        if capacity == 0 {
            return Err(cistream_core::Error::InvalidConfig(
                "window capacity must be at least 1",
            ));
        }
        Ok(Verifier {
            miner: Miner::new(),
            window: VecDeque::new(),
            capacity,
            cap,
            dataset: Dataset::new(),
            family: Family::new(),
            next_tid: 1,
            shifts: 0,
        })
    }

    pub fn miner(&self) -> &Miner {
        &self.miner
    }

    /// Oracle family of the current window.
    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Shifts verified so far, removals included.
    pub fn shifts(&self) -> usize {
        self.shifts
    }

    pub fn push(&mut self, itemset: Itemset) -> Result<(), VerifyError> {
        if self.window.len() >= self.capacity {
            if let Some(old) = self.window.pop_front() {
                self.shift(&old, ShiftKind::Remove)?;
            }
        }
        let t = Transaction::new(Tid(self.next_tid), itemset);
        self.next_tid += 1;
        self.shift(&t, ShiftKind::Add)?;
        self.window.push_back(t);
        Ok(())
    }

    fn shift(&mut self, t: &Transaction, kind: ShiftKind) -> Result<(), VerifyError> {
        let pre: BTreeMap<_, _> = self
            .miner
            .live_cis()
            .into_iter()
            .map(|(c, x, _)| (c, x))
            .collect();
        self.shifts += 1;
        let (report, expected) = match kind {
            ShiftKind::Add => {
                let cls = oracle::classify_increment_with(&self.dataset, &self.family, &t.itemset)?;
                let r = self.miner.shift_add(t)?;
                self.dataset.insert(t.tid, t.itemset.clone());
                (r, [("new", cls.new), ("promoted", cls.promoted)])
            }
            ShiftKind::Remove => {
                let cls = oracle::classify_decrement_with(&self.dataset, &self.family, t.tid)?;
                let r = self.miner.shift_remove(t)?;
                self.dataset.remove(&t.tid);
                (r, [("obsolete", cls.obsolete), ("demoted", cls.demoted)])
            }
        };
        self.family = oracle::all_cis_capped(&self.dataset, self.cap)?;
        let got: Family = self.miner.snapshot(1).into_iter().collect();
        let mut d = diff(&got, &self.family);
        for ((what, want), have) in expected.into_iter().zip(observed(&report, &pre)) {
            if have != want {
                d.categories.push((what, have, want));
            }
        }
        if d.is_empty() {
            return Ok(());
        }
        d.shift = self.shifts;
        d.removal = kind == ShiftKind::Remove;
        d.tid = t.tid;
        d.transaction = t.itemset.clone();
        Err(VerifyError::Divergence(Box::new(d)))
    }
}

fn observed(
    r: &ShiftReport,
    pre: &BTreeMap<cistream_core::CiId, Itemset>,
) -> [BTreeSet<Itemset>; 2] {
    let named =
        |ids: &[cistream_core::CiId]| ids.iter().filter_map(|c| pre.get(c).cloned()).collect();
    match r.kind {
        ShiftKind::Add => [
            r.new_cis.iter().map(|n| n.itemset.clone()).collect(),
            named(&r.promoted),
        ],
        ShiftKind::Remove => [
            r.obsolete.iter().map(|(_, x)| x.clone()).collect(),
            named(&r.demoted),
        ],
    }
}
