//! Brute-force referee over an explicit transaction database.
//!
//! Everything here is computed directly from tidsets and set intersections,
//! independently of the miner. It is meant for small datasets: tests, the
//! `verify` command and golden values.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::model::{Item, Itemset, Tid};

pub type Dataset = BTreeMap<Tid, Itemset>;
pub type Tidset = BTreeSet<Tid>;

/// The CI family of a dataset: itemset to support.
pub type Family = BTreeMap<Itemset, u32>;

pub const DEFAULT_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    UnknownTid(Tid),
    /// The itemset is not contained in any transaction.
    NoClosure,
    /// The closed family grew past the configured cap.
    CapExceeded(usize),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::UnknownTid(t) => write!(f, "transaction {t} is not in the dataset"),
            OracleError::NoClosure => f.write_str("itemset has zero support and no closure"),
            OracleError::CapExceeded(cap) => {
                write!(f, "closed itemset count exceeds the oracle cap of {cap}")
            }
        }
    }
}

impl core::error::Error for OracleError {}

fn subset(x: &[Item], z: &[Item]) -> bool {
    let mut zi = z.iter();
    x.iter().all(|a| zi.any(|b| b == a))
}

fn meet(x: &[Item], z: &[Item]) -> Vec<Item> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < x.len() && j < z.len() {
        match x[i].cmp(&z[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(x[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn meet_sets(x: &Itemset, z: &Itemset) -> Itemset {
    Itemset::new(meet(x.items(), z.items()))
}

/// Tids of the transactions containing `x`.
pub fn tau(d: &Dataset, x: &Itemset) -> Tidset {
    d.iter()
        .filter(|(_, z)| subset(x.items(), z.items()))
        .map(|(&j, _)| j)
        .collect()
}

pub fn support(d: &Dataset, x: &Itemset) -> u32 {
    d.values().filter(|z| subset(x.items(), z.items())).count() as u32
}

/// Items shared by every transaction of `y`. An empty `y` yields the union
/// of all items of `d`, the only universe the dataset knows.
pub fn iota(d: &Dataset, y: &Tidset) -> Result<Itemset, OracleError> {
    let mut acc: Option<Itemset> = None;
    for j in y {
        let z = d.get(j).ok_or(OracleError::UnknownTid(*j))?;
        acc = Some(match acc {
            None => z.clone(),
            Some(a) => meet_sets(&a, z),
        });
    }
    Ok(acc.unwrap_or_else(|| d.values().flat_map(|z| z.items().iter().copied()).collect()))
}

/// Largest itemset with the same support set as `x`.
pub fn closure(d: &Dataset, x: &Itemset) -> Result<Itemset, OracleError> {
    let y = tau(d, x);
    if y.is_empty() {
        return Err(OracleError::NoClosure);
    }
    iota(d, &y)
}

pub fn is_closed(d: &Dataset, x: &Itemset) -> bool {
    closure(d, x).is_ok_and(|c| &c == x)
}

/// All non-empty closed itemsets of `d` with their supports, capped at
/// [`DEFAULT_CAP`].
pub fn all_cis(d: &Dataset) -> Result<Family, OracleError> {
    all_cis_capped(d, DEFAULT_CAP)
}

/// Saturates the transaction itemsets under pairwise intersection, adding
/// one transaction at a time, then counts supports by scanning `d`.
pub fn all_cis_capped(d: &Dataset, cap: usize) -> Result<Family, OracleError> {
    let mut closed: BTreeSet<Itemset> = BTreeSet::new();
    for t in d.values() {
        if t.is_empty() {
            continue;
        }
        let fresh: Vec<Itemset> = closed
            .iter()
            .map(|c| meet_sets(c, t))
            .filter(|x| !x.is_empty())
            .collect();
        closed.insert(t.clone());
        closed.extend(fresh);
        if closed.len() > cap {
            return Err(OracleError::CapExceeded(cap));
        }
    }
    Ok(closed
        .into_iter()
        .map(|x| {
            let s = support(d, &x);
            (x, s)
        })
        .collect())
}

/// Distinct non-empty intersections of `t` with the CIs of `d`, the full
/// `t` included (intersection with the sentinel CI that holds every item).
pub fn delta(family: &Family, t: &Itemset) -> BTreeSet<Itemset> {
    let mut out: BTreeSet<Itemset> = family
        .keys()
        .map(|c| meet_sets(c, t))
        .filter(|x| !x.is_empty())
        .collect();
    if !t.is_empty() {
        out.insert(t.clone());
    }
    out
}

/// Effect of adding a transaction, per the definitions of promoted and new
/// CIs. `genitors` maps each new itemset to its closure in `d`, or to `None`
/// when it has no support in `d` (the sentinel CI generates it).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IncrementClasses {
    pub new: BTreeSet<Itemset>,
    pub promoted: BTreeSet<Itemset>,
    pub genitors: BTreeMap<Itemset, Option<Itemset>>,
}

pub fn classify_increment(d: &Dataset, t_n: &Itemset) -> Result<IncrementClasses, OracleError> {
    classify_increment_with(d, &all_cis(d)?, t_n)
}

/// [`classify_increment`] with `family = all_cis(d)` already computed.
pub fn classify_increment_with(
    d: &Dataset,
    family: &Family,
    t_n: &Itemset,
) -> Result<IncrementClasses, OracleError> {
    let mut out = IncrementClasses::default();
    for x in delta(family, t_n) {
        if family.contains_key(&x) {
            out.promoted.insert(x);
        } else {
            let g = match closure(d, &x) {
                Ok(c) => Some(c),
                Err(OracleError::NoClosure) => None,
                Err(e) => return Err(e),
            };
            out.genitors.insert(x.clone(), g);
            out.new.insert(x);
        }
    }
    Ok(out)
}

/// Effect of removing transaction `t_o` from `d`. A CI contained in `t_o` is
/// obsolete iff some CI of `d` (or the sentinel, at support 0) meets `t_o`
/// exactly in it with one unit less support; that CI is its genitor.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecrementClasses {
    pub obsolete: BTreeSet<Itemset>,
    pub demoted: BTreeSet<Itemset>,
    pub genitors: BTreeMap<Itemset, Option<Itemset>>,
}

pub fn classify_decrement(d: &Dataset, t_o: Tid) -> Result<DecrementClasses, OracleError> {
    classify_decrement_with(d, &all_cis(d)?, t_o)
}

/// [`classify_decrement`] with `family = all_cis(d)` already computed.
pub fn classify_decrement_with(
    d: &Dataset,
    family: &Family,
    t_o: Tid,
) -> Result<DecrementClasses, OracleError> {
    let t = d.get(&t_o).ok_or(OracleError::UnknownTid(t_o))?;
    let mut out = DecrementClasses::default();
    for (c, &s) in family.iter().filter(|(c, _)| subset(c.items(), t.items())) {
        let witness = family
            .iter()
            .find(|(g, &sg)| sg + 1 == s && &meet_sets(g, t) == c)
            .map(|(g, _)| Some(g.clone()))
            .or((s == 1).then_some(None));
        match witness {
            Some(g) => {
                out.genitors.insert(c.clone(), g);
                out.obsolete.insert(c.clone());
            }
            None => {
                out.demoted.insert(c.clone());
            }
        }
    }
    Ok(out)
}
