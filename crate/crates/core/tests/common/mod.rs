#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use cistream_core::oracle::{self, Dataset, Family, OracleError};
use cistream_core::{
    CiId, ItemOrder, Itemset, Miner, NodeId, ShiftKind, ShiftReport, Tid, Transaction,
};
use rand::Rng;

/// Letters a..h as ids 0..7.
pub fn set(s: &str) -> Itemset {
    Itemset::from_ids(s.bytes().map(|b| u32::from(b - b'a')))
}

pub fn name(x: &Itemset) -> String {
    x.ids().map(|i| char::from(b'a' + i as u8)).collect()
}

pub const SAMPLE: [&str; 10] = [
    "abcdefgh", "abcef", "cdfgh", "efgh", "g", "efh", "abcd", "bcd", "d", "bcgh",
];

pub const CIS_TEN: [(&str, u32); 22] = [
    ("abcdefgh", 1),
    ("abcef", 2),
    ("cf", 3),
    ("cdfgh", 2),
    ("f", 5),
    ("ef", 4),
    ("fgh", 3),
    ("efgh", 2),
    ("g", 5),
    ("fh", 4),
    ("efh", 3),
    ("c", 6),
    ("cd", 4),
    ("abc", 3),
    ("abcd", 2),
    ("bc", 5),
    ("bcd", 3),
    ("d", 5),
    ("h", 5),
    ("gh", 4),
    ("cgh", 3),
    ("bcgh", 2),
];

pub const CIS_NINE: [(&str, u32); 18] = [
    ("abcdefgh", 1),
    ("abcef", 2),
    ("cf", 3),
    ("cdfgh", 2),
    ("f", 5),
    ("ef", 4),
    ("fgh", 3),
    ("efgh", 2),
    ("g", 4),
    ("fh", 4),
    ("efh", 3),
    ("c", 5),
    ("cd", 4),
    ("abc", 3),
    ("abcd", 2),
    ("bc", 4),
    ("bcd", 3),
    ("d", 5),
];

pub fn table(rows: &[(&str, u32)]) -> Family {
    rows.iter().map(|&(x, s)| (set(x), s)).collect()
}

pub fn tx(tid: u64) -> Transaction {
    Transaction::new(Tid(tid), set(SAMPLE[tid as usize - 1]))
}

pub fn family(snapshot: Vec<(Itemset, u32)>) -> Family {
    snapshot.into_iter().collect()
}

pub fn names<'a>(xs: impl IntoIterator<Item = &'a Itemset>) -> Vec<String> {
    let mut v: Vec<String> = xs.into_iter().map(name).collect();
    v.sort();
    v
}

/// Random transactions over `alphabet` items with lengths in `len`.
pub fn random_stream<R: Rng>(
    rng: &mut R,
    alphabet: u32,
    len: std::ops::RangeInclusive<usize>,
    count: usize,
) -> Vec<Itemset> {
    (0..count)
        .map(|_| {
            let k = rng.gen_range(len.clone()).min(alphabet as usize);
            let mut items = BTreeSet::new();
            while items.len() < k {
                items.insert(rng.gen_range(0..alphabet));
            }
            Itemset::from_ids(items)
        })
        .collect()
}

/// Which family of checks a harness failure belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    /// CI family, supports, report categories.
    Oracle,
    /// End nodes, minimal CIs, gen witnesses.
    Properties,
    /// Node and scan counters.
    Work,
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub check: Check,
    pub msg: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}: {}", self.check, self.msg)
    }
}

fn tag(check: Check) -> impl FnOnce(String) -> Violation {
    move |msg| Violation { check, msg }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Tally {
    pub shifts: usize,
    pub property_checks: usize,
}

/// Drives a [`Miner`] over a sliding window and, on every shift, checks the
/// result against the oracle: family and supports, report categories, trie
/// end nodes, minimal CIs, gen witnesses and work counters.
pub struct Harness {
    pub miner: Miner,
    pub window: VecDeque<Transaction>,
    pub capacity: usize,
    next_tid: u64,
    dataset: Dataset,
    family: Family,
    k_max: usize,
    l_max: usize,
    pub tally: Tally,
    pub check_trie: bool,
}

impl Harness {
    pub fn new(capacity: usize, order: ItemOrder) -> Self {
        Harness {
            miner: Miner::new().with_item_order(order),
            window: VecDeque::new(),
            capacity,
            next_tid: 1,
            dataset: Dataset::new(),
            family: Family::new(),
            k_max: 0,
            l_max: 0,
            tally: Tally::default(),
            check_trie: true,
        }
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn push(&mut self, itemset: Itemset) -> Result<(), Violation> {
        if self.window.len() >= self.capacity {
            let old = self.window.pop_front().unwrap();
            self.shift(old, ShiftKind::Remove)?;
        }
        let t = Transaction::new(Tid(self.next_tid), itemset);
        self.next_tid += 1;
        self.window.push_back(t.clone());
        self.shift(t, ShiftKind::Add)
    }

    pub fn shift(&mut self, t: Transaction, kind: ShiftKind) -> Result<(), Violation> {
        let pre_cis: BTreeMap<CiId, Itemset> = self
            .miner
            .live_cis()
            .into_iter()
            .map(|(c, x, _)| (c, x))
            .collect();
        let pre_lists: usize = t
            .itemset
            .items()
            .iter()
            .map(|&a| self.miner.index().list(a).len())
            .sum();
        let pre_data = self.dataset.clone();
        let pre_family = self.family.clone();
        self.k_max = self.k_max.max(t.itemset.len());

        let report = match kind {
            ShiftKind::Add => {
                let r = self.miner.shift_add(&t).map_err(|e| Violation {
                    check: Check::Oracle,
                    msg: e.to_string(),
                })?;
                self.dataset.insert(t.tid, t.itemset.clone());
                r
            }
            ShiftKind::Remove => {
                let r = self.miner.shift_remove(&t).map_err(|e| Violation {
                    check: Check::Oracle,
                    msg: e.to_string(),
                })?;
                self.dataset.remove(&t.tid);
                r
            }
        };
        self.family = oracle::all_cis(&self.dataset).map_err(|e| Violation {
            check: Check::Oracle,
            msg: e.to_string(),
        })?;
        self.l_max = self.l_max.max(pre_cis.len()).max(self.miner.len());
        self.tally.shifts += 1;

        let got = family(self.miner.snapshot(1));
        if got != self.family {
            return Err(Violation {
                check: Check::Oracle,
                msg: format!(
                    "family diverges after {:?} of {} {}: miner {} CIs, oracle {} CIs",
                    kind,
                    t.tid,
                    t.itemset,
                    got.len(),
                    self.family.len()
                ),
            });
        }
        self.miner
            .verify_index()
            .map_err(|e| e.to_string())
            .map_err(tag(Check::Oracle))?;
        check_categories(&pre_data, &pre_family, &t, &report, &pre_cis, &self.miner)
            .map_err(tag(Check::Oracle))?;
        if t.itemset.is_empty() {
            return Ok(());
        }
        self.check_work(&t, &report, pre_lists)
            .map_err(tag(Check::Work))?;
        if self.check_trie {
            check_trie(&pre_data, &pre_family, &pre_cis, &t, kind, &self.miner)
                .map_err(tag(Check::Properties))?;
            self.tally.property_checks += 1;
        }
        Ok(())
    }

    fn check_work(
        &self,
        t: &Transaction,
        report: &ShiftReport,
        pre_lists: usize,
    ) -> Result<(), String> {
        let c = report.counters;
        if c.entries_scanned != pre_lists + t.itemset.len() {
            return Err(format!(
                "entries scanned {} != {}",
                c.entries_scanned,
                pre_lists + t.itemset.len()
            ));
        }
        let nodes = self.miner.trie().len();
        if nodes > self.k_max * self.l_max + t.itemset.len() + 1 || c.trie_nodes + 1 != nodes {
            return Err(format!("trie has {nodes} nodes, bound exceeded"));
        }
        if c.trie_nodes > c.entries_scanned {
            return Err("more nodes created than entries scanned".into());
        }
        Ok(())
    }
}

fn check_categories(
    d: &Dataset,
    pre_family: &Family,
    t: &Transaction,
    report: &ShiftReport,
    pre_cis: &BTreeMap<CiId, Itemset>,
    miner: &Miner,
) -> Result<(), String> {
    let delta = oracle::delta(pre_family, &t.itemset);
    if report.intersections() != delta.len() {
        return Err(format!(
            "report covers {} intersections, oracle {}",
            report.intersections(),
            delta.len()
        ));
    }
    match report.kind {
        ShiftKind::Add => {
            let cls = oracle::classify_increment_with(d, pre_family, &t.itemset)
                .map_err(|e| e.to_string())?;
            let new: BTreeSet<Itemset> = report.new_cis.iter().map(|n| n.itemset.clone()).collect();
            let promoted: BTreeSet<Itemset> =
                report.promoted.iter().map(|c| pre_cis[c].clone()).collect();
            if new != cls.new || promoted != cls.promoted {
                return Err("increment categories disagree with the oracle".into());
            }
            for n in &report.new_cis {
                let g = match &cls.genitors[&n.itemset] {
                    Some(g) => pre_family[g],
                    None => 0,
                };
                if n.support != g + 1 {
                    return Err(format!(
                        "new CI {} has support {}, genitor {}",
                        n.itemset, n.support, g
                    ));
                }
                if miner.store().get(n.id).map(|r| r.support) != Some(n.support) {
                    return Err("new CI record missing".into());
                }
            }
        }
        ShiftKind::Remove => {
            let cls =
                oracle::classify_decrement_with(d, pre_family, t.tid).map_err(|e| e.to_string())?;
            let obsolete: BTreeSet<Itemset> =
                report.obsolete.iter().map(|(_, x)| x.clone()).collect();
            let demoted: BTreeSet<Itemset> =
                report.demoted.iter().map(|c| pre_cis[c].clone()).collect();
            if obsolete != cls.obsolete || demoted != cls.demoted {
                return Err(format!(
                    "decrement categories disagree: miner obsolete {:?} demoted {:?}, oracle {:?} {:?}",
                    obsolete, demoted, cls.obsolete, cls.demoted
                ));
            }
            for (c, x) in &report.obsolete {
                if pre_cis.get(c) != Some(x) {
                    return Err("obsolete id does not match its itemset".into());
                }
            }
        }
    }
    Ok(())
}

fn meet(x: &Itemset, t: &Itemset) -> Itemset {
    x.items()
        .iter()
        .copied()
        .filter(|&a| t.contains(a))
        .collect()
}

/// End-node characterization, minimal CIs and gen witnesses of the final
/// trie of a shift.
fn check_trie(
    d: &Dataset,
    pre_family: &Family,
    pre_cis: &BTreeMap<CiId, Itemset>,
    t: &Transaction,
    kind: ShiftKind,
    miner: &Miner,
) -> Result<(), String> {
    let trie = miner.trie();
    let ends: Vec<NodeId> = trie.end_nodes().collect();
    let paths: BTreeSet<Itemset> = ends.iter().map(|&n| trie.path(n).unwrap()).collect();
    if paths != oracle::delta(pre_family, &t.itemset) || paths.len() != ends.len() {
        return Err("end nodes differ from the oracle intersections".into());
    }
    // every non-root node lies on the path to some end node
    for i in 1..trie.len() {
        let p = trie.path(NodeId(i as u32)).unwrap();
        if !p.items().iter().all(|&a| t.itemset.contains(a)) {
            return Err("trie path escapes the transaction".into());
        }
        if trie.node(NodeId(i as u32)).cpt() < 0 {
            return Err("negative cursor count".into());
        }
    }
    let itemset_of = |c: CiId| -> Option<&Itemset> { pre_cis.get(&c) };
    for &n in &ends {
        let node = trie.node(n);
        let path = trie.path(n).unwrap();
        let &[m] = node.min() else {
            return Err(format!(
                "end node {path} has {} minimal CIs",
                node.min().len()
            ));
        };
        match oracle::closure(d, &path) {
            Ok(k) => {
                if itemset_of(m) != Some(&k) {
                    return Err(format!("min of {path} is not its closure {k}"));
                }
            }
            Err(OracleError::NoClosure) => {
                if m != CiId::SENTINEL {
                    return Err(format!(
                        "unsupported {path} should be generated by the sentinel"
                    ));
                }
            }
            Err(e) => return Err(e.to_string()),
        }
        if kind == ShiftKind::Remove {
            let resting: Vec<CiId> = node
                .gen()
                .iter()
                .copied()
                .filter(|&g| miner.store().last(g) == Some(n))
                .collect();
            if resting.len() > 1 {
                return Err(format!(
                    "gen of {path} holds {} resting witnesses",
                    resting.len()
                ));
            }
            for &g in node.gen() {
                let in_class = match itemset_of(g) {
                    Some(x) => meet(x, &t.itemset) == path,
                    None if g == CiId::SENTINEL => t.itemset == path,
                    None => return Err("gen names an unknown CI".into()),
                };
                let rests = miner.store().last(g) == Some(n);
                if in_class != rests {
                    return Err(format!(
                        "gen member {g} of {path}: class {in_class}, resting {rests}"
                    ));
                }
                let inside =
                    itemset_of(g).is_some_and(|x| x.items().iter().all(|&a| t.itemset.contains(a)));
                if rests && inside {
                    return Err("resting gen member is contained in the transaction".into());
                }
            }
        }
    }
    // ascending order: trie nodes are exactly the prefixes of the end paths
    let ascending = (1..trie.len()).all(|i| {
        let n = trie.node(NodeId(i as u32));
        match n.parent().map(|p| trie.node(p).item()) {
            Some(Some(pa)) => pa < n.item().unwrap(),
            _ => true,
        }
    });
    if ascending {
        let mut prefixes = BTreeSet::new();
        for p in &paths {
            for k in 1..=p.len() {
                prefixes.insert(p.items()[..k].to_vec());
            }
        }
        if prefixes.len() + 1 != trie.len() {
            return Err(format!(
                "trie has {} nodes, {} prefixes",
                trie.len(),
                prefixes.len()
            ));
        }
    }
    Ok(())
}
