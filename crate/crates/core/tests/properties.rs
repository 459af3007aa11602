mod common;

use std::collections::BTreeSet;

use cistream_core::oracle::{self, Dataset};
use cistream_core::{ItemOrder, Itemset, Miner, Tid, Transaction};
use common::Harness;
use proptest::prelude::*;

fn itemset(alphabet: u32, max_len: usize) -> impl Strategy<Value = Itemset> {
    prop::collection::btree_set(0..alphabet, 1..=max_len).prop_map(Itemset::from_ids)
}

fn stream() -> impl Strategy<Value = (usize, Vec<Itemset>)> {
    (4u32..=10).prop_flat_map(|alphabet| {
        (
            1usize..=12,
            prop::collection::vec(itemset(alphabet, 6), 1..60),
        )
    })
}

fn dataset(ts: &[Itemset]) -> Dataset {
    ts.iter()
        .enumerate()
        .map(|(i, x)| (Tid(i as u64 + 1), x.clone()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sliding_window_matches_oracle((w, ts) in stream()) {
        let mut h = Harness::new(w, ItemOrder::Ascending);
        for t in ts {
            if let Err(e) = h.push(t) {
                prop_assert!(false, "{}", e);
            }
        }
    }

    #[test]
    fn descending_item_order_matches_oracle((w, ts) in stream()) {
        let mut h = Harness::new(w, ItemOrder::Descending);
        for t in ts {
            if let Err(e) = h.push(t) {
                prop_assert!(false, "{}", e);
            }
        }
    }

    #[test]
    fn add_then_remove_restores_state((_, ts) in stream(), extra in itemset(10, 6)) {
        let mut m = Miner::new();
        for (i, t) in ts.iter().enumerate() {
            m.shift_add(&Transaction::new(Tid(i as u64), t.clone())).unwrap();
        }
        let before = m.live_cis();
        let t = Transaction::new(Tid(1_000), extra);
        m.shift_add(&t).unwrap();
        m.shift_remove(&t).unwrap();
        prop_assert_eq!(m.live_cis(), before);
    }

    #[test]
    fn both_orders_agree_on_reports((_, ts) in stream()) {
        let mut up = Miner::new();
        let mut down = Miner::new().with_item_order(ItemOrder::Descending);
        for (i, t) in ts.iter().enumerate() {
            let t = Transaction::new(Tid(i as u64), t.clone());
            let a = up.shift_add(&t).unwrap();
            let b = down.shift_add(&t).unwrap();
            // ids depend on trie shape, so promoted CIs are compared as itemsets
            let key = |r: &cistream_core::ShiftReport, m: &Miner| {
                let mut n: Vec<_> = r.new_cis.iter().map(|c| (c.itemset.clone(), c.support)).collect();
                n.sort();
                let mut p: Vec<Itemset> = r.promoted.iter().map(|&c| m.materialize(c).unwrap()).collect();
                p.sort();
                (n, p)
            };
            prop_assert_eq!(key(&a, &up), key(&b, &down));
        }
        prop_assert_eq!(up.snapshot(1), down.snapshot(1));
    }

    #[test]
    fn galois_connection(ts in prop::collection::vec(itemset(8, 5), 1..12), x in itemset(8, 3)) {
        let d = dataset(&ts);
        let y = oracle::tau(&d, &x);
        if !y.is_empty() {
            let back = oracle::iota(&d, &y).unwrap();
            prop_assert!(x.items().iter().all(|a| back.contains(*a)));
        }
        let tids: BTreeSet<Tid> = y.iter().take(2).copied().collect();
        if !tids.is_empty() {
            let z = oracle::iota(&d, &tids).unwrap();
            prop_assert!(tids.is_subset(&oracle::tau(&d, &z)));
        }
        if let Ok(k) = oracle::closure(&d, &x) {
            prop_assert_eq!(oracle::closure(&d, &k).unwrap(), k.clone());
            prop_assert_eq!(oracle::support(&d, &k), y.len() as u32);
            // monotone: a subset of x has a closure below that of x
            let sub: Itemset = x.items().iter().copied().take(1).collect();
            let ks = oracle::closure(&d, &sub).unwrap();
            prop_assert!(ks.items().iter().all(|a| k.contains(*a)));
        }
    }

    #[test]
    fn family_is_intersection_closed(ts in prop::collection::vec(itemset(8, 5), 1..12)) {
        let d = dataset(&ts);
        let f = oracle::all_cis(&d).unwrap();
        for x in f.keys() {
            prop_assert!(oracle::is_closed(&d, x));
            for z in f.keys() {
                let m: Itemset = x.items().iter().copied().filter(|a| z.contains(*a)).collect();
                prop_assert!(m.is_empty() || f.contains_key(&m));
            }
        }
    }

    #[test]
    fn increment_classes_partition_delta(ts in prop::collection::vec(itemset(8, 5), 0..10), t in itemset(8, 5)) {
        let d = dataset(&ts);
        let f = oracle::all_cis(&d).unwrap();
        let c = oracle::classify_increment(&d, &t).unwrap();
        prop_assert!(c.new.is_disjoint(&c.promoted));
        let joined: BTreeSet<Itemset> = c.new.union(&c.promoted).cloned().collect();
        prop_assert_eq!(joined, oracle::delta(&f, &t));
    }
}
