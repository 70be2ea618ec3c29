#![allow(dead_code)]

pub mod faults;

use std::collections::BTreeMap;

use proptest::collection::{btree_map, btree_set, vec};
use proptest::prelude::*;

use priority_core::frameworks::{PairItem, SpmRequest, SppRequest, S01Request, SsepRequest};
use priority_core::universe::{FunctionalEntry, PartialEntry, UniverseTable};
use priority_core::{BitString, NatSet, OpponentUniverse};

pub fn nat_set(limit: u64, max: usize) -> impl Strategy<Value = NatSet> {
    btree_set(0..limit, 0..=max)
}

/// Assigns every element below `limit` one of three roles, then keeps the
/// elements given roles 1 and 2.
fn two_disjoint(limit: u64) -> impl Strategy<Value = (NatSet, NatSet)> {
    vec(0u8..3, limit as usize).prop_map(|roles| {
        let pick = |r: u8| roles.iter().enumerate().filter(|(_, &x)| x == r).map(|(i, _)| i as u64).collect();
        (pick(1), pick(2))
    })
}

fn three_disjoint(limit: u64) -> impl Strategy<Value = (NatSet, NatSet, NatSet)> {
    vec(0u8..4, limit as usize).prop_map(|roles| {
        let pick = |r: u8| roles.iter().enumerate().filter(|(_, &x)| x == r).map(|(i, _)| i as u64).collect();
        (pick(1), pick(2), pick(3))
    })
}

pub fn spm_request(limit: u64) -> impl Strategy<Value = SpmRequest> {
    two_disjoint(limit).prop_map(|(pos, neg)| SpmRequest { pos, neg })
}

pub fn s01_request(elements: Vec<u64>) -> impl Strategy<Value = S01Request> {
    vec(0u8..3, elements.len()).prop_map(move |roles| {
        let pick = |r: u8| elements.iter().zip(&roles).filter(|(_, &x)| x == r).map(|(&e, _)| e).collect();
        S01Request { avoid0: pick(1), avoid1: pick(2) }
    })
}

pub fn spp_request(limit: u64) -> impl Strategy<Value = SppRequest> {
    three_disjoint(limit).prop_map(|(a_pos, b_pos, keep_out)| SppRequest { a_pos, b_pos, keep_out })
}

pub fn pair_item(limit: u64) -> impl Strategy<Value = PairItem> {
    two_disjoint(limit).prop_map(|(a, b)| PairItem { a, b })
}

/// Requests whose positive indices avoid the images of `a_neg`.
pub fn ssep_request(enumeration: Vec<u64>, other: Vec<u64>) -> impl Strategy<Value = SsepRequest> {
    let n = enumeration.len();
    let universe: Vec<u64> = enumeration.iter().chain(&other).copied().collect();
    (btree_set(0..n as u64, 0..=n), btree_set(proptest::sample::select(universe), 0..=4)).prop_map(
        move |(k_pos, a_neg): (NatSet, NatSet)| {
            let k_pos = k_pos.into_iter().filter(|&i| !a_neg.contains(&enumeration[i as usize])).collect();
            SsepRequest { k_pos, a_neg }
        },
    )
}

pub fn bit_string(max_len: usize) -> impl Strategy<Value = BitString> {
    vec(any::<bool>(), 0..=max_len).prop_map(BitString::from_bits)
}

pub fn set(xs: &[u64]) -> NatSet {
    xs.iter().copied().collect()
}

/// For each `(e, x)`: one use bound and an answer for every oracle prefix
/// of that length, which is use-consistent by construction.
pub fn functional_tables() -> impl Strategy<Value = BTreeMap<(u64, u64), Vec<FunctionalEntry>>> {
    btree_map((0u64..3, 0u64..5), (0usize..4).prop_flat_map(|u| (Just(u), vec((0u8..2, 0u64..20), 1 << u))), 0..8)
        .prop_map(|raw| {
            raw.into_iter()
                .map(|(key, (u, answers))| {
                    let entries = answers
                        .into_iter()
                        .enumerate()
                        .map(|(code, (value, cost))| FunctionalEntry {
                            key: BitString::from_bits((0..u).map(|i| code >> i & 1 == 1).collect()),
                            value,
                            use_bound: u,
                            cost,
                        })
                        .collect();
                    (key, entries)
                })
                .collect()
        })
}

pub fn universes() -> impl Strategy<Value = OpponentUniverse> {
    let ce = btree_map(0u64..4, btree_set(0u64..30, 0..6), 0..4);
    let stages = vec(0u64..10, 6);
    let partials = btree_map((0u64..3, 0u64..30), (0u8..2, 0u64..20), 0..12);
    (ce, stages, partials, functional_tables()).prop_map(|(ce, stages, partials, functionals)| {
        let mut table = UniverseTable::default();
        for (e, xs) in ce {
            let mut sorted = stages.clone();
            sorted.sort_unstable();
            table.ce_sets.insert(e, xs.into_iter().zip(sorted).collect());
        }
        table.partials = partials.into_iter().map(|(k, (value, cost))| (k, PartialEntry { value, cost })).collect();
        table.functionals = functionals;
        OpponentUniverse::from_table(table).expect("generated tables are consistent")
    })
}
