mod common;

use proptest::prelude::*;

use priority_core::frameworks::{
    LimitObjects, Product, S01Request, Spm, SpmRequest, Spp, SppRequest, Ssep, SsepRequest, S01,
};
use priority_core::{BitString, BruteForceOracle, Framework, NatSet};

use common::*;

/// Every request whose parts lie in `{0..n-1}`: each element is required,
/// excluded or free.
fn all_spm_requests(n: u32) -> Vec<SpmRequest> {
    (0..3u32.pow(n))
        .map(|mut code| {
            let mut r = SpmRequest::default();
            for x in 0..n as u64 {
                match code % 3 {
                    1 => r.pos.insert(x),
                    2 => r.neg.insert(x),
                    _ => false,
                };
                code /= 3;
            }
            r
        })
        .collect()
}

fn all_spp_requests(n: u32) -> Vec<SppRequest> {
    (0..4u32.pow(n))
        .map(|mut code| {
            let mut r = SppRequest::default();
            for x in 0..n as u64 {
                match code % 4 {
                    1 => r.a_pos.insert(x),
                    2 => r.b_pos.insert(x),
                    3 => r.keep_out.insert(x),
                    _ => false,
                };
                code /= 4;
            }
            r
        })
        .collect()
}

fn subsets(xs: &[u64]) -> Vec<NatSet> {
    (0..1u32 << xs.len())
        .map(|mask| xs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect())
        .collect()
}

/// Formula against exhaustive search, comparing compatibility profiles so
/// each request is evaluated once.
fn assert_exhaustive_agreement<F: Framework>(f: &F, bound: usize, requests: &[F::Request]) {
    let oracle = BruteForceOracle::new(f, bound).unwrap();
    let profiles: Vec<Vec<bool>> = requests.iter().map(|r| oracle.profile(r)).collect();
    for (u, pu) in requests.iter().zip(&profiles) {
        for (v, pv) in requests.iter().zip(&profiles) {
            let exhaustive = pu.iter().zip(pv).all(|(&a, &b)| !a || b);
            assert_eq!(f.dominates(u, v), exhaustive, "{} on {u:?} vs {v:?}", f.id());
        }
    }
}

#[test]
fn spm_formula_is_exact_on_seven_elements() {
    assert_exhaustive_agreement(&Spm, 7, &all_spm_requests(5));
}

#[test]
fn spp_formula_is_exact_on_six_elements() {
    assert_exhaustive_agreement(&Spp, 6, &all_spp_requests(4));
}

#[test]
fn ssep_formula_is_exact_on_a_small_pair() {
    let f = Ssep::new(vec![3, 0, 5, 1], [2, 4].into_iter().collect()).unwrap();
    let mut requests = Vec::new();
    for k_pos in subsets(&[0, 1, 2, 3]) {
        for a_neg in subsets(&[0, 1, 2, 3, 4, 5]) {
            let r = SsepRequest { k_pos: k_pos.clone(), a_neg };
            if f.check_request(&r).is_ok() {
                requests.push(r);
            }
        }
    }
    assert_exhaustive_agreement(&f, 4, &requests);
}

#[test]
fn s01_formula_is_exact_with_outside_elements() {
    let f = S01::new(vec![7, 2, 5]).unwrap();
    // Reuse the three-way split over {2, 5, 7, 9}: 9 is outside the enumeration.
    let map = |s: &NatSet| s.iter().map(|&i| [2, 5, 7, 9][i as usize]).collect::<NatSet>();
    let requests: Vec<_> =
        all_spm_requests(4).iter().map(|r| S01Request { avoid0: map(&r.pos), avoid1: map(&r.neg) }).collect();
    assert_exhaustive_agreement(&f, 3, &requests);
}

#[test]
fn product_formula_is_exact_with_four_per_component() {
    let f = Product::new(Spm, Spm);
    let parts = all_spm_requests(2);
    let requests: Vec<_> =
        parts.iter().flat_map(|l| parts.iter().map(move |r| (l.clone(), r.clone()))).collect();
    assert_exhaustive_agreement(&f, 4, &requests);
}

fn preorder<F: Framework>(f: &F, u: &F::Request, v: &F::Request, w: &F::Request) -> Result<(), TestCaseError> {
    prop_assert!(f.dominates(u, u));
    if f.dominates(u, v) && f.dominates(v, w) {
        prop_assert!(f.dominates(u, w));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn spm_domination_is_a_preorder(u in spm_request(8), v in spm_request(8), w in spm_request(8)) {
        preorder(&Spm, &u, &v, &w)?;
        // Make the chain hypothesis fire too.
        let v2 = SpmRequest { pos: &u.pos & &v.pos, neg: &u.neg & &v.neg };
        let w2 = SpmRequest { pos: &v2.pos & &w.pos, neg: &v2.neg & &w.neg };
        preorder(&Spm, &u, &v2, &w2)?;
        prop_assert!(Spm.dominates(&u, &w2));
    }

    #[test]
    fn spp_domination_is_a_preorder(u in spp_request(8), v in spp_request(8), w in spp_request(8)) {
        preorder(&Spp, &u, &v, &w)?;
    }

    #[test]
    fn s01_domination_is_a_preorder(
        u in s01_request(vec![1, 4, 6, 9]),
        v in s01_request(vec![1, 4, 6, 9]),
        w in s01_request(vec![1, 4, 6, 9]),
    ) {
        preorder(&S01::new(vec![4, 1, 9]).unwrap(), &u, &v, &w)?;
    }

    #[test]
    fn ssep_domination_is_a_preorder(
        u in ssep_request(vec![3, 0, 5], vec![2]),
        v in ssep_request(vec![3, 0, 5], vec![2]),
        w in ssep_request(vec![3, 0, 5], vec![2]),
    ) {
        preorder(&Ssep::new(vec![3, 0, 5], [2].into_iter().collect()).unwrap(), &u, &v, &w)?;
    }

    #[test]
    fn product_domination_is_a_preorder(
        u in (spm_request(5), spm_request(5)),
        v in (spm_request(5), spm_request(5)),
        w in (spm_request(5), spm_request(5)),
    ) {
        preorder(&Product::new(Spm, Spm), &u, &v, &w)?;
    }

    #[test]
    fn spm_compatibility_is_antitone(u in spm_request(10), v in spm_request(10), m in nat_set(10, 10)) {
        if Spm.dominates(&u, &v) && Spm.compatible(&m, &u) {
            prop_assert!(Spm.compatible(&m, &v));
        }
        // A weakening of u is always dominated by u.
        let weaker = SpmRequest { pos: u.pos.iter().copied().filter(|x| x % 2 == 0).collect(), neg: u.neg.clone() };
        if Spm.compatible(&m, &u) {
            prop_assert!(Spm.compatible(&m, &weaker));
        }
    }

    #[test]
    fn spp_compatibility_is_antitone(u in spp_request(8), v in spp_request(8), m in pair_item(8)) {
        if Spp.dominates(&u, &v) && Spp.compatible(&m, &u) {
            prop_assert!(Spp.compatible(&m, &v));
        }
    }

    #[test]
    fn sides_partition_the_enumerated_prefix(
        enumeration in proptest::collection::btree_set(0u64..200, 1..16),
        bits in bit_string(16),
    ) {
        let enumeration: Vec<u64> = enumeration.into_iter().collect();
        let f = S01::new(enumeration.clone()).unwrap();
        let m = BitString::from_bits(bits.bits().iter().copied().take(enumeration.len()).collect());
        let (zero, one) = f.sides(&m).unwrap();
        prop_assert!(zero.is_disjoint(&one));
        let union: NatSet = &zero | &one;
        let prefix: NatSet = enumeration[..m.len()].iter().copied().collect();
        prop_assert_eq!(union, prefix);
    }

    #[test]
    fn limits_grow_along_valid_sequences(steps in proptest::collection::vec(nat_set(12, 3), 1..8)) {
        let mut seq = vec![NatSet::new()];
        for s in &steps {
            let next: NatSet = seq.last().unwrap() | s;
            seq.push(next);
        }
        let mut prev: Option<LimitObjects> = None;
        for n in 1..=seq.len() {
            let limit = Spm.limit_objects(&seq[..n]).unwrap();
            if let Some(p) = &prev {
                prop_assert!(p.is_below(&limit));
            }
            prev = Some(limit);
        }
    }

    #[test]
    fn split_limits_grow(bits in bit_string(10)) {
        let f = S01::new((0..10).map(|i| 3 * i + 1).collect()).unwrap();
        let seq: Vec<BitString> = (1..=bits.len()).map(|n| bits.truncated(n)).collect();
        if seq.is_empty() {
            return Ok(());
        }
        for n in 1..seq.len() {
            let before = f.limit_objects(&seq[..n]).unwrap();
            let after = f.limit_objects(&seq[..=n]).unwrap();
            prop_assert!(before.is_below(&after));
        }
    }
}
