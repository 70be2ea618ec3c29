mod common;

use std::sync::Arc;

use proptest::collection::vec;
use proptest::prelude::*;

use priority_core::frameworks::{BitStringD, PairItem, Product, Spm, SpmRequest, Spp, S01};
use priority_core::scheduler::{
    Avoids, Contains, FmCondition, InsepCondition, Side, SimpleCondition, SplitCondition,
};
use priority_core::universe::{FunctionalEntry, PartialEntry, UniverseTable};
use priority_core::{
    conjoin, diagonal_witness, lift_left, lift_right, weaken, BitString, ClassTag, Framework, Guard, Monitor,
    NatSet, OpponentUniverse, Requirement, Verdict,
};

use common::*;

fn universe() -> Arc<OpponentUniverse> {
    let mut table = UniverseTable::default();
    table.ce_sets.insert(0, vec![(1, 0), (3, 2), (6, 4)]);
    table.ce_sets.insert(1, vec![(2, 1), (5, 3)]);
    for (x, value) in [(2, 1), (4, 0), (5, 1), (9, 0)] {
        table.partials.insert((0, x), PartialEntry { value, cost: x });
    }
    for (x, value) in [(1, 0), (3, 1)] {
        table.partials.insert((1, x), PartialEntry { value, cost: 1 });
    }
    for (x, key, value) in [(4, "00", 0), (4, "01", 1), (4, "10", 1), (4, "11", 0), (7, "1", 1)] {
        let key: BitString = key.parse().unwrap();
        let use_bound = key.len();
        table.functionals.entry((0, x)).or_default().push(FunctionalEntry { key, value, use_bound, cost: 0 });
    }
    Arc::new(OpponentUniverse::from_table(table).unwrap())
}

/// Valid set sequence starting from the empty set: each step adds elements.
fn set_sequence(limit: u64) -> impl Strategy<Value = Vec<NatSet>> {
    vec(nat_set(limit, 2), 1..6).prop_map(|steps| {
        let mut out: Vec<NatSet> = Vec::new();
        for s in steps {
            let next = match out.last() {
                Some(prev) => prev | &s,
                None => s,
            };
            out.push(next);
        }
        out
    })
}

fn pair_sequence(limit: u64) -> impl Strategy<Value = Vec<PairItem>> {
    vec(pair_item(limit), 1..6).prop_map(|steps| {
        let mut out: Vec<PairItem> = Vec::new();
        let mut cur = PairItem::default();
        for s in steps {
            for x in s.a {
                if !cur.b.contains(&x) {
                    cur.a.insert(x);
                }
            }
            for x in s.b {
                if !cur.a.contains(&x) {
                    cur.b.insert(x);
                }
            }
            out.push(cur.clone());
        }
        out
    })
}

fn spm_extend(prev: &NatSet, extra: &NatSet, guard: &SpmRequest) -> NatSet {
    let mut next: NatSet = prev | &guard.pos;
    next.extend(extra.iter().filter(|x| !guard.neg.contains(x)));
    next
}

/// Once satisfied, guard-respecting extensions stay satisfied; once violated, stay violated.
fn check_absorption<F: Framework>(
    f: &F,
    monitor: &dyn Monitor<F::Item, F::Request>,
    prefix: &[F::Item],
    extensions: impl IntoIterator<Item = Box<dyn Fn(&F::Item, &Guard<F::Request>) -> Option<F::Item>>>,
) -> Result<(), TestCaseError> {
    let verdict = monitor.verdict(prefix);
    let mut seq = prefix.to_vec();
    match verdict {
        Verdict::Satisfied(cert) => {
            for step in extensions {
                let last = seq.last().unwrap().clone();
                let Some(next) = step(&last, &cert.guard) else { continue };
                prop_assert!(f.may_follow(&next, &last));
                if !cert.guard.admits(f, &next) {
                    continue;
                }
                seq.push(next);
                prop_assert!(monitor.verdict(&seq).is_satisfied(), "{} lost satisfaction on {seq:?}", monitor.name());
            }
        }
        Verdict::Violated(_) => {
            for step in extensions {
                let last = seq.last().unwrap().clone();
                let Some(next) = step(&last, &Guard::Joint(Vec::new())) else { continue };
                seq.push(next);
                prop_assert!(monitor.verdict(&seq).is_violated());
            }
        }
        Verdict::Pending => {}
    }
    Ok(())
}

proptest! {
    #[test]
    fn set_monitors_absorb(prefix in set_sequence(14), extras in vec(nat_set(14, 3), 1..5)) {
        let u = universe();
        let monitors: Vec<Box<dyn Monitor<NatSet, SpmRequest>>> = vec![
            Box::new(SimpleCondition { e: 0, universe: u.clone() }),
            Box::new(SimpleCondition { e: 1, universe: u.clone() }),
            Box::new(Contains(3)),
            Box::new(Avoids(5)),
        ];
        for m in &monitors {
            let steps = extras.iter().cloned().map(|extra| {
                Box::new(move |last: &NatSet, g: &Guard<SpmRequest>| {
                    let empty = SpmRequest::default();
                    let guard = g.requests().first().copied().unwrap_or(&empty).clone();
                    Some(spm_extend(last, &extra, &guard))
                }) as Box<dyn Fn(&NatSet, &Guard<SpmRequest>) -> Option<NatSet>>
            });
            check_absorption(&Spm, m.as_ref(), &prefix, steps)?;
        }
    }

    #[test]
    fn functional_monitor_absorbs(
        left in set_sequence(8),
        right in set_sequence(8),
        extras in vec((nat_set(8, 2), nat_set(8, 2)), 1..5),
    ) {
        let f = Product::new(Spm, Spm);
        let n = left.len().min(right.len());
        let prefix: Vec<(NatSet, NatSet)> = left[..n].iter().cloned().zip(right[..n].iter().cloned()).collect();
        for side in [Side::Left, Side::Right] {
            let monitor = FmCondition { e: 0, side, universe: universe() };
            let steps = extras.iter().cloned().map(|(l, r)| {
                Box::new(move |last: &(NatSet, NatSet), g: &Guard<(SpmRequest, SpmRequest)>| {
                    let guard = g.requests().first().copied().cloned().unwrap_or_default();
                    Some((spm_extend(&last.0, &l, &guard.0), spm_extend(&last.1, &r, &guard.1)))
                }) as Box<dyn Fn(&(NatSet, NatSet), &Guard<(SpmRequest, SpmRequest)>) -> Option<(NatSet, NatSet)>>
            });
            check_absorption(&f, &monitor, &prefix, steps)?;
        }
    }

    #[test]
    fn split_monitor_absorbs(bits in bit_string(8), more in vec(any::<bool>(), 1..4)) {
        let f = S01::new(vec![2, 4, 5, 9, 11, 12, 13, 14, 15, 16, 17]).unwrap();
        let prefix: Vec<BitString> = (1..=bits.len()).map(|n| bits.truncated(n)).collect();
        if prefix.is_empty() {
            return Ok(());
        }
        let monitor = SplitCondition { e: 0, framework: f.clone(), universe: universe() };
        let steps = more.into_iter().map(|b| {
            Box::new(move |last: &BitString, _: &Guard<_>| Some(last.with_bit(b)))
                as Box<dyn Fn(&BitString, &Guard<_>) -> Option<BitString>>
        });
        check_absorption(&f, &monitor, &prefix, steps)?;
    }

    #[test]
    fn insep_monitor_absorbs(prefix in pair_sequence(10), extras in vec(pair_item(10), 1..4)) {
        let monitor = InsepCondition { e: 0, universe: universe() };
        let steps = extras.into_iter().map(|extra| {
            Box::new(move |last: &PairItem, _: &Guard<_>| {
                let mut next = last.clone();
                next.a.extend(extra.a.iter().filter(|x| !last.b.contains(x)));
                next.b.extend(extra.b.iter().filter(|x| !next.a.contains(x)));
                Some(next)
            }) as Box<dyn Fn(&PairItem, &Guard<_>) -> Option<PairItem>>
        });
        check_absorption(&Spp, &monitor, &prefix, steps)?;
    }

    #[test]
    fn lifted_verdicts_ignore_the_other_component(
        left in set_sequence(10),
        right in vec(nat_set(10, 4), 5),
        other in vec(nat_set(10, 4), 5),
    ) {
        let base = Requirement::new(Spm, SimpleCondition { e: 0, universe: universe() }, ClassTag::ComputablePriority);
        let lifted = lift_left(&base, &Spm);
        let n = left.len();
        let with = |r: &[NatSet]| -> Vec<(NatSet, NatSet)> { left.iter().cloned().zip(r.iter().cloned()).take(n).collect() };
        let a = lifted.verdict(&with(&right));
        let b = lifted.verdict(&with(&other));
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.tag(), base.verdict(&left).tag());
        let mirrored = lift_right(&Spm, &base);
        let swapped: Vec<(NatSet, NatSet)> = with(&right).into_iter().map(|(l, r)| (r, l)).collect();
        prop_assert_eq!(mirrored.verdict(&swapped).tag(), base.verdict(&left).tag());
    }

    #[test]
    fn prepending_a_valid_prefix_keeps_the_verdict(seq in set_sequence(12), cut in vec(any::<bool>(), 12)) {
        // Any subset of the first item is a valid predecessor.
        let first = &seq[0];
        let smaller: NatSet = first.iter().zip(&cut).filter(|(_, &keep)| keep).map(|(&x, _)| x).collect();
        let mut longer = vec![NatSet::new(), smaller];
        longer.extend(seq.iter().cloned());
        let u = universe();
        let monitors: Vec<Box<dyn Monitor<NatSet, SpmRequest>>> = vec![
            Box::new(SimpleCondition { e: 0, universe: u.clone() }),
            Box::new(Contains(4)),
            Box::new(Avoids(7)),
        ];
        for m in &monitors {
            prop_assert_eq!(m.verdict(&seq).tag(), m.verdict(&longer).tag(), "{}", m.name());
        }
    }
}

/// Every valid prefix of length ≤ `len` over subsets of `{0..bound-1}`.
fn all_prefixes(bound: usize, len: usize) -> Vec<Vec<NatSet>> {
    let items = Spm.bounded_items(bound).unwrap();
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<NatSet>> = items.iter().map(|m| vec![m.clone()]).collect();
    for _ in 0..len {
        let mut next = Vec::new();
        for p in &frontier {
            for m in items.iter().filter(|m| Spm.may_follow(m, p.last().unwrap())) {
                let mut q = p.clone();
                q.push(m.clone());
                next.push(q);
            }
        }
        out.append(&mut frontier);
        frontier = next;
    }
    out
}

#[test]
fn conjunction_follows_its_truth_table() {
    let u = universe();
    let reqs = vec![
        Requirement::new(Spm, Contains(1), ClassTag::ComputablePriority),
        Requirement::new(Spm, Avoids(2), ClassTag::ComputablePriority),
        Requirement::new(Spm, SimpleCondition { e: 0, universe: u }, ClassTag::ComputablePriority),
        Requirement::new(Spm, Avoids(1), ClassTag::WeakComputablePriority),
    ];
    let prefixes = all_prefixes(4, 3);
    let mut seen = std::collections::BTreeSet::new();
    for a in &reqs {
        for b in &reqs {
            let both = conjoin(a, b).unwrap();
            for p in &prefixes {
                let (va, vb, vc) = (a.verdict(p), b.verdict(p), both.verdict(p));
                let expected = match (va.tag(), vb.tag()) {
                    ("violated", _) | (_, "violated") => "violated",
                    ("satisfied", "satisfied") => "satisfied",
                    _ => "pending",
                };
                assert_eq!(vc.tag(), expected, "{} on {p:?}", both.name());
                seen.insert((va.tag(), vb.tag()));
                if let Verdict::Satisfied(c) = vc {
                    // The joint guard keeps both parts' guards.
                    assert!(c.guard.admits(&Spm, p.last().unwrap()));
                }
            }
        }
    }
    assert_eq!(seen.len(), 9, "every verdict combination occurs");
}

#[test]
fn conjunction_class_is_the_weaker_countable_class() {
    let strong = Requirement::new(Spm, Contains(1), ClassTag::ComputablePriority);
    let weak = Requirement::new(Spm, Contains(2), ClassTag::WeakComputablePriority);
    assert_eq!(conjoin(&strong, &strong).unwrap().class, ClassTag::CountableComputable);
    assert_eq!(conjoin(&strong, &weak).unwrap().class, ClassTag::CountableWeakComputable);
    let lifted = lift_left(&strong, &S01::new(vec![1]).unwrap());
    assert_eq!(lifted.framework.id(), "(spm*s01[1])");
    assert_eq!(lifted.class, ClassTag::ComputablePriority);
    assert!(conjoin(&strong, &Requirement::new(Spm, Avoids(1), ClassTag::Priority)).is_ok());
}

#[test]
fn weakening_audit_accepts_implied_conditions_only() {
    let one = Requirement::new(Spm, Contains(1), ClassTag::ComputablePriority);
    let two = Requirement::new(Spm, Contains(2), ClassTag::ComputablePriority);
    let both = conjoin(&one, &two).unwrap();
    let audit = weaken(&one, &both, 3, 3).unwrap();
    assert!(audit.holds && audit.prefixes_checked > 0);
    let audit = weaken(&two, &one, 3, 3).unwrap();
    assert!(!audit.holds);
    let bad = audit.counterexample.unwrap();
    assert!(bad.iter().all(|m| !m.contains(&2)));
    let split = |enumeration: Vec<u64>| {
        let f = S01::new(enumeration).unwrap();
        Requirement::new(f.clone(), SplitCondition { e: 0, framework: f, universe: universe() }, ClassTag::WeakComputablePriority)
    };
    assert!(weaken(&split(vec![1]), &split(vec![2]), 2, 2).is_err());
    assert!(conjoin(&split(vec![1]), &split(vec![2])).is_err());
}

/// Satisfied once the last bit string has `pattern` as a factor.
struct HasFactor(&'static str);

impl Monitor<BitString, ()> for HasFactor {
    fn name(&self) -> String {
        format!("factor {}", self.0)
    }

    fn verdict(&self, prefix: &[BitString]) -> Verdict<()> {
        let last = prefix.last().map(|m| m.to_string()).unwrap_or_default();
        if last.contains(self.0) {
            Verdict::Satisfied(priority_core::Certificate {
                requirement: self.name(),
                witness: vec![],
                guard: Guard::Joint(vec![]),
                stage: prefix.len() - 1,
            })
        } else {
            Verdict::Pending
        }
    }
}

#[test]
fn diagonal_search_finds_the_canonical_least_witness() {
    let d = BitStringD;
    let found = diagonal_witness(&d, &BitString::new(), &HasFactor("11"), 6).unwrap();
    let last = found.last().unwrap().to_string();
    assert_eq!(last, "11");
    assert!(found.windows(2).all(|w| w[0].is_proper_prefix_of(&w[1])));
    assert_eq!(diagonal_witness(&d, &BitString::new(), &HasFactor("1111111"), 6), None);
    assert!(diagonal_witness(&d, &BitString::new(), &HasFactor("111111"), 6).is_some());
}
