mod common;

use std::collections::VecDeque;
use std::sync::Arc;

use proptest::collection::vec;
use proptest::prelude::*;

use priority_core::frameworks::{PairItem, Product, Spm, SpmRequest, Spp, S01};
use priority_core::game::{
    parse_transcript, play, referee, win_status, AliceStrategy, BobStrategy, CanonicalAlice, FrameworkTranscript,
    ScriptedAlice, ScriptedBob, StrategyStatus, WinStatus,
};
use priority_core::scheduler::{
    FmCondition, FmStrategy, InsepCondition, InsepStrategy, Side, SimpleCondition, SimpleStrategy, SplitCondition,
    SplitStrategy,
};
use priority_core::universe::UniverseTable;
use priority_core::{BitString, Framework, Monitor, NatSet, OpponentUniverse};

use common::faults::{clean, inject, FAULTS};
use common::*;

/// Requests with possibly overlapping parts, so some are malformed.
fn loose_request(limit: u64) -> impl Strategy<Value = SpmRequest> {
    (nat_set(limit, 3), nat_set(limit, 3)).prop_map(|(pos, neg)| SpmRequest { pos, neg })
}

fn growth() -> impl Strategy<Value = Vec<(NatSet, NatSet)>> {
    vec((nat_set(10, 2), nat_set(10, 1)), 1..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn play_annotation_is_the_referees_first_finding(
        u0 in loose_request(6),
        m0 in nat_set(6, 3),
        script in vec(loose_request(6), 1..6),
        replies in vec(proptest::option::weighted(0.9, nat_set(6, 4)), 0..6),
        canonical in any::<bool>(),
        horizon in 1usize..8,
    ) {
        let mut bob = ScriptedBob::new(script);
        let mut alice: Box<dyn AliceStrategy<Spm>> = if canonical {
            Box::new(CanonicalAlice::new(Spm, u0.clone(), m0.clone()))
        } else {
            Box::new(ScriptedAlice { opening: (u0.clone(), m0.clone()), replies: replies.into_iter().collect::<VecDeque<_>>() })
        };
        let t = play(&Spm, alice.as_mut(), &mut bob, horizon);
        let found = referee(&Spm, &t);
        prop_assert_eq!(found.first(), t.annotation.as_ref());
        if t.annotation.is_none() {
            prop_assert_eq!(t.rounds.len(), horizon);
        }
        let back = parse_transcript(&Spm, &t.to_text(&Spm)).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(referee(&Spm, &back), found);
    }

    #[test]
    fn injected_faults_are_named_exactly(
        opening in spm_request(10),
        grow in growth(),
        fault in 0usize..6,
        round in 1usize..8,
    ) {
        let mut t = clean(&opening, &grow);
        prop_assert!(referee(&Spm, &t).is_empty(), "base transcript is clean");
        let expected = inject(&mut t, FAULTS[fault], round);
        prop_assert_eq!(referee(&Spm, &t), vec![expected]);
        let back = parse_transcript(&Spm, &t.to_text(&Spm)).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn simple_strategy_plays_cleanly(universe in universes(), e in 0u64..4, opening in spm_request(6)) {
        let universe = Arc::new(universe);
        let m0 = opening.pos.clone();
        let mut alice = CanonicalAlice::new(Spm, opening, m0);
        let mut bob = SimpleStrategy::new(e, universe.clone());
        let t = play(&Spm, &mut alice, &mut bob, 15);
        check_clean_and_sound(&Spm, &t, &bob, &SimpleCondition { e, universe })?;
    }

    #[test]
    fn functional_strategy_plays_cleanly(
        functionals in functional_tables(),
        e in 0u64..3,
        left in any::<bool>(),
    ) {
        // Index 0 puts the first witness at 10, so shift the tables there.
        let functionals = functionals.into_iter().map(|((e, x), entries)| ((e, x + 10), entries)).collect();
        let universe = Arc::new(OpponentUniverse::from_table(UniverseTable { functionals, ..Default::default() }).unwrap());
        let f = Product::new(Spm, Spm);
        let side = if left { Side::Left } else { Side::Right };
        let mut alice = CanonicalAlice::new(f.clone(), Default::default(), Default::default());
        let mut bob = FmStrategy::new(e, side, 0, universe.clone());
        let t = play(&f, &mut alice, &mut bob, 25);
        check_clean_and_sound(&f, &t, &bob, &FmCondition { e, side, universe })?;
    }

    #[test]
    fn split_strategy_plays_cleanly(universe in universes(), e in 0u64..3) {
        let universe = Arc::new(universe);
        let f = S01::new(vec![5, 0, 12, 3, 29, 8, 1, 17, 6, 2]).unwrap();
        let mut alice = CanonicalAlice::new(f.clone(), Default::default(), BitString::new());
        let mut bob = SplitStrategy::new(e, f.clone(), universe.clone());
        let t = play(&f, &mut alice, &mut bob, 10);
        check_clean_and_sound(&f, &t, &bob, &SplitCondition { e, framework: f.clone(), universe })?;
    }

    #[test]
    fn insep_strategy_plays_cleanly(universe in universes(), e in 0u64..3, index in 0usize..3) {
        let universe = Arc::new(universe);
        let mut alice = CanonicalAlice::new(Spp, Default::default(), PairItem::default());
        let mut bob = InsepStrategy::new(e, index, universe.clone());
        let t = play(&Spp, &mut alice, &mut bob, 20);
        check_clean_and_sound(&Spp, &t, &bob, &InsepCondition { e, universe })?;
    }
}

/// No rule is broken, and a declared certificate is backed by the monitor.
fn check_clean_and_sound<F: Framework>(
    f: &F,
    t: &FrameworkTranscript<F>,
    bob: &dyn BobStrategy<F>,
    monitor: &dyn Monitor<F::Item, F::Request>,
) -> Result<(), TestCaseError> {
    prop_assert_eq!(referee(f, t), vec![]);
    let items: Vec<F::Item> = t.items().into_iter().cloned().collect();
    let verdict = monitor.verdict(&items);
    prop_assert!(!verdict.is_violated(), "{} violated", monitor.name());
    if let StrategyStatus::SatisfiedDeclared(cert) = bob.status() {
        prop_assert!(verdict.is_satisfied(), "{} declared {:?} without monitor support", bob.label(), cert.witness);
        prop_assert!(cert.guard.admits(f, items.last().unwrap()));
        let status = win_status(f, t, monitor, 1);
        prop_assert!(matches!(status, WinStatus::BobWinningSoFar | WinStatus::Undetermined(_)), "{status:?}");
    }
    Ok(())
}

#[test]
fn every_fault_kind_at_every_round() {
    let opening = SpmRequest { pos: set(&[2]), neg: set(&[3]) };
    let grow: Vec<(NatSet, NatSet)> = (0..5).map(|k| (set(&[k + 3]), set(&[k]))).collect();
    for kind in FAULTS {
        for round in 1..=5 {
            let mut t = clean(&opening, &grow);
            let expected = inject(&mut t, kind, round);
            assert_eq!(referee(&Spm, &t), vec![expected], "{kind:?} at round {round}");
        }
    }
}
