//! Monitors for the conditions the shipped strategies aim at, judged on the
//! item sequence alone with unlimited computation budgets. All shipped item
//! spaces grow monotonically, so each monitor only needs the last item plus
//! the first position at which its evidence appeared.

use std::sync::Arc;

use crate::encoding::{BitString, NatSet};
use crate::framework::{Certificate, Guard, Monitor, Verdict};
use crate::frameworks::{PairItem, S01Request, SpmRequest, SppRequest, S01};
use crate::universe::OpponentUniverse;

use super::scenario::{Side, StrategyKind};

fn first_position<I>(prefix: &[I], holds: impl Fn(&I) -> bool) -> Option<usize> {
    prefix.iter().position(holds)
}

fn satisfied<R>(kind: StrategyKind, witness: Vec<u64>, guard: R, stage: usize) -> Verdict<R> {
    Verdict::Satisfied(Certificate { requirement: kind.label(), witness, guard: Guard::Request(guard), stage })
}

/// Some element of `W_e` above `2e` lies in the set.
pub struct SimpleCondition {
    pub e: u64,
    pub universe: Arc<OpponentUniverse>,
}

impl Monitor<NatSet, SpmRequest> for SimpleCondition {
    fn name(&self) -> String {
        StrategyKind::Simple(self.e).label()
    }

    fn verdict(&self, prefix: &[NatSet]) -> Verdict<SpmRequest> {
        let Some(last) = prefix.last() else { return Verdict::Pending };
        let hit = self.universe.we_all(self.e).into_iter().find(|&x| x > 2 * self.e && last.contains(&x));
        match hit {
            Some(x) => {
                let stage = first_position(prefix, |m| m.contains(&x)).expect("last item has it");
                let guard = SpmRequest { pos: [x].into_iter().collect(), neg: NatSet::new() };
                satisfied(StrategyKind::Simple(self.e), vec![self.e, x], guard, stage)
            }
            None => Verdict::Pending,
        }
    }
}

/// The `side` set disagrees with functional `e` computed from the other set
/// at some argument, with the other set settled below the use.
pub struct FmCondition {
    pub e: u64,
    pub side: Side,
    pub universe: Arc<OpponentUniverse>,
}

impl Monitor<(NatSet, NatSet), (SpmRequest, SpmRequest)> for FmCondition {
    fn name(&self) -> String {
        StrategyKind::Fm { e: self.e, side: self.side }.label()
    }

    fn verdict(&self, prefix: &[(NatSet, NatSet)]) -> Verdict<(SpmRequest, SpmRequest)> {
        let Some(last) = prefix.last() else { return Verdict::Pending };
        let (a, b) = self.side.split(last);
        for (x, entry) in self.universe.functional_entries(self.e) {
            let u = entry.use_bound;
            let oracle = BitString::characteristic(b, u);
            if self.universe.functional_eval(self.e, &oracle, x, u64::MAX) != Some((entry.value, u)) {
                continue;
            }
            if a.contains(&x) == (entry.value == 1) {
                continue;
            }
            let below: NatSet = (0..u as u64).collect();
            let mut guard = (SpmRequest::default(), SpmRequest::default());
            let (ga, gb) = self.side.split_mut(&mut guard);
            if a.contains(&x) {
                ga.pos.insert(x);
            } else {
                ga.neg.insert(x);
            }
            gb.pos = below.intersection(b).copied().collect();
            gb.neg = below.difference(b).copied().collect();
            let stage = prefix
                .iter()
                .rposition(|(l, r)| {
                    let (pa, pb) = self.side.pick(l, r);
                    pa.contains(&x) != a.contains(&x) || BitString::characteristic(pb, u) != oracle
                })
                .map_or(0, |p| p + 1);
            let witness = vec![self.e, x, u as u64, stage as u64, entry.value.into()];
            return satisfied(StrategyKind::Fm { e: self.e, side: self.side }, witness, guard, stage);
        }
        Verdict::Pending
    }
}

/// Some enumerated element sits on the side opposite to `φ_e`'s claim.
pub struct SplitCondition {
    pub e: u64,
    pub framework: S01,
    pub universe: Arc<OpponentUniverse>,
}

impl Monitor<BitString, S01Request> for SplitCondition {
    fn name(&self) -> String {
        StrategyKind::Split(self.e).label()
    }

    fn verdict(&self, prefix: &[BitString]) -> Verdict<S01Request> {
        let Some(last) = prefix.last() else { return Verdict::Pending };
        for (s, &bit) in last.bits().iter().enumerate() {
            let Ok(x) = self.framework.element(s) else { break };
            if self.universe.phi_eval(self.e, x, u64::MAX) == Some(u8::from(bit)) {
                let stage = first_position(prefix, |m| m.len() > s).expect("last item has it");
                return satisfied(StrategyKind::Split(self.e), vec![self.e, s as u64, x, bit.into()], S01Request::default(), stage);
            }
        }
        Verdict::Pending
    }
}

/// Some element is placed against `φ_e`'s answer: into `B` where it answers
/// 1, into `A` where it answers 0.
pub struct InsepCondition {
    pub e: u64,
    pub universe: Arc<OpponentUniverse>,
}

impl Monitor<PairItem, SppRequest> for InsepCondition {
    fn name(&self) -> String {
        StrategyKind::Insep(self.e).label()
    }

    fn verdict(&self, prefix: &[PairItem]) -> Verdict<SppRequest> {
        let Some(last) = prefix.last() else { return Verdict::Pending };
        for (x, p) in self.universe.phi_domain(self.e) {
            let placed = if p.value == 1 { last.b.contains(&x) } else { last.a.contains(&x) };
            if placed {
                let stage = first_position(prefix, |m| m.mentions(x)).expect("last item has it");
                return satisfied(StrategyKind::Insep(self.e), vec![self.e, x, p.value.into()], SppRequest::default(), stage);
            }
        }
        Verdict::Pending
    }
}

/// Satisfied once `x` is in the set.
pub struct Contains(pub u64);

impl Monitor<NatSet, SpmRequest> for Contains {
    fn name(&self) -> String {
        format!("contains({})", self.0)
    }

    fn verdict(&self, prefix: &[NatSet]) -> Verdict<SpmRequest> {
        match first_position(prefix, |m| m.contains(&self.0)) {
            Some(stage) if prefix.last().is_some_and(|m| m.contains(&self.0)) => Verdict::Satisfied(Certificate {
                requirement: self.name(),
                witness: vec![self.0],
                guard: Guard::Request(SpmRequest { pos: [self.0].into_iter().collect(), neg: NatSet::new() }),
                stage,
            }),
            _ => Verdict::Pending,
        }
    }
}

/// Violated once `x` is in the set; satisfied (guarded by keeping `x` out)
/// from the first position of a prefix that lacks it.
pub struct Avoids(pub u64);

impl Monitor<NatSet, SpmRequest> for Avoids {
    fn name(&self) -> String {
        format!("avoids({})", self.0)
    }

    fn verdict(&self, prefix: &[NatSet]) -> Verdict<SpmRequest> {
        if prefix.is_empty() {
            return Verdict::Pending;
        }
        if prefix.iter().any(|m| m.contains(&self.0)) {
            return Verdict::Violated(format!("{} entered the set", self.0));
        }
        Verdict::Satisfied(Certificate {
            requirement: self.name(),
            witness: vec![self.0],
            guard: Guard::Request(SpmRequest { pos: NatSet::new(), neg: [self.0].into_iter().collect() }),
            stage: 0,
        })
    }
}
