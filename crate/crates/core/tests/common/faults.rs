//! Set-framework transcripts with exactly one injected rule violation.

use priority_core::frameworks::{Spm, SpmRequest};
use priority_core::game::{play, CanonicalAlice, FrameworkTranscript, Reply, ScriptedBob, Violation, ViolationKind};
use priority_core::NatSet;

pub const FAULTS: [ViolationKind; 6] = [
    ViolationKind::OpeningIncompatible,
    ViolationKind::MalformedRequest,
    ViolationKind::DominationFailure,
    ViolationKind::ItemNotFollowing,
    ViolationKind::ItemIncompatible,
    ViolationKind::AliceStuck { provable: true },
];

/// Always in the opening request, so removing it breaks the opening or
/// domination.
const PINNED: u64 = 1;
const FRESH_BAD: u64 = 100;
const FRESH_HELD: u64 = 200;

/// Clean play: requests add required elements below 10 and excluded ones
/// in 20..30, so the canonical answers never touch an excluded element.
/// `grow[k]` is what round `k + 1` adds on top of everything before.
pub fn clean(opening: &SpmRequest, grow: &[(NatSet, NatSet)]) -> FrameworkTranscript<Spm> {
    let small = |s: &NatSet| s.iter().map(|x| x % 10).collect::<NatSet>();
    let large = |s: &NatSet| s.iter().map(|x| 20 + x % 10).collect::<NatSet>();
    let mut u0 = SpmRequest { pos: small(&opening.pos), neg: large(&opening.neg) };
    u0.pos.insert(PINNED);
    let mut script = Vec::new();
    let mut cur = u0.clone();
    for (p, n) in grow {
        cur.pos.extend(small(p));
        cur.neg.extend(large(n));
        script.push(cur.clone());
    }
    if script.is_empty() {
        script.push(u0.clone());
    }
    let mut alice = CanonicalAlice::new(Spm, u0.clone(), u0.pos.clone());
    let mut bob = ScriptedBob::new(script);
    play(&Spm, &mut alice, &mut bob, grow.len().max(1))
}

fn item_mut(t: &mut FrameworkTranscript<Spm>, round: usize) -> &mut NatSet {
    match &mut t.rounds[round - 1].reply {
        Reply::Item(m) => m,
        _ => panic!("clean transcripts answer every round"),
    }
}

/// Injects `kind` at `round` (1-based; ignored for the opening) and returns
/// the single violation the referee must report.
pub fn inject(t: &mut FrameworkTranscript<Spm>, kind: ViolationKind, round: usize) -> Violation {
    let n = t.rounds.len();
    let round = round.clamp(1, n);
    match kind {
        ViolationKind::OpeningIncompatible => {
            t.opening.1.remove(&PINNED);
        }
        ViolationKind::MalformedRequest => {
            t.rounds[round - 1].request.neg.insert(PINNED);
        }
        ViolationKind::DominationFailure => {
            t.rounds[round - 1].request.pos.remove(&PINNED);
        }
        ViolationKind::ItemNotFollowing => {
            item_mut(t, round).remove(&PINNED);
        }
        ViolationKind::ItemIncompatible => {
            t.rounds[round - 1].request.neg.insert(FRESH_BAD);
            for k in round..=n {
                item_mut(t, k).insert(FRESH_BAD);
            }
        }
        ViolationKind::AliceStuck { .. } => {
            t.opening.1.insert(FRESH_HELD);
            for k in 1..round {
                item_mut(t, k).insert(FRESH_HELD);
            }
            t.rounds.truncate(round);
            t.rounds[round - 1].request.neg.insert(FRESH_HELD);
            t.rounds[round - 1].reply = Reply::Stuck;
        }
    }
    let at = if kind == ViolationKind::OpeningIncompatible { 0 } else { round };
    let v = Violation { round: at, kind };
    t.annotation = Some(v);
    v
}
