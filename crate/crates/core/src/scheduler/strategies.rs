//! Shipped requirement strategies.
//!
//! Each strategy declares satisfaction only from `on_item`, when the observed
//! item was chosen under its current request and already carries the
//! evidence. The certificate's stage is that item's position.

use std::sync::Arc;

use crate::encoding::{BitString, NatSet};
use crate::framework::{Certificate, Framework, Guard};
use crate::frameworks::{PairItem, Product, S01Request, Spm, SpmRequest, Spp, SppRequest, S01};
use crate::game::{BobStrategy, StageContext, StrategyStatus};
use crate::universe::OpponentUniverse;

use super::scenario::{Side, StrategyKind};

/// Least natural `≥ offset` for which `taken` is false.
fn least_free(offset: u64, taken: impl Fn(u64) -> bool) -> u64 {
    (offset..).find(|&x| !taken(x)).expect("finite constraints leave room")
}

pub fn witness_offset(index: usize) -> u64 {
    10 * (index as u64 + 1)
}

fn certificate<R>(kind: &StrategyKind, witness: Vec<u64>, guard: R, ctx: &StageContext) -> Certificate<R> {
    Certificate { requirement: kind.label(), witness, guard: Guard::Request(guard), stage: ctx.stage - 1 }
}

/// Puts some element of `W_e` above `2e` into the set.
pub struct SimpleStrategy {
    e: u64,
    universe: Arc<OpponentUniverse>,
    base: SpmRequest,
    chosen: Option<u64>,
    done: Option<Certificate<SpmRequest>>,
}

impl SimpleStrategy {
    pub fn new(e: u64, universe: Arc<OpponentUniverse>) -> Self {
        SimpleStrategy { e, universe, base: SpmRequest::default(), chosen: None, done: None }
    }

    fn request(&self) -> SpmRequest {
        match self.chosen {
            Some(x) => self.base.with_pos(x),
            None => self.base.clone(),
        }
    }

    fn look(&mut self, ctx: &StageContext, item: &NatSet) {
        if self.chosen.is_some() {
            return;
        }
        let permitted: Vec<u64> = self
            .universe
            .we_at_stage(self.e, ctx.budget())
            .into_iter()
            .filter(|&x| x > 2 * self.e && !self.base.neg.contains(&x))
            .collect();
        self.chosen = permitted.iter().copied().find(|x| item.contains(x)).or(permitted.first().copied());
    }
}

impl BobStrategy<Spm> for SimpleStrategy {
    fn label(&self) -> String {
        StrategyKind::Simple(self.e).label()
    }

    fn restart(&mut self, ctx: &StageContext, base: &SpmRequest, current: &NatSet) -> SpmRequest {
        self.base = base.clone();
        self.chosen = None;
        self.done = None;
        self.look(ctx, current);
        self.request()
    }

    fn on_item(&mut self, ctx: &StageContext, item: &NatSet) -> SpmRequest {
        if let (Some(x), None) = (self.chosen, &self.done) {
            if item.contains(&x) {
                self.done = Some(certificate(&StrategyKind::Simple(self.e), vec![self.e, x], self.request(), ctx));
            }
        }
        self.look(ctx, item);
        self.request()
    }

    fn status(&self) -> StrategyStatus<SpmRequest> {
        match &self.done {
            Some(c) => StrategyStatus::SatisfiedDeclared(c.clone()),
            None => StrategyStatus::Pending,
        }
    }
}

type SpmPair = Product<Spm, Spm>;
type PairRequest = (SpmRequest, SpmRequest);

#[derive(Clone, Copy, Debug)]
struct Computation {
    value: u8,
    use_bound: usize,
    stage: usize,
}

/// Keeps the `side` set from being computed by functional `e` from the other
/// set: holds a witness out, waits for the functional to answer on it,
/// then freezes the other set below the use and makes the witness disagree.
pub struct FmStrategy {
    e: u64,
    side: Side,
    index: usize,
    universe: Arc<OpponentUniverse>,
    base: PairRequest,
    witness: u64,
    computation: Option<Computation>,
    frozen: NatSet,
    done: Option<Certificate<PairRequest>>,
}

impl FmStrategy {
    pub fn new(e: u64, side: Side, index: usize, universe: Arc<OpponentUniverse>) -> Self {
        FmStrategy {
            e,
            side,
            index,
            universe,
            base: Default::default(),
            witness: 0,
            computation: None,
            frozen: NatSet::new(),
            done: None,
        }
    }

    fn kind(&self) -> StrategyKind {
        StrategyKind::Fm { e: self.e, side: self.side }
    }

    fn request(&self) -> PairRequest {
        let mut r = self.base.clone();
        let (a, b) = self.side.split_mut(&mut r);
        match self.computation {
            Some(c) if c.value == 0 => {
                a.pos.insert(self.witness);
            }
            _ => {
                a.neg.insert(self.witness);
            }
        }
        b.neg.extend(self.frozen.iter().copied());
        r
    }
}

impl BobStrategy<SpmPair> for FmStrategy {
    fn label(&self) -> String {
        self.kind().label()
    }

    fn restart(&mut self, _ctx: &StageContext, base: &PairRequest, current: &(NatSet, NatSet)) -> PairRequest {
        self.base = base.clone();
        self.computation = None;
        self.frozen.clear();
        self.done = None;
        let (a_req, _) = self.side.split(base);
        let (a_now, _) = self.side.split(current);
        self.witness = least_free(witness_offset(self.index), |x| {
            a_req.pos.contains(&x) || a_req.neg.contains(&x) || a_now.contains(&x)
        });
        self.request()
    }

    fn on_item(&mut self, ctx: &StageContext, item: &(NatSet, NatSet)) -> PairRequest {
        let (_, b_now) = self.side.split(item);
        match self.computation {
            None => {
                let oracle = BitString::characteristic(b_now, ctx.stage);
                if let Some((value, use_bound)) =
                    self.universe.functional_eval(self.e, &oracle, self.witness, ctx.budget())
                {
                    self.frozen = (0..use_bound as u64).filter(|y| !b_now.contains(y)).collect();
                    self.computation = Some(Computation { value, use_bound, stage: ctx.stage });
                }
            }
            Some(c) if self.done.is_none() => {
                let guard = self.request();
                if SpmPair::new(Spm, Spm).compatible(item, &guard) {
                    let witness = vec![self.e, self.witness, c.use_bound as u64, c.stage as u64, c.value.into()];
                    self.done = Some(certificate(&self.kind(), witness, guard, ctx));
                }
            }
            Some(_) => {}
        }
        self.request()
    }

    fn status(&self) -> StrategyStatus<PairRequest> {
        match &self.done {
            Some(c) => StrategyStatus::SatisfiedDeclared(c.clone()),
            None => StrategyStatus::Pending,
        }
    }
}

/// Makes side 0 differ from the set decided by `φ_e`: routes the next
/// enumerated element against `φ_e`'s claim about it.
///
/// `φ_e(x) = 1` claims `x` lands on side 0, so the element is routed to side
/// `φ_e(x)`, i.e. away from the claimed side.
pub struct SplitStrategy {
    e: u64,
    framework: S01,
    universe: Arc<OpponentUniverse>,
    base: S01Request,
    /// `(position, element, claim bit)`.
    target: Option<(usize, u64, u8)>,
    done: Option<Certificate<S01Request>>,
}

impl SplitStrategy {
    pub fn new(e: u64, framework: S01, universe: Arc<OpponentUniverse>) -> Self {
        SplitStrategy { e, framework, universe, base: S01Request::default(), target: None, done: None }
    }

    fn request(&self) -> S01Request {
        match self.target {
            Some((_, x, b)) => self.base.routing(x, b),
            None => self.base.clone(),
        }
    }

    fn look(&mut self, ctx: &StageContext, item: &BitString) {
        if self.target.is_some() {
            return;
        }
        let s = item.len();
        let Ok(x) = self.framework.element(s) else { return };
        if let Some(b) = self.universe.phi_eval(self.e, x, ctx.budget()) {
            if !self.base.bars(x, b) {
                self.target = Some((s, x, b));
            }
        }
    }
}

impl BobStrategy<S01> for SplitStrategy {
    fn label(&self) -> String {
        StrategyKind::Split(self.e).label()
    }

    fn restart(&mut self, ctx: &StageContext, base: &S01Request, current: &BitString) -> S01Request {
        self.base = base.clone();
        self.target = None;
        self.done = None;
        self.look(ctx, current);
        self.request()
    }

    fn on_item(&mut self, ctx: &StageContext, item: &BitString) -> S01Request {
        if let (Some((s, x, b)), None) = (self.target, &self.done) {
            if item.bit(s) == Some(b == 1) {
                let witness = vec![self.e, s as u64, x, b.into()];
                self.done = Some(certificate(&StrategyKind::Split(self.e), witness, self.request(), ctx));
            }
        }
        self.look(ctx, item);
        self.request()
    }

    fn status(&self) -> StrategyStatus<S01Request> {
        match &self.done {
            Some(c) => StrategyStatus::SatisfiedDeclared(c.clone()),
            None => StrategyStatus::Pending,
        }
    }
}

/// Keeps `φ_e` from separating the pair: protects a witness, and once
/// `φ_e` answers on it, places it on the side that contradicts the answer
/// (`1` puts it into `B`, `0` into `A`).
pub struct InsepStrategy {
    e: u64,
    index: usize,
    universe: Arc<OpponentUniverse>,
    base: SppRequest,
    witness: u64,
    answer: Option<u8>,
    done: Option<Certificate<SppRequest>>,
}

impl InsepStrategy {
    pub fn new(e: u64, index: usize, universe: Arc<OpponentUniverse>) -> Self {
        InsepStrategy { e, index, universe, base: SppRequest::default(), witness: 0, answer: None, done: None }
    }

    fn request(&self) -> SppRequest {
        let mut r = self.base.clone();
        match self.answer {
            None => r.keep_out.insert(self.witness),
            Some(1) => r.b_pos.insert(self.witness),
            Some(_) => r.a_pos.insert(self.witness),
        };
        r
    }
}

impl BobStrategy<Spp> for InsepStrategy {
    fn label(&self) -> String {
        StrategyKind::Insep(self.e).label()
    }

    fn restart(&mut self, _ctx: &StageContext, base: &SppRequest, current: &PairItem) -> SppRequest {
        self.base = base.clone();
        self.answer = None;
        self.done = None;
        self.witness = least_free(witness_offset(self.index), |x| base.mentions(x) || current.mentions(x));
        self.request()
    }

    fn on_item(&mut self, ctx: &StageContext, item: &PairItem) -> SppRequest {
        match self.answer {
            None => self.answer = self.universe.phi_eval(self.e, self.witness, ctx.budget()),
            Some(b) if self.done.is_none() => {
                let guard = self.request();
                if Spp.compatible(item, &guard) {
                    let witness = vec![self.e, self.witness, b.into()];
                    self.done = Some(certificate(&StrategyKind::Insep(self.e), witness, guard, ctx));
                }
            }
            Some(_) => {}
        }
        self.request()
    }

    fn status(&self) -> StrategyStatus<SppRequest> {
        match &self.done {
            Some(c) => StrategyStatus::SatisfiedDeclared(c.clone()),
            None => StrategyStatus::Pending,
        }
    }
}
