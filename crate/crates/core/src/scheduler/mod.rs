//! Finite-injury combination of strategies into one item sequence.
//!
//! Strategy `i` is activated at stage `i`. At each stage the active
//! strategies are polled in priority order; strategy `i` works against the
//! request of strategy `i - 1` (the framework's initial request for `i = 0`)
//! and its answer must dominate that base. When a strategy's request differs
//! from the one it held at the previous stage, every lower-priority strategy
//! is restarted (injured) and recomputes against the new base. The stage item
//! is then the canonical least successor compatible with the deepest request.

mod conditions;
mod runfile;
mod scenario;
mod strategies;
mod verify;

use thiserror::Error;

use crate::encoding::hex_field;
use crate::framework::{Certificate, Framework, SearchEnd};
use crate::game::{BobStrategy, StageContext, StrategyStatus};
use crate::universe::OpponentUniverse;

pub use conditions::{Avoids, Contains, FmCondition, InsepCondition, SimpleCondition, SplitCondition};
pub use runfile::{parse_run, read_header, run_to_text, RunHeader};
pub use scenario::{
    build_strategies, demo_census, run_scenario, run_typed, verify_run_text, ScenarioError, ScenarioFramework,
    ScenarioOutcome, Side, StrategyKind,
};
pub use strategies::{witness_offset, FmStrategy, InsepStrategy, SimpleStrategy, SplitStrategy};
pub use verify::{strategy_transcripts, verify_run, CheckOutcome, VerifyReport};

/// Largest encoded item length examined by the item search, in bytes.
pub const DEFAULT_SEARCH_BOUND: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub horizon: usize,
    pub quiescence: usize,
    pub search_bound: usize,
}

/// Lazily produced strategies in priority order.
pub trait StrategyFamily<F: Framework> {
    fn next_strategy(&mut self) -> Option<Box<dyn BobStrategy<F>>>;
}

impl<F: Framework, T> StrategyFamily<F> for T
where
    T: Iterator<Item = Box<dyn BobStrategy<F>>>,
{
    fn next_strategy(&mut self) -> Option<Box<dyn BobStrategy<F>>> {
        self.next()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Event {
    Activated(usize),
    Changed(usize),
    Injured { index: usize, cause: usize },
    Declared(usize),
    Withdrawn(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord<R, I> {
    /// Requests of the active strategies, highest priority first.
    pub chain: Vec<R>,
    pub item: I,
    pub events: Vec<Event>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateRecord<R> {
    pub strategy: usize,
    pub certificate: Certificate<R>,
    /// Stage at which the strategy declared it.
    pub declared: usize,
    pub withdrawn: Option<usize>,
}

impl<R> CertificateRecord<R> {
    pub fn is_live(&self) -> bool {
        self.withdrawn.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run<R, I> {
    pub framework: String,
    pub universe_hash: String,
    pub config: RunConfig,
    /// Labels of the activated strategies in priority order.
    pub strategies: Vec<String>,
    pub stages: Vec<StageRecord<R, I>>,
    pub certificates: Vec<CertificateRecord<R>>,
    /// Last stage at which each strategy's request changed (activation counts).
    pub last_change: Vec<usize>,
}

pub type FrameworkRun<F> = Run<<F as Framework>::Request, <F as Framework>::Item>;

impl<R, I> Run<R, I> {
    pub fn items(&self) -> Vec<&I> {
        self.stages.iter().map(|s| &s.item).collect()
    }

    pub fn live_certificate(&self, strategy: usize) -> Option<&CertificateRecord<R>> {
        self.certificates.iter().find(|c| c.strategy == strategy && c.is_live())
    }

    pub fn injuries(&self, strategy: usize) -> usize {
        self.events().filter(|(_, e)| matches!(e, Event::Injured { index, .. } if *index == strategy)).count()
    }

    pub fn total_injuries(&self) -> usize {
        self.events().filter(|(_, e)| matches!(e, Event::Injured { .. })).count()
    }

    pub fn request_changes(&self, strategy: usize) -> usize {
        self.events()
            .filter(|(_, e)| matches!(e, Event::Changed(i) | Event::Activated(i) if *i == strategy))
            .count()
    }

    pub fn events(&self) -> impl Iterator<Item = (usize, &Event)> {
        self.stages.iter().enumerate().flat_map(|(n, s)| s.events.iter().map(move |e| (n, e)))
    }

    /// Every strategy's last change lies before the final quiescence window.
    pub fn stabilized(&self) -> bool {
        let Some(limit) = self.config.horizon.checked_sub(self.config.quiescence) else {
            return false;
        };
        self.last_change.iter().all(|&c| c < limit)
    }

    pub fn all_satisfied(&self) -> bool {
        (0..self.strategies.len()).all(|i| self.live_certificate(i).is_some())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchedulerError {
    #[error("stage {stage}: no item follows the previous one under request {request} ({})",
        if *provable { "none exists" } else { "search bound reached" })]
    NoCompatibleItem { stage: usize, request: String, provable: bool },
    #[error("stage {stage}: strategy {index} ({label}) emitted {request}: {reason}")]
    StrategyFault { stage: usize, index: usize, label: String, request: String, reason: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("strategies without a live certificate: {0}")]
    Unsatisfied(String),
}

/// Canonical least successor of `prev` compatible with `deepest`, searching
/// items of at most `search_bound` encoded bytes.
pub fn select_item<F: Framework>(
    f: &F,
    prev: &F::Item,
    deepest: &F::Request,
    search_bound: usize,
) -> Result<F::Item, SearchEnd> {
    let mut candidates = f.successors(prev, deepest).capped(search_bound);
    match candidates.next() {
        Some(item) => Ok(item),
        None => Err(candidates.end().unwrap_or(SearchEnd::Truncated)),
    }
}

struct Slot<F: Framework> {
    strategy: Box<dyn BobStrategy<F>>,
    live_certificate: Option<usize>,
}

pub fn run_construction<F: Framework>(
    f: &F,
    family: &mut dyn StrategyFamily<F>,
    universe: &OpponentUniverse,
    config: RunConfig,
) -> Result<FrameworkRun<F>, SchedulerError> {
    if config.horizon == 0 {
        return Err(SchedulerError::Config("horizon must be at least 1".into()));
    }
    if config.quiescence == 0 {
        return Err(SchedulerError::Config("quiescence must be at least 1".into()));
    }
    let mut run = Run {
        framework: f.id(),
        universe_hash: universe.hash(),
        config,
        strategies: Vec::new(),
        stages: Vec::new(),
        certificates: Vec::new(),
        last_change: Vec::new(),
    };
    let mut slots: Vec<Slot<F>> = Vec::new();
    let mut family_done = false;
    let initial_request = f.initial_request();
    let mut prev_item = f.initial_item();
    let mut prev_chain: Vec<F::Request> = Vec::new();

    for stage in 0..config.horizon {
        if !family_done && slots.len() == stage {
            match family.next_strategy() {
                Some(strategy) => {
                    run.strategies.push(strategy.label());
                    run.last_change.push(stage);
                    slots.push(Slot { strategy, live_certificate: None });
                }
                None => family_done = true,
            }
        }
        let ctx = StageContext { stage };
        let mut events = Vec::new();
        let mut chain: Vec<F::Request> = Vec::with_capacity(slots.len());
        let mut first_changed: Option<usize> = None;

        for (i, slot) in slots.iter_mut().enumerate() {
            let base = if i == 0 { &initial_request } else { &chain[i - 1] };
            let newly_active = i >= prev_chain.len();
            let request = if newly_active {
                events.push(Event::Activated(i));
                slot.strategy.restart(&ctx, base, &prev_item)
            } else if let Some(cause) = first_changed {
                events.push(Event::Injured { index: i, cause });
                if let Some(c) = slot.live_certificate.take() {
                    run.certificates[c].withdrawn = Some(stage);
                    events.push(Event::Withdrawn(i));
                }
                slot.strategy.restart(&ctx, base, &prev_item)
            } else {
                slot.strategy.on_item(&ctx, &prev_item)
            };

            let fault = |reason: &str| SchedulerError::StrategyFault {
                stage,
                index: i,
                label: slot.strategy.label(),
                request: hex_field(&f.encode_request(&request)),
                reason: reason.to_string(),
            };
            if let Err(e) = f.check_request(&request) {
                return Err(fault(&e.to_string()));
            }
            if !f.dominates(&request, base) {
                return Err(fault("request does not dominate its base"));
            }

            if !newly_active && request != prev_chain[i] {
                events.push(Event::Changed(i));
                run.last_change[i] = stage;
                first_changed.get_or_insert(i);
            }
            if slot.live_certificate.is_none() {
                if let StrategyStatus::SatisfiedDeclared(certificate) = slot.strategy.status() {
                    slot.live_certificate = Some(run.certificates.len());
                    run.certificates.push(CertificateRecord { strategy: i, certificate, declared: stage, withdrawn: None });
                    events.push(Event::Declared(i));
                }
            }
            chain.push(request);
        }

        let deepest = chain.last().unwrap_or(&initial_request);
        let item = select_item(f, &prev_item, deepest, config.search_bound).map_err(|end| {
            SchedulerError::NoCompatibleItem {
                stage,
                request: hex_field(&f.encode_request(deepest)),
                provable: end == SearchEnd::Exhausted,
            }
        })?;
        run.stages.push(StageRecord { chain: chain.clone(), item: item.clone(), events });
        prev_chain = chain;
        prev_item = item;
    }
    Ok(run)
}

/// The item sequence of a run in which every strategy ends satisfied.
pub fn nonemptiness_witness<F: Framework>(
    f: &F,
    family: &mut dyn StrategyFamily<F>,
    universe: &OpponentUniverse,
    config: RunConfig,
) -> Result<Vec<F::Item>, SchedulerError> {
    let run = run_construction(f, family, universe, config)?;
    let missing: Vec<&str> = run
        .strategies
        .iter()
        .enumerate()
        .filter(|(i, _)| run.live_certificate(*i).is_none())
        .map(|(_, label)| label.as_str())
        .collect();
    if !missing.is_empty() {
        return Err(SchedulerError::Unsatisfied(missing.join(", ")));
    }
    Ok(run.stages.into_iter().map(|s| s.item).collect())
}
