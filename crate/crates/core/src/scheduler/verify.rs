//! Independent audit of a run, recomputed from its recorded moves.

use std::collections::BTreeSet;
use std::fmt;

use crate::framework::{BruteForceOracle, Framework};
use crate::game::{FrameworkTranscript, Reply, Round, Transcript};
use crate::universe::OpponentUniverse;

use super::scenario::{ScenarioFramework, StrategyKind};
use super::{Event, FrameworkRun};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    /// Failure descriptions; each starts with `stage <n>:` when tied to a stage.
    pub failures: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    /// Stages named by failures, in order of first mention.
    pub fn failing_stages(&self) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for f in self.checks.iter().flat_map(|c| &c.failures) {
            let stage = f.strip_prefix("stage ").and_then(|r| r.split(':').next()).and_then(|n| n.parse().ok());
            if let Some(n) = stage {
                if seen.insert(n) {
                    out.push(n);
                }
            }
        }
        out
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            if check.passed() {
                writeln!(f, "{}: pass", check.name)?;
            } else {
                writeln!(f, "{}: FAIL", check.name)?;
                for failure in &check.failures {
                    writeln!(f, "  {failure}")?;
                }
            }
        }
        write!(f, "overall: {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

/// Runs checks (a) sequence validity, (b) nested domination, (c) stage
/// compatibility, (d) injury accounting and (e) certificates, plus the
/// universe fingerprint and run shape.
pub fn verify_run<F: ScenarioFramework>(f: &F, universe: &OpponentUniverse, run: &FrameworkRun<F>) -> VerifyReport {
    let items: Vec<F::Item> = run.stages.iter().map(|s| s.item.clone()).collect();
    let kinds: Vec<Option<StrategyKind>> = run.strategies.iter().map(|l| l.parse().ok()).collect();
    let checks = vec![
        check_shape(f, universe, run, &kinds),
        check_validity(f, &items),
        check_domination(f, run),
        check_compatibility(f, run),
        check_injuries::<F>(run),
        check_certificates(f, universe, run, &items, &kinds),
    ];
    VerifyReport { checks }
}

fn check_shape<F: Framework>(
    f: &F,
    universe: &OpponentUniverse,
    run: &FrameworkRun<F>,
    kinds: &[Option<StrategyKind>],
) -> CheckOutcome {
    let mut failures = Vec::new();
    if run.framework != f.id() {
        failures.push(format!("framework {} is not {}", run.framework, f.id()));
    }
    if run.universe_hash != universe.hash() {
        failures.push("universe fingerprint does not match the supplied universe".into());
    }
    if run.stages.len() != run.config.horizon {
        failures.push(format!("{} stages recorded for horizon {}", run.stages.len(), run.config.horizon));
    }
    for (label, kind) in run.strategies.iter().zip(kinds) {
        if kind.is_none() {
            failures.push(format!("unknown strategy {label}"));
        }
    }
    let k = run.strategies.len();
    for (n, stage) in run.stages.iter().enumerate() {
        let expected = k.min(n + 1);
        if stage.chain.len() != expected {
            failures.push(format!("stage {n}: chain has {} slots, activation schedule gives {expected}", stage.chain.len()));
        }
    }
    CheckOutcome { name: "shape", failures }
}

fn check_validity<F: Framework>(f: &F, items: &[F::Item]) -> CheckOutcome {
    let mut failures = Vec::new();
    let mut prev = f.initial_item();
    for (n, item) in items.iter().enumerate() {
        if let Err(e) = f.check_item(item) {
            failures.push(format!("stage {n}: {e}"));
        } else if !f.may_follow(item, &prev) {
            failures.push(format!("stage {n}: item does not follow its predecessor"));
        }
        prev = item.clone();
    }
    CheckOutcome { name: "(a) sequence validity", failures }
}

fn check_domination<F: ScenarioFramework>(f: &F, run: &FrameworkRun<F>) -> CheckOutcome {
    let mut failures = Vec::new();
    let oracle = f.spot_check_bound().and_then(|b| BruteForceOracle::new(f, b).ok());
    let initial = f.initial_request();
    for (n, stage) in run.stages.iter().enumerate() {
        for (i, r) in stage.chain.iter().enumerate() {
            if let Err(e) = f.check_request(r) {
                failures.push(format!("stage {n}: request {i} malformed: {e}"));
                continue;
            }
            let base = if i == 0 { &initial } else { &stage.chain[i - 1] };
            if !f.dominates(r, base) {
                failures.push(format!("stage {n}: request {i} does not dominate its base"));
            } else if let Some(oracle) = &oracle {
                // Sound on any bounded universe: domination restricts there too.
                if let Some(m) = oracle.check(r, base).counterexample {
                    failures.push(format!("stage {n}: request {i} fails the exhaustive check at {m:?}"));
                }
            }
        }
    }
    CheckOutcome { name: "(b) nested domination", failures }
}

fn check_compatibility<F: Framework>(f: &F, run: &FrameworkRun<F>) -> CheckOutcome {
    let mut failures = Vec::new();
    for (n, stage) in run.stages.iter().enumerate() {
        if let Some(deepest) = stage.chain.last() {
            if !f.compatible(&stage.item, deepest) {
                failures.push(format!("stage {n}: item incompatible with the deepest request"));
            }
        }
        for (i, r) in stage.chain.iter().enumerate() {
            if !f.compatible(&stage.item, r) {
                failures.push(format!("stage {n}: item incompatible with request {i}"));
            }
        }
    }
    CheckOutcome { name: "(c) stage compatibility", failures }
}

fn check_injuries<F: Framework>(run: &FrameworkRun<F>) -> CheckOutcome {
    let mut failures = Vec::new();
    let k = run.strategies.len();
    let mut changes = vec![0usize; k];
    let mut restarts = vec![0usize; k];
    let mut last_change: Vec<Option<usize>> = vec![None; k];
    let mut prev: &[F::Request] = &[];
    for (n, stage) in run.stages.iter().enumerate() {
        let mut first_changed = None;
        let mut recomputed = BTreeSet::new();
        for (i, r) in stage.chain.iter().enumerate().take(k) {
            let activated = i >= prev.len();
            if !activated {
                if let Some(cause) = first_changed {
                    restarts[i] += 1;
                    recomputed.insert(Event::Injured { index: i, cause });
                }
            }
            if activated || *r != prev[i] {
                changes[i] += 1;
                last_change[i] = Some(n);
                if !activated {
                    first_changed.get_or_insert(i);
                }
            }
        }
        let recorded: BTreeSet<Event> =
            stage.events.iter().filter(|e| matches!(e, Event::Injured { .. })).copied().collect();
        if recorded != recomputed {
            failures.push(format!("stage {n}: recorded injuries {recorded:?} differ from recomputed {recomputed:?}"));
        }
        prev = &stage.chain;
    }
    for i in 0..k {
        let bound: usize = changes[..i].iter().sum();
        if restarts[i] > bound {
            failures.push(format!("strategy {i} restarted {} times, above {bound} higher-priority changes", restarts[i]));
        }
        if run.last_change.get(i).copied() != last_change[i] {
            failures.push(format!(
                "strategy {i}: recorded last change {:?} differs from recomputed {:?}",
                run.last_change.get(i),
                last_change[i]
            ));
        }
    }
    if run.last_change.len() != k {
        failures.push(format!("{} stabilization entries for {k} strategies", run.last_change.len()));
    }
    CheckOutcome { name: "(d) injury accounting", failures }
}

fn check_certificates<F: ScenarioFramework>(
    f: &F,
    universe: &OpponentUniverse,
    run: &FrameworkRun<F>,
    items: &[F::Item],
    kinds: &[Option<StrategyKind>],
) -> CheckOutcome {
    let mut failures = Vec::new();
    let mut live = vec![0usize; kinds.len()];
    for rec in &run.certificates {
        let cert = &rec.certificate;
        let at = |msg: String| format!("stage {}: certificate of strategy {}: {msg}", cert.stage, rec.strategy);
        let Some(Some(kind)) = kinds.get(rec.strategy) else {
            failures.push(at("no such strategy".into()));
            continue;
        };
        if cert.requirement != kind.label() {
            failures.push(at(format!("names {} instead of {kind}", cert.requirement)));
        }
        if cert.stage >= rec.declared || rec.declared >= items.len() {
            failures.push(at(format!("declared at {} from stage {}", rec.declared, cert.stage)));
            continue;
        }
        let end = match rec.withdrawn {
            Some(w) if w <= rec.declared || w > items.len() => {
                failures.push(at(format!("withdrawn at {w}")));
                continue;
            }
            Some(w) => w,
            None => {
                live[rec.strategy] += 1;
                items.len()
            }
        };
        for (j, m) in items.iter().enumerate().take(end).skip(cert.stage) {
            if !cert.guard.admits(f, m) {
                failures.push(format!("stage {j}: guard of strategy {}'s certificate no longer holds", rec.strategy));
                break;
            }
        }
        if rec.withdrawn.is_none() {
            if let Err(msg) = f.check_witness(kind, rec, items, universe) {
                // Witness checks may name their own stage.
                let msg = match msg.strip_prefix("stage ").and_then(|r| r.split_once(": ")) {
                    Some((n, rest)) => format!("stage {n}: certificate of strategy {}: {rest}", rec.strategy),
                    None => at(msg),
                };
                failures.push(msg);
            }
        }
    }
    for (i, n) in live.iter().enumerate() {
        if *n > 1 {
            failures.push(format!("strategy {i} has {n} live certificates"));
        }
    }
    CheckOutcome { name: "(e) certificates", failures }
}

/// Strategy `i`'s games inside a run, one per restart: the opening is its
/// base request and the item chosen at the restart stage; each later stage
/// contributes the strategy's request and that stage's item.
pub fn strategy_transcripts<F: Framework>(f: &F, run: &FrameworkRun<F>, i: usize) -> Vec<FrameworkTranscript<F>> {
    let initial = f.initial_request();
    let mut out: Vec<FrameworkTranscript<F>> = Vec::new();
    for stage in &run.stages {
        if i >= stage.chain.len() {
            continue;
        }
        let restarted = stage.events.iter().any(|e| {
            matches!(e, Event::Activated(j) if *j == i) || matches!(e, Event::Injured { index, .. } if *index == i)
        });
        if restarted || out.is_empty() {
            let base = if i == 0 { initial.clone() } else { stage.chain[i - 1].clone() };
            out.push(Transcript { framework: f.id(), opening: (base, stage.item.clone()), rounds: Vec::new(), annotation: None });
        } else if let Some(t) = out.last_mut() {
            t.rounds.push(Round { request: stage.chain[i].clone(), reply: Reply::Item(stage.item.clone()) });
        }
    }
    out
}
