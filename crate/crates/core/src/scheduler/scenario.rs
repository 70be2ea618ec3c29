//! Strategy kinds, per-framework dispatch and run summaries.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::encoding::{BitString, NatSet};
use crate::error::{FormatError, FrameworkError};
use crate::framework::{ClassTag, Framework};
use crate::frameworks::{FrameworkSpec, Product, Spm, Spp, Ssep, S01};
use crate::game::BobStrategy;
use crate::universe::OpponentUniverse;

use super::runfile::{parse_run, read_header, run_to_text};
use super::strategies::{FmStrategy, InsepStrategy, SimpleStrategy, SplitStrategy};
use super::verify::{verify_run, VerifyReport};
use super::{run_construction, CertificateRecord, FrameworkRun, RunConfig, SchedulerError};

/// Which component of a set pair a strategy treats as the set it builds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// `(own, other)` out of `(left, right)`.
    pub fn pick<T>(self, left: T, right: T) -> (T, T) {
        match self {
            Side::Left => (left, right),
            Side::Right => (right, left),
        }
    }

    pub fn split<T>(self, pair: &(T, T)) -> (&T, &T) {
        self.pick(&pair.0, &pair.1)
    }

    pub fn split_mut<T>(self, pair: &mut (T, T)) -> (&mut T, &mut T) {
        let (l, r) = pair;
        self.pick(l, r)
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    Simple(u64),
    Fm { e: u64, side: Side },
    Split(u64),
    Insep(u64),
}

impl StrategyKind {
    pub fn label(&self) -> String {
        self.to_string()
    }

    pub fn class(&self) -> ClassTag {
        match self {
            StrategyKind::Split(_) => ClassTag::WeakComputablePriority,
            _ => ClassTag::ComputablePriority,
        }
    }

    /// Framework family the kind runs on.
    pub fn framework_name(&self) -> &'static str {
        match self {
            StrategyKind::Simple(_) => "spm",
            StrategyKind::Fm { .. } => "(spm*spm)",
            StrategyKind::Split(_) => "s01",
            StrategyKind::Insep(_) => "spp",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyKind::Simple(e) => write!(f, "SIMPLE({e})"),
            StrategyKind::Fm { e, side } => write!(f, "FM({e},{})", side.name()),
            StrategyKind::Split(e) => write!(f, "SPLIT({e})"),
            StrategyKind::Insep(e) => write!(f, "INSEP({e})"),
        }
    }
}

impl FromStr for StrategyKind {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        let bad = || format!("unrecognized strategy {text:?}");
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (name, rest) = compact.split_once('(').ok_or_else(bad)?;
        let args: Vec<&str> = rest.strip_suffix(')').ok_or_else(bad)?.split(',').collect();
        let index = |s: &str| s.parse::<u64>().map_err(|_| bad());
        match (name.to_ascii_uppercase().as_str(), args.as_slice()) {
            ("SIMPLE", [e]) => Ok(StrategyKind::Simple(index(e)?)),
            ("SPLIT", [e]) => Ok(StrategyKind::Split(index(e)?)),
            ("INSEP", [e]) => Ok(StrategyKind::Insep(index(e)?)),
            ("FM", [e, side]) => {
                let side = match side.to_ascii_lowercase().as_str() {
                    "left" => Side::Left,
                    "right" => Side::Right,
                    _ => return Err(bad()),
                };
                Ok(StrategyKind::Fm { e: index(e)?, side })
            }
            _ => Err(bad()),
        }
    }
}

/// Framework-specific glue: which strategy kinds run on it, how their
/// certificates are re-checked, and how small a universe the exhaustive
/// domination spot-check uses.
pub trait ScenarioFramework: Framework {
    fn make_strategy(
        &self,
        kind: &StrategyKind,
        index: usize,
        universe: &Arc<OpponentUniverse>,
    ) -> Option<Box<dyn BobStrategy<Self>>>;

    /// Checks a live certificate's witness against the universe and the
    /// final item.
    fn check_witness(
        &self,
        kind: &StrategyKind,
        record: &CertificateRecord<Self::Request>,
        items: &[Self::Item],
        universe: &OpponentUniverse,
    ) -> Result<(), String>;

    /// Universe bound for brute-force domination checks, if cheap enough.
    fn spot_check_bound(&self) -> Option<usize>;

    fn summary_lines(&self, _run: &FrameworkRun<Self>) -> Vec<String> {
        Vec::new()
    }
}

fn expect_len(witness: &[u64], n: usize) -> Result<(), String> {
    if witness.len() == n {
        Ok(())
    } else {
        Err(format!("witness has {} components, expected {n}", witness.len()))
    }
}

fn expect_index(witness: &[u64], e: u64) -> Result<(), String> {
    if witness[0] == e {
        Ok(())
    } else {
        Err(format!("witness names index {}, strategy works on {e}", witness[0]))
    }
}

/// Names the last stage, where a final-item check fails.
fn at_final<I>(items: &[I], msg: String) -> String {
    format!("stage {}: {msg}", items.len().saturating_sub(1))
}

/// `|complement ∩ [0, 2n)|`.
pub fn demo_census(set: &NatSet, n: u64) -> u64 {
    2 * n - set.range(..2 * n).count() as u64
}

impl ScenarioFramework for Spm {
    fn make_strategy(
        &self,
        kind: &StrategyKind,
        _index: usize,
        universe: &Arc<OpponentUniverse>,
    ) -> Option<Box<dyn BobStrategy<Spm>>> {
        match *kind {
            StrategyKind::Simple(e) => Some(Box::new(SimpleStrategy::new(e, universe.clone()))),
            _ => None,
        }
    }

    fn check_witness(
        &self,
        kind: &StrategyKind,
        record: &CertificateRecord<Self::Request>,
        items: &[NatSet],
        universe: &OpponentUniverse,
    ) -> Result<(), String> {
        let StrategyKind::Simple(e) = *kind else { return Err("kind does not run on this framework".into()) };
        let w = &record.certificate.witness;
        expect_len(w, 2)?;
        expect_index(w, e)?;
        let x = w[1];
        if x <= 2 * e {
            return Err(format!("witness {x} not above {}", 2 * e));
        }
        if !universe.we_at_stage(e, record.declared as u64).contains(&x) {
            return Err(format!("{x} not enumerated into W_{e} by stage {}", record.declared));
        }
        if !items.last().is_some_and(|m| m.contains(&x)) {
            return Err(at_final(items, format!("{x} missing from the final set")));
        }
        Ok(())
    }

    fn spot_check_bound(&self) -> Option<usize> {
        Some(6)
    }

    fn summary_lines(&self, run: &FrameworkRun<Self>) -> Vec<String> {
        let Some(last) = run.stages.last() else { return Vec::new() };
        let n = run.config.horizon as u64;
        let count = demo_census(&last.item, n);
        let verdict = if count >= n { "holds" } else { "FAILS" };
        vec![format!("census n={n}: |complement ∩ [0,{})| = {count} >= {n}: {verdict}", 2 * n)]
    }
}

impl ScenarioFramework for Product<Spm, Spm> {
    fn make_strategy(
        &self,
        kind: &StrategyKind,
        index: usize,
        universe: &Arc<OpponentUniverse>,
    ) -> Option<Box<dyn BobStrategy<Self>>> {
        match *kind {
            StrategyKind::Fm { e, side } => Some(Box::new(FmStrategy::new(e, side, index, universe.clone()))),
            _ => None,
        }
    }

    fn check_witness(
        &self,
        kind: &StrategyKind,
        record: &CertificateRecord<Self::Request>,
        items: &[(NatSet, NatSet)],
        universe: &OpponentUniverse,
    ) -> Result<(), String> {
        let StrategyKind::Fm { e, side } = *kind else { return Err("kind does not run on this framework".into()) };
        let w = &record.certificate.witness;
        expect_len(w, 5)?;
        expect_index(w, e)?;
        let (x, u, s, v) = (w[1], w[2] as usize, w[3], w[4]);
        if s as usize > record.declared {
            return Err(format!("computation stage {s} after declaration at {}", record.declared));
        }
        let from = record.certificate.stage;
        let frozen = items.get(from).map(|m| BitString::characteristic(side.split(m).1, u));
        for (j, m) in items.iter().enumerate().skip(from) {
            let (_, b) = side.split(m);
            let oracle = BitString::characteristic(b, u);
            if Some(&oracle) != frozen.as_ref() {
                return Err(format!("stage {j}: other set changed below use {u}"));
            }
            if universe.functional_eval(e, &oracle, x, u64::MAX).map(|(val, use_bound)| (u64::from(val), use_bound))
                != Some((v, u))
            {
                return Err(format!("stage {j}: functional {e} does not give {v} with use {u} at {x}"));
            }
        }
        let a_final = items.last().map(|m| side.split(m).0.contains(&x)).unwrap_or(false);
        if a_final == (v == 1) {
            return Err(at_final(items, format!("final set agrees with the functional at {x}")));
        }
        Ok(())
    }

    fn spot_check_bound(&self) -> Option<usize> {
        Some(4)
    }
}

impl ScenarioFramework for S01 {
    fn make_strategy(
        &self,
        kind: &StrategyKind,
        _index: usize,
        universe: &Arc<OpponentUniverse>,
    ) -> Option<Box<dyn BobStrategy<Self>>> {
        match *kind {
            StrategyKind::Split(e) => Some(Box::new(SplitStrategy::new(e, self.clone(), universe.clone()))),
            _ => None,
        }
    }

    fn check_witness(
        &self,
        kind: &StrategyKind,
        record: &CertificateRecord<Self::Request>,
        items: &[BitString],
        universe: &OpponentUniverse,
    ) -> Result<(), String> {
        let StrategyKind::Split(e) = *kind else { return Err("kind does not run on this framework".into()) };
        let w = &record.certificate.witness;
        expect_len(w, 4)?;
        expect_index(w, e)?;
        let (s, x, b) = (w[1] as usize, w[2], w[3]);
        if self.element(s).ok() != Some(x) {
            return Err(format!("position {s} does not enumerate {x}"));
        }
        if universe.phi_eval(e, x, u64::MAX).map(u64::from) != Some(b) {
            return Err(format!("phi_{e}({x}) is not {b}"));
        }
        let claimed = if b == 1 { 0 } else { 1 };
        match items.last().and_then(|m| m.bit(s)) {
            Some(bit) if u64::from(bit) != claimed => Ok(()),
            Some(_) => Err(at_final(items, format!("{x} sits on the claimed side {claimed}"))),
            None => Err(at_final(items, format!("position {s} never placed"))),
        }
    }

    fn spot_check_bound(&self) -> Option<usize> {
        Some(self.enumeration().len().min(8))
    }
}

impl ScenarioFramework for Spp {
    fn make_strategy(
        &self,
        kind: &StrategyKind,
        index: usize,
        universe: &Arc<OpponentUniverse>,
    ) -> Option<Box<dyn BobStrategy<Self>>> {
        match *kind {
            StrategyKind::Insep(e) => Some(Box::new(InsepStrategy::new(e, index, universe.clone()))),
            _ => None,
        }
    }

    fn check_witness(
        &self,
        kind: &StrategyKind,
        record: &CertificateRecord<Self::Request>,
        items: &[crate::frameworks::PairItem],
        universe: &OpponentUniverse,
    ) -> Result<(), String> {
        let StrategyKind::Insep(e) = *kind else { return Err("kind does not run on this framework".into()) };
        let w = &record.certificate.witness;
        expect_len(w, 3)?;
        expect_index(w, e)?;
        let (x, b) = (w[1], w[2]);
        if universe.phi_eval(e, x, u64::MAX).map(u64::from) != Some(b) {
            return Err(format!("phi_{e}({x}) is not {b}"));
        }
        let Some(last) = items.last() else { return Err("empty run".into()) };
        let placed = if b == 1 { last.b.contains(&x) } else { last.a.contains(&x) };
        if placed {
            Ok(())
        } else {
            Err(at_final(items, format!("{x} not placed against the answer {b}")))
        }
    }

    fn spot_check_bound(&self) -> Option<usize> {
        Some(4)
    }
}

impl ScenarioFramework for Ssep {
    fn make_strategy(
        &self,
        _kind: &StrategyKind,
        _index: usize,
        _universe: &Arc<OpponentUniverse>,
    ) -> Option<Box<dyn BobStrategy<Self>>> {
        None
    }

    fn check_witness(
        &self,
        _kind: &StrategyKind,
        _record: &CertificateRecord<Self::Request>,
        _items: &[NatSet],
        _universe: &OpponentUniverse,
    ) -> Result<(), String> {
        Err("no strategy kind runs on this framework".into())
    }

    fn spot_check_bound(&self) -> Option<usize> {
        Some(self.enumeration().len().min(8))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Scheduler(#[from] SchedulerError),
}

impl From<FrameworkError> for ScenarioError {
    fn from(e: FrameworkError) -> Self {
        ScenarioError::Config(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioOutcome {
    pub run_text: String,
    pub summary: String,
    pub all_satisfied: bool,
    pub stabilized: bool,
}

impl ScenarioOutcome {
    pub fn success(&self) -> bool {
        self.all_satisfied && self.stabilized
    }
}

pub fn build_strategies<F: ScenarioFramework>(
    f: &F,
    kinds: &[StrategyKind],
    universe: &Arc<OpponentUniverse>,
) -> Result<Vec<Box<dyn BobStrategy<F>>>, ScenarioError> {
    kinds
        .iter()
        .enumerate()
        .map(|(i, k)| {
            f.make_strategy(k, i, universe).ok_or_else(|| {
                ScenarioError::Config(format!("{k} runs on {}, not on {}", k.framework_name(), f.id()))
            })
        })
        .collect()
}

/// Runs `kinds` on a concrete framework and returns the typed run.
pub fn run_typed<F: ScenarioFramework>(
    f: &F,
    kinds: &[StrategyKind],
    universe: &Arc<OpponentUniverse>,
    config: RunConfig,
) -> Result<FrameworkRun<F>, ScenarioError> {
    let strategies = build_strategies(f, kinds, universe)?;
    Ok(run_construction(f, &mut strategies.into_iter(), universe, config)?)
}

fn outcome<F: ScenarioFramework>(f: &F, kinds: &[StrategyKind], run: &FrameworkRun<F>) -> ScenarioOutcome {
    let all_satisfied = run.strategies.len() == kinds.len() && run.all_satisfied();
    let stabilized = run.strategies.len() == kinds.len() && run.stabilized();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "framework {} | universe {} | horizon {} quiescence {} search_bound {}",
        run.framework, run.universe_hash, run.config.horizon, run.config.quiescence, run.config.search_bound
    );
    for (i, kind) in kinds.iter().enumerate() {
        let status = match (i < run.strategies.len(), run.live_certificate(i)) {
            (false, _) => "never activated".to_string(),
            (true, Some(c)) => {
                let w: Vec<String> = c.certificate.witness.iter().map(u64::to_string).collect();
                format!("satisfied, certificate ({}) from stage {}", w.join(","), c.certificate.stage)
            }
            (true, None) => "pending".to_string(),
        };
        let last = run.last_change.get(i).map_or("-".to_string(), usize::to_string);
        let _ = writeln!(
            s,
            "strategy {i} {kind} [{}]: {status}; injuries {}; request changes {}; last change {last}",
            kind.class().label(),
            run.injuries(i),
            run.request_changes(i),
        );
    }
    let _ = writeln!(s, "total injuries: {}", run.total_injuries());
    let window = run.config.horizon.saturating_sub(run.config.quiescence);
    let _ = writeln!(s, "stabilized: {} (every last change before stage {window})", if stabilized { "yes" } else { "no" });
    if let Some(last) = run.stages.last() {
        let _ = writeln!(s, "limit so far: {}", f.limit_of(&last.item));
    }
    for line in f.summary_lines(run) {
        let _ = writeln!(s, "{line}");
    }
    let _ = writeln!(s, "result: {}", if all_satisfied && stabilized { "all satisfied and stable" } else { "incomplete" });
    ScenarioOutcome { run_text: run_to_text(f, run), summary: s, all_satisfied, stabilized }
}

fn run_on<F: ScenarioFramework>(
    f: F,
    kinds: &[StrategyKind],
    universe: &Arc<OpponentUniverse>,
    config: RunConfig,
) -> Result<ScenarioOutcome, ScenarioError> {
    let run = run_typed(&f, kinds, universe, config)?;
    Ok(outcome(&f, kinds, &run))
}

pub fn run_scenario(
    spec: &FrameworkSpec,
    kinds: &[StrategyKind],
    universe: Arc<OpponentUniverse>,
    config: RunConfig,
) -> Result<ScenarioOutcome, ScenarioError> {
    match spec {
        FrameworkSpec::Spm => run_on(Spm, kinds, &universe, config),
        FrameworkSpec::SpmPair => run_on(Product::new(Spm, Spm), kinds, &universe, config),
        FrameworkSpec::S01(_) => run_on(spec.s01()?, kinds, &universe, config),
        FrameworkSpec::Spp => run_on(Spp, kinds, &universe, config),
        FrameworkSpec::Ssep { .. } => run_on(spec.ssep()?, kinds, &universe, config),
    }
}

fn verify_on<F: ScenarioFramework>(f: F, text: &str, universe: &OpponentUniverse) -> Result<VerifyReport, FormatError> {
    let run = parse_run(&f, text)?;
    Ok(verify_run(&f, universe, &run))
}

/// Parses a run file of any shipped framework and audits it.
pub fn verify_run_text(text: &str, universe: &OpponentUniverse) -> Result<VerifyReport, FormatError> {
    let header = read_header(text)?;
    let spec = FrameworkSpec::parse_id(&header.framework)
        .map_err(|e| FormatError::Syntax { line: 2, message: e.to_string() })?;
    let content = |e: FrameworkError| FormatError::Content { line: 2, source: e };
    match spec {
        FrameworkSpec::Spm => verify_on(Spm, text, universe),
        FrameworkSpec::SpmPair => verify_on(Product::new(Spm, Spm), text, universe),
        FrameworkSpec::S01(_) => verify_on(spec.s01().map_err(content)?, text, universe),
        FrameworkSpec::Spp => verify_on(Spp, text, universe),
        FrameworkSpec::Ssep { .. } => verify_on(spec.ssep().map_err(content)?, text, universe),
    }
}
