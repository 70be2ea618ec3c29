//! Frameworks, requirements and the algebra on them.
//!
//! A framework bundles an item space, a request space, the "may follow"
//! relation on items and the "compatible" relation between items and
//! requests. Conditions on infinite item sequences are represented by
//! [`Monitor`]s that judge finite prefixes; a `Satisfied` verdict carries a
//! guard request whose continued enforcement keeps the verdict true on every
//! extension.

use std::collections::VecDeque;
use std::fmt::{self, Debug};
use std::sync::Arc;

use crate::encoding::{shortlex_cmp, LevelOverflow};
use crate::error::FrameworkError;
use crate::frameworks::{LimitObjects, Product};

/// Largest number of candidates materialized for one encoded length.
pub const LEVEL_LIMIT: usize = 200_000;

/// Consecutive empty length levels tolerated before a successor search gives up.
const EMPTY_LEVEL_LIMIT: usize = 64;

pub trait Framework: Clone + Debug + Send + Sync + 'static {
    type Item: Clone + Eq + Debug + Send + Sync + 'static;
    type Request: Clone + Eq + Debug + Send + Sync + 'static;

    /// Stable textual identity, including any parameters.
    fn id(&self) -> String;

    fn initial_item(&self) -> Self::Item;
    fn initial_request(&self) -> Self::Request;

    /// `next` may follow `prev`.
    fn may_follow(&self, next: &Self::Item, prev: &Self::Item) -> bool;
    fn compatible(&self, item: &Self::Item, request: &Self::Request) -> bool;
    /// Closed-form domination: every item compatible with `u` is compatible with `v`.
    fn dominates(&self, u: &Self::Request, v: &Self::Request) -> bool;

    fn check_item(&self, item: &Self::Item) -> Result<(), FrameworkError>;
    fn check_request(&self, request: &Self::Request) -> Result<(), FrameworkError>;

    /// Least request dominating both, when the framework has one.
    fn join_requests(&self, u: &Self::Request, v: &Self::Request) -> Option<Self::Request>;

    fn encode_item(&self, item: &Self::Item) -> Vec<u8>;
    fn decode_item(&self, bytes: &[u8]) -> Result<Self::Item, FrameworkError>;
    fn encode_request(&self, request: &Self::Request) -> Vec<u8>;
    /// Syntactic decoding only; the result may be malformed.
    fn decode_request_raw(&self, bytes: &[u8]) -> Result<Self::Request, FrameworkError>;

    fn decode_request(&self, bytes: &[u8]) -> Result<Self::Request, FrameworkError> {
        let r = self.decode_request_raw(bytes)?;
        self.check_request(&r)?;
        Ok(r)
    }

    /// Items that may follow `prev` and are compatible with `request`, in
    /// shortlex order of their encodings, without duplicates.
    fn successors(&self, prev: &Self::Item, request: &Self::Request) -> Successors<'_, Self::Item>;

    /// Every item drawn from the bounded universe of size `bound`, for
    /// exhaustive oracles.
    fn bounded_items(&self, bound: usize) -> Result<Vec<Self::Item>, FrameworkError>;

    /// Limit data carried by a single item (items are monotone, so the last
    /// item of a valid sequence carries the limit so far).
    fn limit_of(&self, item: &Self::Item) -> LimitObjects;

    fn limit_objects(&self, seq: &[Self::Item]) -> Result<LimitObjects, FrameworkError> {
        if !is_valid_sequence(self, seq)? {
            let position = seq
                .windows(2)
                .position(|w| !self.may_follow(&w[1], &w[0]))
                .map_or(0, |p| p + 1);
            return Err(FrameworkError::InvalidSequence { position });
        }
        Ok(self.limit_of(seq.last().expect("nonempty")))
    }
}

/// How a successor search ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchEnd {
    /// The candidate space is provably exhausted.
    Exhausted,
    /// Generation stopped on a resource limit; more candidates may exist.
    Truncated,
}

type LevelFn<'a, I> = Box<dyn FnMut(usize) -> Result<Vec<I>, LevelOverflow> + 'a>;
type EncodeFn<'a, I> = Box<dyn Fn(&I) -> Vec<u8> + 'a>;

/// Lazy shortlex stream of successor candidates, generated one encoded
/// length at a time.
pub struct Successors<'a, I> {
    level: Option<LevelFn<'a, I>>,
    encode: Option<EncodeFn<'a, I>>,
    next_len: usize,
    max_len: Option<usize>,
    buffer: VecDeque<(I, Vec<u8>)>,
    end: Option<SearchEnd>,
    empty_streak: usize,
    cap: Option<usize>,
}

impl<'a, I> Successors<'a, I> {
    pub fn none() -> Self {
        Successors {
            level: None,
            encode: None,
            next_len: 0,
            max_len: None,
            buffer: VecDeque::new(),
            end: Some(SearchEnd::Exhausted),
            empty_streak: 0,
            cap: None,
        }
    }

    /// `level(len)` must return every candidate whose encoding has exactly
    /// `len` bytes. Lengths start at `min_len`; `max_len` is inclusive.
    pub fn by_length(
        min_len: usize,
        max_len: Option<usize>,
        level: impl FnMut(usize) -> Result<Vec<I>, LevelOverflow> + 'a,
        encode: impl Fn(&I) -> Vec<u8> + 'a,
    ) -> Self {
        Successors {
            level: Some(Box::new(level)),
            encode: Some(Box::new(encode)),
            next_len: min_len,
            max_len,
            buffer: VecDeque::new(),
            end: None,
            empty_streak: 0,
            cap: None,
        }
    }

    /// Stops the search after candidates of `cap` encoded bytes; a stream cut
    /// short this way ends `Truncated`.
    pub fn capped(mut self, cap: usize) -> Self {
        self.cap = Some(cap);
        self
    }

    /// Largest encoded length the stream can produce, when finite.
    pub fn max_len(&self) -> Option<usize> {
        self.max_len
    }

    /// Set once the stream has stopped producing candidates.
    pub fn end(&self) -> Option<SearchEnd> {
        if self.buffer.is_empty() {
            self.end
        } else {
            None
        }
    }

    /// Next candidate together with its encoding.
    pub fn next_encoded(&mut self) -> Option<(I, Vec<u8>)> {
        loop {
            if let Some(entry) = self.buffer.pop_front() {
                return Some(entry);
            }
            if self.end.is_some() {
                return None;
            }
            if self.max_len.is_some_and(|m| self.next_len > m) {
                self.end = Some(SearchEnd::Exhausted);
                return None;
            }
            if self.cap.is_some_and(|c| self.next_len > c) {
                self.end = Some(SearchEnd::Truncated);
                return None;
            }
            let len = self.next_len;
            self.next_len += 1;
            let level = self.level.as_mut().expect("live stream has a generator");
            match level(len) {
                Err(LevelOverflow) => {
                    self.end = Some(SearchEnd::Truncated);
                    return None;
                }
                Ok(items) if items.is_empty() => {
                    self.empty_streak += 1;
                    if self.max_len.is_none() && self.empty_streak >= EMPTY_LEVEL_LIMIT {
                        self.end = Some(SearchEnd::Truncated);
                        return None;
                    }
                }
                Ok(items) => {
                    self.empty_streak = 0;
                    let encode = self.encode.as_ref().expect("live stream has an encoder");
                    let mut level: Vec<(I, Vec<u8>)> =
                        items.into_iter().map(|i| { let e = encode(&i); (i, e) }).collect();
                    level.sort_by(|a, b| shortlex_cmp(&a.1, &b.1));
                    self.buffer.extend(level);
                }
            }
        }
    }
}

impl<I> Iterator for Successors<'_, I> {
    type Item = I;

    fn next(&mut self) -> Option<I> {
        self.next_encoded().map(|(i, _)| i)
    }
}

/// Groups a successor stream by encoded length, for product constructions.
pub(crate) struct LevelCache<'a, I> {
    stream: Successors<'a, I>,
    pulled: Vec<(I, usize)>,
    done: bool,
}

impl<'a, I: Clone> LevelCache<'a, I> {
    pub(crate) fn new(stream: Successors<'a, I>) -> Self {
        LevelCache { stream, pulled: Vec::new(), done: false }
    }

    pub(crate) fn max_len(&self) -> Option<usize> {
        self.stream.max_len
    }

    fn pull(&mut self) -> bool {
        if self.done {
            return false;
        }
        match self.stream.next_encoded() {
            Some((item, enc)) => {
                self.pulled.push((item, enc.len()));
                true
            }
            None => {
                self.done = true;
                false
            }
        }
    }

    fn truncated(&self) -> bool {
        self.done && self.stream.end == Some(SearchEnd::Truncated)
    }

    /// Encoded length of the first candidate; `Ok(None)` if there is none.
    pub(crate) fn first_len(&mut self) -> Result<Option<usize>, LevelOverflow> {
        if self.pulled.is_empty() && !self.pull() && self.truncated() {
            return Err(LevelOverflow);
        }
        Ok(self.pulled.first().map(|p| p.1))
    }

    /// All candidates whose encoding has exactly `len` bytes.
    pub(crate) fn level(&mut self, len: usize) -> Result<Vec<I>, LevelOverflow> {
        while self.pulled.last().is_none_or(|p| p.1 <= len) {
            if !self.pull() {
                if self.truncated() {
                    return Err(LevelOverflow);
                }
                break;
            }
        }
        Ok(self.pulled.iter().filter(|p| p.1 == len).map(|p| p.0.clone()).collect())
    }
}

/// A D-framework: items and a "may follow" relation, with a finite step
/// generator used by the diagonal search.
pub trait DFramework {
    type Item: Clone + Eq + Debug;

    fn initial_item(&self) -> Self::Item;
    fn may_follow(&self, next: &Self::Item, prev: &Self::Item) -> bool;
    /// Candidate next items in canonical order.
    fn step_candidates(&self, item: &Self::Item) -> Vec<Self::Item>;
}

/// Request(s) that must stay compatible for a satisfied verdict to persist.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Guard<R> {
    Request(R),
    /// All listed requests checked jointly.
    Joint(Vec<R>),
}

impl<R> Guard<R> {
    pub fn requests(&self) -> Vec<&R> {
        match self {
            Guard::Request(r) => vec![r],
            Guard::Joint(rs) => rs.iter().collect(),
        }
    }

    pub fn map<S>(self, mut f: impl FnMut(R) -> S) -> Guard<S> {
        match self {
            Guard::Request(r) => Guard::Request(f(r)),
            Guard::Joint(rs) => Guard::Joint(rs.into_iter().map(f).collect()),
        }
    }

    pub fn admits<F>(&self, framework: &F, item: &F::Item) -> bool
    where
        F: Framework<Request = R>,
    {
        self.requests().into_iter().all(|r| framework.compatible(item, r))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate<R> {
    pub requirement: String,
    /// Framework-specific witness tuple.
    pub witness: Vec<u64>,
    pub guard: Guard<R>,
    /// First position of the item sequence from which the guard holds.
    pub stage: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict<R> {
    Satisfied(Certificate<R>),
    Pending,
    Violated(String),
}

impl<R> Verdict<R> {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, Verdict::Satisfied(_))
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated(_))
    }

    pub fn is_pending(&self) -> bool {
        matches!(self, Verdict::Pending)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Satisfied(_) => "satisfied",
            Verdict::Pending => "pending",
            Verdict::Violated(_) => "violated",
        }
    }

    pub fn map_guard<S>(self, f: impl FnMut(R) -> S) -> Verdict<S> {
        match self {
            Verdict::Satisfied(c) => Verdict::Satisfied(Certificate {
                requirement: c.requirement,
                witness: c.witness,
                guard: c.guard.map(f),
                stage: c.stage,
            }),
            Verdict::Pending => Verdict::Pending,
            Verdict::Violated(e) => Verdict::Violated(e),
        }
    }
}

/// Judges finite prefixes of an item sequence.
pub trait Monitor<I, R>: Send + Sync {
    fn name(&self) -> String;
    fn verdict(&self, prefix: &[I]) -> Verdict<R>;
}

/// Which class of requirements a strategy claims membership in. Metadata only.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum ClassTag {
    /// Bob has a winning strategy.
    Priority,
    /// Constructive framework, computable winning strategy.
    ComputablePriority,
    /// Computable strategy winning against computable Alices.
    WeakComputablePriority,
    /// Countable intersection of uniformly computable priority requirements.
    CountableComputable,
    /// Countable intersection of uniformly weak computable priority requirements.
    CountableWeakComputable,
}

impl ClassTag {
    pub fn label(self) -> &'static str {
        match self {
            ClassTag::Priority => "p",
            ClassTag::ComputablePriority => "cp",
            ClassTag::WeakComputablePriority => "wcp",
            ClassTag::CountableComputable => "ωcp",
            ClassTag::CountableWeakComputable => "ωwcp",
        }
    }

    /// Class of a conjunction: the weaker of the two in the inclusion order.
    fn combine(self, other: ClassTag) -> ClassTag {
        use ClassTag::*;
        match (self, other) {
            (Priority, _) | (_, Priority) => Priority,
            (CountableWeakComputable, _)
            | (_, CountableWeakComputable)
            | (WeakComputablePriority, _)
            | (_, WeakComputablePriority) => CountableWeakComputable,
            _ => CountableComputable,
        }
    }
}

pub type SharedMonitor<F> =
    Arc<dyn Monitor<<F as Framework>::Item, <F as Framework>::Request>>;

#[derive(Clone)]
pub struct Requirement<F: Framework> {
    pub framework: F,
    pub monitor: SharedMonitor<F>,
    pub class: ClassTag,
}

impl<F: Framework> Debug for Requirement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Requirement")
            .field("framework", &self.framework.id())
            .field("monitor", &self.monitor.name())
            .field("class", &self.class)
            .finish()
    }
}

impl<F: Framework> Requirement<F> {
    pub fn new(
        framework: F,
        monitor: impl Monitor<F::Item, F::Request> + 'static,
        class: ClassTag,
    ) -> Self {
        Requirement { framework, monitor: Arc::new(monitor), class }
    }

    pub fn name(&self) -> String {
        self.monitor.name()
    }

    pub fn verdict(&self, prefix: &[F::Item]) -> Verdict<F::Request> {
        self.monitor.verdict(prefix)
    }
}

pub fn is_valid_sequence<F: Framework>(f: &F, seq: &[F::Item]) -> Result<bool, FrameworkError> {
    if seq.is_empty() {
        return Err(FrameworkError::EmptySequence);
    }
    Ok(seq.windows(2).all(|w| f.may_follow(&w[1], &w[0])))
}

/// Domination with both requests validated first.
pub fn dominates<F: Framework>(f: &F, u: &F::Request, v: &F::Request) -> Result<bool, FrameworkError> {
    f.check_request(u)?;
    f.check_request(v)?;
    Ok(f.dominates(u, v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOutcome<I> {
    pub dominates: bool,
    /// An item compatible with `u` but not `v`, when domination fails.
    pub counterexample: Option<I>,
}

/// Exhaustive domination check over a fixed bounded item universe.
pub struct BruteForceOracle<F: Framework> {
    framework: F,
    items: Vec<F::Item>,
}

impl<F: Framework> BruteForceOracle<F> {
    pub fn new(framework: &F, universe_bound: usize) -> Result<Self, FrameworkError> {
        let items = framework.bounded_items(universe_bound)?;
        Ok(BruteForceOracle { framework: framework.clone(), items })
    }

    pub fn items(&self) -> &[F::Item] {
        &self.items
    }

    pub fn check(&self, u: &F::Request, v: &F::Request) -> OracleOutcome<F::Item> {
        let counterexample = self
            .items
            .iter()
            .find(|m| self.framework.compatible(m, u) && !self.framework.compatible(m, v))
            .cloned();
        OracleOutcome { dominates: counterexample.is_none(), counterexample }
    }

    /// Compatibility vector of `u` over the universe, for bulk comparisons.
    pub fn profile(&self, u: &F::Request) -> Vec<bool> {
        self.items.iter().map(|m| self.framework.compatible(m, u)).collect()
    }
}

pub fn brute_force_dominates<F: Framework>(
    f: &F,
    universe_bound: usize,
    u: &F::Request,
    v: &F::Request,
) -> Result<OracleOutcome<F::Item>, FrameworkError> {
    f.check_request(u)?;
    f.check_request(v)?;
    Ok(BruteForceOracle::new(f, universe_bound)?.check(u, v))
}

struct Conjunction<F: Framework> {
    framework: F,
    left: SharedMonitor<F>,
    right: SharedMonitor<F>,
}

impl<F: Framework> Monitor<F::Item, F::Request> for Conjunction<F> {
    fn name(&self) -> String {
        format!("({} & {})", self.left.name(), self.right.name())
    }

    fn verdict(&self, prefix: &[F::Item]) -> Verdict<F::Request> {
        let a = self.left.verdict(prefix);
        let b = self.right.verdict(prefix);
        match (a, b) {
            (Verdict::Violated(e), _) | (_, Verdict::Violated(e)) => Verdict::Violated(e),
            (Verdict::Satisfied(ca), Verdict::Satisfied(cb)) => {
                let guard = match (&ca.guard, &cb.guard) {
                    (Guard::Request(ga), Guard::Request(gb)) => {
                        match self.framework.join_requests(ga, gb) {
                            Some(joined) => Guard::Request(joined),
                            None => Guard::Joint(vec![ga.clone(), gb.clone()]),
                        }
                    }
                    _ => Guard::Joint(
                        ca.guard.requests().into_iter().chain(cb.guard.requests()).cloned().collect(),
                    ),
                };
                let mut witness = ca.witness;
                witness.extend(cb.witness);
                Verdict::Satisfied(Certificate {
                    requirement: self.name(),
                    witness,
                    guard,
                    stage: ca.stage.max(cb.stage),
                })
            }
            _ => Verdict::Pending,
        }
    }
}

pub fn conjoin<F: Framework>(a: &Requirement<F>, b: &Requirement<F>) -> Result<Requirement<F>, FrameworkError> {
    if a.framework.id() != b.framework.id() {
        return Err(FrameworkError::FrameworkMismatch {
            left: a.framework.id(),
            right: b.framework.id(),
        });
    }
    Ok(Requirement {
        framework: a.framework.clone(),
        monitor: Arc::new(Conjunction {
            framework: a.framework.clone(),
            left: a.monitor.clone(),
            right: b.monitor.clone(),
        }),
        class: a.class.combine(b.class),
    })
}

struct LeftProjection<F: Framework, G: Framework> {
    inner: SharedMonitor<F>,
    other: G,
}

impl<F: Framework, G: Framework> Monitor<(F::Item, G::Item), (F::Request, G::Request)>
    for LeftProjection<F, G>
{
    fn name(&self) -> String {
        format!("{} x {}", self.inner.name(), self.other.id())
    }

    fn verdict(&self, prefix: &[(F::Item, G::Item)]) -> Verdict<(F::Request, G::Request)> {
        let projected: Vec<F::Item> = prefix.iter().map(|(l, _)| l.clone()).collect();
        let open = self.other.initial_request();
        self.inner.verdict(&projected).map_guard(|g| (g, open.clone()))
    }
}

struct RightProjection<G: Framework, F: Framework> {
    other: G,
    inner: SharedMonitor<F>,
}

impl<G: Framework, F: Framework> Monitor<(G::Item, F::Item), (G::Request, F::Request)>
    for RightProjection<G, F>
{
    fn name(&self) -> String {
        format!("{} x {}", self.other.id(), self.inner.name())
    }

    fn verdict(&self, prefix: &[(G::Item, F::Item)]) -> Verdict<(G::Request, F::Request)> {
        let projected: Vec<F::Item> = prefix.iter().map(|(_, r)| r.clone()).collect();
        let open = self.other.initial_request();
        self.inner.verdict(&projected).map_guard(|g| (open.clone(), g))
    }
}

/// `⟨S, α⟩ × S′`: satisfied by product sequences whose left projection satisfies α.
pub fn lift_left<F: Framework, G: Framework>(a: &Requirement<F>, other: &G) -> Requirement<Product<F, G>> {
    Requirement {
        framework: Product::new(a.framework.clone(), other.clone()),
        monitor: Arc::new(LeftProjection::<F, G> { inner: a.monitor.clone(), other: other.clone() }),
        class: a.class,
    }
}

/// `S′ × ⟨S, α⟩`.
pub fn lift_right<G: Framework, F: Framework>(other: &G, a: &Requirement<F>) -> Requirement<Product<G, F>> {
    Requirement {
        framework: Product::new(other.clone(), a.framework.clone()),
        monitor: Arc::new(RightProjection::<G, F> { other: other.clone(), inner: a.monitor.clone() }),
        class: a.class,
    }
}

#[derive(Clone, Debug)]
pub struct WeakenAudit<I> {
    pub holds: bool,
    pub counterexample: Option<Vec<I>>,
    pub prefixes_checked: usize,
}

/// Bounded audit that `weaker` is implied by `stronger`.
///
/// Every valid prefix of length at most `max_len` over the bounded universe is
/// examined. Wherever `stronger` is satisfied with guard `g`, `weaker` must
/// never be violated along guard-admitted extensions, and must be satisfied on
/// every such extension of full length. This is an audit, not a decision
/// procedure: passing it says nothing about sequences outside the bounds.
pub fn weaken<F: Framework>(
    weaker: &Requirement<F>,
    stronger: &Requirement<F>,
    universe_bound: usize,
    max_len: usize,
) -> Result<WeakenAudit<F::Item>, FrameworkError> {
    if weaker.framework.id() != stronger.framework.id() {
        return Err(FrameworkError::FrameworkMismatch {
            left: weaker.framework.id(),
            right: stronger.framework.id(),
        });
    }
    let f = &weaker.framework;
    let items = f.bounded_items(universe_bound)?;
    let mut audit = WeakenAudit { holds: true, counterexample: None, prefixes_checked: 0 };
    let mut stack: Vec<Vec<F::Item>> = items.iter().rev().map(|m| vec![m.clone()]).collect();
    while let Some(prefix) = stack.pop() {
        audit.prefixes_checked += 1;
        if let Verdict::Satisfied(cert) = stronger.verdict(&prefix) {
            if let Some(bad) = guarded_counterexample(f, &items, weaker, &cert.guard, prefix.clone(), max_len) {
                audit.holds = false;
                audit.counterexample = Some(bad);
                return Ok(audit);
            }
        }
        if prefix.len() < max_len {
            let last = prefix.last().expect("nonempty").clone();
            for m in items.iter().rev().filter(|m| f.may_follow(m, &last)) {
                let mut next = prefix.clone();
                next.push(m.clone());
                stack.push(next);
            }
        }
    }
    Ok(audit)
}

fn guarded_counterexample<F: Framework>(
    f: &F,
    items: &[F::Item],
    weaker: &Requirement<F>,
    guard: &Guard<F::Request>,
    prefix: Vec<F::Item>,
    max_len: usize,
) -> Option<Vec<F::Item>> {
    let mut stack = vec![prefix];
    while let Some(q) = stack.pop() {
        let verdict = weaker.verdict(&q);
        if verdict.is_violated() || (q.len() >= max_len && !verdict.is_satisfied()) {
            return Some(q);
        }
        if q.len() < max_len {
            let last = q.last().expect("nonempty").clone();
            for m in items.iter().rev() {
                if f.may_follow(m, &last) && guard.admits(f, m) {
                    let mut next = q.clone();
                    next.push(m.clone());
                    stack.push(next);
                }
            }
        }
    }
    None
}

/// Breadth-first search for a finite valid sequence from `start` whose every
/// infinite extension satisfies the monitored condition (a `Satisfied`
/// verdict in a D-framework carries no guard). Returns the first such
/// sequence in canonical order, or `None` if none exists within `depth`
/// extension steps.
pub fn diagonal_witness<D: DFramework>(
    d: &D,
    start: &D::Item,
    monitor: &dyn Monitor<D::Item, ()>,
    depth: usize,
) -> Option<Vec<D::Item>> {
    let mut layer: Vec<Vec<D::Item>> = vec![vec![start.clone()]];
    for step in 0..=depth {
        let mut next_layer = Vec::new();
        for seq in layer {
            match monitor.verdict(&seq) {
                Verdict::Satisfied(_) => return Some(seq),
                Verdict::Violated(_) => continue,
                Verdict::Pending => {}
            }
            if step < depth {
                let last = seq.last().expect("nonempty");
                for next in d.step_candidates(last) {
                    if d.may_follow(&next, last) {
                        let mut extended = seq.clone();
                        extended.push(next);
                        next_layer.push(extended);
                    }
                }
            }
        }
        layer = next_layer;
    }
    None
}
