//! Two-player game over a framework: Alice opens with a request and a
//! compatible item, then Bob answers with requests dominating her opening
//! request and Alice answers each with an item that may follow her last one
//! and is compatible with Bob's latest request.
//!
//! Transcript text format, one move per line:
//!
//! ```text
//! transcript spm
//! 0 alice req 0x0000 -
//! 0 alice item 0x -
//! 1 bob req 0x010100 -
//! 1 alice item 0x01 -
//! end
//! ```
//!
//! Fields are round, mover, move kind, `0x`-hex encoding (or `-` when Alice
//! has no move), and an annotation (`-` when none).

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::encoding::{hex_field, parse_hex_field};
use crate::error::{FormatError, FrameworkError};
use crate::framework::{Certificate, Framework, Monitor, SearchEnd, Verdict};

/// What a strategy sees besides the moves: the current stage, which is also
/// its computation budget for opponent queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StageContext {
    pub stage: usize,
}

impl StageContext {
    pub fn budget(&self) -> u64 {
        self.stage as u64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrategyStatus<R> {
    Pending,
    SatisfiedDeclared(Certificate<R>),
}

pub trait BobStrategy<F: Framework>: Send {
    fn label(&self) -> String;
    /// Start over against a new opening; the answer must dominate `base`.
    fn restart(&mut self, ctx: &StageContext, base: &F::Request, current: &F::Item) -> F::Request;
    fn on_item(&mut self, ctx: &StageContext, item: &F::Item) -> F::Request;
    fn status(&self) -> StrategyStatus<F::Request>;
}

pub trait AliceStrategy<F: Framework> {
    fn open(&mut self) -> (F::Request, F::Item);
    fn on_request(&mut self, request: &F::Request) -> Option<F::Item>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// Alice's opening item is not compatible with her opening request.
    OpeningIncompatible,
    MalformedRequest,
    /// Bob's request does not dominate the opening request.
    DominationFailure,
    ItemNotFollowing,
    ItemIncompatible,
    /// Alice produced no item. `provable` when no legal item exists at all.
    AliceStuck { provable: bool },
}

impl ViolationKind {
    pub fn is_bob_fault(self) -> bool {
        matches!(self, ViolationKind::MalformedRequest | ViolationKind::DominationFailure)
    }

    pub fn token(self) -> &'static str {
        match self {
            ViolationKind::OpeningIncompatible => "opening-incompatible",
            ViolationKind::MalformedRequest => "malformed-request",
            ViolationKind::DominationFailure => "domination-failure",
            ViolationKind::ItemNotFollowing => "item-not-following",
            ViolationKind::ItemIncompatible => "item-incompatible",
            ViolationKind::AliceStuck { provable: true } => "alice-stuck",
            ViolationKind::AliceStuck { provable: false } => "alice-stuck-unproven",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        Some(match token {
            "opening-incompatible" => ViolationKind::OpeningIncompatible,
            "malformed-request" => ViolationKind::MalformedRequest,
            "domination-failure" => ViolationKind::DominationFailure,
            "item-not-following" => ViolationKind::ItemNotFollowing,
            "item-incompatible" => ViolationKind::ItemIncompatible,
            "alice-stuck" => ViolationKind::AliceStuck { provable: true },
            "alice-stuck-unproven" => ViolationKind::AliceStuck { provable: false },
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Violation {
    /// 0 is the opening.
    pub round: usize,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reply<I> {
    Item(I),
    /// Alice had no move.
    Stuck,
    /// The game ended on Bob's request before Alice moved.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round<R, I> {
    pub request: R,
    pub reply: Reply<I>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript<R, I> {
    pub framework: String,
    pub opening: (R, I),
    pub rounds: Vec<Round<R, I>>,
    /// First violation, as noted during play.
    pub annotation: Option<Violation>,
}

pub type FrameworkTranscript<F> = Transcript<<F as Framework>::Request, <F as Framework>::Item>;

impl<R, I> Transcript<R, I> {
    /// Alice's items in order, opening item first.
    pub fn items(&self) -> Vec<&I> {
        let mut out = vec![&self.opening.1];
        for round in &self.rounds {
            match &round.reply {
                Reply::Item(m) => out.push(m),
                _ => break,
            }
        }
        out
    }
}

fn check_opening<F: Framework>(f: &F, u0: &F::Request, m0: &F::Item) -> Option<ViolationKind> {
    let ok = f.check_request(u0).is_ok() && f.check_item(m0).is_ok() && f.compatible(m0, u0);
    (!ok).then_some(ViolationKind::OpeningIncompatible)
}

fn check_bob<F: Framework>(f: &F, u0: &F::Request, u: &F::Request) -> Option<ViolationKind> {
    if f.check_request(u).is_err() {
        Some(ViolationKind::MalformedRequest)
    } else if !f.dominates(u, u0) {
        Some(ViolationKind::DominationFailure)
    } else {
        None
    }
}

fn check_alice<F: Framework>(f: &F, prev: &F::Item, u: &F::Request, m: &F::Item) -> Option<ViolationKind> {
    if f.check_item(m).is_err() || !f.may_follow(m, prev) {
        Some(ViolationKind::ItemNotFollowing)
    } else if !f.compatible(m, u) {
        Some(ViolationKind::ItemIncompatible)
    } else {
        None
    }
}

/// Whether the successor space of `prev` under `u` is provably empty.
pub fn provably_stuck<F: Framework>(f: &F, prev: &F::Item, u: &F::Request) -> bool {
    let mut s = f.successors(prev, u);
    s.next().is_none() && s.end() == Some(SearchEnd::Exhausted)
}

/// Plays at most `horizon` rounds after the opening, stopping at the first
/// rule violation or when Alice has no move.
pub fn play<F: Framework>(
    f: &F,
    alice: &mut dyn AliceStrategy<F>,
    bob: &mut dyn BobStrategy<F>,
    horizon: usize,
) -> FrameworkTranscript<F> {
    let (u0, m0) = alice.open();
    let mut t = Transcript { framework: f.id(), opening: (u0.clone(), m0.clone()), rounds: Vec::new(), annotation: None };
    if let Some(kind) = check_opening(f, &u0, &m0) {
        t.annotation = Some(Violation { round: 0, kind });
        return t;
    }
    let mut prev = m0.clone();
    for k in 1..=horizon {
        let ctx = StageContext { stage: k };
        let u = if k == 1 { bob.restart(&ctx, &u0, &m0) } else { bob.on_item(&ctx, &prev) };
        if let Some(kind) = check_bob(f, &u0, &u) {
            t.rounds.push(Round { request: u, reply: Reply::Skipped });
            t.annotation = Some(Violation { round: k, kind });
            return t;
        }
        match alice.on_request(&u) {
            None => {
                let provable = provably_stuck(f, &prev, &u);
                t.rounds.push(Round { request: u, reply: Reply::Stuck });
                t.annotation = Some(Violation { round: k, kind: ViolationKind::AliceStuck { provable } });
                return t;
            }
            Some(m) => {
                let bad = check_alice(f, &prev, &u, &m);
                t.rounds.push(Round { request: u, reply: Reply::Item(m.clone()) });
                if let Some(kind) = bad {
                    t.annotation = Some(Violation { round: k, kind });
                    return t;
                }
                prev = m;
            }
        }
    }
    t
}

/// Every rule violation in `t`, recomputed from the moves alone. The list is
/// ordered by round, Bob's checks before Alice's within a round.
pub fn referee<F: Framework>(f: &F, t: &FrameworkTranscript<F>) -> Vec<Violation> {
    let mut out = Vec::new();
    let (u0, m0) = &t.opening;
    if let Some(kind) = check_opening(f, u0, m0) {
        out.push(Violation { round: 0, kind });
    }
    let mut prev = m0.clone();
    for (i, round) in t.rounds.iter().enumerate() {
        let k = i + 1;
        let bob = check_bob(f, u0, &round.request);
        if let Some(kind) = bob {
            out.push(Violation { round: k, kind });
        }
        let well_formed = bob != Some(ViolationKind::MalformedRequest);
        match &round.reply {
            Reply::Item(m) => {
                if let Some(kind) = check_alice(f, &prev, &round.request, m) {
                    if well_formed || kind == ViolationKind::ItemNotFollowing {
                        out.push(Violation { round: k, kind });
                    }
                }
                prev = m.clone();
            }
            Reply::Stuck => {
                if well_formed {
                    let provable = provably_stuck(f, &prev, &round.request);
                    out.push(Violation { round: k, kind: ViolationKind::AliceStuck { provable } });
                }
                break;
            }
            Reply::Skipped => break,
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LossReason {
    RuleViolationByBob,
    /// Bob's request left Alice no legal move.
    AliceStuck,
    MonitorViolated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PendingReason {
    RequestsNotQuiescent,
    MonitorPending,
    /// Alice found no move but one may exist beyond the search limits.
    SearchExhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WinStatus {
    BobWinningSoFar,
    BobLost(LossReason),
    Undetermined(PendingReason),
    /// Alice broke a rule first.
    AliceForfeit,
}

/// Last round whose request differs from the round before; round 1 counts
/// as a change.
pub fn last_request_change<R: PartialEq, I>(t: &Transcript<R, I>) -> Option<usize> {
    if t.rounds.is_empty() {
        return None;
    }
    let mut last = 1;
    for k in 2..=t.rounds.len() {
        if t.rounds[k - 1].request != t.rounds[k - 2].request {
            last = k;
        }
    }
    Some(last)
}

/// Finite-horizon judgement: Bob wins so far only when his requests have
/// not changed during the final `quiescence` rounds and the monitor is
/// satisfied on Alice's items.
pub fn win_status<F: Framework>(
    f: &F,
    t: &FrameworkTranscript<F>,
    monitor: &dyn Monitor<F::Item, F::Request>,
    quiescence: usize,
) -> WinStatus {
    if let Some(first) = referee(f, t).first() {
        return match first.kind {
            k if k.is_bob_fault() => WinStatus::BobLost(LossReason::RuleViolationByBob),
            ViolationKind::AliceStuck { provable: true } => WinStatus::BobLost(LossReason::AliceStuck),
            ViolationKind::AliceStuck { provable: false } => WinStatus::Undetermined(PendingReason::SearchExhausted),
            _ => WinStatus::AliceForfeit,
        };
    }
    let items: Vec<F::Item> = t.items().into_iter().cloned().collect();
    let verdict = monitor.verdict(&items);
    if let Verdict::Violated(_) = verdict {
        return WinStatus::BobLost(LossReason::MonitorViolated);
    }
    let quiet = match last_request_change(t) {
        Some(last) => t.rounds.len() - last >= quiescence,
        None => false,
    };
    if !quiet {
        return WinStatus::Undetermined(PendingReason::RequestsNotQuiescent);
    }
    match verdict {
        Verdict::Satisfied(_) => WinStatus::BobWinningSoFar,
        _ => WinStatus::Undetermined(PendingReason::MonitorPending),
    }
}

impl<R, I> Transcript<R, I> {
    pub fn to_text<F>(&self, f: &F) -> String
    where
        F: Framework<Request = R, Item = I>,
    {
        let note = |round: usize, bob: bool| -> &'static str {
            match self.annotation {
                Some(v) if v.round == round && (round == 0 || v.kind.is_bob_fault() == bob) => v.kind.token(),
                _ => "-",
            }
        };
        let mut out = format!("transcript {}\n", self.framework);
        let (u0, m0) = &self.opening;
        let _ = writeln!(out, "0 alice req {} -", hex_field(&f.encode_request(u0)));
        let _ = writeln!(out, "0 alice item {} {}", hex_field(&f.encode_item(m0)), note(0, false));
        for (i, round) in self.rounds.iter().enumerate() {
            let k = i + 1;
            let _ = writeln!(out, "{k} bob req {} {}", hex_field(&f.encode_request(&round.request)), note(k, true));
            match &round.reply {
                Reply::Item(m) => {
                    let _ = writeln!(out, "{k} alice item {} {}", hex_field(&f.encode_item(m)), note(k, false));
                }
                Reply::Stuck => {
                    let _ = writeln!(out, "{k} alice item - {}", note(k, false));
                }
                Reply::Skipped => {}
            }
        }
        out.push_str("end\n");
        out
    }
}

/// Parses the text form, decoding moves with `f`. Malformed requests are
/// kept so the referee can flag them.
pub fn parse_transcript<F: Framework>(f: &F, text: &str) -> Result<FrameworkTranscript<F>, FormatError> {
    let mut lines: VecDeque<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l.split_whitespace().collect()))
        .collect();
    let syntax = |line: usize, message: &str| FormatError::Syntax { line, message: message.to_string() };
    let content = |line: usize| move |source: FrameworkError| FormatError::Content { line, source };

    let (line, header) = lines.pop_front().ok_or(FormatError::Truncated)?;
    if header.len() != 2 || header[0] != "transcript" {
        return Err(syntax(line, "expected `transcript <framework>`"));
    }
    if header[1] != f.id() {
        return Err(FormatError::FrameworkMismatch { expected: f.id(), found: header[1].to_string() });
    }

    let mut annotation: Option<Violation> = None;
    let mut note = |line: usize, round: usize, token: &str| -> Result<(), FormatError> {
        if token == "-" {
            return Ok(());
        }
        let kind = ViolationKind::from_token(token).ok_or_else(|| syntax(line, "unknown annotation"))?;
        if annotation.replace(Violation { round, kind }).is_some() {
            return Err(syntax(line, "second annotation"));
        }
        Ok(())
    };

    let mut expect = |round: usize, mover: &str, what: &str| -> Result<(usize, String, String), FormatError> {
        let (line, tokens) = lines.pop_front().ok_or(FormatError::Truncated)?;
        if tokens.len() == 1 && tokens[0] == "end" {
            return Err(FormatError::Truncated);
        }
        if tokens.len() != 5 || tokens[0] != round.to_string() || tokens[1] != mover || tokens[2] != what {
            return Err(syntax(line, &format!("expected `{round} {mover} {what} <hex> <note>`")));
        }
        Ok((line, tokens[3].to_string(), tokens[4].to_string()))
    };

    let decode_hex = |line: usize, text: &str| parse_hex_field(text).map_err(|e| content(line)(e.into()));

    let (l, hex, tag) = expect(0, "alice", "req")?;
    if tag != "-" {
        return Err(syntax(l, "opening request carries no annotation"));
    }
    let u0 = f.decode_request_raw(&decode_hex(l, &hex)?).map_err(content(l))?;
    let (l, hex, tag) = expect(0, "alice", "item")?;
    let m0 = f.decode_item(&decode_hex(l, &hex)?).map_err(content(l))?;
    note(l, 0, &tag)?;

    let mut rounds = Vec::new();
    let mut finished = false;
    // Remaining lines are parsed by hand since a round may lack Alice's move.
    drop(expect);
    loop {
        let (line, tokens) = lines.pop_front().ok_or(FormatError::Truncated)?;
        if tokens.len() == 1 && tokens[0] == "end" {
            break;
        }
        if finished {
            return Err(syntax(line, "moves after the game ended"));
        }
        let k = rounds.len() + 1;
        if tokens.len() != 5 || tokens[0] != k.to_string() || tokens[1] != "bob" || tokens[2] != "req" {
            return Err(syntax(line, &format!("expected `{k} bob req <hex> <note>`")));
        }
        let request = f.decode_request_raw(&decode_hex(line, tokens[3])?).map_err(content(line))?;
        note(line, k, tokens[4])?;
        let reply = match lines.front() {
            Some((l2, t2)) if t2.len() == 5 && t2[0] == k.to_string() && t2[1] == "alice" && t2[2] == "item" => {
                let (l2, t2) = (*l2, t2.clone());
                lines.pop_front();
                note(l2, k, t2[4])?;
                if t2[3] == "-" {
                    finished = true;
                    Reply::Stuck
                } else {
                    Reply::Item(f.decode_item(&decode_hex(l2, t2[3])?).map_err(content(l2))?)
                }
            }
            _ => {
                finished = true;
                Reply::Skipped
            }
        };
        rounds.push(Round { request, reply });
    }
    if let Some((line, _)) = lines.pop_front() {
        return Err(syntax(line, "content after `end`"));
    }
    Ok(Transcript { framework: f.id(), opening: (u0, m0), rounds, annotation })
}

/// Alice that always opens with a fixed move, then plays the least legal
/// successor in canonical order.
pub struct CanonicalAlice<F: Framework> {
    framework: F,
    opening: (F::Request, F::Item),
    last: F::Item,
}

impl<F: Framework> CanonicalAlice<F> {
    pub fn new(framework: F, u0: F::Request, m0: F::Item) -> Self {
        CanonicalAlice { framework, last: m0.clone(), opening: (u0, m0) }
    }
}

impl<F: Framework> AliceStrategy<F> for CanonicalAlice<F> {
    fn open(&mut self) -> (F::Request, F::Item) {
        self.last = self.opening.1.clone();
        self.opening.clone()
    }

    fn on_request(&mut self, request: &F::Request) -> Option<F::Item> {
        let next = self.framework.successors(&self.last, request).next()?;
        self.last = next.clone();
        Some(next)
    }
}

/// Alice replaying a fixed script; `None` entries (or running out) mean no move.
pub struct ScriptedAlice<R, I> {
    pub opening: (R, I),
    pub replies: VecDeque<Option<I>>,
}

impl<F: Framework> AliceStrategy<F> for ScriptedAlice<F::Request, F::Item> {
    fn open(&mut self) -> (F::Request, F::Item) {
        self.opening.clone()
    }

    fn on_request(&mut self, _request: &F::Request) -> Option<F::Item> {
        self.replies.pop_front().flatten()
    }
}

/// Bob repeating one request.
pub struct ConstantBob<R>(pub R);

impl<F: Framework> BobStrategy<F> for ConstantBob<F::Request> {
    fn label(&self) -> String {
        "constant".into()
    }

    fn restart(&mut self, _ctx: &StageContext, _base: &F::Request, _current: &F::Item) -> F::Request {
        self.0.clone()
    }

    fn on_item(&mut self, _ctx: &StageContext, _item: &F::Item) -> F::Request {
        self.0.clone()
    }

    fn status(&self) -> StrategyStatus<F::Request> {
        StrategyStatus::Pending
    }
}

/// Bob playing a fixed list of requests, repeating the last one.
pub struct ScriptedBob<R> {
    script: Vec<R>,
    next: usize,
}

impl<R> ScriptedBob<R> {
    pub fn new(script: Vec<R>) -> Self {
        assert!(!script.is_empty(), "script needs at least one request");
        ScriptedBob { script, next: 0 }
    }

    fn take(&mut self) -> R
    where
        R: Clone,
    {
        let r = self.script[self.next.min(self.script.len() - 1)].clone();
        self.next += 1;
        r
    }
}

impl<F: Framework> BobStrategy<F> for ScriptedBob<F::Request> {
    fn label(&self) -> String {
        "scripted".into()
    }

    fn restart(&mut self, _ctx: &StageContext, _base: &F::Request, _current: &F::Item) -> F::Request {
        self.next = 0;
        self.take()
    }

    fn on_item(&mut self, _ctx: &StageContext, _item: &F::Item) -> F::Request {
        self.take()
    }

    fn status(&self) -> StrategyStatus<F::Request> {
        StrategyStatus::Pending
    }
}
