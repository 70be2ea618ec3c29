//! Splitting framework over a fixed injective enumeration `a(0), a(1), …`.
//!
//! Items are bit strings `m`; bit `m(s)` assigns `a(s)` to side `m(s)`, so
//! `Aⁱ(m) = { a(s) : m(s) = i }`. `m′` may follow `m` when `m` is a proper
//! prefix of `m′`. Requests are pairs `⟨C₀, C₁⟩` of disjoint finite sets and
//! `m` is compatible when `A⁰(m) ∩ C₀ = A¹(m) ∩ C₁ = ∅`, i.e. `C_i` lists the
//! elements barred from side `i`.
//!
//! Only a finite prefix of the enumeration is available; items longer than
//! that prefix are outside the universe.
//!
//! Encoding: item = bit string; request = tuple(set C₀, set C₁).

use std::sync::Arc;

use crate::encoding::{decode_set, decode_tuple, encode_set, encode_tuple, BitString, LevelOverflow, NatSet};
use crate::error::FrameworkError;
use crate::framework::{Framework, Successors, LEVEL_LIMIT};
use crate::frameworks::LimitObjects;

pub const S01_MAX_BOUND: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct S01 {
    enumeration: Arc<Vec<u64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct S01Request {
    /// `C₀`: elements that must not land on side 0.
    pub avoid0: NatSet,
    /// `C₁`: elements that must not land on side 1.
    pub avoid1: NatSet,
}

impl S01Request {
    pub fn of(avoid0: &[u64], avoid1: &[u64]) -> Self {
        S01Request {
            avoid0: avoid0.iter().copied().collect(),
            avoid1: avoid1.iter().copied().collect(),
        }
    }

    /// Request forcing `x` onto `side`.
    pub fn routing(&self, x: u64, side: u8) -> Self {
        let mut r = self.clone();
        if side == 0 {
            r.avoid1.insert(x);
        } else {
            r.avoid0.insert(x);
        }
        r
    }

    /// Whether this request already bars `x` from `side`.
    pub fn bars(&self, x: u64, side: u8) -> bool {
        if side == 0 {
            self.avoid0.contains(&x)
        } else {
            self.avoid1.contains(&x)
        }
    }
}

impl S01 {
    pub fn new(enumeration: Vec<u64>) -> Result<Self, FrameworkError> {
        let mut seen = NatSet::new();
        for &x in &enumeration {
            if !seen.insert(x) {
                return Err(FrameworkError::MalformedItem(format!("enumeration repeats {x}")));
            }
        }
        Ok(S01 { enumeration: Arc::new(enumeration) })
    }

    pub fn enumeration(&self) -> &[u64] {
        &self.enumeration
    }

    pub fn element(&self, index: usize) -> Result<u64, FrameworkError> {
        self.enumeration
            .get(index)
            .copied()
            .ok_or(FrameworkError::UniverseExhausted { index, available: self.enumeration.len() })
    }

    /// `(A⁰(m), A¹(m))`.
    pub fn sides(&self, m: &BitString) -> Result<(NatSet, NatSet), FrameworkError> {
        let mut zero = NatSet::new();
        let mut one = NatSet::new();
        for (s, &bit) in m.bits().iter().enumerate() {
            let x = self.element(s)?;
            if bit {
                one.insert(x);
            } else {
                zero.insert(x);
            }
        }
        Ok((zero, one))
    }

    fn bit_allowed(&self, s: usize, bit: bool, r: &S01Request) -> bool {
        let x = self.enumeration[s];
        if bit {
            !r.avoid1.contains(&x)
        } else {
            !r.avoid0.contains(&x)
        }
    }
}

impl Framework for S01 {
    type Item = BitString;
    type Request = S01Request;

    fn id(&self) -> String {
        let parts: Vec<String> = self.enumeration.iter().map(u64::to_string).collect();
        format!("s01[{}]", parts.join(","))
    }

    fn initial_item(&self) -> BitString {
        BitString::new()
    }

    fn initial_request(&self) -> S01Request {
        S01Request::default()
    }

    fn may_follow(&self, next: &BitString, prev: &BitString) -> bool {
        prev.is_proper_prefix_of(next)
    }

    fn compatible(&self, m: &BitString, r: &S01Request) -> bool {
        m.len() <= self.enumeration.len()
            && m.bits().iter().enumerate().all(|(s, &bit)| self.bit_allowed(s, bit, r))
    }

    /// Bars on elements outside the enumeration constrain nothing.
    fn dominates(&self, u: &S01Request, v: &S01Request) -> bool {
        let covered = |mine: &NatSet, theirs: &NatSet| {
            theirs.iter().all(|x| mine.contains(x) || !self.enumeration.contains(x))
        };
        covered(&u.avoid0, &v.avoid0) && covered(&u.avoid1, &v.avoid1)
    }

    fn check_item(&self, m: &BitString) -> Result<(), FrameworkError> {
        if m.len() > self.enumeration.len() {
            return Err(FrameworkError::UniverseExhausted {
                index: m.len() - 1,
                available: self.enumeration.len(),
            });
        }
        Ok(())
    }

    fn check_request(&self, r: &S01Request) -> Result<(), FrameworkError> {
        if let Some(x) = r.avoid0.intersection(&r.avoid1).next() {
            return Err(FrameworkError::MalformedRequest(format!("{x} barred from both sides")));
        }
        Ok(())
    }

    fn join_requests(&self, u: &S01Request, v: &S01Request) -> Option<S01Request> {
        let r = S01Request { avoid0: &u.avoid0 | &v.avoid0, avoid1: &u.avoid1 | &v.avoid1 };
        self.check_request(&r).ok().map(|_| r)
    }

    fn encode_item(&self, m: &BitString) -> Vec<u8> {
        m.encode()
    }

    fn decode_item(&self, bytes: &[u8]) -> Result<BitString, FrameworkError> {
        let m = BitString::decode(bytes)?;
        self.check_item(&m)?;
        Ok(m)
    }

    fn encode_request(&self, r: &S01Request) -> Vec<u8> {
        encode_tuple(&[&encode_set(&r.avoid0), &encode_set(&r.avoid1)])
    }

    fn decode_request_raw(&self, bytes: &[u8]) -> Result<S01Request, FrameworkError> {
        let parts = decode_tuple(bytes, 2)?;
        Ok(S01Request { avoid0: decode_set(parts[0])?, avoid1: decode_set(parts[1])? })
    }

    fn successors(&self, prev: &BitString, r: &S01Request) -> Successors<'_, BitString> {
        let total = self.enumeration.len();
        if prev.len() >= total || !self.compatible(prev, r) {
            return Successors::none();
        }
        let start = prev.len();
        let prev = prev.clone();
        let r = r.clone();
        Successors::by_length(
            BitString::encoded_len_for(start + 1),
            Some(BitString::encoded_len_for(total)),
            move |len| {
                let mut out = Vec::new();
                for nbits in start + 1..=total {
                    if BitString::encoded_len_for(nbits) == len {
                        self.extend_all(&prev, nbits, &r, &mut out)?;
                    }
                }
                Ok(out)
            },
            BitString::encode,
        )
    }

    fn bounded_items(&self, bound: usize) -> Result<Vec<BitString>, FrameworkError> {
        if bound > S01_MAX_BOUND {
            return Err(FrameworkError::BoundTooLarge { bound, max: S01_MAX_BOUND });
        }
        let max = bound.min(self.enumeration.len());
        let mut out = vec![BitString::new()];
        let mut frontier = vec![BitString::new()];
        for _ in 0..max {
            let next: Vec<BitString> =
                frontier.iter().flat_map(|m| [m.with_bit(false), m.with_bit(true)]).collect();
            out.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(out)
    }

    fn limit_of(&self, m: &BitString) -> LimitObjects {
        let (side0, side1) = self.sides(m).unwrap_or_default();
        LimitObjects::Split { prefix: m.clone(), side0, side1 }
    }
}

impl S01 {
    /// Pushes every compatible extension of `prev` to exactly `nbits` bits.
    fn extend_all(
        &self,
        prev: &BitString,
        nbits: usize,
        r: &S01Request,
        out: &mut Vec<BitString>,
    ) -> Result<(), LevelOverflow> {
        if prev.len() == nbits {
            if out.len() >= LEVEL_LIMIT {
                return Err(LevelOverflow);
            }
            out.push(prev.clone());
            return Ok(());
        }
        let s = prev.len();
        for bit in [false, true] {
            if self.bit_allowed(s, bit, r) {
                self.extend_all(&prev.with_bit(bit), nbits, r, out)?;
            }
        }
        Ok(())
    }
}
