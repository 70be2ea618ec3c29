//! Items are finite sets of naturals, requests pairs `⟨A⁺, A⁻⟩` of disjoint
//! finite sets. An item `A` is compatible with the request when
//! `A⁺ ⊆ A ⊆ ℕ ∖ A⁻`; `A₁` may follow `A` when `A ⊆ A₁`.
//!
//! Encoding: item = set; request = tuple(set A⁺, set A⁻).

use crate::encoding::{decode_set, decode_tuple, encode_set, encode_tuple, extra_sets, set_encoded_len, NatSet};
use crate::error::FrameworkError;
use crate::framework::{Framework, Successors, LEVEL_LIMIT};
use crate::frameworks::LimitObjects;

/// Largest universe `{0..bound-1}` enumerated exhaustively.
pub const SPM_MAX_BOUND: usize = 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Spm;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SpmRequest {
    pub pos: NatSet,
    pub neg: NatSet,
}

impl SpmRequest {
    pub fn new(pos: NatSet, neg: NatSet) -> Result<Self, FrameworkError> {
        let r = SpmRequest { pos, neg };
        Spm.check_request(&r)?;
        Ok(r)
    }

    pub fn of(pos: &[u64], neg: &[u64]) -> Result<Self, FrameworkError> {
        Self::new(pos.iter().copied().collect(), neg.iter().copied().collect())
    }

    pub fn with_pos(&self, x: u64) -> Self {
        let mut r = self.clone();
        r.pos.insert(x);
        r
    }

    pub fn with_neg(&self, xs: impl IntoIterator<Item = u64>) -> Self {
        let mut r = self.clone();
        r.neg.extend(xs);
        r
    }

    /// Whether `x` is mentioned by either part.
    pub fn mentions(&self, x: u64) -> bool {
        self.pos.contains(&x) || self.neg.contains(&x)
    }
}

impl Framework for Spm {
    type Item = NatSet;
    type Request = SpmRequest;

    fn id(&self) -> String {
        "spm".into()
    }

    fn initial_item(&self) -> NatSet {
        NatSet::new()
    }

    fn initial_request(&self) -> SpmRequest {
        SpmRequest::default()
    }

    fn may_follow(&self, next: &NatSet, prev: &NatSet) -> bool {
        prev.is_subset(next)
    }

    fn compatible(&self, item: &NatSet, request: &SpmRequest) -> bool {
        request.pos.is_subset(item) && request.neg.is_disjoint(item)
    }

    fn dominates(&self, u: &SpmRequest, v: &SpmRequest) -> bool {
        v.pos.is_subset(&u.pos) && v.neg.is_subset(&u.neg)
    }

    fn check_item(&self, _item: &NatSet) -> Result<(), FrameworkError> {
        Ok(())
    }

    fn check_request(&self, r: &SpmRequest) -> Result<(), FrameworkError> {
        if let Some(x) = r.pos.intersection(&r.neg).next() {
            return Err(FrameworkError::MalformedRequest(format!("{x} is both required and excluded")));
        }
        Ok(())
    }

    fn join_requests(&self, u: &SpmRequest, v: &SpmRequest) -> Option<SpmRequest> {
        SpmRequest::new(&u.pos | &v.pos, &u.neg | &v.neg).ok()
    }

    fn encode_item(&self, item: &NatSet) -> Vec<u8> {
        encode_set(item)
    }

    fn decode_item(&self, bytes: &[u8]) -> Result<NatSet, FrameworkError> {
        Ok(decode_set(bytes)?)
    }

    fn encode_request(&self, r: &SpmRequest) -> Vec<u8> {
        encode_tuple(&[&encode_set(&r.pos), &encode_set(&r.neg)])
    }

    fn decode_request_raw(&self, bytes: &[u8]) -> Result<SpmRequest, FrameworkError> {
        let parts = decode_tuple(bytes, 2)?;
        Ok(SpmRequest { pos: decode_set(parts[0])?, neg: decode_set(parts[1])? })
    }

    fn successors(&self, prev: &NatSet, request: &SpmRequest) -> Successors<'_, NatSet> {
        let base: NatSet = prev | &request.pos;
        if !base.is_disjoint(&request.neg) {
            return Successors::none();
        }
        let base_len = set_encoded_len(&base);
        let neg = request.neg.clone();
        Successors::by_length(
            base_len,
            None,
            move |len| {
                let extras = extra_sets(&base, &|x| !neg.contains(&x), len - base_len, None, LEVEL_LIMIT)?;
                Ok(extras.into_iter().map(|x| &x | &base).collect())
            },
            encode_set,
        )
    }

    fn bounded_items(&self, bound: usize) -> Result<Vec<NatSet>, FrameworkError> {
        if bound > SPM_MAX_BOUND {
            return Err(FrameworkError::BoundTooLarge { bound, max: SPM_MAX_BOUND });
        }
        Ok(subsets(bound))
    }

    fn limit_of(&self, item: &NatSet) -> LimitObjects {
        LimitObjects::Set(item.clone())
    }
}

/// All subsets of `{0..n-1}`, by bitmask order.
pub(crate) fn subsets(n: usize) -> Vec<NatSet> {
    (0u64..1 << n)
        .map(|mask| (0..n as u64).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}
