//! Separation framework over a disjoint pair `⟨A₁, A₂⟩` with an injective
//! enumeration `a` of `A₁`. Items are finite sets `K` of enumeration indices;
//! requests are pairs `⟨K⁺, A⁻⟩` with `a(K⁺) ∩ A⁻ = ∅`. `K` is compatible when
//! `K⁺ ⊆ K` and `a(K) ∩ A⁻ = ∅`. The limit object is `A₁′ = a(⋃Kᵢ)`.
//!
//! Encoding: item = set of indices; request = tuple(set K⁺, set A⁻).

use std::sync::Arc;

use crate::encoding::{decode_set, decode_tuple, encode_set, encode_tuple, extra_sets, set_encoded_len, NatSet};
use crate::error::FrameworkError;
use crate::framework::{Framework, Successors, LEVEL_LIMIT};
use crate::frameworks::spm::subsets;
use crate::frameworks::LimitObjects;

pub const SSEP_MAX_BOUND: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ssep {
    enumeration: Arc<Vec<u64>>,
    other: Arc<NatSet>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SsepRequest {
    pub k_pos: NatSet,
    pub a_neg: NatSet,
}

impl SsepRequest {
    pub fn of(k_pos: &[u64], a_neg: &[u64]) -> Self {
        SsepRequest { k_pos: k_pos.iter().copied().collect(), a_neg: a_neg.iter().copied().collect() }
    }
}

impl Ssep {
    /// `enumeration` lists `A₁` without repetitions; `other` is `A₂`.
    pub fn new(enumeration: Vec<u64>, other: NatSet) -> Result<Self, FrameworkError> {
        let mut seen = NatSet::new();
        for &x in &enumeration {
            if !seen.insert(x) {
                return Err(FrameworkError::MalformedItem(format!("enumeration repeats {x}")));
            }
            if other.contains(&x) {
                return Err(FrameworkError::MalformedItem(format!("{x} lies in both sets of the pair")));
            }
        }
        Ok(Ssep { enumeration: Arc::new(enumeration), other: Arc::new(other) })
    }

    pub fn enumeration(&self) -> &[u64] {
        &self.enumeration
    }

    pub fn other(&self) -> &NatSet {
        &self.other
    }

    /// `a(K)`; indices outside the enumeration prefix are an error.
    pub fn image(&self, k: &NatSet) -> Result<NatSet, FrameworkError> {
        k.iter()
            .map(|&i| {
                self.enumeration.get(i as usize).copied().ok_or(FrameworkError::UniverseExhausted {
                    index: i as usize,
                    available: self.enumeration.len(),
                })
            })
            .collect()
    }

    fn in_range(&self, k: &NatSet) -> bool {
        k.last().is_none_or(|&i| (i as usize) < self.enumeration.len())
    }

    fn avoids(&self, k: &NatSet, a_neg: &NatSet) -> bool {
        k.iter().all(|&i| !a_neg.contains(&self.enumeration[i as usize]))
    }
}

impl Framework for Ssep {
    type Item = NatSet;
    type Request = SsepRequest;

    fn id(&self) -> String {
        let a: Vec<String> = self.enumeration.iter().map(u64::to_string).collect();
        let b: Vec<String> = self.other.iter().map(u64::to_string).collect();
        format!("ssep[{};{}]", a.join(","), b.join(","))
    }

    fn initial_item(&self) -> NatSet {
        NatSet::new()
    }

    fn initial_request(&self) -> SsepRequest {
        SsepRequest::default()
    }

    fn may_follow(&self, next: &NatSet, prev: &NatSet) -> bool {
        prev.is_subset(next)
    }

    fn compatible(&self, k: &NatSet, r: &SsepRequest) -> bool {
        self.in_range(k) && r.k_pos.is_subset(k) && self.avoids(k, &r.a_neg)
    }

    /// Exclusions of elements outside the enumeration constrain nothing.
    fn dominates(&self, u: &SsepRequest, v: &SsepRequest) -> bool {
        v.k_pos.is_subset(&u.k_pos) && v.a_neg.iter().all(|x| u.a_neg.contains(x) || !self.enumeration.contains(x))
    }

    fn check_item(&self, k: &NatSet) -> Result<(), FrameworkError> {
        self.image(k).map(|_| ())
    }

    fn check_request(&self, r: &SsepRequest) -> Result<(), FrameworkError> {
        let image = self.image(&r.k_pos)?;
        if let Some(x) = image.intersection(&r.a_neg).next() {
            return Err(FrameworkError::MalformedRequest(format!("a(K+) meets A- at {x}")));
        }
        Ok(())
    }

    fn join_requests(&self, u: &SsepRequest, v: &SsepRequest) -> Option<SsepRequest> {
        let r = SsepRequest { k_pos: &u.k_pos | &v.k_pos, a_neg: &u.a_neg | &v.a_neg };
        self.check_request(&r).ok().map(|_| r)
    }

    fn encode_item(&self, k: &NatSet) -> Vec<u8> {
        encode_set(k)
    }

    fn decode_item(&self, bytes: &[u8]) -> Result<NatSet, FrameworkError> {
        let k = decode_set(bytes)?;
        self.check_item(&k)?;
        Ok(k)
    }

    fn encode_request(&self, r: &SsepRequest) -> Vec<u8> {
        encode_tuple(&[&encode_set(&r.k_pos), &encode_set(&r.a_neg)])
    }

    fn decode_request_raw(&self, bytes: &[u8]) -> Result<SsepRequest, FrameworkError> {
        let parts = decode_tuple(bytes, 2)?;
        Ok(SsepRequest { k_pos: decode_set(parts[0])?, a_neg: decode_set(parts[1])? })
    }

    fn successors(&self, prev: &NatSet, r: &SsepRequest) -> Successors<'_, NatSet> {
        let base: NatSet = prev | &r.k_pos;
        if !self.in_range(&base) || !self.avoids(&base, &r.a_neg) {
            return Successors::none();
        }
        let n = self.enumeration.len() as u64;
        let free: NatSet =
            (0..n).filter(|i| !base.contains(i) && !r.a_neg.contains(&self.enumeration[*i as usize])).collect();
        let base_len = set_encoded_len(&base);
        let max_len = base_len + set_encoded_len(&free);
        Successors::by_length(
            base_len,
            Some(max_len),
            move |len| {
                let extras = extra_sets(&base, &|i| free.contains(&i), len - base_len, Some(n), LEVEL_LIMIT)?;
                Ok(extras.into_iter().map(|x| &x | &base).collect())
            },
            encode_set,
        )
    }

    fn bounded_items(&self, bound: usize) -> Result<Vec<NatSet>, FrameworkError> {
        if bound > SSEP_MAX_BOUND {
            return Err(FrameworkError::BoundTooLarge { bound, max: SSEP_MAX_BOUND });
        }
        Ok(subsets(bound.min(self.enumeration.len())))
    }

    fn limit_of(&self, k: &NatSet) -> LimitObjects {
        LimitObjects::Image(self.image(k).unwrap_or_default())
    }
}
