//! Pairs of disjoint sets. Items are `⟨A, B⟩` with `A ∩ B = ∅`; requests are
//! triples `⟨A⁺, B⁺, K⟩` of pairwise disjoint sets. `⟨A, B⟩` is compatible with
//! the request when `A⁺ ⊆ A`, `B⁺ ⊆ B` and `(A ∪ B) ∩ K = ∅`.
//!
//! Encoding: item = tuple(set A, set B); request = tuple(A⁺, B⁺, K).

use crate::encoding::{
    decode_set, decode_tuple, encode_set, encode_tuple, extra_sets, set_encoded_len, tuple_encoded_len, LevelOverflow,
    NatSet,
};
use crate::error::FrameworkError;
use crate::framework::{Framework, Successors, LEVEL_LIMIT};
use crate::frameworks::LimitObjects;

pub const SPP_MAX_BOUND: usize = 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Spp;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PairItem {
    pub a: NatSet,
    pub b: NatSet,
}

impl PairItem {
    pub fn of(a: &[u64], b: &[u64]) -> Self {
        PairItem { a: a.iter().copied().collect(), b: b.iter().copied().collect() }
    }

    pub fn mentions(&self, x: u64) -> bool {
        self.a.contains(&x) || self.b.contains(&x)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SppRequest {
    pub a_pos: NatSet,
    pub b_pos: NatSet,
    /// `K`: elements kept out of both sets.
    pub keep_out: NatSet,
}

impl SppRequest {
    pub fn of(a_pos: &[u64], b_pos: &[u64], keep_out: &[u64]) -> Self {
        SppRequest {
            a_pos: a_pos.iter().copied().collect(),
            b_pos: b_pos.iter().copied().collect(),
            keep_out: keep_out.iter().copied().collect(),
        }
    }

    pub fn mentions(&self, x: u64) -> bool {
        self.a_pos.contains(&x) || self.b_pos.contains(&x) || self.keep_out.contains(&x)
    }
}

impl Framework for Spp {
    type Item = PairItem;
    type Request = SppRequest;

    fn id(&self) -> String {
        "spp".into()
    }

    fn initial_item(&self) -> PairItem {
        PairItem::default()
    }

    fn initial_request(&self) -> SppRequest {
        SppRequest::default()
    }

    fn may_follow(&self, next: &PairItem, prev: &PairItem) -> bool {
        prev.a.is_subset(&next.a) && prev.b.is_subset(&next.b)
    }

    fn compatible(&self, m: &PairItem, r: &SppRequest) -> bool {
        r.a_pos.is_subset(&m.a)
            && r.b_pos.is_subset(&m.b)
            && m.a.is_disjoint(&r.keep_out)
            && m.b.is_disjoint(&r.keep_out)
    }

    fn dominates(&self, u: &SppRequest, v: &SppRequest) -> bool {
        v.a_pos.is_subset(&u.a_pos) && v.b_pos.is_subset(&u.b_pos) && v.keep_out.is_subset(&u.keep_out)
    }

    fn check_item(&self, m: &PairItem) -> Result<(), FrameworkError> {
        if let Some(x) = m.a.intersection(&m.b).next() {
            return Err(FrameworkError::MalformedItem(format!("{x} lies in both A and B")));
        }
        Ok(())
    }

    fn check_request(&self, r: &SppRequest) -> Result<(), FrameworkError> {
        let clash = r
            .a_pos
            .intersection(&r.b_pos)
            .chain(r.a_pos.intersection(&r.keep_out))
            .chain(r.b_pos.intersection(&r.keep_out))
            .next();
        match clash {
            Some(x) => Err(FrameworkError::MalformedRequest(format!("{x} appears in two parts"))),
            None => Ok(()),
        }
    }

    fn join_requests(&self, u: &SppRequest, v: &SppRequest) -> Option<SppRequest> {
        let r = SppRequest {
            a_pos: &u.a_pos | &v.a_pos,
            b_pos: &u.b_pos | &v.b_pos,
            keep_out: &u.keep_out | &v.keep_out,
        };
        self.check_request(&r).ok().map(|_| r)
    }

    fn encode_item(&self, m: &PairItem) -> Vec<u8> {
        encode_tuple(&[&encode_set(&m.a), &encode_set(&m.b)])
    }

    fn decode_item(&self, bytes: &[u8]) -> Result<PairItem, FrameworkError> {
        let parts = decode_tuple(bytes, 2)?;
        let m = PairItem { a: decode_set(parts[0])?, b: decode_set(parts[1])? };
        self.check_item(&m)?;
        Ok(m)
    }

    fn encode_request(&self, r: &SppRequest) -> Vec<u8> {
        encode_tuple(&[&encode_set(&r.a_pos), &encode_set(&r.b_pos), &encode_set(&r.keep_out)])
    }

    fn decode_request_raw(&self, bytes: &[u8]) -> Result<SppRequest, FrameworkError> {
        let parts = decode_tuple(bytes, 3)?;
        let r = SppRequest {
            a_pos: decode_set(parts[0])?,
            b_pos: decode_set(parts[1])?,
            keep_out: decode_set(parts[2])?,
        };
        Ok(r)
    }

    fn successors(&self, prev: &PairItem, r: &SppRequest) -> Successors<'_, PairItem> {
        let base_a: NatSet = &prev.a | &r.a_pos;
        let base_b: NatSet = &prev.b | &r.b_pos;
        if !base_a.is_disjoint(&base_b) || !base_a.is_disjoint(&r.keep_out) || !base_b.is_disjoint(&r.keep_out) {
            return Successors::none();
        }
        let len_a = set_encoded_len(&base_a);
        let len_b = set_encoded_len(&base_b);
        let keep_out = r.keep_out.clone();
        Successors::by_length(
            tuple_encoded_len(&[len_a, len_b]),
            None,
            move |len| {
                let mut out = Vec::new();
                for la in len_a..=len {
                    for lb in len_b..=len {
                        if tuple_encoded_len(&[la, lb]) != len {
                            continue;
                        }
                        let free_a = |x: u64| !keep_out.contains(&x) && !base_b.contains(&x);
                        let free_b = |x: u64| !keep_out.contains(&x) && !base_a.contains(&x);
                        let xa = extra_sets(&base_a, &free_a, la - len_a, None, LEVEL_LIMIT)?;
                        let xb = extra_sets(&base_b, &free_b, lb - len_b, None, LEVEL_LIMIT)?;
                        for ea in &xa {
                            for eb in &xb {
                                if ea.is_disjoint(eb) {
                                    if out.len() >= LEVEL_LIMIT {
                                        return Err(LevelOverflow);
                                    }
                                    out.push(PairItem { a: ea | &base_a, b: eb | &base_b });
                                }
                            }
                        }
                    }
                }
                Ok(out)
            },
            |m: &PairItem| encode_tuple(&[&encode_set(&m.a), &encode_set(&m.b)]),
        )
    }

    fn bounded_items(&self, bound: usize) -> Result<Vec<PairItem>, FrameworkError> {
        if bound > SPP_MAX_BOUND {
            return Err(FrameworkError::BoundTooLarge { bound, max: SPP_MAX_BOUND });
        }
        let mut out = Vec::new();
        for code in 0..3usize.pow(bound as u32) {
            let mut m = PairItem::default();
            let mut c = code;
            for x in 0..bound as u64 {
                match c % 3 {
                    1 => {
                        m.a.insert(x);
                    }
                    2 => {
                        m.b.insert(x);
                    }
                    _ => {}
                }
                c /= 3;
            }
            out.push(m);
        }
        Ok(out)
    }

    fn limit_of(&self, m: &PairItem) -> LimitObjects {
        LimitObjects::Disjoint { a: m.a.clone(), b: m.b.clone() }
    }
}
