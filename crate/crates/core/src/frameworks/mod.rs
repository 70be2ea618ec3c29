//! Concrete frameworks and their limit objects.

mod dbits;
mod product;
mod s01;
mod spm;
mod spp;
mod ssep;

use std::fmt;

pub use dbits::BitStringD;
pub use product::Product;
pub use s01::{S01Request, S01, S01_MAX_BOUND};
pub use spm::{Spm, SpmRequest, SPM_MAX_BOUND};
pub use spp::{PairItem, Spp, SppRequest, SPP_MAX_BOUND};
pub use ssep::{Ssep, SsepRequest, SSEP_MAX_BOUND};

use crate::encoding::{set_fmt, BitString, NatSet};
use crate::error::FrameworkError;

/// Monotone limit data of a valid sequence, accumulated so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitObjects {
    /// `A∞` of the set framework.
    Set(NatSet),
    Pair(Box<LimitObjects>, Box<LimitObjects>),
    /// Bit prefix seen so far and the split `⟨A⁰, A¹⟩` it induces.
    Split { prefix: BitString, side0: NatSet, side1: NatSet },
    /// `⟨A∞, B∞⟩` of the disjoint-pair framework.
    Disjoint { a: NatSet, b: NatSet },
    /// `A₁′ = a(⋃Kᵢ)`.
    Image(NatSet),
}

impl LimitObjects {
    /// `self` is contained componentwise in `later`.
    pub fn is_below(&self, later: &LimitObjects) -> bool {
        use LimitObjects::*;
        match (self, later) {
            (Set(a), Set(b)) | (Image(a), Image(b)) => a.is_subset(b),
            (Pair(a1, a2), Pair(b1, b2)) => a1.is_below(b1) && a2.is_below(b2),
            (Split { prefix: p, side0: a0, side1: a1 }, Split { prefix: q, side0: b0, side1: b1 }) => {
                p.is_prefix_of(q) && a0.is_subset(b0) && a1.is_subset(b1)
            }
            (Disjoint { a: a1, b: b1 }, Disjoint { a: a2, b: b2 }) => a1.is_subset(a2) && b1.is_subset(b2),
            _ => false,
        }
    }
}

impl fmt::Display for LimitObjects {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitObjects::Set(a) => write!(f, "A={}", set_fmt(a)),
            LimitObjects::Pair(l, r) => write!(f, "left[{l}] right[{r}]"),
            LimitObjects::Split { prefix, side0, side1 } => {
                write!(f, "m={prefix} A0={} A1={}", set_fmt(side0), set_fmt(side1))
            }
            LimitObjects::Disjoint { a, b } => write!(f, "A={} B={}", set_fmt(a), set_fmt(b)),
            LimitObjects::Image(a) => write!(f, "A1'={}", set_fmt(a)),
        }
    }
}

/// Names one of the shipped frameworks together with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameworkSpec {
    Spm,
    SpmPair,
    S01(Vec<u64>),
    Spp,
    Ssep { enumeration: Vec<u64>, other: Vec<u64> },
}

impl FrameworkSpec {
    /// Same string as the built framework's `id()`.
    pub fn id(&self) -> String {
        let list = |xs: &[u64]| xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match self {
            FrameworkSpec::Spm => "spm".into(),
            FrameworkSpec::SpmPair => "(spm*spm)".into(),
            FrameworkSpec::S01(a) => format!("s01[{}]", list(a)),
            FrameworkSpec::Spp => "spp".into(),
            FrameworkSpec::Ssep { enumeration, other } => {
                let mut other = other.clone();
                other.sort_unstable();
                other.dedup();
                format!("ssep[{};{}]", list(enumeration), list(&other))
            }
        }
    }

    pub fn parse_id(id: &str) -> Result<Self, FrameworkError> {
        let bad = || FrameworkError::MalformedItem(format!("unknown framework id {id:?}"));
        let nums = |s: &str| -> Result<Vec<u64>, FrameworkError> {
            if s.is_empty() {
                return Ok(Vec::new());
            }
            s.split(',').map(|t| t.trim().parse::<u64>().map_err(|_| bad())).collect()
        };
        match id {
            "spm" => Ok(FrameworkSpec::Spm),
            "(spm*spm)" => Ok(FrameworkSpec::SpmPair),
            "spp" => Ok(FrameworkSpec::Spp),
            _ => {
                if let Some(body) = id.strip_prefix("s01[").and_then(|s| s.strip_suffix(']')) {
                    Ok(FrameworkSpec::S01(nums(body)?))
                } else if let Some(body) = id.strip_prefix("ssep[").and_then(|s| s.strip_suffix(']')) {
                    let (a, b) = body.split_once(';').ok_or_else(bad)?;
                    Ok(FrameworkSpec::Ssep { enumeration: nums(a)?, other: nums(b)? })
                } else {
                    Err(bad())
                }
            }
        }
    }

    pub fn s01(&self) -> Result<S01, FrameworkError> {
        match self {
            FrameworkSpec::S01(a) => S01::new(a.clone()),
            _ => Err(FrameworkError::MalformedItem("not a splitting framework".into())),
        }
    }

    pub fn ssep(&self) -> Result<Ssep, FrameworkError> {
        match self {
            FrameworkSpec::Ssep { enumeration, other } => {
                Ssep::new(enumeration.clone(), other.iter().copied().collect())
            }
            _ => Err(FrameworkError::MalformedItem("not a separation framework".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::Framework;

    #[test]
    fn spec_ids_match_frameworks() {
        assert_eq!(FrameworkSpec::Spm.id(), Spm.id());
        assert_eq!(FrameworkSpec::SpmPair.id(), Product::new(Spm, Spm).id());
        let s = FrameworkSpec::S01(vec![5, 3, 8]);
        assert_eq!(s.id(), s.s01().unwrap().id());
        let t = FrameworkSpec::Ssep { enumeration: vec![4, 7], other: vec![9, 1] };
        assert_eq!(t.id(), t.ssep().unwrap().id());
        for spec in [FrameworkSpec::Spm, FrameworkSpec::SpmPair, FrameworkSpec::Spp, s, t.clone()] {
            let parsed = FrameworkSpec::parse_id(&spec.id()).unwrap();
            assert_eq!(parsed.id(), spec.id());
        }
        assert!(FrameworkSpec::parse_id("nope").is_err());
    }
}
