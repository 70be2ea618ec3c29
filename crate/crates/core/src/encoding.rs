//! Canonical byte encodings shared by every framework.
//!
//! * naturals: unsigned LEB128 varints
//! * finite sets: strictly increasing sequence of varints, no count prefix
//! * bit strings: varint bit length followed by the bits packed MSB-first,
//!   padding bits zero
//! * pairs and triples: each component prefixed by the varint byte length of
//!   its encoding
//!
//! The canonical order on items is shortlex over these byte strings.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::DecodeError;

pub type NatSet = BTreeSet<u64>;

pub fn varint_len(mut value: u64) -> usize {
    let mut len = 1;
    while value >= 0x80 {
        value >>= 7;
        len += 1;
    }
    len
}

pub fn put_varint(out: &mut Vec<u8>, mut value: u64) {
    while value >= 0x80 {
        out.push((value as u8 & 0x7f) | 0x80);
        value >>= 7;
    }
    out.push(value as u8);
}

/// Reads one varint starting at `*pos`, advancing it. Rejects overlong forms.
pub fn get_varint(bytes: &[u8], pos: &mut usize) -> Result<u64, DecodeError> {
    let mut value: u64 = 0;
    let mut shift = 0u32;
    loop {
        let byte = *bytes.get(*pos).ok_or(DecodeError::Truncated)?;
        *pos += 1;
        if shift == 63 && byte > 1 {
            return Err(DecodeError::Overflow);
        }
        value |= u64::from(byte & 0x7f) << shift;
        if byte & 0x80 == 0 {
            if byte == 0 && shift > 0 {
                return Err(DecodeError::NonCanonical("overlong varint".into()));
            }
            return Ok(value);
        }
        shift += 7;
        if shift > 63 {
            return Err(DecodeError::Overflow);
        }
    }
}

pub fn encode_set(set: &NatSet) -> Vec<u8> {
    let mut out = Vec::with_capacity(set.len());
    for &x in set {
        put_varint(&mut out, x);
    }
    out
}

pub fn set_encoded_len(set: &NatSet) -> usize {
    set.iter().map(|&x| varint_len(x)).sum()
}

pub fn decode_set(bytes: &[u8]) -> Result<NatSet, DecodeError> {
    let mut pos = 0;
    let mut set = NatSet::new();
    let mut last: Option<u64> = None;
    while pos < bytes.len() {
        let x = get_varint(bytes, &mut pos)?;
        if let Some(prev) = last {
            if x <= prev {
                return Err(DecodeError::NonCanonical(format!(
                    "set elements not strictly increasing ({prev} then {x})"
                )));
            }
        }
        last = Some(x);
        set.insert(x);
    }
    Ok(set)
}

/// Concatenates components, each prefixed with its byte length.
pub fn encode_tuple(parts: &[&[u8]]) -> Vec<u8> {
    let mut out = Vec::new();
    for part in parts {
        put_varint(&mut out, part.len() as u64);
        out.extend_from_slice(part);
    }
    out
}

pub fn tuple_encoded_len(part_lens: &[usize]) -> usize {
    part_lens.iter().map(|&l| varint_len(l as u64) + l).sum()
}

pub fn decode_tuple(bytes: &[u8], arity: usize) -> Result<Vec<&[u8]>, DecodeError> {
    let mut pos = 0;
    let mut parts = Vec::with_capacity(arity);
    for _ in 0..arity {
        let len = get_varint(bytes, &mut pos)? as usize;
        let end = pos.checked_add(len).ok_or(DecodeError::Truncated)?;
        if end > bytes.len() {
            return Err(DecodeError::Truncated);
        }
        parts.push(&bytes[pos..end]);
        pos = end;
    }
    if pos != bytes.len() {
        return Err(DecodeError::TrailingBytes(bytes.len() - pos));
    }
    Ok(parts)
}

/// Shortlex comparison: shorter strings first, then lexicographic.
pub fn shortlex_cmp(a: &[u8], b: &[u8]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Finite bit string `m(0) m(1) ... m(k)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        BitString(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, index: usize) -> Option<bool> {
        self.0.get(index).copied()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn with_bit(&self, bit: bool) -> Self {
        let mut next = self.clone();
        next.push(bit);
        next
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    pub fn is_proper_prefix_of(&self, other: &BitString) -> bool {
        other.0.len() > self.0.len() && self.is_prefix_of(other)
    }

    pub fn truncated(&self, len: usize) -> BitString {
        BitString(self.0[..len.min(self.0.len())].to_vec())
    }

    /// Characteristic string of `set` on positions `0..len`.
    pub fn characteristic(set: &NatSet, len: usize) -> BitString {
        BitString((0..len as u64).map(|i| set.contains(&i)).collect())
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(1 + self.0.len().div_ceil(8));
        put_varint(&mut out, self.0.len() as u64);
        for chunk in self.0.chunks(8) {
            let mut byte = 0u8;
            for (i, &bit) in chunk.iter().enumerate() {
                if bit {
                    byte |= 0x80 >> i;
                }
            }
            out.push(byte);
        }
        out
    }

    pub fn encoded_len_for(bits: usize) -> usize {
        varint_len(bits as u64) + bits.div_ceil(8)
    }

    pub fn decode(bytes: &[u8]) -> Result<BitString, DecodeError> {
        let mut pos = 0;
        let len = get_varint(bytes, &mut pos)? as usize;
        let packed = &bytes[pos..];
        if packed.len() != len.div_ceil(8) {
            return Err(if packed.len() < len.div_ceil(8) {
                DecodeError::Truncated
            } else {
                DecodeError::TrailingBytes(packed.len() - len.div_ceil(8))
            });
        }
        let mut bits = Vec::with_capacity(len);
        for i in 0..len {
            bits.push(packed[i / 8] & (0x80 >> (i % 8)) != 0);
        }
        let used = len % 8;
        if used != 0 {
            let pad_mask = 0xffu8 >> used;
            if packed[packed.len() - 1] & pad_mask != 0 {
                return Err(DecodeError::NonCanonical("non-zero padding bits".into()));
            }
        }
        Ok(BitString(bits))
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitString {
    type Err = DecodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(DecodeError::NonCanonical(format!("bad bit {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

/// Result of generating a bounded family of candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelOverflow;

/// Every set `X` of naturals with `X ∩ base = ∅`, `admit(x)` for all `x ∈ X`,
/// `x < upper` when given, and total varint length exactly `bytes`.
///
/// At most `limit` sets are produced before reporting overflow.
pub fn extra_sets(
    base: &NatSet,
    admit: &dyn Fn(u64) -> bool,
    bytes: usize,
    upper: Option<u64>,
    limit: usize,
) -> Result<Vec<NatSet>, LevelOverflow> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    extra_rec(base, admit, bytes, upper, limit, 0, &mut current, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extra_rec(
    base: &NatSet,
    admit: &dyn Fn(u64) -> bool,
    remaining: usize,
    upper: Option<u64>,
    limit: usize,
    start: u64,
    current: &mut Vec<u64>,
    out: &mut Vec<NatSet>,
) -> Result<(), LevelOverflow> {
    if remaining == 0 {
        if out.len() >= limit {
            return Err(LevelOverflow);
        }
        out.push(current.iter().copied().collect());
        return Ok(());
    }
    // Largest value whose varint fits in the remaining bytes.
    let cap = if remaining >= 10 {
        u64::MAX
    } else {
        (1u64 << (7 * remaining as u32)).saturating_sub(1)
    };
    let cap = match upper {
        Some(u) if u == 0 => return Ok(()),
        Some(u) => cap.min(u - 1),
        None => cap,
    };
    let mut x = start;
    while x <= cap {
        if !base.contains(&x) && admit(x) {
            let len = varint_len(x);
            if len <= remaining {
                current.push(x);
                extra_rec(base, admit, remaining - len, upper, limit, x + 1, current, out)?;
                current.pop();
            }
        }
        if x == u64::MAX {
            break;
        }
        x += 1;
    }
    Ok(())
}

/// `0x`-prefixed lowercase hex, so an empty encoding stays visible.
pub fn hex_field(bytes: &[u8]) -> String {
    format!("0x{}", hex::encode(bytes))
}

pub fn parse_hex_field(text: &str) -> Result<Vec<u8>, DecodeError> {
    let body = text.strip_prefix("0x").ok_or_else(|| DecodeError::Hex(format!("missing 0x prefix in {text:?}")))?;
    if body.bytes().any(|b| b.is_ascii_uppercase()) {
        return Err(DecodeError::Hex(format!("uppercase digits in {text:?}")));
    }
    hex::decode(body).map_err(|e| DecodeError::Hex(e.to_string()))
}

pub fn set_fmt(set: &NatSet) -> String {
    let parts: Vec<String> = set.iter().map(u64::to_string).collect();
    format!("{{{}}}", parts.join(","))
}
