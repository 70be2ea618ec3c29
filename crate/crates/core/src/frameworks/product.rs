use std::cell::RefCell;

use crate::encoding::{decode_tuple, encode_tuple, tuple_encoded_len, varint_len, LevelOverflow};
use crate::error::FrameworkError;
use crate::framework::{Framework, LevelCache, Successors, LEVEL_LIMIT};
use crate::frameworks::LimitObjects;

/// Componentwise product of two frameworks.
///
/// Encoding: items and requests are tuple(left, right).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Product<F, G> {
    pub left: F,
    pub right: G,
}

impl<F, G> Product<F, G> {
    pub fn new(left: F, right: G) -> Self {
        Product { left, right }
    }
}

impl<F: Framework, G: Framework> Framework for Product<F, G> {
    type Item = (F::Item, G::Item);
    type Request = (F::Request, G::Request);

    fn id(&self) -> String {
        format!("({}*{})", self.left.id(), self.right.id())
    }

    fn initial_item(&self) -> Self::Item {
        (self.left.initial_item(), self.right.initial_item())
    }

    fn initial_request(&self) -> Self::Request {
        (self.left.initial_request(), self.right.initial_request())
    }

    fn may_follow(&self, next: &Self::Item, prev: &Self::Item) -> bool {
        self.left.may_follow(&next.0, &prev.0) && self.right.may_follow(&next.1, &prev.1)
    }

    fn compatible(&self, m: &Self::Item, r: &Self::Request) -> bool {
        self.left.compatible(&m.0, &r.0) && self.right.compatible(&m.1, &r.1)
    }

    fn dominates(&self, u: &Self::Request, v: &Self::Request) -> bool {
        self.left.dominates(&u.0, &v.0) && self.right.dominates(&u.1, &v.1)
    }

    fn check_item(&self, m: &Self::Item) -> Result<(), FrameworkError> {
        self.left.check_item(&m.0)?;
        self.right.check_item(&m.1)
    }

    fn check_request(&self, r: &Self::Request) -> Result<(), FrameworkError> {
        self.left.check_request(&r.0)?;
        self.right.check_request(&r.1)
    }

    fn join_requests(&self, u: &Self::Request, v: &Self::Request) -> Option<Self::Request> {
        Some((self.left.join_requests(&u.0, &v.0)?, self.right.join_requests(&u.1, &v.1)?))
    }

    fn encode_item(&self, m: &Self::Item) -> Vec<u8> {
        encode_tuple(&[&self.left.encode_item(&m.0), &self.right.encode_item(&m.1)])
    }

    fn decode_item(&self, bytes: &[u8]) -> Result<Self::Item, FrameworkError> {
        let parts = decode_tuple(bytes, 2)?;
        Ok((self.left.decode_item(parts[0])?, self.right.decode_item(parts[1])?))
    }

    fn encode_request(&self, r: &Self::Request) -> Vec<u8> {
        encode_tuple(&[&self.left.encode_request(&r.0), &self.right.encode_request(&r.1)])
    }

    fn decode_request_raw(&self, bytes: &[u8]) -> Result<Self::Request, FrameworkError> {
        let parts = decode_tuple(bytes, 2)?;
        Ok((self.left.decode_request_raw(parts[0])?, self.right.decode_request_raw(parts[1])?))
    }

    fn successors(&self, prev: &Self::Item, r: &Self::Request) -> Successors<'_, Self::Item> {
        let mut left = LevelCache::new(self.left.successors(&prev.0, &r.0));
        let mut right = LevelCache::new(self.right.successors(&prev.1, &r.1));
        let (min_l, min_r) = match (left.first_len(), right.first_len()) {
            (Ok(Some(l)), Ok(Some(r))) => (l, r),
            (Ok(None), _) | (_, Ok(None)) => return Successors::none(),
            _ => return Successors::by_length(0, None, |_| Err(LevelOverflow), |_: &Self::Item| Vec::new()),
        };
        let max_len = match (left.max_len(), right.max_len()) {
            (Some(l), Some(r)) => Some(tuple_encoded_len(&[l, r])),
            _ => None,
        };
        let caches = RefCell::new((left, right));
        Successors::by_length(
            tuple_encoded_len(&[min_l, min_r]),
            max_len,
            move |len| {
                let mut caches = caches.borrow_mut();
                let (left, right) = &mut *caches;
                let mut out = Vec::new();
                for l1 in min_l..=len {
                    let Some(rem) = len.checked_sub(l1 + varint_len(l1 as u64)) else { break };
                    let Some(l2) = (min_r..=rem).find(|&l2| l2 + varint_len(l2 as u64) == rem) else {
                        continue;
                    };
                    let ls = left.level(l1)?;
                    if ls.is_empty() {
                        continue;
                    }
                    let rs = right.level(l2)?;
                    for a in &ls {
                        for b in &rs {
                            if out.len() >= LEVEL_LIMIT {
                                return Err(LevelOverflow);
                            }
                            out.push((a.clone(), b.clone()));
                        }
                    }
                }
                Ok(out)
            },
            move |m: &Self::Item| encode_tuple(&[&self.left.encode_item(&m.0), &self.right.encode_item(&m.1)]),
        )
    }

    fn bounded_items(&self, bound: usize) -> Result<Vec<Self::Item>, FrameworkError> {
        let ls = self.left.bounded_items(bound)?;
        let rs = self.right.bounded_items(bound)?;
        Ok(ls.iter().flat_map(|a| rs.iter().map(move |b| (a.clone(), b.clone()))).collect())
    }

    fn limit_of(&self, m: &Self::Item) -> LimitObjects {
        LimitObjects::Pair(Box::new(self.left.limit_of(&m.0)), Box::new(self.right.limit_of(&m.1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::NatSet;
    use crate::framework::{brute_force_dominates, BruteForceOracle};
    use crate::frameworks::{Spm, SpmRequest};

    fn set(xs: &[u64]) -> NatSet {
        xs.iter().copied().collect()
    }

    fn req(pos: &[u64], neg: &[u64]) -> SpmRequest {
        SpmRequest::of(pos, neg).unwrap()
    }

    #[test]
    fn componentwise_relations() {
        let p = Product::new(Spm, Spm);
        let r = (req(&[1], &[]), req(&[2], &[]));
        assert!(p.compatible(&(set(&[1]), set(&[2])), &r));
        assert!(!p.compatible(&(set(&[1]), set(&[])), &r));
        // left follows, right shrinks
        assert!(!p.may_follow(&(set(&[1]), set(&[])), &(set(&[1, 2]), set(&[7]))));
        assert!(!p.may_follow(&(set(&[1, 2]), set(&[])), &(set(&[1]), set(&[7]))));
    }

    #[test]
    fn domination_matches_oracle_on_small_product() {
        let p = Product::new(Spm, Spm);
        let oracle = BruteForceOracle::new(&p, 3).unwrap();
        let reqs: Vec<SpmRequest> = vec![req(&[], &[]), req(&[0], &[]), req(&[], &[1]), req(&[0], &[2]), req(&[1, 2], &[0])];
        for a in &reqs {
            for b in &reqs {
                for c in &reqs {
                    for d in &reqs {
                        let u = (a.clone(), b.clone());
                        let v = (c.clone(), d.clone());
                        assert_eq!(p.dominates(&u, &v), oracle.check(&u, &v).dominates, "{u:?} {v:?}");
                    }
                }
            }
        }
        assert!(brute_force_dominates(&p, 3, &(req(&[0], &[]), req(&[], &[])), &(req(&[], &[]), req(&[], &[])))
            .unwrap()
            .dominates);
    }

    #[test]
    fn successors_pair_least_first_and_ordered() {
        let p = Product::new(Spm, Spm);
        let prev = (set(&[1]), set(&[]));
        let r = (req(&[1], &[2]), req(&[3], &[]));
        let got: Vec<_> = p.successors(&prev, &r).take(50).collect();
        assert_eq!(got[0], (set(&[1]), set(&[3])));
        let encs: Vec<Vec<u8>> = got.iter().map(|m| p.encode_item(m)).collect();
        for w in encs.windows(2) {
            assert_eq!(crate::encoding::shortlex_cmp(&w[0], &w[1]), std::cmp::Ordering::Less);
        }
        assert!(got.iter().all(|m| p.compatible(m, &r) && p.may_follow(m, &prev)));
    }

    #[test]
    fn successors_empty_if_a_component_is_stuck() {
        let p = Product::new(Spm, Spm);
        let mut s = p.successors(&(set(&[2]), set(&[])), &(req(&[], &[2]), req(&[], &[])));
        assert!(s.next().is_none());
    }
}
