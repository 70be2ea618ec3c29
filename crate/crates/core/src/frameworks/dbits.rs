use crate::encoding::BitString;
use crate::framework::DFramework;

/// Bit strings under proper extension. The diagonal search steps by one bit
/// at a time, `0` before `1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct BitStringD;

impl DFramework for BitStringD {
    type Item = BitString;

    fn initial_item(&self) -> BitString {
        BitString::new()
    }

    fn may_follow(&self, next: &BitString, prev: &BitString) -> bool {
        prev.is_proper_prefix_of(next)
    }

    fn step_candidates(&self, item: &BitString) -> Vec<BitString> {
        vec![item.with_bit(false), item.with_bit(true)]
    }
}
