use ethnum::U256;

use crate::partition::{pow2, Partition};
use crate::transaction::{Transaction, TransactionSequence};

/// Level-by-level pairing of set bits, optimal in sequence length.
///
/// At level `d` the indices with bit `d` set are sorted by their bit-reversed
/// weight (index breaks ties); the lower half donates `2^d` to the upper half,
/// pairwise. A final transaction hands the whole space back to target 0.
pub fn bit_matcher(p: &Partition) -> TransactionSequence {
    let width = p.width();
    let mut w: Vec<U256> = p.weights().to_vec();
    let mut seq = TransactionSequence::new(width, p.k());
    let mut set: Vec<usize> = Vec::with_capacity(w.len());
    for d in 0..width {
        set.clear();
        set.extend((0..w.len()).filter(|&i| w[i].bit(d)));
        assert!(set.len().is_multiple_of(2), "odd number of set bits at level {d}");
        set.sort_unstable_by_key(|&i| (w[i].reverse_bits(), i));
        let half = set.len() / 2;
        let size = pow2(d);
        for t in 0..half {
            let (lo, hi) = (set[t], set[half + t]);
            w[lo] -= size;
            w[hi] += size;
            seq.push(Transaction::new(lo + 1, d, hi + 1));
        }
    }
    let last = w.iter().position(|x| *x == pow2(width)).expect("one part holds the whole space");
    seq.push(Transaction::new(last + 1, width, 0));
    seq
}

/// `λ(P)`, the minimum number of prefix rules.
pub fn lambda(p: &Partition) -> usize {
    bit_matcher(p).len()
}

/// Bit-matcher transactions strictly below level `m`.
pub fn lambda_m(p: &Partition, m: u32) -> usize {
    bit_matcher(p).count_below(m)
}

pub(crate) trait Bit {
    fn bit(&self, d: u32) -> bool;
}

impl Bit for U256 {
    #[inline]
    fn bit(&self, d: u32) -> bool {
        (*self >> d) & U256::ONE == U256::ONE
    }
}
