use ethnum::U256;
use rand::seq::SliceRandom;
use rand::Rng;

use super::bit::Bit;
use crate::partition::{pow2, Partition};
use crate::transaction::{Transaction, TransactionSequence};

/// Pairs the set bits of each level uniformly at random. Within a pair the
/// part whose next bit is 0 donates; on a tie a coin decides.
pub fn random_matcher<R: Rng + ?Sized>(p: &Partition, rng: &mut R) -> TransactionSequence {
    let width = p.width();
    let mut w: Vec<U256> = p.weights().to_vec();
    let mut seq = TransactionSequence::new(width, p.k());
    let mut set: Vec<usize> = Vec::with_capacity(w.len());
    for d in 0..width {
        set.clear();
        set.extend((0..w.len()).filter(|&i| w[i].bit(d)));
        assert!(set.len().is_multiple_of(2), "odd number of set bits at level {d}");
        set.shuffle(rng);
        let size = pow2(d);
        for pair in set.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            let (src, dst) = match (w[a].bit(d + 1), w[b].bit(d + 1)) {
                (false, true) => (a, b),
                (true, false) => (b, a),
                _ if rng.gen::<bool>() => (a, b),
                _ => (b, a),
            };
            w[src] -= size;
            w[dst] += size;
            seq.push(Transaction::new(src + 1, d, dst + 1));
        }
    }
    let last = w.iter().position(|x| *x == pow2(width)).expect("one part holds the whole space");
    seq.push(Transaction::new(last + 1, width, 0));
    seq
}
