use crate::partition::Partition;
use crate::signed_digits::to_naf_signed;
use crate::transaction::{ExtendedState, Transaction, TransactionSequence};

/// Pairs `+1` digits with `-1` digits of the current weights, level by level.
/// Unpaired digits trade with target 0. From level `W` on, target 0 joins the
/// pairing, which reduces to the usual final sweep `<i, 2^W, 0>`.
pub fn signed_matcher(p: &Partition) -> TransactionSequence {
    let width = p.width();
    let mut state = ExtendedState::from_partition(p);
    let mut seq = TransactionSequence::new(width, p.k());
    let mut d = 0u32;
    while !state.is_zero() {
        assert!(d < 256, "signed matcher failed to converge");
        let first = if d < width { 1 } else { 0 };
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (i, x) in state.values().iter().enumerate().skip(first) {
            match to_naf_signed(*x).digit(d) {
                1 => plus.push(i),
                -1 => minus.push(i),
                _ => {}
            }
        }
        let mut batch = Vec::new();
        for (&i, &j) in plus.iter().zip(&minus) {
            batch.push(Transaction::new(i, d, j));
        }
        let paired = plus.len().min(minus.len());
        batch.extend(plus[paired..].iter().filter(|&&i| i != 0).map(|&i| Transaction::new(i, d, 0)));
        batch.extend(minus[paired..].iter().filter(|&&j| j != 0).map(|&j| Transaction::new(0, d, j)));
        for t in batch {
            state.apply(&t).expect("indices in range");
            seq.push(t);
        }
        d += 1;
    }
    seq
}
