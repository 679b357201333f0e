use crate::partition::Partition;
use crate::signed_digits::{to_naf_signed, SignedDigits};
use crate::transaction::{ExtendedState, Transaction, TransactionSequence};

/// Routes every signed digit through the part with the most non-zero digits
/// (target 0 included). Length is exactly `|phi(P)| + 1 - M(P)`, at most
/// twice optimal. Intermediate weights may go negative.
pub fn anchor_sequence(p: &Partition) -> TransactionSequence {
    let state = ExtendedState::from_partition(p);
    let digits: Vec<SignedDigits> = state.values().iter().map(|x| to_naf_signed(*x)).collect();
    let anchor = anchor_index(&digits);
    let mut moves: Vec<(u32, usize, i8)> = digits
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != anchor)
        .flat_map(|(i, d)| d.nonzero().map(move |(level, sign)| (level, i, sign)))
        .collect();
    moves.sort_unstable();
    let mut seq = TransactionSequence::new(p.width(), p.k());
    for (level, i, sign) in moves {
        seq.push(if sign > 0 { Transaction::new(i, level, anchor) } else { Transaction::new(anchor, level, i) });
    }
    seq
}

/// Smallest index maximising the digit count.
fn anchor_index(digits: &[SignedDigits]) -> usize {
    let mut best = 0;
    for (i, d) in digits.iter().enumerate() {
        if d.weight() > digits[best].weight() {
            best = i;
        }
    }
    best
}
