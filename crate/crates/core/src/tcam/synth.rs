use std::collections::BTreeSet;

use super::pattern::TernaryPattern;
use super::table::{Rule, RuleTable};
use crate::error::{Error, Result};
use crate::matcher::bit_matcher;
use crate::partition::Partition;
use crate::transaction::{validate_sequence, TransactionSequence};

/// Minimal prefix table for `p`, built from the bit matcher sequence.
pub fn synthesize_lpm(p: &Partition) -> RuleTable {
    sequence_to_table(p, &bit_matcher(p)).expect("bit matcher output is always convertible")
}

/// Turns a zeroing, non-negative, size-monotone sequence whose only use of
/// target 0 is the final sweep into a prefix table with one rule per
/// transaction.
///
/// Walks the sequence backwards, tracking the aligned blocks each target
/// holds. Each transaction `<x, 2^l, y>` carves the lowest-addressed block of
/// size `2^l` out of `y`'s holdings and hands it to `x` as a new top rule.
pub fn sequence_to_table(p: &Partition, s: &TransactionSequence) -> Result<RuleTable> {
    let report = validate_sequence(p, s, true);
    if !report.lpm_ready() {
        return Err(Error::InvalidSequence(format!("not convertible to a prefix table: {report:?}")));
    }
    let width = p.width();
    let (last, rest) = s.transactions().split_last().expect("validated sequence is non-empty");
    let mut blocks: Vec<BTreeSet<(u128, u32)>> = vec![BTreeSet::new(); p.k() + 1];
    blocks[last.src].insert((0, width));
    let mut rules = vec![Rule::new(TernaryPattern::wildcard(width), last.src)];
    for t in rest.iter().rev() {
        let held = &mut blocks[t.dst];
        let &(start, level) = held.iter().find(|(_, l)| *l >= t.level).ok_or_else(|| {
            Error::InternalInvariantViolated(format!("target {} holds no block of size 2^{}", t.dst, t.level))
        })?;
        held.remove(&(start, level));
        for sub in t.level..level {
            held.insert((start + (1u128 << sub), sub));
        }
        blocks[t.src].insert((start, t.level));
        rules.push(Rule::new(TernaryPattern::block(width, start, t.level), t.src));
    }
    rules.reverse();
    RuleTable::new(width, rules)
}
