use std::fmt;

use ethnum::U256;
use serde::Serialize;

use super::eval::evaluate_table;
use super::table::{Rule, RuleTable};
use crate::error::{Error, Result};
use crate::partition::{pow2, JsonWeight};
use crate::transaction::{Transaction, TransactionSequence};

/// Moves `count` addresses from `src` to `dst`; `count` need not be a power
/// of two for general tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Remap {
    pub src: usize,
    pub dst: usize,
    pub count: U256,
}

impl fmt::Display for Remap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.src, self.count, self.dst)
    }
}

impl Serialize for Remap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Remap", 3)?;
        st.serialize_field("src", &self.src)?;
        st.serialize_field("count", &JsonWeight(self.count))?;
        st.serialize_field("dst", &self.dst)?;
        st.end()
    }
}

/// Deletes rules top-down; each deletion reassigns the deleted rule's
/// addresses to the next matching rule below (or to 0), one remap per
/// receiving target.
pub fn table_to_remaps(t: &RuleTable) -> Result<Vec<Remap>> {
    let unmatched = evaluate_table(t)?[0];
    if unmatched != 0 {
        return Err(Error::IncompleteCover(unmatched.to_string()));
    }
    let rules = t.rules();
    let mut out = Vec::new();
    for (i, rule) in rules.iter().enumerate() {
        let below: Vec<Rule> = rules[i + 1..]
            .iter()
            .filter_map(|r| {
                let q = rule.pattern.intersect(&r.pattern).expect("equal widths")?;
                Some(Rule::new(q, r.target))
            })
            .collect();
        let sub = RuleTable::new(t.width(), below)?;
        let mut counts = evaluate_table(&sub)?;
        // The sub-table only covers the deleted rule's own addresses.
        counts[0] -= pow2(t.width()) - rule.pattern.count();
        for (dst, count) in counts.into_iter().enumerate() {
            if dst != rule.target && count != 0 {
                out.push(Remap { src: rule.target, dst, count });
            }
        }
    }
    Ok(out)
}

/// [`table_to_remaps`] as a transaction sequence; fails if some remap is
/// not a power of two.
pub fn table_to_sequence(t: &RuleTable) -> Result<TransactionSequence> {
    let remaps = table_to_remaps(t)?;
    let mut seq = TransactionSequence::new(t.width(), t.k());
    for r in remaps {
        if !r.count.is_power_of_two() {
            return Err(Error::InvalidSequence(format!("remap {r} is not a power of two")));
        }
        seq.push(Transaction::new(r.src, r.count.trailing_zeros(), r.dst));
    }
    Ok(seq)
}
