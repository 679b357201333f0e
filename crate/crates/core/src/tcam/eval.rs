use ethnum::{I256, U256};

use super::pattern::TernaryPattern;
use super::table::RuleTable;
use crate::error::{Error, Result};
use crate::partition::{pow2, Partition};

const MAX_INCLUSION_EXCLUSION_RULES: usize = 20;
const MAX_ENUMERATION_WIDTH: u32 = 24;

/// Addresses whose first matching rule targets each of `0..=k`, with index 0
/// counting unmatched addresses.
pub fn evaluate_table(t: &RuleTable) -> Result<Vec<U256>> {
    let decided = decided_counts(t)?;
    let mut counts = vec![U256::ZERO; t.k() + 1];
    let mut matched = U256::ZERO;
    for (rule, n) in t.rules().iter().zip(decided) {
        counts[rule.target] += n;
        matched += n;
    }
    counts[0] = pow2(t.width()) - matched;
    Ok(counts)
}

/// The partition a fully covering table induces. Fails if some address is
/// unmatched or some target below the largest gets nothing.
pub fn induced_partition(t: &RuleTable) -> Result<Partition> {
    let counts = evaluate_table(t)?;
    if counts[0] != 0 {
        return Err(Error::IncompleteCover(counts[0].to_string()));
    }
    Partition::new(counts[1..].iter().copied(), t.width())
}

/// Number of addresses each rule decides (matches before any earlier rule).
pub fn decided_counts(t: &RuleTable) -> Result<Vec<U256>> {
    if t.is_prefix_table() {
        Ok(prefix_counts(t))
    } else if t.len() <= MAX_INCLUSION_EXCLUSION_RULES {
        Ok(inclusion_exclusion_counts(t))
    } else if t.width() <= MAX_ENUMERATION_WIDTH {
        Ok(enumerated_counts(t))
    } else {
        Err(Error::TooLargeToEvaluate { rules: t.len(), width: t.width() })
    }
}

#[derive(Clone, Default)]
struct Node {
    child: [Option<usize>; 2],
    covered: U256,
    full: bool,
}

/// Binary trie over prefixes; each node knows how much of its subtree
/// earlier rules already cover.
fn prefix_counts(t: &RuleTable) -> Vec<U256> {
    let width = t.width();
    let mut nodes = vec![Node::default()];
    let mut out = Vec::with_capacity(t.len());
    let mut path = Vec::with_capacity(width as usize + 1);
    for rule in t.rules() {
        let len = rule.pattern.prefix_len().expect("prefix table");
        path.clear();
        let mut cur = 0;
        let mut shadowed = nodes[0].full;
        path.push(cur);
        for depth in 0..len {
            if shadowed {
                break;
            }
            let bit = ((rule.pattern.value() >> (width - 1 - depth)) & 1) as usize;
            cur = match nodes[cur].child[bit] {
                Some(c) => c,
                None => {
                    nodes.push(Node::default());
                    let c = nodes.len() - 1;
                    nodes[cur].child[bit] = Some(c);
                    c
                }
            };
            shadowed = nodes[cur].full;
            path.push(cur);
        }
        if shadowed {
            out.push(U256::ZERO);
            continue;
        }
        let size = pow2(width - len);
        let fresh = size - nodes[cur].covered;
        for &n in &path {
            nodes[n].covered += fresh;
        }
        nodes[cur].full = true;
        out.push(fresh);
    }
    out
}

fn inclusion_exclusion_counts(t: &RuleTable) -> Vec<U256> {
    let rules = t.rules();
    (0..rules.len())
        .map(|r| {
            let p = rules[r].pattern;
            let mut pieces: Vec<TernaryPattern> = Vec::new();
            for earlier in &rules[..r] {
                if earlier.pattern.contains(&p) {
                    return U256::ZERO;
                }
                if let Some(q) = p.intersect(&earlier.pattern).expect("equal widths") {
                    pieces.push(q);
                }
            }
            p.count() - union_size(&pieces)
        })
        .collect()
}

/// `|Q_1 ∪ .. ∪ Q_n|` by inclusion-exclusion, pruning empty intersections.
pub(crate) fn union_size(pieces: &[TernaryPattern]) -> U256 {
    fn walk(acc: &TernaryPattern, rest: &[TernaryPattern], sign: bool, total: &mut I256) {
        for (i, q) in rest.iter().enumerate() {
            if let Some(next) = acc.intersect(q).expect("equal widths") {
                let c = next.count().as_i256();
                if sign {
                    *total += c;
                } else {
                    *total -= c;
                }
                walk(&next, &rest[i + 1..], !sign, total);
            }
        }
    }
    let Some(first) = pieces.first() else {
        return U256::ZERO;
    };
    let mut total = I256::ZERO;
    walk(&TernaryPattern::wildcard(first.width()), pieces, true, &mut total);
    total.as_u256()
}

fn enumerated_counts(t: &RuleTable) -> Vec<U256> {
    let mut out = vec![0u64; t.len()];
    for addr in 0..(1u128 << t.width()) {
        if let Some(i) = t.rules().iter().position(|r| r.pattern.matches(addr)) {
            out[i] += 1;
        }
    }
    out.into_iter().map(U256::from).collect()
}
