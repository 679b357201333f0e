//! Power-of-two transactions between targets and their effect on the
//! extended weight vector `x_0 = -2^W, x_i = p_i`.

use std::fmt;

use ethnum::{I256, U256};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{pow2, Partition, Weight};

/// `<src -2^level-> dst>`: moves `2^level` addresses from `src` to `dst`.
/// Index 0 is the unallocated pseudo-target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transaction {
    pub src: usize,
    pub level: u32,
    pub dst: usize,
}

impl Transaction {
    pub fn new(src: usize, level: u32, dst: usize) -> Self {
        debug_assert_ne!(src, dst, "transaction endpoints must differ");
        Transaction { src, level, dst }
    }

    pub fn size(&self) -> Weight {
        pow2(self.level)
    }

    pub fn touches_unallocated(&self) -> bool {
        self.src == 0 || self.dst == 0
    }
}

impl fmt::Display for Transaction {
    /// The line format `"src size dst"`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.src, self.size(), self.dst)
    }
}

/// An ordered list of transactions over a fixed `(W, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransactionSequence {
    transactions: Vec<Transaction>,
    width: u32,
    k: usize,
}

impl TransactionSequence {
    pub fn new(width: u32, k: usize) -> Self {
        TransactionSequence { transactions: Vec::new(), width, k }
    }

    pub fn from_transactions(width: u32, k: usize, transactions: Vec<Transaction>) -> Self {
        TransactionSequence { transactions, width, k }
    }

    pub fn push(&mut self, t: Transaction) {
        self.transactions.push(t);
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Transaction> {
        self.transactions.iter()
    }

    /// Number of transactions strictly below `level`.
    pub fn count_below(&self, level: u32) -> usize {
        self.transactions.iter().filter(|t| t.level < level).count()
    }

    /// Concatenation, used to check that application composes.
    pub fn concat(&self, other: &TransactionSequence) -> TransactionSequence {
        let mut transactions = self.transactions.clone();
        transactions.extend_from_slice(&other.transactions);
        TransactionSequence { transactions, width: self.width, k: self.k }
    }

    /// One transaction per line, `"src size dst"`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.transactions {
            out.push_str(&t.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the line format. Blank lines and `#` comments are skipped.
    pub fn parse_text(text: &str, width: u32, k: usize) -> Result<Self> {
        let mut seq = TransactionSequence::new(width, k);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Parse(format!("line {}: expected \"src size dst\", got {raw:?}", lineno + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [src, size, dst] = fields.as_slice() else {
                return Err(bad());
            };
            let src: usize = src.parse().map_err(|_| bad())?;
            let dst: usize = dst.parse().map_err(|_| bad())?;
            let size = U256::from_str_radix(size, 10).map_err(|_| bad())?;
            if !size.is_power_of_two() {
                return Err(Error::Parse(format!("line {}: size {size} is not a power of two", lineno + 1)));
            }
            if src == dst {
                return Err(Error::Parse(format!("line {}: src equals dst", lineno + 1)));
            }
            seq.push(Transaction::new(src, size.trailing_zeros(), dst));
        }
        Ok(seq)
    }

    /// JSON array of `{src, level, dst}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.transactions).expect("transactions serialize")
    }

    pub fn parse_json(text: &str, width: u32, k: usize) -> Result<Self> {
        let transactions: Vec<Transaction> =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(t) = transactions.iter().find(|t| t.src == t.dst) {
            return Err(Error::Parse(format!("transaction {t} has src equal to dst")));
        }
        Ok(TransactionSequence { transactions, width, k })
    }
}

impl<'a> IntoIterator for &'a TransactionSequence {
    type Item = &'a Transaction;
    type IntoIter = std::slice::Iter<'a, Transaction>;

    fn into_iter(self) -> Self::IntoIter {
        self.transactions.iter()
    }
}

/// The vector `(x_0, x_1, .., x_k)` with `x_0` starting at `-2^W`.
/// Transactions conserve `sum x_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtendedState {
    values: Vec<I256>,
}

impl ExtendedState {
    pub fn from_partition(p: &Partition) -> Self {
        let mut values = Vec::with_capacity(p.k() + 1);
        values.push(-p.total().as_i256());
        values.extend(p.weights().iter().map(|w| w.as_i256()));
        ExtendedState { values }
    }

    pub fn values(&self) -> &[I256] {
        &self.values
    }

    /// `x_index`, with index 0 the unallocated slot.
    pub fn get(&self, index: usize) -> Option<I256> {
        self.values.get(index).copied()
    }

    pub fn sum(&self) -> I256 {
        self.values.iter().fold(I256::ZERO, |acc, v| acc + *v)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0)
    }

    /// Whether every real target (`x_1..x_k`) is non-negative.
    pub fn targets_nonnegative(&self) -> bool {
        self.values[1..].iter().all(|v| *v >= 0)
    }

    pub fn apply(&mut self, t: &Transaction) -> Result<()> {
        let parts = self.values.len() - 1;
        for index in [t.src, t.dst] {
            if index > parts {
                return Err(Error::IndexOutOfRange { index, parts });
            }
        }
        let size = t.size().as_i256();
        self.values[t.src] -= size;
        self.values[t.dst] += size;
        Ok(())
    }
}

/// Applies `s` to the extended vector of `p`.
pub fn apply_sequence(p: &Partition, s: &TransactionSequence) -> Result<ExtendedState> {
    let mut state = ExtendedState::from_partition(p);
    for t in s {
        if t.level > p.width() + 1 {
            return Err(Error::LevelOutOfRange { level: t.level, width: p.width() });
        }
        state.apply(t)?;
    }
    Ok(state)
}

/// Outcome of [`validate_sequence`]. Failures are reported, not raised.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Every index lies in `0..=k`.
    pub in_range: bool,
    /// The final extended state is all-zero.
    pub zeroes: bool,
    /// `x_1..x_k` never went negative.
    pub nonnegative: bool,
    /// Transaction sizes never decrease.
    pub monotone: bool,
    /// Target 0 appears only in the final transaction.
    pub zero_only_terminal: bool,
    pub require_nonnegative: bool,
    pub length: usize,
}

impl ValidationReport {
    /// The sequence zeroes the partition, honouring the non-negativity
    /// requirement if one was requested.
    pub fn passes(&self) -> bool {
        self.in_range && self.zeroes && (self.nonnegative || !self.require_nonnegative)
    }

    /// Every precondition for converting the sequence to a prefix table.
    pub fn lpm_ready(&self) -> bool {
        self.in_range && self.zeroes && self.nonnegative && self.monotone && self.zero_only_terminal
    }
}

pub fn validate_sequence(p: &Partition, s: &TransactionSequence, require_nonnegative: bool) -> ValidationReport {
    let mut state = ExtendedState::from_partition(p);
    let mut report = ValidationReport {
        in_range: true,
        zeroes: false,
        nonnegative: true,
        monotone: true,
        zero_only_terminal: true,
        require_nonnegative,
        length: s.len(),
    };
    let last = s.len().saturating_sub(1);
    let mut prev_level = 0u32;
    for (i, t) in s.iter().enumerate() {
        if i > 0 && t.level < prev_level {
            report.monotone = false;
        }
        prev_level = t.level;
        if t.touches_unallocated() && i != last {
            report.zero_only_terminal = false;
        }
        if state.apply(t).is_err() || t.level > p.width() + 1 {
            report.in_range = false;
            return report;
        }
        if !state.targets_nonnegative() {
            report.nonnegative = false;
        }
    }
    report.zeroes = state.is_zero();
    report
}
