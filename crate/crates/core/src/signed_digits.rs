//! Canonical signed-digit (non-adjacent form) representation and the
//! size bounds derived from it.

use std::fmt;
use std::str::FromStr;

use ethnum::{I256, U256};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Digits over `{-1, 0, +1}`, index = level. No two adjacent digits are
/// non-zero and the top digit is non-zero (empty for zero).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SignedDigits {
    digits: Vec<i8>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Start,
    LookAhead,
    Borrow,
}

/// Canonical form of `n`, read least significant bit first through a
/// three-state automaton with two trailing zeros to flush it.
pub fn to_naf(n: U256) -> SignedDigits {
    let bits = 256 - n.leading_zeros();
    let mut digits = Vec::with_capacity(bits as usize + 2);
    let mut state = State::Start;
    for i in 0..bits + 2 {
        let bit = i < bits && (n >> i) & U256::ONE == U256::ONE;
        state = match (state, bit) {
            (State::Start, false) => {
                digits.push(0);
                State::Start
            }
            (State::Start, true) => State::LookAhead,
            (State::LookAhead, false) => {
                digits.extend_from_slice(&[1, 0]);
                State::Start
            }
            (State::LookAhead, true) => {
                digits.extend_from_slice(&[-1, 0]);
                State::Borrow
            }
            (State::Borrow, true) => {
                digits.push(0);
                State::Borrow
            }
            (State::Borrow, false) => State::LookAhead,
        };
    }
    debug_assert!(state == State::Start);
    while digits.last() == Some(&0) {
        digits.pop();
    }
    SignedDigits { digits }
}

/// Canonical form of a signed value; `phi(-n) = -phi(n)`.
pub fn to_naf_signed(n: I256) -> SignedDigits {
    let mut d = to_naf(n.unsigned_abs());
    if n < 0 {
        for x in &mut d.digits {
            *x = -*x;
        }
    }
    d
}

impl SignedDigits {
    pub fn from_digits(digits: Vec<i8>) -> Result<Self> {
        if digits.iter().any(|d| !(-1..=1).contains(d)) {
            return Err(Error::Parse("digits must lie in {-1, 0, 1}".into()));
        }
        let mut digits = digits;
        while digits.last() == Some(&0) {
            digits.pop();
        }
        let d = SignedDigits { digits };
        if !d.is_canonical() {
            return Err(Error::Parse("adjacent non-zero digits".into()));
        }
        Ok(d)
    }

    /// Digits from level 0 upward.
    pub fn digits(&self) -> &[i8] {
        &self.digits
    }

    /// Digit at `level`, zero past the top.
    pub fn digit(&self, level: u32) -> i8 {
        self.digits.get(level as usize).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `|phi(n)|`, the number of non-zero digits.
    pub fn weight(&self) -> u32 {
        self.digits.iter().filter(|d| **d != 0).count() as u32
    }

    pub fn value(&self) -> I256 {
        self.digits
            .iter()
            .enumerate()
            .fold(I256::ZERO, |acc, (i, d)| acc + I256::from(*d) * (I256::ONE << i as u32))
    }

    pub fn is_canonical(&self) -> bool {
        self.digits.windows(2).all(|w| w[0] == 0 || w[1] == 0) && self.digits.last() != Some(&0)
    }

    /// Non-zero digits as `(level, sign)`, ascending level.
    pub fn nonzero(&self) -> impl Iterator<Item = (u32, i8)> + '_ {
        self.digits.iter().enumerate().filter(|(_, d)| **d != 0).map(|(i, d)| (i as u32, *d))
    }
}

impl fmt::Display for SignedDigits {
    /// Most significant digit first, `-` for a negative digit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("0");
        }
        for d in self.digits.iter().rev() {
            f.write_str(match d {
                1 => "1",
                -1 => "-",
                _ => "0",
            })?;
        }
        Ok(())
    }
}

impl FromStr for SignedDigits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .trim()
            .chars()
            .rev()
            .map(|c| match c {
                '1' => Ok(1),
                '0' => Ok(0),
                '-' => Ok(-1),
                other => Err(Error::Parse(format!("bad signed digit {other:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        SignedDigits::from_digits(digits)
    }
}

/// `|phi(n)|`.
pub fn phi_count(n: U256) -> u32 {
    let (plus, minus) = naf_decompose(n);
    plus.count_ones() + minus.count_ones()
}

/// `(n_plus, n_minus)` with `n = n_plus - n_minus`, the positive and
/// negative digit masks of the canonical form.
pub fn naf_decompose(n: U256) -> (U256, U256) {
    let t = n.wrapping_mul(U256::new(3));
    ((t & !n) >> 1, (n & !t) >> 1)
}

/// `|phi(P)|`, summed over parts.
pub fn phi_total(p: &Partition) -> u32 {
    p.weights().iter().map(|w| phi_count(*w)).sum()
}

/// `M(P)`, the largest `|phi(p_i)|`.
pub fn phi_max(p: &Partition) -> u32 {
    p.weights().iter().map(|w| phi_count(*w)).max().unwrap_or(0)
}

/// `(ceil((|phi(P)|+1)/2), |phi(P)|+1-M(P))`.
pub fn lpm_bounds(p: &Partition) -> (u32, u32) {
    let total = phi_total(p);
    ((total + 2) / 2, total + 1 - phi_max(p))
}

fn ceil_lg(n: u32) -> u32 {
    n.next_power_of_two().trailing_zeros()
}

/// Lower bound on general ternary table size:
/// `max_i ceil(lg(|phi(p_i)|+1)) + i - 1` over parts sorted by `|phi|` descending.
pub fn general_lower_bound(p: &Partition) -> u32 {
    let mut phis: Vec<u32> = p.weights().iter().map(|w| phi_count(*w)).collect();
    phis.sort_unstable_by(|a, b| b.cmp(a));
    phis.iter()
        .enumerate()
        .map(|(i, phi)| ceil_lg(phi + 1) + i as u32)
        .max()
        .unwrap_or(0)
}

/// Worst-case cap on λ for `k` parts of `2^W`.
pub fn worstcase_cap(k: usize, width: u32) -> Result<u64> {
    match k {
        0 | 1 => Err(Error::KTooSmall(k)),
        2 => Ok(u64::from(width / 2) + 2),
        _ => {
            let lg = u64::from(usize::BITS - 1 - k.leading_zeros());
            let k = k as u64;
            let inner = (u64::from(width) + 4).saturating_sub(lg);
            Ok(k * inner / 3)
        }
    }
}

/// Every bound for one partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub lpm_lower: u32,
    pub lpm_upper: u32,
    pub general_lower: u32,
    pub trivial_lower: u32,
    pub worstcase_cap: u64,
    pub phi_total: u32,
    pub phi_max: u32,
}

impl BoundsReport {
    pub fn new(p: &Partition) -> Self {
        let (lpm_lower, lpm_upper) = lpm_bounds(p);
        BoundsReport {
            lpm_lower,
            lpm_upper,
            general_lower: general_lower_bound(p),
            trivial_lower: p.k() as u32,
            worstcase_cap: worstcase_cap(p.k(), p.width()).unwrap_or(1),
            phi_total: phi_total(p),
            phi_max: phi_max(p),
        }
    }
}
