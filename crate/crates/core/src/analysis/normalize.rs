use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use ethnum::U256;
use num::{BigInt, BigRational, Signed, Zero};

use crate::error::{Error, Result};
use crate::partition::{Partition, MAX_WIDTH};

/// Rounds real counts to a partition of `2^W` closest in L1 distance, where
/// `W` is the smallest multiple of `width_multiple` with
/// `2^W >= max(k, ceil(sum))`. Zero counts are dropped; every kept part gets
/// at least one address.
pub fn normalize_counts(counts: &[f64], width_multiple: u32) -> Result<Partition> {
    if width_multiple == 0 {
        return Err(Error::InvalidArgument("width multiple must be positive".into()));
    }
    let mut kept = Vec::new();
    for &c in counts {
        if !c.is_finite() || c < 0.0 {
            return Err(Error::InvalidArgument(format!("count {c} is not a non-negative number")));
        }
        if c > 0.0 {
            kept.push(BigRational::from_float(c).expect("finite"));
        }
    }
    if kept.is_empty() {
        return Err(Error::AllZero);
    }
    let k = kept.len();
    let sum: BigRational = kept.iter().sum();
    let need = sum.ceil().to_integer().max(BigInt::from(k));
    let mut width = width_multiple;
    while BigInt::from(1) << width < need {
        width += width_multiple;
    }
    if width > MAX_WIDTH {
        return Err(Error::WidthOverflow(width));
    }
    let total = BigInt::from(1) << width;
    let scaled: Vec<BigRational> = kept.iter().map(|c| c * BigRational::from_integer(total.clone()) / &sum).collect();
    let mut parts: Vec<BigInt> = scaled.iter().map(|s| s.floor().to_integer().max(BigInt::from(1))).collect();
    let assigned: BigInt = parts.iter().sum();
    let mut diff = total - assigned;
    let step = if diff.is_positive() { 1 } else { -1 };

    // Unit moves in order of marginal L1 cost.
    let marginal = |part: &BigInt, target: &BigRational| -> Option<BigRational> {
        let now = BigRational::from_integer(part.clone());
        let next = BigRational::from_integer(part + step);
        if next < BigRational::from_integer(1.into()) {
            return None;
        }
        Some((&next - target).abs() - (&now - target).abs())
    };
    let mut heap = BinaryHeap::new();
    for (i, (p, s)) in parts.iter().zip(&scaled).enumerate() {
        if let Some(c) = marginal(p, s) {
            heap.push(Reverse(Candidate { cost: c, index: i }));
        }
    }
    while !diff.is_zero() {
        let Reverse(Candidate { index, .. }) = heap.pop().expect("some part can absorb the remainder");
        parts[index] += step;
        diff -= step;
        if let Some(c) = marginal(&parts[index], &scaled[index]) {
            heap.push(Reverse(Candidate { cost: c, index }));
        }
    }
    let weights = parts.iter().map(to_weight).collect::<Vec<_>>();
    Partition::new(weights, width)
}

fn to_weight(n: &BigInt) -> U256 {
    let (_, bytes) = n.to_bytes_le();
    let mut buf = [0u8; 32];
    buf[..bytes.len()].copy_from_slice(&bytes);
    U256::from_le_bytes(buf)
}

#[derive(PartialEq, Eq)]
struct Candidate {
    cost: BigRational,
    index: usize,
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cost.cmp(&other.cost).then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// L1 distance between a partition and real counts scaled to its total.
pub fn l1_distance(p: &Partition, counts: &[f64]) -> f64 {
    let kept: Vec<f64> = counts.iter().copied().filter(|c| *c > 0.0).collect();
    let sum: f64 = kept.iter().sum();
    let total = p.total().as_f64();
    p.weights()
        .iter()
        .zip(&kept)
        .map(|(w, c)| (w.as_f64() - c * total / sum).abs())
        .sum()
}
