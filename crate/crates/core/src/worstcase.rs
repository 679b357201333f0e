//! Extremal partitions that (nearly) attain the worst-case bounds.

use std::fmt;
use std::str::FromStr;

use ethnum::U256;

use crate::error::{Error, Result};
use crate::partition::{pow2, Partition, Weight, MAX_WIDTH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WorstCaseKind {
    K2Thirds,
    K3Thirds,
    Triplets,
    GeneralHard,
}

impl WorstCaseKind {
    pub const ALL: [WorstCaseKind; 4] =
        [WorstCaseKind::K2Thirds, WorstCaseKind::K3Thirds, WorstCaseKind::Triplets, WorstCaseKind::GeneralHard];

    pub fn name(self) -> &'static str {
        match self {
            WorstCaseKind::K2Thirds => "k2",
            WorstCaseKind::K3Thirds => "k3",
            WorstCaseKind::Triplets => "triplets",
            WorstCaseKind::GeneralHard => "general",
        }
    }

    /// Builds the instance; `k` is ignored by the fixed-size families.
    pub fn generate(self, k: usize, width: u32) -> Result<Partition> {
        match self {
            WorstCaseKind::K2Thirds => gen_k2(width),
            WorstCaseKind::K3Thirds => gen_k3(width),
            WorstCaseKind::Triplets => gen_triplets(k, width),
            WorstCaseKind::GeneralHard => gen_general_hard(k, width),
        }
    }
}

impl fmt::Display for WorstCaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WorstCaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WorstCaseKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown worst-case kind {s:?}")))
    }
}

fn check_width(width: u32, min: u32) -> Result<()> {
    if width > MAX_WIDTH {
        return Err(Error::WidthOverflow(width));
    }
    if width < min {
        return Err(Error::WidthTooSmall { width, min });
    }
    Ok(())
}

fn ceil_lg(n: usize) -> u32 {
    n.next_power_of_two().trailing_zeros()
}

/// `[x, 2^W - x]` with `x = round(2^W / 3)`; `λ = ceil(W/2) + 1`.
pub fn gen_k2(width: u32) -> Result<Partition> {
    check_width(width, 1)?;
    let total = pow2(width);
    let x = (total * 2 + 3) / 6;
    Partition::new([x, total - x], width)
}

fn thirds(total: Weight) -> [Weight; 3] {
    let x = total / 3;
    if x % 2 == 0 {
        [x, x + 1, x + 1]
    } else {
        [x, x, x + 1]
    }
}

/// Three near-equal thirds of `2^W`; `λ = W + 1`.
pub fn gen_k3(width: u32) -> Result<Partition> {
    check_width(width, 2)?;
    Partition::new(thirds(pow2(width)), width)
}

/// `floor((k-1)/3)` thirds-triplets each summing `2^(W-1-ceil(lg m))`,
/// followed by one to three parts covering the rest.
pub fn gen_triplets(k: usize, width: u32) -> Result<Partition> {
    if k < 4 {
        return Err(Error::KTooSmall(k));
    }
    let m = (k - 1) / 3;
    let min = 3 + ceil_lg(m);
    check_width(width, min)?;
    let sub = width - 1 - ceil_lg(m);
    let triplet = thirds(pow2(sub));
    let mut weights: Vec<Weight> = Vec::with_capacity(k);
    for _ in 0..m {
        weights.extend_from_slice(&triplet);
    }
    let rest = pow2(width) - pow2(sub) * U256::from(m as u64);
    match k - 3 * m {
        1 => weights.push(rest),
        2 => weights.extend_from_slice(&[U256::ONE, rest - 1]),
        _ => weights.extend_from_slice(&[U256::ONE, rest / 2 - 1, rest / 2]),
    }
    Partition::new(weights, width)
}

/// Parts of `2^h` and `2^(h+1)` (larger ones last), `h = W - ceil(lg k)`,
/// perturbed by `±Δ = ±Σ_j 2^(h-2j)` so that every part has exactly
/// `floor(h/2) + 1` non-zero signed digits.
pub fn gen_general_hard(k: usize, width: u32) -> Result<Partition> {
    if k < 2 {
        return Err(Error::KTooSmall(k));
    }
    let lg = ceil_lg(k);
    check_width(width, lg + 2)?;
    let h = width - lg;
    let doubled = (1usize << lg) - k;
    let mut weights: Vec<Weight> =
        (0..k).map(|i| if i >= k - doubled { pow2(h + 1) } else { pow2(h) }).collect();
    let delta = (1..=h / 2).fold(U256::ZERO, |acc, j| acc + pow2(h - 2 * j));
    let alternating = if k.is_multiple_of(2) { k } else { k - 2 };
    for (i, w) in weights.iter_mut().enumerate().take(alternating) {
        if i % 2 == 0 {
            *w -= delta;
        } else {
            *w += delta;
        }
    }
    if k % 2 == 1 {
        weights[k - 2] -= delta;
        weights[k - 1] += delta * 2;
    }
    Partition::new(weights, width)
}
