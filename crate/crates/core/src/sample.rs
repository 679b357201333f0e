//! Uniform sampling of ordered partitions of `2^W` into `k` positive parts.

use std::collections::BTreeSet;

use ethnum::U256;
use rand::Rng;

use crate::error::{Error, Result};
use crate::partition::{pow2, Partition, MAX_WIDTH};

/// Draws `k - 1` distinct cut points uniformly from `1..2^W`, sorts them and
/// returns the gaps.
pub fn sample_partition<R: Rng + ?Sized>(k: usize, width: u32, rng: &mut R) -> Result<Partition> {
    if width > MAX_WIDTH {
        return Err(Error::WidthOverflow(width));
    }
    if k == 0 {
        return Err(Error::EmptyPartition);
    }
    let total = pow2(width);
    if U256::from(k as u64) > total {
        return Err(Error::KTooLarge { k, width });
    }
    let cuts = cut_points(k - 1, width, rng);
    let mut weights = Vec::with_capacity(k);
    let mut prev = U256::ZERO;
    for c in cuts.into_iter().chain(std::iter::once(total)) {
        weights.push(c - prev);
        prev = c;
    }
    Partition::new(weights, width)
}

fn cut_points<R: Rng + ?Sized>(count: usize, width: u32, rng: &mut R) -> Vec<U256> {
    if count == 0 {
        return Vec::new();
    }
    if width < usize::BITS {
        let slots = (1usize << width) - 1;
        let mut cuts: Vec<U256> = rand::seq::index::sample(rng, slots, count)
            .into_iter()
            .map(|i| U256::from(i as u64 + 1))
            .collect();
        cuts.sort_unstable();
        return cuts;
    }
    // Wide spaces: collisions are vanishingly rare, so redraw on repeat.
    let mut set = BTreeSet::new();
    while set.len() < count {
        let raw: u128 = rng.gen();
        let v = if width >= 128 { raw } else { raw & ((1u128 << width) - 1) };
        if v != 0 {
            set.insert(U256::from(v));
        }
    }
    set.into_iter().collect()
}
