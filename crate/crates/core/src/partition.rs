//! Partitions of a `2^W` address space into `k` positive parts.

use std::fmt;
use std::str::FromStr;

use ethnum::U256;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weight of a single part; wide enough for `2^128`.
pub type Weight = U256;

/// Widest supported address space.
pub const MAX_WIDTH: u32 = 128;

/// `2^level` as a [`Weight`].
#[inline]
pub fn pow2(level: u32) -> Weight {
    U256::ONE << level
}

/// An ordered list of positive weights summing to exactly `2^W`.
///
/// Target `i` (1-based, as in rule tables and transactions) owns
/// `weights()[i - 1]` addresses; target 0 is reserved for "unallocated".
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "PartitionRepr")]
pub struct Partition {
    weights: Vec<Weight>,
    width: u32,
}

impl Partition {
    pub fn new<I, T>(weights: I, width: u32) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<Weight>,
    {
        let weights: Vec<Weight> = weights.into_iter().map(Into::into).collect();
        if width > MAX_WIDTH {
            return Err(Error::WidthOverflow(width));
        }
        if weights.is_empty() {
            return Err(Error::EmptyPartition);
        }
        if let Some(index) = weights.iter().position(|w| *w == 0) {
            return Err(Error::ZeroWeight { index: index + 1 });
        }
        let mut sum = U256::ZERO;
        for w in &weights {
            // Anything past 2^129 is already a bad sum.
            sum = sum.saturating_add(*w);
        }
        if sum != pow2(width) {
            return Err(Error::BadSum { sum: sum.to_string(), width });
        }
        Ok(Partition { weights, width })
    }

    /// Builds a partition whose width is `lg(sum)`.
    pub fn with_inferred_width<I, T>(weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<Weight>,
    {
        let weights: Vec<Weight> = weights.into_iter().map(Into::into).collect();
        let mut sum = U256::ZERO;
        for w in &weights {
            sum = sum.saturating_add(*w);
        }
        if sum == 0 || !sum.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(sum.to_string()));
        }
        Partition::new(weights, sum.trailing_zeros())
    }

    /// Parses the comma-separated text form (`"5,1,2"`), inferring the width
    /// unless one is given.
    pub fn parse(text: &str, width: Option<u32>) -> Result<Self> {
        let weights = parse_weight_list(text)?;
        match width {
            Some(w) => Partition::new(weights, w),
            None => Partition::with_inferred_width(weights),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("partition serializes")
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// Number of parts `k`.
    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// `2^W`.
    pub fn total(&self) -> Weight {
        pow2(self.width)
    }

    /// Weight of 1-based target `target`.
    pub fn weight(&self, target: usize) -> Option<Weight> {
        target.checked_sub(1).and_then(|i| self.weights.get(i).copied())
    }

    pub fn into_weights(self) -> Vec<Weight> {
        self.weights
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Partition::parse(s, None)
    }
}

/// Parses `"5, 1, 2"` into weights. Negative entries map to
/// [`Error::ZeroWeight`].
pub fn parse_weight_list(text: &str) -> Result<Vec<Weight>> {
    let mut out = Vec::new();
    for (i, tok) in text.split(',').map(str::trim).enumerate() {
        if tok.is_empty() {
            return Err(Error::Parse(format!("empty weight at position {}", i + 1)));
        }
        if tok.starts_with('-') {
            return Err(Error::ZeroWeight { index: i + 1 });
        }
        let w = parse_weight(tok)?;
        out.push(w);
    }
    Ok(out)
}

pub(crate) fn parse_weight(tok: &str) -> Result<Weight> {
    U256::from_str_radix(tok, 10).map_err(|e| Error::Parse(format!("bad weight {tok:?}: {e}")))
}

/// JSON form `{"width": W, "weights": [...]}`. Weights above `u64::MAX`
/// travel as decimal strings.
#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    width: u32,
    weights: Vec<JsonWeight>,
}

impl TryFrom<PartitionRepr> for Partition {
    type Error = Error;

    fn try_from(r: PartitionRepr) -> Result<Self> {
        Partition::new(r.weights.into_iter().map(|w| w.0), r.width)
    }
}

impl From<Partition> for PartitionRepr {
    fn from(p: Partition) -> Self {
        PartitionRepr {
            width: p.width,
            weights: p.weights.into_iter().map(JsonWeight).collect(),
        }
    }
}

/// Serde adapter for a 256-bit weight: number when it fits in `u64`,
/// decimal string otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JsonWeight(pub Weight);

impl Serialize for JsonWeight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 <= u64::MAX as u128 {
            s.serialize_u64(self.0.as_u64())
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for JsonWeight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = JsonWeight;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a non-negative integer or a decimal string")
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<JsonWeight, E> {
                Ok(JsonWeight(U256::from(v)))
            }

            fn visit_u128<E: serde::de::Error>(self, v: u128) -> std::result::Result<JsonWeight, E> {
                Ok(JsonWeight(U256::from(v)))
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<JsonWeight, E> {
                u64::try_from(v)
                    .map(|v| JsonWeight(U256::from(v)))
                    .map_err(|_| E::custom("negative weight"))
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<JsonWeight, E> {
                U256::from_str_radix(v.trim(), 10)
                    .map(JsonWeight)
                    .map_err(|e| E::custom(format!("bad weight {v:?}: {e}")))
            }
        }
        d.deserialize_any(V)
    }
}
