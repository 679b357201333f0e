use std::fmt;
use std::str::FromStr;

use ethnum::U256;

use crate::error::{Error, Result};
use crate::partition::{pow2, MAX_WIDTH};

/// A width-`W` pattern over `{0, 1, *}`. Bit `W-1` is the leftmost
/// character. `care` marks the fixed positions, `value` their bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TernaryPattern {
    width: u32,
    care: u128,
    value: u128,
}

fn mask(width: u32) -> u128 {
    if width >= 128 {
        u128::MAX
    } else {
        (1u128 << width) - 1
    }
}

impl TernaryPattern {
    pub fn new(width: u32, care: u128, value: u128) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(Error::WidthOverflow(width));
        }
        let m = mask(width);
        if care & !m != 0 || value & !care != 0 {
            return Err(Error::Parse("pattern bits outside care mask".into()));
        }
        Ok(TernaryPattern { width, care, value })
    }

    pub fn wildcard(width: u32) -> Self {
        TernaryPattern { width, care: 0, value: 0 }
    }

    /// The aligned block `[start, start + 2^level)` as a prefix of length
    /// `W - level`.
    pub fn block(width: u32, start: u128, level: u32) -> Self {
        let care = mask(width) & !mask(level);
        TernaryPattern { width, care, value: start & care }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn care(&self) -> u128 {
        self.care
    }

    pub fn value(&self) -> u128 {
        self.value
    }

    pub fn wildcards(&self) -> u32 {
        self.width - self.care.count_ones()
    }

    /// Number of addresses matched, `2^(#*)`.
    pub fn count(&self) -> U256 {
        pow2(self.wildcards())
    }

    pub fn matches(&self, addr: u128) -> bool {
        addr & self.care == self.value
    }

    /// Whether all wildcards form a suffix.
    pub fn is_prefix(&self) -> bool {
        let wild = mask(self.width) & !self.care;
        wild & wild.wrapping_add(1) == 0
    }

    /// Length of the fixed prefix, when the pattern is a prefix.
    pub fn prefix_len(&self) -> Option<u32> {
        self.is_prefix().then(|| self.care.count_ones())
    }

    /// Positionwise merge; `None` when some position holds both 0 and 1.
    pub fn intersect(&self, other: &TernaryPattern) -> Result<Option<TernaryPattern>> {
        if self.width != other.width {
            return Err(Error::WidthMismatch { expected: self.width, found: other.width });
        }
        let both = self.care & other.care;
        if (self.value ^ other.value) & both != 0 {
            return Ok(None);
        }
        Ok(Some(TernaryPattern { width: self.width, care: self.care | other.care, value: self.value | other.value }))
    }

    /// Whether every address matched by `other` is matched by `self`.
    pub fn contains(&self, other: &TernaryPattern) -> bool {
        self.care & other.care == self.care && other.value & self.care == self.value
    }

    pub(crate) fn symbol(&self, pos: u32) -> char {
        let bit = 1u128 << (self.width - 1 - pos);
        if self.care & bit == 0 {
            '*'
        } else if self.value & bit != 0 {
            '1'
        } else {
            '0'
        }
    }
}

impl fmt::Display for TernaryPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.width).map(|p| self.symbol(p)).collect();
        f.write_str(&s)
    }
}

impl FromStr for TernaryPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let width = s.chars().count() as u32;
        if width > MAX_WIDTH {
            return Err(Error::WidthOverflow(width));
        }
        let (mut care, mut value) = (0u128, 0u128);
        for c in s.chars() {
            care <<= 1;
            value <<= 1;
            match c {
                '0' => care |= 1,
                '1' => {
                    care |= 1;
                    value |= 1;
                }
                '*' => {}
                other => return Err(Error::Parse(format!("bad pattern symbol {other:?} in {s:?}"))),
            }
        }
        Ok(TernaryPattern { width, care, value })
    }
}

/// A pattern whose wildcards form a suffix: `len` leading bits, then `*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrefixPattern {
    width: u32,
    bits: u128,
    len: u32,
}

impl PrefixPattern {
    /// `bits` holds the prefix right-aligned (its last bit is bit 0).
    pub fn new(width: u32, bits: u128, len: u32) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(Error::WidthOverflow(width));
        }
        if len > width || bits & !mask(len) != 0 {
            return Err(Error::Parse(format!("prefix of length {len} does not fit width {width}")));
        }
        Ok(PrefixPattern { width, bits, len })
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn width(&self) -> u32 {
        self.width
    }
}

impl From<PrefixPattern> for TernaryPattern {
    fn from(p: PrefixPattern) -> Self {
        let level = p.width - p.len;
        let start = if p.len == 0 { 0 } else { p.bits << level };
        TernaryPattern::block(p.width, start, level)
    }
}

impl TryFrom<TernaryPattern> for PrefixPattern {
    type Error = Error;

    fn try_from(t: TernaryPattern) -> Result<Self> {
        let len = t.prefix_len().ok_or_else(|| Error::Parse(format!("{t} is not a prefix pattern")))?;
        let bits = if len == 0 { 0 } else { t.value >> (t.width - len) };
        Ok(PrefixPattern { width: t.width, bits, len })
    }
}

impl fmt::Display for PrefixPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        TernaryPattern::from(*self).fmt(f)
    }
}

/// Intersection of several patterns; `None` if empty.
pub fn intersect_patterns(patterns: &[TernaryPattern]) -> Result<Option<TernaryPattern>> {
    let Some((first, rest)) = patterns.split_first() else {
        return Ok(None);
    };
    let mut acc = *first;
    for p in rest {
        match acc.intersect(p)? {
            Some(next) => acc = next,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}
