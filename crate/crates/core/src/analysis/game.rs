use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// How the player picks between adding and subtracting `2^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Strategy {
    /// Add iff the next bit up is 1.
    Opt,
    /// Fair coin.
    Rnd,
    /// Fair coin between `Opt` and `Rnd`, independent of `v`.
    Mix,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Opt, Strategy::Rnd, Strategy::Mix];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Opt => "opt",
            Strategy::Rnd => "rnd",
            Strategy::Mix => "mix",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown strategy {s:?}")))
    }
}

/// One play of the zeroing-bits game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameTrace {
    pub strategy: Strategy,
    pub m: u32,
    /// Number of turns `T`.
    pub turns: usize,
    /// Initially zero low bits, `D_0 = d_1`.
    pub initial_zeros: u64,
    /// `D_t = d_(t+1) - d_t` for `t = 1..T`.
    pub gains: Vec<u64>,
}

impl GameTrace {
    pub fn total_gain(&self) -> u64 {
        self.gains.iter().sum()
    }
}

/// An infinite uniformly random bit string, materialised 64 bits at a time.
struct LazyBits<'a, R: Rng + ?Sized> {
    words: Vec<u64>,
    rng: &'a mut R,
}

impl<'a, R: Rng + ?Sized> LazyBits<'a, R> {
    fn word(&mut self, i: usize) -> &mut u64 {
        while self.words.len() <= i {
            self.words.push(self.rng.gen());
        }
        &mut self.words[i]
    }

    fn get(&mut self, bit: u64) -> bool {
        (*self.word((bit / 64) as usize) >> (bit % 64)) & 1 == 1
    }

    fn clear(&mut self, bit: u64) {
        *self.word((bit / 64) as usize) &= !(1u64 << (bit % 64));
    }

    fn set(&mut self, bit: u64) {
        *self.word((bit / 64) as usize) |= 1u64 << (bit % 64);
    }

    /// Lowest set bit at or above `from`.
    fn lowest_from(&mut self, from: u64) -> u64 {
        let mut i = (from / 64) as usize;
        let mut w = *self.word(i) & (u64::MAX << (from % 64));
        while w == 0 {
            i += 1;
            w = *self.word(i);
        }
        i as u64 * 64 + u64::from(w.trailing_zeros())
    }

    /// `v += 2^d` where bit `d` is set.
    fn add(&mut self, d: u64) {
        let mut b = d;
        while self.get(b) {
            self.clear(b);
            b += 1;
        }
        self.set(b);
    }
}

/// Plays until the low `m` bits of a uniform random `v` are all zero.
pub fn play_game<R: Rng + ?Sized>(strategy: Strategy, m: u32, rng: &mut R) -> GameTrace {
    let mut v = LazyBits { words: Vec::new(), rng };
    let m64 = u64::from(m);
    let mut d = v.lowest_from(0);
    let initial_zeros = d;
    let mut gains = Vec::new();
    while d < m64 {
        let opt_adds = v.get(d + 1);
        let add = match strategy {
            Strategy::Opt => opt_adds,
            Strategy::Rnd => v.rng.gen(),
            Strategy::Mix => {
                if v.rng.gen() {
                    opt_adds
                } else {
                    v.rng.gen()
                }
            }
        };
        if add {
            v.add(d);
        } else {
            v.clear(d);
        }
        let next = v.lowest_from(d + 1);
        gains.push(next - d);
        d = next;
    }
    GameTrace { strategy, m, turns: gains.len(), initial_zeros, gains }
}
