//! Transaction-sequence generators and the exhaustive minimality oracle.

mod anchor;
mod bit;
mod oracle;
mod random;
mod signed;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::Error;
use crate::partition::Partition;
use crate::transaction::TransactionSequence;

pub use anchor::anchor_sequence;
pub use bit::{bit_matcher, lambda, lambda_m};
pub use oracle::brute_force_lambda;
pub use random::random_matcher;
pub use signed::signed_matcher;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatcherKind {
    BitMatcher,
    RandomMatcher,
    SignedMatcher,
    Anchor,
}

impl MatcherKind {
    pub const ALL: [MatcherKind; 4] =
        [MatcherKind::BitMatcher, MatcherKind::RandomMatcher, MatcherKind::SignedMatcher, MatcherKind::Anchor];

    pub fn run<R: Rng + ?Sized>(self, p: &Partition, rng: &mut R) -> TransactionSequence {
        match self {
            MatcherKind::BitMatcher => bit_matcher(p),
            MatcherKind::RandomMatcher => random_matcher(p, rng),
            MatcherKind::SignedMatcher => signed_matcher(p),
            MatcherKind::Anchor => anchor_sequence(p),
        }
    }

    pub fn is_randomized(self) -> bool {
        self == MatcherKind::RandomMatcher
    }

    pub fn name(self) -> &'static str {
        match self {
            MatcherKind::BitMatcher => "bit",
            MatcherKind::RandomMatcher => "random",
            MatcherKind::SignedMatcher => "signed",
            MatcherKind::Anchor => "anchor",
        }
    }
}

impl fmt::Display for MatcherKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatcherKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        MatcherKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown matcher {s:?}")))
    }
}
