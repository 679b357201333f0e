use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::signed_digits::phi_count;

const MAX_WIDTH: u32 = 8;
const MAX_PARTS: usize = 5;

/// Exact minimum number of power-of-two transactions that zero `p`, by
/// exhaustive search over sorted weight multisets.
///
/// Iterative deepening on the admissible bound `ceil(|phi(X)| / 2)`. Without `allow_negative` every `x_1..x_k` stays
/// non-negative; with it, values range over `[-2^(W+1), 2^(W+1)]`.
pub fn brute_force_lambda(p: &Partition, allow_negative: bool) -> Result<usize> {
    if p.width() > MAX_WIDTH || p.k() > MAX_PARTS {
        return Err(Error::InstanceTooLarge(format!(
            "k = {}, W = {} (limit k <= {MAX_PARTS}, W <= {MAX_WIDTH})",
            p.k(),
            p.width()
        )));
    }
    let start: Vec<i64> = p.weights().iter().map(|w| w.as_i64()).collect();
    let total = 1i64 << p.width();
    Ok(Deepening::new(p.width(), total, allow_negative).run(canonical(start)))
}

fn canonical(mut v: Vec<i64>) -> Vec<i64> {
    v.sort_unstable();
    v
}

/// Every state reachable in one move. Index `k` stands for target 0, whose
/// value is `-sum`.
fn successors(state: &[i64], max_level: u32, mut admit: impl FnMut(&[i64]) -> bool) -> Vec<Vec<i64>> {
    let k = state.len();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for src in 0..=k {
        for dst in 0..=k {
            if src == dst {
                continue;
            }
            for level in 0..=max_level {
                let size = 1i64 << level;
                let mut next = state.to_vec();
                if src < k {
                    next[src] -= size;
                }
                if dst < k {
                    next[dst] += size;
                }
                let next = canonical(next);
                if admit(&next) && seen.insert(next.clone()) {
                    out.push(next);
                }
            }
        }
    }
    out
}

struct Deepening {
    width: u32,
    total: i64,
    allow_negative: bool,
    best: HashMap<Vec<i64>, usize>,
}

impl Deepening {
    fn new(width: u32, total: i64, allow_negative: bool) -> Self {
        Deepening { width, total, allow_negative, best: HashMap::new() }
    }

    fn admits(&self, s: &[i64]) -> bool {
        let sum: i64 = s.iter().sum();
        if self.allow_negative {
            let bound = 2 * self.total;
            s.iter().all(|x| x.abs() <= bound) && sum.abs() <= bound
        } else {
            s.iter().all(|x| *x >= 0) && sum <= self.total
        }
    }

    fn heuristic(state: &[i64]) -> usize {
        let sum: i64 = state.iter().sum();
        let phi: u32 = state.iter().chain(std::iter::once(&-sum)).map(|x| phi_count(x.unsigned_abs().into())).sum();
        (phi as usize).div_ceil(2)
    }

    fn run(&mut self, start: Vec<i64>) -> usize {
        let mut limit = Self::heuristic(&start);
        loop {
            self.best.clear();
            if self.search(&start, 0, limit) {
                return limit;
            }
            limit += 1;
        }
    }

    fn search(&mut self, state: &[i64], g: usize, limit: usize) -> bool {
        let h = Self::heuristic(state);
        if h == 0 {
            return true;
        }
        if g + h > limit {
            return false;
        }
        match self.best.get(state) {
            Some(&seen) if seen <= g => return false,
            _ => {
                self.best.insert(state.to_vec(), g);
            }
        }
        let max_level = if self.allow_negative { self.width + 1 } else { self.width };
        for next in successors(state, max_level, |s| self.admits(s)) {
            if self.search(&next, g + 1, limit) {
                return true;
            }
        }
        false
    }
}
