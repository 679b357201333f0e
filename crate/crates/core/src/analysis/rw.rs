use num::{BigRational, One, Zero};

use crate::error::{Error, Result};

fn check(p: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::BadProbability(p.to_string()));
    }
    Ok(())
}

/// Expected `|l - r|` after `n` steps of a lazy walk that moves left and
/// right with probability `p` each. Dynamic program over the displacement
/// distribution.
pub fn rw(p: f64, n: usize) -> Result<f64> {
    check(p)?;
    let stay = 1.0 - 2.0 * p;
    let mut dist = vec![0.0f64; 2 * n + 1];
    let mut next = dist.clone();
    dist[n] = 1.0;
    for step in 0..n {
        let lo = n - step;
        let hi = n + step;
        next[lo - 1..=hi + 1].iter_mut().for_each(|x| *x = 0.0);
        for i in lo..=hi {
            let q = dist[i];
            next[i - 1] += p * q;
            next[i] += stay * q;
            next[i + 1] += p * q;
        }
        std::mem::swap(&mut dist, &mut next);
    }
    Ok(dist.iter().enumerate().map(|(i, q)| q * (i as f64 - n as f64).abs()).sum())
}

/// Exact rational [`rw`].
pub fn rw_exact(p: &BigRational, n: usize) -> Result<BigRational> {
    let half = BigRational::new(1.into(), 2.into());
    if p < &BigRational::zero() || p > &half {
        return Err(Error::BadProbability(p.to_string()));
    }
    let stay = BigRational::one() - p * BigRational::from_integer(2.into());
    let mut dist = vec![BigRational::zero(); 2 * n + 1];
    dist[n] = BigRational::one();
    for _ in 0..n {
        let mut next = vec![BigRational::zero(); 2 * n + 1];
        for (i, q) in dist.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            next[i - 1] += p * q;
            next[i] += &stay * q;
            next[i + 1] += p * q;
        }
        dist = next;
    }
    Ok(dist
        .iter()
        .enumerate()
        .map(|(i, q)| q * BigRational::from_integer((i as i64 - n as i64).abs().into()))
        .sum())
}

/// `c(k) = (1 + rw(1/6, k-1)) / 2k`.
pub fn c_of_k(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::KTooSmall(0));
    }
    Ok((1.0 + rw(1.0 / 6.0, k - 1)?) / (2.0 * k as f64))
}

/// `c'(k) = rw(1/6, k) / 2k`.
pub fn c_prime_of_k(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::KTooSmall(0));
    }
    Ok(rw(1.0 / 6.0, k)? / (2.0 * k as f64))
}
