use num::BigRational;

/// Half the probability that a uniform value has a non-zero signed digit at
/// level `l`: `p_0 = 1/4`, `p_(l+1) = 1/6 + (1/6 - p_l) / 2`.
pub fn p_levels(count: usize) -> Vec<BigRational> {
    let sixth = BigRational::new(1.into(), 6.into());
    let half = BigRational::new(1.into(), 2.into());
    let mut out = Vec::with_capacity(count);
    let mut p = BigRational::new(1.into(), 4.into());
    for _ in 0..count {
        let next = &sixth + (&sixth - &p) * &half;
        out.push(std::mem::replace(&mut p, next));
    }
    out
}
