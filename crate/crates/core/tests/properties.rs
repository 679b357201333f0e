use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tcamsplit::tcam::{evaluate_table, intersect_patterns, synthesize_lpm, table_to_sequence, TernaryPattern};
use tcamsplit::{
    anchor_sequence, apply_sequence, bit_matcher, gen_general_hard, general_lower_bound, lambda, lpm_bounds, phi_count, random_matcher,
    rw, sample_partition, signed_matcher, to_naf, validate_sequence, Partition, SignedDigits, Transaction,
    TransactionSequence, I256, U256,
};

fn partition(k: usize, width: u32, seed: u64) -> Partition {
    let k = k.min(1usize << width.min(20));
    sample_partition(k, width, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn arb_partition() -> impl Strategy<Value = Partition> {
    (1usize..=12, 1u32..=48, any::<u64>()).prop_map(|(k, w, s)| partition(k, w, s))
}

fn arb_sequence(k: usize, width: u32) -> impl Strategy<Value = TransactionSequence> {
    prop::collection::vec((0..=k, 0..=width, 0..=k), 0..12).prop_map(move |ts| {
        TransactionSequence::from_transactions(
            width,
            k,
            ts.into_iter().filter(|(s, _, d)| s != d).map(|(s, l, d)| Transaction::new(s, l, d)).collect(),
        )
    })
}

fn bit(x: U256, l: u32) -> bool {
    (x >> l) & 1 == 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn naf_reconstructs_and_is_canonical(hi in 0u128..2, lo in any::<u128>()) {
        let n = U256::from_words(hi & 1, lo);
        let d = to_naf(n);
        prop_assert!(d.is_canonical());
        prop_assert_eq!(d.value(), n.as_i256());
        prop_assert_eq!(d.weight(), phi_count(n));
        prop_assert!(d.digits().windows(2).all(|w| w[0] == 0 || w[1] == 0));
        let round: SignedDigits = d.to_string().parse().unwrap();
        prop_assert_eq!(round, d);
    }

    #[test]
    fn naf_weight_changes_by_at_most_one(n in 0u128..(1 << 100), l in 0u32..100) {
        let n = U256::from(n);
        let p = U256::ONE << l;
        let base = phi_count(n) as i64;
        prop_assert!((phi_count(n + p) as i64 - base).abs() <= 1);
        if n >= p {
            prop_assert!((phi_count(n - p) as i64 - base).abs() <= 1);
        }
    }

    #[test]
    fn application_conserves_sum(
        (p, s) in arb_partition().prop_flat_map(|p| {
            let (k, w) = (p.k(), p.width());
            (Just(p), arb_sequence(k, w))
        })
    ) {
        let st = apply_sequence(&p, &s).unwrap();
        prop_assert_eq!(st.sum(), I256::ZERO);
    }

    #[test]
    fn application_respects_concatenation(
        (p, a, b) in arb_partition().prop_flat_map(|p| {
            let (k, w) = (p.k(), p.width());
            (Just(p), arb_sequence(k, w), arb_sequence(k, w))
        })
    ) {
        let whole = apply_sequence(&p, &a.concat(&b)).unwrap();
        let mut stepwise = apply_sequence(&p, &a).unwrap();
        for t in b.iter() {
            stepwise.apply(t).unwrap();
        }
        prop_assert_eq!(whole, stepwise);
    }

    #[test]
    fn matchers_produce_valid_sequences(p in arb_partition(), seed in any::<u64>()) {
        let bm = bit_matcher(&p);
        let r = validate_sequence(&p, &bm, true);
        prop_assert!(r.passes() && r.lpm_ready(), "{r:?}");
        let rm = random_matcher(&p, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(validate_sequence(&p, &rm, true).passes());
        let sm = signed_matcher(&p);
        prop_assert!(validate_sequence(&p, &sm, false).passes());
        prop_assert!(apply_sequence(&p, &sm).unwrap().is_zero());
    }

    #[test]
    fn bit_matcher_pairs_evenly(p in arb_partition()) {
        let s = bit_matcher(&p);
        let mut x: Vec<U256> = p.weights().to_vec();
        for l in 0..p.width() {
            let set = x.iter().filter(|v| bit(**v, l)).count();
            prop_assert_eq!(set % 2, 0);
            let at_level: Vec<_> = s.iter().filter(|t| t.level == l).collect();
            prop_assert_eq!(at_level.len(), set / 2);
            for t in at_level {
                x[t.src - 1] -= t.size();
                x[t.dst - 1] += t.size();
            }
        }
    }

    #[test]
    fn bit_matcher_zeroes_three_of_four_bits(p in arb_partition()) {
        let w = p.width();
        let mut x: Vec<U256> = std::iter::once(U256::ZERO).chain(p.weights().iter().copied()).collect();
        for t in bit_matcher(&p).iter() {
            if t.dst == 0 {
                continue;
            }
            x[t.src] -= t.size();
            x[t.dst] += t.size();
            let l = t.level;
            prop_assert!(!bit(x[t.src], l) && !bit(x[t.dst], l));
            if l + 1 < w {
                let zeros = [x[t.src], x[t.dst]].iter().filter(|v| !bit(**v, l + 1)).count() + 2;
                prop_assert!(zeros >= 3);
                if p.k() == 2 {
                    prop_assert_eq!(zeros, 4);
                }
            }
        }
    }

    #[test]
    fn lambda_is_permutation_invariant(p in arb_partition(), seed in any::<u64>()) {
        let mut w = p.weights().to_vec();
        w.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let q = Partition::new(w, p.width()).unwrap();
        prop_assert_eq!(lambda(&p), lambda(&q));
    }

    #[test]
    fn signed_bounds_are_consistent(p in arb_partition()) {
        let (lo, hi) = lpm_bounds(&p);
        prop_assert!(lo <= lambda(&p) as u32);
        prop_assert!(hi < 2 * lo + 2);
        prop_assert!(general_lower_bound(&p) <= hi);
        prop_assert!(general_lower_bound(&p) <= lambda(&p) as u32);
    }

    #[test]
    fn synthesis_round_trips(
        k in 1usize..=10, w in 1u32..=20, seed in any::<u64>()
    ) {
        let p = partition(k, w, seed);
        let table = synthesize_lpm(&p);
        prop_assert!(table.is_prefix_table());
        prop_assert_eq!(table.len(), lambda(&p));
        let counts = evaluate_table(&table).unwrap();
        prop_assert_eq!(counts[0], U256::ZERO);
        prop_assert_eq!(&counts[1..], p.weights());
        let s = table_to_sequence(&table).unwrap();
        let levels = |s: &TransactionSequence| {
            let mut m = BTreeMap::new();
            for t in s.iter() {
                *m.entry(t.level).or_insert(0usize) += 1;
            }
            m
        };
        prop_assert_eq!(levels(&s), levels(&bit_matcher(&p)));
        prop_assert!(apply_sequence(&p, &s).unwrap().is_zero());
    }

    #[test]
    fn hard_instances_have_flat_digit_weight(k in 2usize..=40, extra in 2u32..=60) {
        let lg = k.next_power_of_two().trailing_zeros();
        let p = gen_general_hard(k, lg + extra).unwrap();
        let first = phi_count(p.weights()[0]);
        prop_assert!(p.weights().iter().all(|x| phi_count(*x) == first));
        prop_assert_eq!(first, (lg + extra - lg) / 2 + 1);
    }

    #[test]
    fn rw_is_monotone(p in 0.0f64..0.5, n in 0usize..60) {
        let a = rw(p, n).unwrap();
        prop_assert!(rw(p, n + 1).unwrap() >= a - 1e-12);
        prop_assert!(rw((p + 0.01).min(0.5), n).unwrap() >= a - 1e-12);
    }
}

/// `E|L - R|` as a direct sum over trinomial outcomes.
fn rw_trinomial(p: f64, n: usize) -> f64 {
    let ln_fact: Vec<f64> = (0..=n).scan(0.0, |acc, i| {
        if i > 0 {
            *acc += (i as f64).ln();
        }
        Some(*acc)
    }).collect();
    let mut total = 0.0;
    for a in 0..=n {
        for b in 0..=n - a {
            let c = n - a - b;
            let ln = ln_fact[n] - ln_fact[a] - ln_fact[b] - ln_fact[c];
            let prob = ln.exp() * p.powi((a + b) as i32) * (1.0 - 2.0 * p).powi(c as i32);
            total += prob * (a as f64 - b as f64).abs();
        }
    }
    total
}

#[test]
fn rw_matches_trinomial_sum() {
    for &p in &[0.0, 0.05, 1.0 / 6.0, 0.25, 0.4, 0.5] {
        for n in [0usize, 1, 2, 7, 20, 45] {
            let want = rw_trinomial(p, n);
            let got = rw(p, n).unwrap();
            assert!((got - want).abs() < 1e-9, "p={p} n={n}: {got} vs {want}");
        }
    }
}

#[test]
fn pattern_intersections_have_power_of_two_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..100_000 {
        let width = rng.gen_range(1..=16u32);
        let mask = (1u128 << width) - 1;
        let n = rng.gen_range(1..=5usize);
        let patterns: Vec<TernaryPattern> = (0..n)
            .map(|_| {
                // Sparse care masks.
                let care = rng.gen::<u128>() & rng.gen::<u128>() & mask;
                TernaryPattern::new(width, care, rng.gen::<u128>() & care).unwrap()
            })
            .collect();
        let counted = (0..=mask).filter(|a| patterns.iter().all(|q| q.matches(*a))).count() as u128;
        match intersect_patterns(&patterns).unwrap() {
            Some(q) => {
                assert!(counted.is_power_of_two());
                assert_eq!(U256::from(counted), q.count());
            }
            None => assert_eq!(counted, 0),
        }
    }
}

#[test]
fn signed_bounds_sandwich_bit_matcher() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10_000 {
        let width = rng.gen_range(1..=64u32);
        let k = rng.gen_range(1..=20usize).min(1 << width.min(20));
        let p = sample_partition(k, width, &mut rng).unwrap();
        let (lo, hi) = lpm_bounds(&p);
        let bm = lambda(&p) as u32;
        assert!(lo <= bm && bm <= hi, "{p:?}");
        assert_eq!(anchor_sequence(&p).len() as u32, hi);
    }
}

#[test]
fn naf_signs_are_balanced_below_the_top() {
    let d = 12u32;
    let mut plus = vec![0u32; d as usize + 1];
    let mut minus = vec![0u32; d as usize + 1];
    for n in 0..(1u32 << d) {
        for (l, s) in to_naf(U256::from(n)).nonzero() {
            if s > 0 {
                plus[l as usize] += 1;
            } else {
                minus[l as usize] += 1;
            }
        }
    }
    for l in 0..=d as usize - 2 {
        assert_eq!(plus[l], minus[l], "level {l}");
    }
    assert_eq!(minus[d as usize - 1], 0);
}
