//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::time::Instant;

use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tcamsplit::analysis::{c_of_k, p_levels, play_game, run_experiment, ExperimentStats, Strategy};
use tcamsplit::tcam::{evaluate_table, synthesize_lpm, table_to_sequence, RuleTable};
use tcamsplit::{
    anchor_sequence, apply_sequence, brute_force_lambda, gen_k2, gen_k3, gen_triplets, lambda,
    lpm_bounds, naf_decompose, phi_count, sample_partition, to_naf, worstcase_cap, Partition, U256,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail: summary }
    } else {
        let shown: Vec<&String> = failures.iter().take(5).collect();
        Outcome { pass: false, detail: format!("{} failures, first: {shown:?}", failures.len()) }
    }
}

fn part(w: &[u64], width: u32) -> Partition {
    Partition::new(w.iter().map(|x| U256::from(*x)), width).unwrap()
}

fn ceil_lg(n: usize) -> u32 {
    n.next_power_of_two().trailing_zeros()
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn compositions(total: u64, k: usize) -> Vec<Vec<u64>> {
    if k == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(k as u64 - 1) {
        for mut rest in compositions(total - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let cases: Vec<(Partition, usize)> = vec![
        (part(&[5, 1, 2], 3), 3),
        (part(&[4, 3, 3, 3, 3], 4), 7),
        (part(&[683, 341], 10), 6),
        (part(&[5, 5, 5, 1], 4), 6),
        (part(&[1, 3, 12], 4), 3),
        (part(&[15, 4, 45], 6), 4),
        (gen_triplets(12, 7).unwrap(), 18),
    ];
    let failures = cases
        .iter()
        .filter(|(p, want)| lambda(p) != *want)
        .map(|(p, want)| format!("lambda({p}) = {} != {want}", lambda(p)))
        .collect();
    outcome(failures, "7 exact values".into())
}

fn criterion_2() -> Outcome {
    let mut failures = Vec::new();
    for w in 1..=64u32 {
        let got = lambda(&gen_k2(w).unwrap());
        if got != (w as usize).div_ceil(2) + 1 {
            failures.push(format!("k2 W={w}: {got}"));
        }
    }
    for w in 2..=64u32 {
        let got = lambda(&gen_k3(w).unwrap());
        if got != w as usize + 1 {
            failures.push(format!("k3 W={w}: {got}"));
        }
    }
    for k in 4..=30usize {
        for w in [8u32, 12, 16] {
            let got = lambda(&gen_triplets(k, w).unwrap());
            let bound = ((k - 1) / 3) as i64 * (i64::from(w) - i64::from(ceil_lg(k)) + 1);
            if got as i64 <= bound {
                failures.push(format!("triplets k={k} W={w}: {got} <= {bound}"));
            }
        }
    }
    outcome(failures, "k2 W=1..64, k3 W=2..64, triplets 27x3".into())
}

fn criterion_3() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for width in 0..=5u32 {
        for k in 1..=4usize {
            if k as u64 > 1 << width {
                continue;
            }
            for w in compositions(1 << width, k) {
                let p = part(&w, width);
                let bm = lambda(&p);
                for neg in [false, true] {
                    let oracle = brute_force_lambda(&p, neg).unwrap();
                    if oracle != bm {
                        failures.push(format!("{w:?} allow_negative={neg}: oracle {oracle} vs BM {bm}"));
                    }
                }
                checked += 1;
            }
        }
    }
    outcome(failures, format!("{checked} partitions, both sign regimes agree with BM"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    let combos: Vec<(usize, u32)> =
        [3usize, 4, 8, 16].iter().flat_map(|&k| [10u32, 20, 32].map(move |w| (k, w))).collect();
    let mut below_k = 0;
    let n = 10_000;
    for i in 0..n {
        let (k, w) = combos[i % combos.len()];
        let p = sample_partition(k, w, &mut rng).unwrap();
        let (lo, hi) = lpm_bounds(&p);
        let lam = lambda(&p);
        let cap = worstcase_cap(k, w).unwrap() as usize;
        let anchor = anchor_sequence(&p);
        if (lo as usize) < k {
            below_k += 1;
        }
        let ok = k <= lam
            && lo as usize <= lam
            && lam <= hi as usize
            && hi as usize <= cap + k
            && anchor.len() == hi as usize
            && apply_sequence(&p, &anchor).unwrap().is_zero();
        if !ok {
            failures.push(format!("{p} (W={w}): k={k} lo={lo} lambda={lam} hi={hi} cap={cap} anchor={}", anchor.len()));
        }
    }
    outcome(failures, format!("{n} partitions; lpm lower bound below k in {below_k}"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    let n = 10_000;
    for _ in 0..n {
        let k = rng.gen_range(1..=16usize);
        let w = rng.gen_range(ceil_lg(k)..=32);
        let p = sample_partition(k, w, &mut rng).unwrap();
        let t = synthesize_lpm(&p);
        let counts = evaluate_table(&t).unwrap();
        let lengths = t.prefix_lengths().unwrap();
        let ok = counts[0] == 0
            && &counts[1..] == p.weights()
            && t.len() == lambda(&p)
            && lengths.windows(2).all(|x| x[0] >= x[1]);
        let seq_ok = table_to_sequence(&t).map(|s| apply_sequence(&p, &s).unwrap().is_zero()).unwrap_or(false);
        if !ok || !seq_ok {
            failures.push(format!("{p} (W={w})"));
        }
    }
    type Case<'a> = (u32, &'a [(&'a str, usize)], &'a [u64]);
    let tables: [Case; 4] = [
        (3, &[("011", 1), ("01*", 2), ("0**", 3), ("***", 1)], &[5, 1, 2]),
        (4, &[("**00", 1), ("00**", 2), ("01**", 3), ("10**", 4), ("11**", 5)], &[4, 3, 3, 3, 3]),
        (
            10,
            &[("0000000000", 2), ("*000***000", 1), ("**000*****", 2), ("00********", 2), ("**********", 1)],
            &[683, 341],
        ),
        (5, &[("**000", 2), ("00***", 2), ("*****", 1)], &[21, 11]),
    ];
    for (w, rules, want) in tables {
        let t = RuleTable::from_pairs(w, rules).unwrap();
        let counts = evaluate_table(&t).unwrap();
        let want: Vec<U256> = std::iter::once(0).chain(want.iter().copied()).map(U256::from).collect();
        if counts != want {
            failures.push(format!("table {rules:?} -> {counts:?}"));
        }
    }
    outcome(failures, format!("{n} random partitions and 4 hand tables"))
}

fn criterion_6(k3: &ExperimentStats, k100: &ExperimentStats) -> Outcome {
    let checks = [
        ("k=3 lambda/kW", k3.mean_lambda_per_kw, 0.189, 0.005),
        ("k=3 LB/lambda", k3.mean_lb_ratio, 0.901, 0.01),
        ("k=100 lambda/kW", k100.mean_lambda_per_kw, 0.163, 0.005),
        ("k=100 UB/lambda", k100.mean_ub_ratio, 1.923, 0.015),
        ("k=100 LB/lambda", k100.mean_lb_ratio, 0.973, 0.01),
    ];
    let summary = checks.iter().map(|(n, v, t, _)| format!("{n}={v:.4} (target {t})")).collect::<Vec<_>>().join(", ");
    let failures = checks
        .iter()
        .filter(|(_, v, t, tol)| !within(*v, *t, *tol))
        .map(|(n, v, t, tol)| format!("{n} = {v:.4}, expected {t} +- {tol}"))
        .collect();
    outcome(failures, summary)
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    if p_levels(5) != vec![q(1, 4), q(1, 8), q(3, 16), q(5, 32), q(11, 64)] {
        failures.push("p_levels".to_string());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut gains = Vec::new();
    for (s, want) in [(Strategy::Opt, 3.0), (Strategy::Rnd, 2.0), (Strategy::Mix, 2.5)] {
        let (mut turns, mut total) = (0usize, 0u64);
        while turns < 100_000 {
            let t = play_game(s, 10_000, &mut rng);
            turns += t.turns;
            total += t.total_gain();
        }
        let mean = total as f64 / turns as f64;
        gains.push(format!("{s}={mean:.3}"));
        if !within(mean, want, 0.05) {
            failures.push(format!("{s} mean gain {mean:.4}"));
        }
    }
    let m = 10_000u32;
    let games = 200;
    let turns: usize = (0..games).map(|_| play_game(Strategy::Opt, m, &mut rng).turns).sum();
    let ratio = turns as f64 / games as f64 / f64::from(m);
    if !within(ratio, 1.0 / 3.0, 0.01) {
        failures.push(format!("E[T]/m = {ratio:.4}"));
    }
    let scaled = (6.0 * std::f64::consts::PI * 1000.0).sqrt() * c_of_k(1000).unwrap();
    if !(0.9..=1.1).contains(&scaled) {
        failures.push(format!("sqrt(6 pi k) c(k) = {scaled:.4}"));
    }
    outcome(failures, format!("gains {}, E[T]/m={ratio:.4}, sqrt(6 pi k)c(k)={scaled:.4}", gains.join(" ")))
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1_000_000 {
        let n = U256::from(rng.gen::<u128>());
        let d = to_naf(n);
        let (plus, minus) = naf_decompose(n);
        if !d.is_canonical() || d.value().as_u256() != n || plus - minus != n || d.weight() != phi_count(n) {
            failures.push(format!("reconstruction {n}"));
        }
    }
    for n in 0..=4095u64 {
        for h in 0..=12u32 {
            let a = phi_count(U256::from(n)) as i64;
            let b = phi_count(U256::from(n + (1 << h))) as i64;
            if (a - b).abs() > 1 {
                failures.push(format!("perturbation n={n} h={h}"));
            }
        }
    }
    let pop: Vec<u32> = (0..=2048u32).map(u32::count_ones).collect();
    let mut sparsest = vec![u32::MAX; 2001];
    for x in 0..=2048i64 {
        for y in 0..=2048i64 {
            let n = x - y;
            if n.abs() <= 1000 {
                let slot = &mut sparsest[(n + 1000) as usize];
                *slot = (*slot).min(pop[x as usize] + pop[y as usize]);
            }
        }
    }
    for n in -1000i64..=1000 {
        if phi_count(U256::from(n.unsigned_abs())) > sparsest[(n + 1000) as usize] {
            failures.push(format!("sparsity n={n}"));
        }
    }
    let d = 12u32;
    let mut plus = vec![0u32; d as usize + 1];
    let mut minus = vec![0u32; d as usize + 1];
    for n in 0..(1u64 << d) {
        for (level, sign) in to_naf(U256::from(n)).nonzero() {
            if sign > 0 {
                plus[level as usize] += 1;
            } else {
                minus[level as usize] += 1;
            }
        }
    }
    for level in 0..=(d - 2) as usize {
        if plus[level] != minus[level] {
            failures.push(format!("symmetry level {level}: {} vs {}", plus[level], minus[level]));
        }
    }
    if minus[(d - 1) as usize] != 0 {
        failures.push("negative digit at level d-1".into());
    }
    outcome(failures, "reconstruction 1e6, perturbation 4096x13, sparsity |n|<=1000, symmetry 2^12".into())
}

fn criterion_9(stats: &[(usize, ExperimentStats)]) -> Outcome {
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for (k, s) in stats {
        let lo = 1.0 / 6.0 - 0.02;
        let hi = 1.0 / 6.0 + c_of_k(*k).unwrap() + 0.02;
        summary.push(format!("k={k}: {:.4} in [{lo:.4}, {hi:.4}]", s.mean_lambda_per_kw));
        if !(lo..=hi).contains(&s.mean_lambda_per_kw) {
            failures.push(format!("k={k}: {:.4}", s.mean_lambda_per_kw));
        }
    }
    outcome(failures, summary.join(", "))
}

fn main() {
    let mut all_pass = true;
    let mut report = |id: u32, name: &str, start: Instant, o: Outcome| {
        all_pass &= o.pass;
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("[{verdict}] {id}. {name} ({:.1}s): {}", start.elapsed().as_secs_f64(), o.detail);
    };
    let t = Instant::now();
    report(1, "exact lambda values", t, criterion_1());
    let t = Instant::now();
    report(2, "worst-case families", t, criterion_2());
    let t = Instant::now();
    report(3, "oracle equivalence", t, criterion_3());
    let t = Instant::now();
    report(4, "bound sandwich", t, criterion_4());
    let t = Instant::now();
    report(5, "synthesis round trip", t, criterion_5());

    let t = Instant::now();
    let envelope: Vec<(usize, ExperimentStats)> =
        [3usize, 8, 16, 100].iter().map(|&k| (k, run_experiment(k, 100, 10_000, 2024).unwrap())).collect();
    let stat = |k: usize| &envelope.iter().find(|(kk, _)| *kk == k).unwrap().1;
    report(6, "Monte Carlo statistics", t, criterion_6(stat(3), stat(100)));
    let t = Instant::now();
    report(7, "average-case theory", t, criterion_7());
    let t = Instant::now();
    report(8, "signed-digit properties", t, criterion_8());
    let t = Instant::now();
    report(9, "envelope at W=100", t, criterion_9(&envelope));

    if !all_pass {
        std::process::exit(1);
    }
}
