use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcher::MatcherKind;
use crate::partition::{pow2, MAX_WIDTH};
use crate::sample::sample_partition;
use crate::signed_digits::lpm_bounds;
use crate::U256;

/// Monte Carlo summary over uniformly sampled partitions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentStats {
    pub k: usize,
    #[serde(rename = "W")]
    pub width: u32,
    pub trials: usize,
    pub seed: u64,
    pub matcher: String,
    pub mean_lambda_per_kw: f64,
    pub se: f64,
    pub mean_lb_ratio: f64,
    pub se_lb_ratio: f64,
    pub mean_ub_ratio: f64,
    pub se_ub_ratio: f64,
}

impl ExperimentStats {
    pub const CSV_HEADER: &'static str = "k,W,trials,mean_lambda_per_kw,se,mean_lb_ratio,mean_ub_ratio";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.6},{:.6},{:.6},{:.6}",
            self.k, self.width, self.trials, self.mean_lambda_per_kw, self.se, self.mean_lb_ratio, self.mean_ub_ratio
        )
    }
}

/// Per-trial measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trial {
    pub length: usize,
    pub lower: u32,
    pub upper: u32,
}

/// The random stream for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Samples `trials` partitions and runs `matcher` on each. Trials run in
/// parallel on independent streams; results do not depend on scheduling.
pub fn run_trials(matcher: MatcherKind, k: usize, width: u32, trials: usize, seed: u64) -> Result<Vec<Trial>> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if width > MAX_WIDTH {
        return Err(Error::WidthOverflow(width));
    }
    if k == 0 || U256::from(k as u64) > pow2(width) {
        return Err(Error::KTooLarge { k, width });
    }
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let p = sample_partition(k, width, &mut rng)?;
            let (lower, upper) = lpm_bounds(&p);
            let length = matcher.run(&p, &mut rng).len();
            Ok(Trial { length, lower, upper })
        })
        .collect()
}

fn mean_se(xs: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, f64) {
    let n_f = n as f64;
    let mean = xs.clone().sum::<f64>() / n_f;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n_f - 1.0);
    (mean, (var / n_f).sqrt())
}

/// [`run_experiment`] with a chosen sequence generator.
pub fn run_experiment_with(
    matcher: MatcherKind,
    k: usize,
    width: u32,
    trials: usize,
    seed: u64,
) -> Result<ExperimentStats> {
    let results = run_trials(matcher, k, width, trials, seed)?;
    let kw = (k as f64) * f64::from(width.max(1));
    let (mean_lambda_per_kw, se) = mean_se(results.iter().map(|t| t.length as f64 / kw), trials);
    let (mean_lb_ratio, se_lb_ratio) =
        mean_se(results.iter().map(|t| f64::from(t.lower) / t.length as f64), trials);
    let (mean_ub_ratio, se_ub_ratio) =
        mean_se(results.iter().map(|t| f64::from(t.upper) / t.length as f64), trials);
    Ok(ExperimentStats {
        k,
        width,
        trials,
        seed,
        matcher: matcher.name().to_string(),
        mean_lambda_per_kw,
        se,
        mean_lb_ratio,
        se_lb_ratio,
        mean_ub_ratio,
        se_ub_ratio,
    })
}

/// Mean `λ(P)/(kW)` and the signed-digit bound ratios over `trials` uniform
/// partitions.
pub fn run_experiment(k: usize, width: u32, trials: usize, seed: u64) -> Result<ExperimentStats> {
    run_experiment_with(MatcherKind::BitMatcher, k, width, trials, seed)
}
