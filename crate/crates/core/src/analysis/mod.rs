//! Average-case tooling: random-walk expectations, signed-digit level
//! probabilities, the zeroing-bits game, Monte Carlo experiments and
//! normalisation of measured counts.

mod counts;
mod experiment;
mod game;
mod levels;
mod normalize;
mod rw;

pub use counts::{parse_counts, CountColumn};
pub use experiment::{run_experiment, run_experiment_with, run_trials, trial_rng, ExperimentStats, Trial};
pub use game::{play_game, GameTrace, Strategy};
pub use levels::p_levels;
pub use normalize::{l1_distance, normalize_counts};
pub use rw::{c_of_k, c_prime_of_k, rw, rw_exact};
