//! Compiles weighted traffic splits into minimal longest-prefix-match TCAM
//! tables, with bounds, extremal instances and average-case tooling.

pub mod analysis;
pub mod error;
pub mod matcher;
pub mod partition;
pub mod sample;
pub mod signed_digits;
pub mod tcam;
pub mod transaction;
pub mod worstcase;

pub use analysis::{
    c_of_k, c_prime_of_k, normalize_counts, p_levels, play_game, run_experiment, rw, ExperimentStats, GameTrace, Strategy,
};
pub use error::{Error, Result};
pub use matcher::{
    anchor_sequence, bit_matcher, brute_force_lambda, lambda, lambda_m, random_matcher, signed_matcher, MatcherKind,
};
pub use partition::{pow2, Partition, Weight, MAX_WIDTH};
pub use sample::sample_partition;
pub use signed_digits::{
    general_lower_bound, lpm_bounds, naf_decompose, phi_count, phi_max, phi_total, to_naf, to_naf_signed,
    worstcase_cap, BoundsReport, SignedDigits,
};
pub use tcam::{
    evaluate_table, induced_partition, intersect_patterns, synthesize_lpm, table_to_remaps, table_to_sequence, Remap,
    Rule, RuleTable, TernaryPattern,
};
pub use transaction::{
    apply_sequence, validate_sequence, ExtendedState, Transaction, TransactionSequence, ValidationReport,
};
pub use worstcase::{gen_general_hard, gen_k2, gen_k3, gen_triplets, WorstCaseKind};

pub use ethnum::{I256, U256};
