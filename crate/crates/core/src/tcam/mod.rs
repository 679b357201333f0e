//! Ternary and prefix rule tables: synthesis, exact evaluation and
//! conversion back to transactions.

mod eval;
mod pattern;
mod synth;
mod table;
mod to_sequence;

pub use eval::{decided_counts, evaluate_table, induced_partition};
pub use pattern::{intersect_patterns, PrefixPattern, TernaryPattern};
pub use synth::{sequence_to_table, synthesize_lpm};
pub use table::{Rule, RuleTable};
pub use to_sequence::{table_to_remaps, table_to_sequence, Remap};
