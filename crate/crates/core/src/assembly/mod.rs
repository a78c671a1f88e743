//! Assemblers: exact greedy, sequential, de Bruijn, noisy greedy and the
//! repeat-aware mate-pair pipeline. All take position-free reads.

mod debruijn;
mod greedy;
mod noisy;
mod outcome;
mod repeats;
mod sequential;

pub use debruijn::{debruijn_assemble, default_kmer_size, MAX_BRANCH_NODES};
pub use greedy::{greedy_assemble, greedy_assemble_traced};
pub use noisy::{noisy_greedy_assemble, OverlapScorer, seed_len, MAX_FINAL_PAIRS, MAX_SEED_K, MIN_SEED_K};
pub use outcome::{AssemblyOutcome, Contig, FailureReason, OutcomeKind, OutcomeSummary, Placement};
pub use repeats::{find_repeat_candidate, repeats_assemble, REPEAT_FOLD};
pub use sequential::sequential_assemble;
