//! Overlap scoring (exact, Hamming, MAP) and the `l`-mer candidate index.

mod exact;
mod index;
mod map;

pub use exact::{hamming_overlap_score, suffix_prefix_overlap};
pub use index::{Bucket, LmerIndex, CANDIDATE_CSV_HEADER};
pub(crate) use index::pack;
pub use map::{map_overlap_score, map_overlap_test, Hypothesis, MapScorerConfig, LOG_ZERO};
pub(crate) use map::map_score_unchecked;

/// Convenience wrapper over [`LmerIndex::build`].
pub fn build_index(reads: &crate::reads::BlindReads, ell: usize) -> crate::error::Result<LmerIndex> {
    LmerIndex::build(reads, ell)
}
