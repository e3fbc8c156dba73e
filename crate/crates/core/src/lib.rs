//! Similarity-guided exploration of the search space of redundancy-based
//! program repair.
//!
//! The crate ingests a source tree into an index of statements (repair
//! ingredients) and methods (donor contexts), scores candidates with four
//! similarity metrics, ranks them for repair tasks mined from one-statement
//! replacement diffs, and aggregates the rankings into rank statistics and
//! paired Wilcoxon signed-rank comparisons.

pub mod corpus;
pub mod eval;
pub mod metrics;
pub mod ranking;
pub mod tasks;

/// 64-bit FNV-1a over `parts`, each followed by a unit separator byte.
pub(crate) fn fnv1a<I, B>(parts: I) -> u64
where
    I: IntoIterator<Item = B>,
    B: AsRef<[u8]>,
{
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for &b in part.as_ref().iter().chain(&[0x1f]) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}
