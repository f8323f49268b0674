//! Constants, exact identities, statistics and verification suites.

pub mod condensation;
pub mod constants;
pub mod coupling;
pub mod exact;
pub mod gh;
pub mod height;
pub mod spinal;
pub mod stats;
pub mod suites;

use crate::law::OffspringLaw;

/// Smallest `m ≥ n` for which a tree of size `m` exists.
pub fn next_feasible(law: &OffspringLaw, n: u64) -> u64 {
    (n..).find(|&m| law.feasible_size(m)).expect("some size is feasible")
}
