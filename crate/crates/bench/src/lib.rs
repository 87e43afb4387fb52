//! Shared fixtures for the criterion benches.

use grothkit_core::{GrothCache, Permutation};

/// The pair whose subset family is largest at rank `n`: the identity under
/// the longest element, so every subset of the bottom diagram is folded.
pub fn widest_pair(n: usize) -> (Permutation, Permutation) {
    (Permutation::identity(n), Permutation::longest(n))
}

/// A fully populated cache at rank `n`.
pub fn warmed(n: usize) -> GrothCache {
    let mut cache = GrothCache::new(n);
    cache.warm_all().expect("rank is valid");
    cache
}
