//! Seeded generators.
//!
//! Every random decision in the crate draws from a [`ChaCha8Rng`] built from
//! an explicit `u64`. Batch work derives one generator per task as
//! `root ^ task_index`, so results never depend on scheduling.

pub use rand_chacha::ChaCha8Rng as Rng;
use rand::SeedableRng;

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Seed for the `index`-th task spawned from `root`.
pub fn derive_seed(root: u64, index: u64) -> u64 {
    root ^ index
}

pub fn task_rng(root: u64, index: u64) -> Rng {
    seeded(derive_seed(root, index))
}
