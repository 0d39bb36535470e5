//! Deterministic workloads for the benchmarks in `benches/`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use revrules::gen::{random_mixed_circuit, random_permutation};
use revrules::{Circuit, Permutation};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` random mixed circuits of the given shape.
pub fn circuits(seed: u64, width: usize, len: usize, count: usize) -> Vec<Circuit> {
    let mut r = rng(seed);
    (0..count).map(|_| random_mixed_circuit(&mut r, width, len)).collect()
}

pub fn permutations(seed: u64, width: usize, count: usize) -> Vec<Permutation> {
    let mut r = rng(seed);
    (0..count).map(|_| random_permutation(&mut r, width)).collect()
}
