//! Deterministic, splittable random streams.
//!
//! A stream is identified by a master seed plus a path of integer labels.
//! The 256-bit ChaCha key is a hash of that identity, so a stream's draws
//! depend only on `(seed, labels)` and never on how many sibling streams
//! exist or in which order they were created.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn derive_key(seed: u64, labels: &[u64]) -> [u8; 32] {
    let mut state = splitmix64(seed ^ splitmix64(labels.len() as u64));
    for (i, &label) in labels.iter().enumerate() {
        state = splitmix64(state ^ splitmix64(label.wrapping_add(GOLDEN.wrapping_mul(i as u64 + 1))));
    }
    let mut key = [0u8; 32];
    for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
        state = splitmix64(state.wrapping_add(i as u64));
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    key
}

/// A seeded generator owned by exactly one logical task.
#[derive(Debug)]
pub struct RandomStream {
    seed: u64,
    labels: Vec<u64>,
    rng: ChaCha8Rng,
}

/// Builds the stream identified by `(master_seed, labels)`.
pub fn derive_stream(master_seed: u64, labels: &[u64]) -> RandomStream {
    RandomStream {
        seed: master_seed,
        labels: labels.to_vec(),
        rng: ChaCha8Rng::from_seed(derive_key(master_seed, labels)),
    }
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        derive_stream(seed, &[])
    }

    /// Derives the child stream `labels ++ [label]`. Independent of how many
    /// values have already been drawn from `self`.
    pub fn child(&self, label: u64) -> RandomStream {
        let mut labels = self.labels.clone();
        labels.push(label);
        derive_stream(self.seed, &labels)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
