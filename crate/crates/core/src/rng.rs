//! Seeded generic-parameter draws.
//!
//! Every random choice in the pipeline goes through a ChaCha stream derived
//! from a user seed and a fixed stream tag, so runs are reproducible and
//! independent of thread count.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::C64;

/// Stream tags keep the draws for different purposes decorrelated.
pub mod stream {
    pub const CONFIG: u64 = 1;
    pub const START_SYSTEM: u64 = 2;
    pub const START_GAMMA: u64 = 3;
    pub const PATCHES: u64 = 4;
    pub const MEMBERSHIP: u64 = 5;
    pub const SLICE: u64 = 6;
}

pub fn seeded(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniformly distributed on the unit circle.
pub fn unit_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.gen_range(0.0..TAU))
}

/// Unit-norm vector whose entries have equal modulus and uniform phases.
pub fn unit_phase_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    let m = 1.0 / (n as f64).sqrt();
    (0..n).map(|_| unit_complex(rng) * m).collect()
}

/// Entries uniform in `[-1, 1]`, normalized to unit Euclidean length.
pub fn unit_real_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm > 1e-3 {
            return v.into_iter().map(|x| x / nrm).collect();
        }
    }
}
