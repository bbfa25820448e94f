//! Fixtures shared by the criterion benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tourbound::{DistanceMatrix, Result};

/// `n` points on a jittered grid inside the unit square, deterministic in
/// `seed`.
pub fn grid_instance(n: usize, seed: u64) -> Result<DistanceMatrix> {
    let side = (n as f64).sqrt().ceil() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let (r, c) = (i / side, i % side);
            let (dx, dy): (f64, f64) = (rng.random(), rng.random());
            ((c as f64 + dx) / side as f64, (r as f64 + dy) / side as f64)
        })
        .collect();
    DistanceMatrix::euclidean(&points)
}
