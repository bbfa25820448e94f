//! Tours, tour length, metric validation, the max-TSP cost transform and
//! brute-force oracles for small instances.

mod brute;
mod matrix;
mod maxtsp;

pub use brute::{brute_force_max_tour, brute_force_min_tour, MAX_BRUTE_FORCE_N};
pub use matrix::{DistanceMatrix, TriangleViolation};
pub use maxtsp::{maxtsp_transform, MaxTspTransform};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A Hamiltonian cycle stored as a permutation of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tour {
    order: Vec<usize>,
}

impl Tour {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Usage(format!("tour order is not a permutation of 0..{n} (offending node {v})")));
            }
        }
        Ok(Tour { order })
    }

    pub fn identity(n: usize) -> Self {
        Tour { order: (0..n).collect() }
    }

    pub(crate) fn from_order_unchecked(order: Vec<usize>) -> Self {
        debug_assert!(Tour::new(order.clone()).is_ok());
        Tour { order }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn length(&self, d: &DistanceMatrix) -> Result<f64> {
        tour_length(self, d)
    }

    /// Same cycle, rotated to start at node 0 and oriented so the second
    /// node is smaller than the last.
    pub fn canonical(&self) -> Tour {
        let n = self.order.len();
        if n == 0 {
            return self.clone();
        }
        let start = self.order.iter().position(|&v| v == 0).unwrap_or(0);
        let mut order: Vec<usize> = (0..n).map(|k| self.order[(start + k) % n]).collect();
        if n > 2 && order[1] > order[n - 1] {
            order[1..].reverse();
        }
        Tour { order }
    }
}

/// Closed-cycle length of an order, summing legs `k = 0..n` left to right.
#[inline]
pub(crate) fn cycle_length(order: &[usize], d: &DistanceMatrix) -> f64 {
    let n = order.len();
    let mut total = 0.0;
    for k in 0..n {
        total += d.get(order[k], order[(k + 1) % n]);
    }
    total
}

/// Sum of `c[T(k)][T(k+1)]` over the closed cycle.
pub fn tour_length(t: &Tour, d: &DistanceMatrix) -> Result<f64> {
    if t.len() != d.n() {
        return Err(Error::Usage(format!("tour visits {} nodes but the matrix has {}", t.len(), d.n())));
    }
    Ok(cycle_length(&t.order, d))
}

/// Uniformly shuffled tour, reproducible from `seed`.
pub fn random_tour(n: usize, seed: u64) -> Result<Tour> {
    if n < 3 {
        return Err(Error::Usage(format!("random tours need n >= 3, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    Ok(Tour { order })
}
