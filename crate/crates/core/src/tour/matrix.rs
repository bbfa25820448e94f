use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major cost matrix with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    costs: Vec<f64>,
    symmetric: bool,
}

/// A triple `(i, j, k)` with `c[i][j] + c[j][k] < c[i][k] - tol`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl DistanceMatrix {
    pub fn new(n: usize, costs: Vec<f64>) -> Result<Self> {
        if costs.len() != n * n {
            return Err(Error::Usage(format!("matrix of dimension {n} needs {} entries, got {}", n * n, costs.len())));
        }
        for i in 0..n {
            if costs[i * n + i] != 0.0 {
                return Err(Error::Usage(format!("diagonal entry {i} is not zero")));
            }
        }
        if let Some(k) = costs.iter().position(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::Usage(format!("cost ({}, {}) must be non-negative and finite", k / n, k % n)));
        }
        let symmetric = (0..n).all(|i| (i + 1..n).all(|j| costs[i * n + j] == costs[j * n + i]));
        Ok(DistanceMatrix { n, costs, symmetric })
    }

    /// Builds a symmetric matrix from a cost function evaluated on `i < j`.
    pub fn from_fn(n: usize, mut cost: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut costs = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let c = cost(i, j);
                costs[i * n + j] = c;
                costs[j * n + i] = c;
            }
        }
        Self::new(n, costs)
    }

    /// Exact Euclidean distances between points.
    pub fn euclidean(points: &[(f64, f64)]) -> Result<Self> {
        Self::from_fn(points.len(), |i, j| {
            let (a, b) = (points[i], points[j]);
            (a.0 - b.0).hypot(a.1 - b.1)
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.costs[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.costs[i * self.n..(i + 1) * self.n]
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub(crate) fn require_symmetric(&self, what: &str) -> Result<()> {
        if self.symmetric {
            Ok(())
        } else {
            Err(Error::Usage(format!("{what} requires a symmetric cost matrix")))
        }
    }

    /// Largest off-diagonal cost (0 for `n < 2`).
    pub fn max_cost(&self) -> f64 {
        let n = self.n;
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .fold(0.0, f64::max)
    }

    /// First triple (in lexicographic `(i, j, k)` order over distinct
    /// nodes) breaking the triangle inequality by more than `tol`.
    pub fn first_triangle_violation(&self, tol: f64) -> Option<TriangleViolation> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                if j == i {
                    continue;
                }
                let cij = self.get(i, j);
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    if cij + self.get(j, k) < self.get(i, k) - tol {
                        return Some(TriangleViolation { i, j, k });
                    }
                }
            }
        }
        None
    }

    pub fn triangle_inequality_holds(&self, tol: f64) -> bool {
        self.first_triangle_violation(tol).is_none()
    }
}
