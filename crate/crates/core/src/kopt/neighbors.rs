use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tour::DistanceMatrix;

/// Default candidate list length.
pub const DEFAULT_NEIGHBOR_COUNT: usize = 10;

/// For each node, its `m` nearest other nodes, closest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborLists {
    lists: Vec<Vec<usize>>,
}

impl NeighborLists {
    /// Builds lists of length `min(m, n - 1)`, ordered by `(distance, index)`.
    pub fn build(d: &DistanceMatrix, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Usage("neighbor count must be at least 1".into()));
        }
        let n = d.n();
        let lists = (0..n)
            .map(|i| {
                let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                let key = |&a: &usize, &b: &usize| d.get(i, a).total_cmp(&d.get(i, b)).then(a.cmp(&b));
                let k = m.min(others.len());
                if k < others.len() {
                    others.select_nth_unstable_by(k, key);
                    others.truncate(k);
                }
                others.sort_unstable_by(key);
                others
            })
            .collect();
        Ok(NeighborLists { lists })
    }

    pub fn of(&self, v: usize) -> &[usize] {
        &self.lists[v]
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }
}
