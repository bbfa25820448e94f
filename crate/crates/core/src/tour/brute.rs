use super::{DistanceMatrix, Tour};
use crate::error::{Error, Result};

/// Largest dimension the exhaustive oracles accept.
pub const MAX_BRUTE_FORCE_N: usize = 12;

#[derive(Clone, Copy)]
enum Goal {
    Min,
    Max,
}

/// Exhaustive minimum tour. Among ties the lexicographically smallest
/// canonical order (starting at 0, second node < last node) wins.
pub fn brute_force_min_tour(d: &DistanceMatrix) -> Result<(Tour, f64)> {
    enumerate(d, Goal::Min)
}

/// Exhaustive maximum tour with the same tie-break.
pub fn brute_force_max_tour(d: &DistanceMatrix) -> Result<(Tour, f64)> {
    enumerate(d, Goal::Max)
}

struct Search<'a> {
    d: &'a DistanceMatrix,
    goal: Goal,
    order: Vec<usize>,
    used: Vec<bool>,
    best: Option<(Vec<usize>, f64)>,
}

impl Search<'_> {
    fn better(&self, len: f64) -> bool {
        match (&self.best, self.goal) {
            (None, _) => true,
            (Some((_, b)), Goal::Min) => len < *b,
            (Some((_, b)), Goal::Max) => len > *b,
        }
    }

    fn extend(&mut self, partial: f64) {
        let n = self.d.n();
        let depth = self.order.len();
        let last = self.order[depth - 1];
        if depth == n {
            if self.order[1] > self.order[n - 1] {
                return;
            }
            let len = partial + self.d.get(last, 0);
            if self.better(len) {
                self.best = Some((self.order.clone(), len));
            }
            return;
        }
        // Remaining legs are non-negative; an equal partial can only tie,
        // and a later tie loses the lexicographic tie-break.
        if let (Goal::Min, Some((_, b))) = (self.goal, &self.best) {
            if partial >= *b {
                return;
            }
        }
        for v in 1..n {
            if self.used[v] {
                continue;
            }
            self.used[v] = true;
            self.order.push(v);
            self.extend(partial + self.d.get(last, v));
            self.order.pop();
            self.used[v] = false;
        }
    }
}

fn enumerate(d: &DistanceMatrix, goal: Goal) -> Result<(Tour, f64)> {
    let n = d.n();
    if !(3..=MAX_BRUTE_FORCE_N).contains(&n) {
        return Err(Error::Usage(format!("brute-force enumeration needs 3 <= n <= {MAX_BRUTE_FORCE_N}, got {n}")));
    }
    d.require_symmetric("brute-force enumeration")?;
    let mut search = Search { d, goal, order: Vec::with_capacity(n), used: vec![false; n], best: None };
    search.order.push(0);
    search.used[0] = true;
    search.extend(0.0);
    let (order, len) = search.best.expect("n >= 3 has at least one tour");
    Ok((Tour::from_order_unchecked(order), len))
}
