//! Christofides construction: spanning tree, odd-vertex matching, Euler
//! circuit, shortcutting.

mod blossom;
mod euler;
mod matching;
mod mst;

use serde::{Deserialize, Serialize};

pub use euler::{eulerian_circuit, shortcut, unite, walk_length, EvenMultiGraph};
pub use matching::{greedy_matching, match_vertices, min_weight_perfect_matching, Matching, MatchingMode};
pub use mst::{minimum_spanning_tree, odd_degree_vertices, SpanningTree};

use crate::error::{Error, Result};
use crate::tour::{DistanceMatrix, Tour, TriangleViolation};

/// Largest `n` for which the cubic triangle-inequality scan runs.
pub const METRIC_CHECK_MAX_N: usize = 600;

/// Relative slack allowed before a triangle counts as violated.
pub const METRIC_TOLERANCE: f64 = 1e-9;

/// What happened while building a tour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub mst_weight: f64,
    pub odd_vertices: usize,
    pub matching_mode: MatchingMode,
    pub matching_weight: f64,
    pub walk_length: f64,
    pub final_length: f64,
    /// Whether the triangle-inequality scan ran.
    pub metric_checked: bool,
    /// First violating triple found, if any.
    pub metric_violation: Option<TriangleViolation>,
    /// True when the 1.5 factor is known to apply: exact matching and a
    /// clean metric scan.
    pub guarantee_holds: bool,
}

/// Runs the full construction on `d`.
pub fn christofides_tour(d: &DistanceMatrix, mode: MatchingMode) -> Result<(Tour, ConstructionTrace)> {
    let n = d.n();
    if n < 3 {
        return Err(Error::Usage(format!("a tour needs at least 3 cities, got {n}")));
    }
    d.require_symmetric("christofides")?;
    let metric_checked = n <= METRIC_CHECK_MAX_N;
    let metric_violation = if metric_checked {
        let tol = METRIC_TOLERANCE * d.max_cost().max(1.0);
        d.first_triangle_violation(tol)
    } else {
        None
    };

    let tree = minimum_spanning_tree(d)?;
    let odd = odd_degree_vertices(&tree);
    let m = match_vertices(d, &odd, mode)?;
    let g = unite(&tree, &m)?;
    let walk = eulerian_circuit(&g)?;
    let walk_len = walk_length(&walk, d);
    let tour = shortcut(&walk, d)?;
    let final_length = tour.length(d)?;

    let trace = ConstructionTrace {
        mst_weight: tree.weight,
        odd_vertices: odd.len(),
        matching_mode: mode,
        matching_weight: m.weight,
        walk_length: walk_len,
        final_length,
        metric_checked,
        guarantee_holds: mode == MatchingMode::Exact && metric_checked && metric_violation.is_none(),
        metric_violation,
    };
    Ok((tour, trace))
}
