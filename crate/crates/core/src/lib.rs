//! Metric TSP heuristics with an iterated truncated Generalized-Beta bound.
//!
//! The pipeline builds a Christofides tour (minimum spanning tree, exact
//! minimum-weight perfect matching on odd vertices, Eulerian circuit,
//! shortcutting), improves it with iterated 2-opt/3-opt local search and
//! evaluates the Generalized-Beta truncation recursion that bounds the
//! expected tour length after `K` improvement rounds.
//!
//! Modules map onto the pipeline stages:
//!
//! - [`instance`]: TSPLIB parsing and best-known-optima registries.
//! - [`tour`]: distance matrices, tours, the max-TSP transform and brute-force oracles.
//! - [`christofides`]: the construction heuristic.
//! - [`kopt`]: neighbor-list 2-opt and 3-opt.
//! - [`gb`]: special functions and the bound recursion.
//! - [`solver`]: end-to-end runs, reports and the benchmark harness.

pub mod christofides;
pub mod error;
pub mod gb;
pub mod instance;
pub mod kopt;
pub mod solver;
pub mod tour;

pub use christofides::{christofides_tour, ConstructionTrace, MatchingMode};
pub use error::{Error, Result};
pub use gb::{BoundReport, GbParams, TruncationState};
pub use instance::{OptimaRegistry, Rounding, TspInstance, WeightKind};
pub use kopt::{NeighborLists, SearchConfig};
pub use solver::{RunReport, SolveConfig};
pub use tour::{DistanceMatrix, MaxTspTransform, Tour};
