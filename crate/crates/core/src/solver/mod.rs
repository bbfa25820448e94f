//! End-to-end runs: construction, local search, iterated improvement,
//! bound fitting and reporting.

mod bench;
mod report;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use bench::{bench, summary_table, BenchOutcome, SkippedFile, SummaryRow, BENCH_PRESET, RATIO_UNAVAILABLE};
pub use report::{emit_json, emit_report, parse_csv, parse_report, round_sig, CsvRow, ReportFormat, REPORT_SIG_DIGITS};

use crate::christofides::{christofides_tour, ConstructionTrace, MatchingMode};
use crate::error::{Error, Result};
use crate::gb::{bound_for_target, fit_params, iterate_bound, iterations_for_target, BoundReport, GbParams};
use crate::instance::{OptimaRegistry, Rounding, TspInstance};
use crate::kopt::{local_search_with, sample_lengths, NeighborLists, SearchConfig};
use crate::tour::{
    brute_force_max_tour, brute_force_min_tour, cycle_length, maxtsp_transform, DistanceMatrix, Tour, MAX_BRUTE_FORCE_N,
};

/// Default number of local-search samples used for the shape fit.
pub const DEFAULT_SAMPLE_COUNT: usize = 30;

/// How many improvement iterations to run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IterationSpec {
    /// A fixed `K`.
    Count(usize),
    /// The `K` at which the closed-form ratio reaches this value for the
    /// fitted shape.
    TargetRatio(f64),
}

/// Everything a run depends on besides the instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub search: SearchConfig,
    pub iterations: IterationSpec,
    pub matching: MatchingMode,
    pub rounding: Rounding,
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            search: SearchConfig::default(),
            iterations: IterationSpec::Count(1),
            matching: MatchingMode::Exact,
            rounding: Rounding::Nint,
            sample_count: DEFAULT_SAMPLE_COUNT,
            seed: 0,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        self.search.validate()?;
        match self.iterations {
            IterationSpec::Count(0) => return Err(Error::Usage("iteration count must be at least 1".into())),
            IterationSpec::TargetRatio(r) if r.is_nan() || r <= 1.0 => {
                return Err(Error::Usage(format!("target ratio must exceed 1, got {r}")))
            }
            _ => {}
        }
        if self.sample_count < 2 {
            return Err(Error::Usage(format!("sample count must be at least 2, got {}", self.sample_count)));
        }
        Ok(())
    }
}

/// Where a bound value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    /// Exhaustive enumeration.
    Oracle,
    /// Best-known optimum from a registry file.
    Registry,
    /// Shortest tour this run found.
    BestFound,
    /// Longest tour found by searching the max-TSP transform.
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledValue {
    pub value: f64,
    pub source: BoundSource,
}

/// Wall-clock seconds per phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub construction: f64,
    pub local_search: f64,
    pub sampling: f64,
    pub upper_bound: f64,
    pub fit: f64,
    pub iterations: f64,
    pub total: f64,
}

/// Result of [`run_itgbc`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    pub n: usize,
    pub config: SolveConfig,
    pub best_tour: Vec<usize>,
    pub best_length: f64,
    /// Best length after each iteration; entry 0 is construction plus
    /// local search.
    pub iteration_lengths: Vec<f64>,
    pub construction: ConstructionTrace,
    pub local_search_passes: usize,
    pub samples: Vec<f64>,
    pub lower: LabeledValue,
    pub upper: LabeledValue,
    pub fitted: Option<GbParams>,
    /// Why no bound was attached, when `bound` is absent.
    pub fit_error: Option<String>,
    pub bound: Option<BoundReport>,
    /// `best_length / lower`, absent when the lower value is best-found.
    pub ratio: Option<f64>,
    pub timings: Timings,
}

impl RunReport {
    /// The report with all timings zeroed, for comparisons across runs.
    pub fn without_timings(&self) -> RunReport {
        RunReport { timings: Timings::default(), ..self.clone() }
    }
}

/// Reversal of a random segment, or a double bridge when `n >= 8`.
fn perturb(order: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = order.len();
    if n >= 8 {
        let mut cuts = [0usize; 3];
        loop {
            for c in cuts.iter_mut() {
                *c = rng.random_range(1..n);
            }
            cuts.sort_unstable();
            if cuts[0] < cuts[1] && cuts[1] < cuts[2] {
                break;
            }
        }
        let [p, q, r] = cuts;
        let mut out = Vec::with_capacity(n);
        out.extend_from_slice(&order[..p]);
        out.extend_from_slice(&order[q..r]);
        out.extend_from_slice(&order[p..q]);
        out.extend_from_slice(&order[r..]);
        out
    } else {
        let mut out = order.to_vec();
        if n >= 4 {
            let i = rng.random_range(1..n - 1);
            let j = rng.random_range(i + 1..n);
            out[i..=j].reverse();
        }
        out
    }
}

fn seconds_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

/// Longest tour estimate: oracle for small `n`, otherwise construction and
/// local search on the max-TSP transform.
fn max_tour_on(d: &DistanceMatrix, matching: MatchingMode, search: &SearchConfig) -> Result<(Tour, LabeledValue)> {
    if d.n() <= MAX_BRUTE_FORCE_N {
        let (t, len) = brute_force_max_tour(d)?;
        return Ok((t, LabeledValue { value: len, source: BoundSource::Oracle }));
    }
    let tf = maxtsp_transform(d)?;
    let m = tf.matrix();
    let (start, _) = christofides_tour(m, matching)?;
    let nl = NeighborLists::build(m, search.neighbor_count)?;
    let (t, _) = local_search_with(&start, m, &nl, search, &mut |_| {})?;
    let value = tf.original_length(cycle_length(t.order(), m));
    Ok((t.canonical(), LabeledValue { value, source: BoundSource::Heuristic }))
}

/// Runs the full pipeline on `inst`.
pub fn run_itgbc(inst: &TspInstance, cfg: &SolveConfig, registry: Option<&OptimaRegistry>) -> Result<RunReport> {
    cfg.validate()?;
    let start_all = Instant::now();
    let inst = inst.clone().with_rounding(cfg.rounding);
    let d = inst.distance_matrix();
    let n = d.n();
    let search = SearchConfig { seed: cfg.seed, ..cfg.search };
    let mut timings = Timings::default();

    let t = Instant::now();
    let (tour0, construction) = christofides_tour(&d, cfg.matching)?;
    timings.construction = seconds_since(t);

    let t = Instant::now();
    let nl = NeighborLists::build(&d, search.neighbor_count)?;
    let (mut best, local_search_passes) = local_search_with(&tour0, &d, &nl, &search, &mut |_| {})?;
    let mut best_length = cycle_length(best.order(), &d);
    timings.local_search = seconds_since(t);

    let t = Instant::now();
    let samples = sample_lengths(&d, cfg.sample_count, &search)?;
    timings.sampling = seconds_since(t);

    let t = Instant::now();
    let (_, upper) = max_tour_on(&d, cfg.matching, &search)?;
    timings.upper_bound = seconds_since(t);

    let lower_for_fit = if n <= MAX_BRUTE_FORCE_N {
        let (_, len) = brute_force_min_tour(&d)?;
        LabeledValue { value: len, source: BoundSource::Oracle }
    } else if let Some(v) = registry.and_then(|r| r.get(&inst.name)) {
        LabeledValue { value: v, source: BoundSource::Registry }
    } else {
        let v = samples.iter().copied().fold(best_length, f64::min);
        LabeledValue { value: v, source: BoundSource::BestFound }
    };

    let t = Instant::now();
    let fitted = fit_params(&samples, lower_for_fit.value, upper.value);
    timings.fit = seconds_since(t);

    let k = match (cfg.iterations, &fitted) {
        (IterationSpec::Count(k), _) => k,
        (IterationSpec::TargetRatio(r), Ok(p)) => iterations_for_target(p.alpha, r)?,
        // Without a shape there is no K for the target; keep the
        // construction-level result.
        (IterationSpec::TargetRatio(_), Err(_)) => 1,
    };

    let t = Instant::now();
    let mut iteration_lengths = Vec::with_capacity(k);
    iteration_lengths.push(best_length);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6a09_e667_f3bc_c908);
    for _ in 1..k {
        let kicked = Tour::from_order_unchecked(perturb(best.order(), &mut rng));
        let (cand, _) = local_search_with(&kicked, &d, &nl, &search, &mut |_| {})?;
        let len = cycle_length(cand.order(), &d);
        if len < best_length {
            best = cand;
            best_length = len;
        }
        iteration_lengths.push(best_length);
    }
    timings.iterations = seconds_since(t);

    let lower = match lower_for_fit.source {
        BoundSource::BestFound => LabeledValue { value: lower_for_fit.value.min(best_length), ..lower_for_fit },
        _ => lower_for_fit,
    };
    let ratio = match lower.source {
        BoundSource::BestFound => None,
        _ => Some(best_length / lower.value),
    };

    let (fitted, fit_error, bound) = match fitted {
        Ok(p) => {
            let bound = match cfg.iterations {
                IterationSpec::Count(k) => iterate_bound(&p, k),
                IterationSpec::TargetRatio(r) => bound_for_target(&p, r),
            };
            match bound {
                Ok(b) => (Some(p), None, Some(b)),
                Err(e) => (Some(p), Some(e.to_string()), None),
            }
        }
        Err(e) => (None, Some(e.to_string()), None),
    };
    timings.total = seconds_since(start_all);

    Ok(RunReport {
        instance: inst.name.clone(),
        n,
        config: SolveConfig { search, ..*cfg },
        best_tour: best.canonical().into_order(),
        best_length,
        iteration_lengths,
        construction,
        local_search_passes,
        samples,
        lower,
        upper,
        fitted,
        fit_error,
        bound,
        ratio,
        timings,
    })
}

/// Output of [`max_tour`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxTourReport {
    pub instance: String,
    pub n: usize,
    /// Offset `M` of the transform.
    pub offset: f64,
    pub length: LabeledValue,
    pub tour: Vec<usize>,
}

/// Longest tour found for `inst`.
pub fn max_tour(inst: &TspInstance, cfg: &SolveConfig) -> Result<MaxTourReport> {
    cfg.validate()?;
    let d = inst.clone().with_rounding(cfg.rounding).distance_matrix();
    let offset = maxtsp_transform(&d)?.offset();
    let (tour, length) = max_tour_on(&d, cfg.matching, &SearchConfig { seed: cfg.seed, ..cfg.search })?;
    Ok(MaxTourReport { instance: inst.name.clone(), n: d.n(), offset, length, tour: tour.into_order() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> TspInstance {
        TspInstance::from_coords("square", vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
            .unwrap()
            .with_rounding(Rounding::Exact)
    }

    #[test]
    fn square_single_iteration() {
        let cfg = SolveConfig { rounding: Rounding::Exact, ..SolveConfig::default() };
        let r = run_itgbc(&square(), &cfg, None).unwrap();
        assert_eq!(r.best_length, 4.0);
        assert_eq!(r.ratio, Some(1.0));
        assert_eq!(r.lower.source, BoundSource::Oracle);
        assert_eq!(r.iteration_lengths, vec![4.0]);
    }

    #[test]
    fn perturbation_keeps_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [3, 4, 5, 7, 8, 20] {
            let base: Vec<usize> = (0..n).collect();
            for _ in 0..20 {
                let mut p = perturb(&base, &mut rng);
                p.sort_unstable();
                assert_eq!(p, base);
            }
        }
    }

    #[test]
    fn config_validation() {
        let bad = SolveConfig { iterations: IterationSpec::Count(0), ..SolveConfig::default() };
        assert!(bad.validate().unwrap_err().is_usage());
        let bad = SolveConfig { sample_count: 1, ..SolveConfig::default() };
        assert!(bad.validate().unwrap_err().is_usage());
        let bad = SolveConfig { iterations: IterationSpec::TargetRatio(1.0), ..SolveConfig::default() };
        assert!(bad.validate().is_err());
    }
}
