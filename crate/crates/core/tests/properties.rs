//! Property tests for the invariants of each module.

mod common;

use proptest::prelude::*;

use common::{held_karp, held_karp_max, rel_err};
use tourbound::christofides::{eulerian_circuit, match_vertices, minimum_spanning_tree, odd_degree_vertices, unite};
use tourbound::gb::{
    closed_form_ratio, fit_params, incomplete_beta, iterate_bound, iterations_for_target, truncated_mean,
};
use tourbound::instance::parse_tsplib;
use tourbound::kopt::{local_search, local_search_with, sample_lengths};
use tourbound::solver::{emit_json, emit_report, parse_csv, parse_report, round_sig, run_itgbc, ReportFormat};
use tourbound::tour::{brute_force_max_tour, brute_force_min_tour, maxtsp_transform, random_tour};
use tourbound::{
    christofides_tour, DistanceMatrix, GbParams, MatchingMode, NeighborLists, Rounding, SearchConfig, SolveConfig,
    Tour, TspInstance,
};

fn points(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..1000.0f64, 0.0..1000.0f64), n)
}

fn grid_points(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0..20i32, 0..20i32), n)
        .prop_map(|v| v.into_iter().map(|(x, y)| (x as f64, y as f64)).collect())
}

fn shape() -> impl Strategy<Value = f64> {
    1.05..12.0f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn length_ignores_rotation_and_reversal(pts in points(3..=30), seed in any::<u64>(), shift in 0usize..30) {
        let d = DistanceMatrix::euclidean(&pts).unwrap();
        let t = random_tour(pts.len(), seed).unwrap();
        let len = t.length(&d).unwrap();
        let mut o = t.order().to_vec();
        let k = shift % o.len();
        o.rotate_left(k);
        prop_assert!(rel_err(Tour::new(o.clone()).unwrap().length(&d).unwrap(), len) < 1e-12);
        o.reverse();
        prop_assert!(rel_err(Tour::new(o).unwrap().length(&d).unwrap(), len) < 1e-12);
    }

    #[test]
    fn random_tours_are_reproducible_permutations(n in 3usize..200, seed in any::<u64>()) {
        let t = random_tour(n, seed).unwrap();
        let mut o = t.order().to_vec();
        o.sort_unstable();
        prop_assert_eq!(o, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(random_tour(n, seed).unwrap(), t);
    }

    #[test]
    fn maxtsp_lengths_sum_to_n_times_offset(pts in points(3..=40), seed in any::<u64>()) {
        let d = DistanceMatrix::euclidean(&pts).unwrap();
        let tr = maxtsp_transform(&d).unwrap();
        prop_assert!(tr.offset() >= d.max_cost() + 1.0);
        let t = random_tour(pts.len(), seed).unwrap();
        let sum = t.length(tr.matrix()).unwrap() + t.length(&d).unwrap();
        prop_assert!(rel_err(sum, pts.len() as f64 * tr.offset()) < 1e-12);
        for i in 0..pts.len() {
            prop_assert_eq!(tr.matrix().get(i, i), 0.0);
        }
    }

    #[test]
    fn every_tour_lies_between_the_oracles(pts in points(4..=8), seeds in prop::collection::vec(any::<u64>(), 20)) {
        let d = DistanceMatrix::euclidean(&pts).unwrap();
        let (_, lo) = brute_force_min_tour(&d).unwrap();
        let (_, hi) = brute_force_max_tour(&d).unwrap();
        prop_assert!(rel_err(lo, held_karp(&d)) < 1e-12);
        prop_assert!(rel_err(hi, held_karp_max(&d)) < 1e-12);
        for s in seeds {
            let len = random_tour(pts.len(), s).unwrap().length(&d).unwrap();
            prop_assert!(len >= lo * (1.0 - 1e-12) && len <= hi * (1.0 + 1e-12));
        }
    }

    #[test]
    fn nint_costs_are_symmetric_integers(pts in points(2..=25)) {
        let inst = TspInstance::from_coords("p", pts.clone()).unwrap();
        let exact = inst.clone().with_rounding(Rounding::Exact).distance_matrix();
        let nint = inst.with_rounding(Rounding::Nint).distance_matrix();
        let n = pts.len();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(nint.get(i, j), nint.get(j, i));
                prop_assert_eq!(exact.get(i, j), exact.get(j, i));
                prop_assert_eq!(nint.get(i, j).fract(), 0.0);
            }
        }
        prop_assert!(exact.triangle_inequality_holds(1e-9));
    }

    #[test]
    fn tsplib_text_round_trips(pts in points(2..=50), rounding in prop_oneof![Just(Rounding::Nint), Just(Rounding::Exact)]) {
        let inst = TspInstance::from_coords("rt", pts).unwrap().with_rounding(rounding);
        let once = parse_tsplib(&inst.to_tsplib()).unwrap();
        let twice = parse_tsplib(&once.to_tsplib()).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(once.coords(), inst.coords());
    }

    #[test]
    fn spanning_tree_and_parity(pts in grid_points(2..=40)) {
        let d = DistanceMatrix::euclidean(&pts).unwrap();
        let t = minimum_spanning_tree(&d).unwrap();
        let n = pts.len();
        prop_assert_eq!(t.edges.len(), n - 1);
        // Connected and acyclic: n - 1 edges that join n components into one.
        let mut comp: Vec<usize> = (0..n).collect();
        for &(u, v) in &t.edges {
            let (cu, cv) = (comp[u], comp[v]);
            prop_assert_ne!(cu, cv);
            for c in comp.iter_mut() {
                if *c == cv {
                    *c = cu;
                }
            }
        }
        prop_assert!(comp.iter().all(|&c| c == comp[0]));
        prop_assert_eq!(odd_degree_vertices(&t).len() % 2, 0);
    }

    #[test]
    fn construction_bounds_against_the_optimum(pts in points(4..=10)) {
        let d = DistanceMatrix::euclidean(&pts).unwrap();
        let opt = held_karp(&d);
        let (t, trace) = christofides_tour(&d, MatchingMode::Exact).unwrap();
        let len = t.length(&d).unwrap();
        prop_assert!(trace.mst_weight <= opt * (1.0 + 1e-12));
        prop_assert!(trace.matching_weight <= 0.5 * opt * (1.0 + 1e-12));
        prop_assert!(len <= (trace.mst_weight + trace.matching_weight) * (1.0 + 1e-12));
        prop_assert!(len <= 1.5 * opt * (1.0 + 1e-12));
        prop_assert_eq!(christofides_tour(&d, MatchingMode::Exact).unwrap(), (t, trace));
    }

    #[test]
    fn euler_walk_covers_tree_plus_matching(pts in grid_points(3..=30), greedy in any::<bool>()) {
        let d = DistanceMatrix::euclidean(&pts).unwrap();
        let t = minimum_spanning_tree(&d).unwrap();
        let odd = odd_degree_vertices(&t);
        let mode = if greedy { MatchingMode::Greedy } else { MatchingMode::Exact };
        let m = match_vertices(&d, &odd, mode).unwrap();
        let mut covered: Vec<usize> = m.pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
        covered.sort_unstable();
        prop_assert_eq!(&covered, &odd);
        let g = unite(&t, &m).unwrap();
        prop_assert!((0..pts.len()).all(|v| g.degree(v) % 2 == 0));
        let walk = eulerian_circuit(&g).unwrap();
        let norm = |a: usize, b: usize| (a.min(b), a.max(b));
        let mut seen: Vec<_> = walk.windows(2).map(|w| norm(w[0], w[1])).collect();
        let mut want: Vec<_> = t.edges.iter().chain(&m.pairs).map(|&(a, b)| norm(a, b)).collect();
        seen.sort_unstable();
        want.sort_unstable();
        prop_assert_eq!(seen, want);
    }

    #[test]
    fn accepted_moves_strictly_shorten(pts in points(5..=60), seed in any::<u64>(), level in 2u8..=3) {
        let d = DistanceMatrix::euclidean(&pts).unwrap();
        let cfg = SearchConfig { level, neighbor_count: 6, seed, ..SearchConfig::default() };
        let nl = NeighborLists::build(&d, cfg.neighbor_count).unwrap();
        let start = random_tour(pts.len(), seed).unwrap();
        let mut prev = start.length(&d).unwrap();
        let mut ok = true;
        let (t, passes) = local_search_with(&start, &d, &nl, &cfg, &mut |o: &[usize]| {
            let len = common::cycle_len(o, &d);
            ok &= len < prev;
            prev = len;
        }).unwrap();
        prop_assert!(ok);
        prop_assert!(passes >= 1 && passes <= cfg.max_passes);
        let mut o = t.order().to_vec();
        o.sort_unstable();
        prop_assert_eq!(o, (0..pts.len()).collect::<Vec<_>>());
    }

    #[test]
    fn neighbor_lists_are_sorted_without_self(pts in grid_points(2..=40), m in 1usize..15) {
        let d = DistanceMatrix::euclidean(&pts).unwrap();
        let nl = NeighborLists::build(&d, m).unwrap();
        for v in 0..pts.len() {
            let list = nl.of(v);
            prop_assert_eq!(list.len(), m.min(pts.len() - 1));
            prop_assert!(!list.contains(&v));
            prop_assert!(list.windows(2).all(|w| d.get(v, w[0]) <= d.get(v, w[1])));
        }
    }

    #[test]
    fn truncated_mean_is_increasing_and_inside(a in shape(), b in shape(), lo in 0.0..100.0f64, span in 0.5..500.0f64, h in 0.02..0.98f64) {
        let p = GbParams::new(a, b, lo, lo + span).unwrap();
        let m1 = truncated_mean(&p, h).unwrap();
        let m2 = truncated_mean(&p, (h + 0.02).min(1.0)).unwrap();
        prop_assert!(m1 > lo && m1 < lo + span * h);
        prop_assert!(m2 > m1);
    }

    #[test]
    fn truncation_ratio_stays_below_the_slope(a in shape(), b in shape(), h in 0.01..1.0f64) {
        let g = incomplete_beta(h, a + 1.0, b).unwrap() / incomplete_beta(h, a, b).unwrap();
        prop_assert!(g <= (a + 1.0) / (a + 2.0) * h);
    }

    #[test]
    fn recursion_respects_the_closed_form(a in shape(), b in shape(), upper in 1.6..20.0f64, k_max in 1usize..30) {
        let p = GbParams::new(a, b, 1.0, upper).unwrap();
        let r = iterate_bound(&p, k_max).unwrap();
        prop_assert_eq!(r.states.len(), k_max);
        for (i, s) in r.states.iter().enumerate() {
            prop_assert!(s.b_hat > 0.0 && s.b_hat <= 1.0);
            prop_assert!(s.mu >= p.lower && s.mu <= p.upper);
            prop_assert!(s.mu <= r.closed_form[i] * p.lower);
            if i > 0 {
                prop_assert!(s.mu <= r.states[i - 1].mu);
            }
        }
    }

    #[test]
    fn closed_form_decreases_and_target_inverts_it(a in 0.1..50.0f64, target in 1.0001..1.5f64) {
        let k = iterations_for_target(a, target).unwrap();
        prop_assert!(closed_form_ratio(a, k).unwrap() <= target);
        if k > 1 {
            prop_assert!(closed_form_ratio(a, k - 1).unwrap() > target);
        }
        prop_assert!(closed_form_ratio(a, k + 1).unwrap() < closed_form_ratio(a, k).unwrap());
    }

    #[test]
    fn fitted_moments_equal_sample_moments(xs in prop::collection::vec(0.0..1.0f64, 2..200)) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n;
        prop_assume!(v > 1e-6 && m * (1.0 - m) > v * 1.01);
        let (lo, hi) = (10.0, 30.0);
        let scaled: Vec<f64> = xs.iter().map(|x| lo + (hi - lo) * x).collect();
        let p = fit_params(&scaled, lo, hi).unwrap();
        let s = p.alpha + p.beta;
        prop_assert!(rel_err(p.alpha / s, m) < 1e-9);
        prop_assert!(rel_err(p.alpha * p.beta / (s * s * (s + 1.0)), v) < 1e-9);
    }

    #[test]
    fn rounding_is_idempotent(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let r = round_sig(x);
        prop_assert_eq!(round_sig(r), r);
        if x != 0.0 {
            prop_assert!(rel_err(r, x) <= 5e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pipeline_reports_are_consistent(pts in points(5..=9), seed in any::<u64>(), k in 1usize..5) {
        let inst = TspInstance::from_coords("prop", pts).unwrap().with_rounding(Rounding::Exact);
        let cfg = SolveConfig {
            iterations: tourbound::solver::IterationSpec::Count(k),
            sample_count: 8,
            seed,
            search: SearchConfig { seed, ..SearchConfig::default() },
            ..SolveConfig::default()
        };
        let r = run_itgbc(&inst, &cfg, None).unwrap();
        prop_assert_eq!(r.iteration_lengths.len(), k);
        prop_assert!(r.iteration_lengths.windows(2).all(|w| w[1] <= w[0]));
        prop_assert_eq!(*r.iteration_lengths.last().unwrap(), r.best_length);
        let ratio = r.ratio.unwrap();
        prop_assert!((1.0 - 1e-12..=1.5 + 1e-12).contains(&ratio));
        prop_assert_eq!(r.without_timings(), run_itgbc(&inst, &cfg, None).unwrap().without_timings());

        let text = emit_report(&r, ReportFormat::Json).unwrap();
        let back = parse_report(&text).unwrap();
        prop_assert_eq!(&emit_json(&back).unwrap(), &text);
        prop_assert_eq!(&back.best_tour, &r.best_tour);
        prop_assert!(rel_err(back.best_length, r.best_length) <= 5e-12);
        let rows = parse_csv(&emit_report(&r, ReportFormat::Csv).unwrap()).unwrap();
        prop_assert_eq!(rows.len(), k);
    }

    #[test]
    fn samples_are_deterministic(pts in points(6..=30), seed in any::<u64>()) {
        let d = DistanceMatrix::euclidean(&pts).unwrap();
        let cfg = SearchConfig { seed, ..SearchConfig::default() };
        let a = sample_lengths(&d, 6, &cfg).unwrap();
        prop_assert_eq!(&a, &sample_lengths(&d, 6, &cfg).unwrap());
        let (best, _) = local_search(&random_tour(pts.len(), seed).unwrap(), &d, &cfg).unwrap();
        prop_assert_eq!(a[0], best.length(&d).unwrap());
    }
}
