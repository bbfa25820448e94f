//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tourbound::DistanceMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_points(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut r = rng(seed);
    (0..n).map(|_| (r.random_range(0.0..100.0), r.random_range(0.0..100.0))).collect()
}

/// Seeded Euclidean instance with exact (unrounded) costs.
pub fn random_euclidean(n: usize, seed: u64) -> DistanceMatrix {
    DistanceMatrix::euclidean(&random_points(n, seed)).unwrap()
}

/// Seeded Euclidean instance on an integer grid with rounded costs, so
/// ties are common.
pub fn random_integral(n: usize, seed: u64) -> DistanceMatrix {
    let mut r = rng(seed);
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (r.random_range(0..6) as f64, r.random_range(0..6) as f64)).collect();
    DistanceMatrix::from_fn(n, |i, j| {
        let (a, b) = (pts[i], pts[j]);
        ((a.0 - b.0).hypot(a.1 - b.1) + 0.5).floor()
    })
    .unwrap()
}

pub fn cycle_len(order: &[usize], d: &DistanceMatrix) -> f64 {
    let n = order.len();
    (0..n).map(|k| d.get(order[k], order[(k + 1) % n])).sum()
}

/// Minimum-weight perfect matching by enumeration. Pairs are generated
/// smallest-vertex-first with ascending partners, so the enumeration runs
/// in lexicographic order of sorted pair lists and the first minimum found
/// is the lexicographically smallest.
pub fn exhaustive_matching(d: &DistanceMatrix, verts: &[usize]) -> (Vec<(usize, usize)>, f64) {
    fn rec(
        d: &DistanceMatrix,
        left: &[usize],
        cur: &mut Vec<(usize, usize)>,
        best: &mut Option<(Vec<(usize, usize)>, f64)>,
    ) {
        if left.is_empty() {
            let w: f64 = cur.iter().map(|&(u, v)| d.get(u, v)).sum();
            if best.as_ref().is_none_or(|b| w < b.1) {
                *best = Some((cur.clone(), w));
            }
            return;
        }
        let v0 = left[0];
        for k in 1..left.len() {
            let u = left[k];
            let rest: Vec<usize> = left[1..].iter().copied().filter(|&x| x != u).collect();
            cur.push((v0, u));
            rec(d, &rest, cur, best);
            cur.pop();
        }
    }
    let mut sorted = verts.to_vec();
    sorted.sort_unstable();
    let mut best = None;
    rec(d, &sorted, &mut Vec::new(), &mut best);
    best.unwrap_or((Vec::new(), 0.0))
}

/// Optimal tour length by the Held-Karp dynamic program.
pub fn held_karp(d: &DistanceMatrix) -> f64 {
    let n = d.n();
    let full = 1usize << (n - 1);
    let mut dp = vec![f64::INFINITY; full * (n - 1)];
    for j in 0..n - 1 {
        dp[(1 << j) * (n - 1) + j] = d.get(0, j + 1);
    }
    for mask in 1..full {
        for j in 0..n - 1 {
            let cur = dp[mask * (n - 1) + j];
            if mask & (1 << j) == 0 || !cur.is_finite() {
                continue;
            }
            for k in 0..n - 1 {
                if mask & (1 << k) != 0 {
                    continue;
                }
                let next = mask | (1 << k);
                let cand = cur + d.get(j + 1, k + 1);
                if cand < dp[next * (n - 1) + k] {
                    dp[next * (n - 1) + k] = cand;
                }
            }
        }
    }
    (0..n - 1).map(|j| dp[(full - 1) * (n - 1) + j] + d.get(j + 1, 0)).fold(f64::INFINITY, f64::min)
}

/// Longest tour length by the same dynamic program on costs reflected
/// through the largest one.
pub fn held_karp_max(d: &DistanceMatrix) -> f64 {
    let top = d.max_cost();
    let flipped = DistanceMatrix::from_fn(d.n(), |i, j| if i == j { 0.0 } else { top - d.get(i, j) });
    d.n() as f64 * top - held_karp(&flipped.unwrap())
}

/// Kruskal with edges ordered by `(weight, u, v)`.
pub fn kruskal(d: &DistanceMatrix) -> (Vec<(usize, usize)>, f64) {
    let n = d.n();
    let mut edges: Vec<(f64, usize, usize)> =
        (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).map(|(u, v)| (d.get(u, v), u, v)).collect();
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    let mut tree = Vec::new();
    for (_, u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            tree.push((u, v));
        }
    }
    tree.sort_unstable();
    let w = tree.iter().map(|&(u, v)| d.get(u, v)).sum();
    (tree, w)
}

/// Minimum spanning tree weight over all `n^(n-2)` labeled trees, decoded
/// from Pruefer sequences.
pub fn min_tree_weight_by_enumeration(d: &DistanceMatrix) -> f64 {
    let n = d.n();
    if n == 2 {
        return d.get(0, 1);
    }
    let len = n - 2;
    let mut seq = vec![0usize; len];
    let mut best = f64::INFINITY;
    loop {
        let mut degree = vec![1usize; n];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut w = 0.0;
        for &s in &seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
            w += d.get(leaf, s);
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        w += d.get(rest[0], rest[1]);
        best = best.min(w);
        // Next sequence in base-n counting.
        let mut i = 0;
        loop {
            if i == len {
                return best;
            }
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

/// Adaptive Simpson integration with Richardson correction.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    simpson_to_depth(f, a, b, tol, 50)
}

/// Adaptive Simpson with a tolerance relative to a coarse first estimate.
pub fn simpson_rel(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    let rough = simpson_to_depth(f, a, b, 0.0, 8);
    simpson(f, a, b, rel * rough.abs())
}

fn simpson_to_depth(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, depth)
}

/// `int_0^t x^(a-1) (1-x)^(b-1) dx` for shapes `>= 1` by adaptive Simpson.
/// The range is split at 1/2 and each half substituted with a square
/// (`x = w^2`, `1 - x = w^2`) so the endpoint powers become smooth.
pub fn incomplete_beta_simpson(t: f64, a: f64, b: f64) -> f64 {
    let f = move |x: f64| x.powf(a - 1.0) * (1.0 - x).powf(b - 1.0);
    let left_end = t.min(0.5);
    let mut total = simpson_rel(&|w: f64| 2.0 * w * f(w * w), 0.0, left_end.sqrt(), 1e-15);
    if t > 0.5 {
        let (w_lo, w_hi) = ((1.0 - t).sqrt(), 0.5f64.sqrt());
        total += simpson_rel(&|w: f64| 2.0 * w * f(1.0 - w * w), w_lo, w_hi, 1e-15);
    }
    total
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
