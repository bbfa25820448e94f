use serde::{Deserialize, Serialize};

use super::blossom::{max_weight_matching, Solution, UNMATCHED};
use crate::error::{Error, Result};
use crate::tour::DistanceMatrix;

/// A perfect pairing of an even vertex set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matching {
    /// Pairs `(u, v)` with `u < v`, sorted.
    pub pairs: Vec<(usize, usize)>,
    /// Sum of pair costs, accumulated in `pairs` order.
    pub weight: f64,
}

impl Matching {
    fn from_pairs(mut pairs: Vec<(usize, usize)>, d: &DistanceMatrix) -> Self {
        for p in pairs.iter_mut() {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        pairs.sort_unstable();
        let weight = pairs.iter().map(|&(u, v)| d.get(u, v)).sum();
        Matching { pairs, weight }
    }
}

/// How the odd-degree vertices get paired.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchingMode {
    /// Exact minimum-weight perfect matching.
    #[default]
    Exact,
    /// Cheapest-edge-first greedy pairing. Voids the 1.5 guarantee.
    Greedy,
}

impl std::str::FromStr for MatchingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(MatchingMode::Exact),
            "greedy" => Ok(MatchingMode::Greedy),
            other => Err(Error::Usage(format!("unknown matching mode '{other}'"))),
        }
    }
}

fn check_vertices(d: &DistanceMatrix, verts: &[usize]) -> Result<Vec<usize>> {
    d.require_symmetric("matching")?;
    if verts.len() % 2 == 1 {
        return Err(Error::Usage(format!("perfect matching needs an even vertex count, got {}", verts.len())));
    }
    let mut sorted = verts.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Usage("duplicate vertex in matching set".into()));
    }
    if let Some(&v) = sorted.last() {
        if v >= d.n() {
            return Err(Error::Usage(format!("vertex {v} out of range")));
        }
    }
    Ok(sorted)
}

/// Integer costs for the blossom solver. Integral inputs are kept as is;
/// anything else is scaled so the largest cost maps to about `2^40`.
fn quantize(d: &DistanceMatrix, verts: &[usize]) -> Vec<Vec<i64>> {
    let m = verts.len();
    let limit = ((1u64 << 58) / (m.max(2) as u64)).min(1 << 40) as f64;
    let mut max = 0.0f64;
    let mut integral = true;
    for (a, &u) in verts.iter().enumerate() {
        for &v in &verts[a + 1..] {
            let c = d.get(u, v);
            max = max.max(c.abs());
            integral &= c.fract() == 0.0;
        }
    }
    let scale = if integral && max <= limit {
        1.0
    } else if max > 0.0 {
        limit / max
    } else {
        1.0
    };
    (0..m).map(|a| (0..m).map(|b| (d.get(verts[a], verts[b]) * scale).round() as i64).collect()).collect()
}

struct Solved {
    /// Partner of each live local index.
    partner: Vec<usize>,
    sol: Solution,
    /// Quantized cost of the matching.
    cost: i64,
    /// Offset turning costs into max-weight edge weights.
    big: i64,
}

/// Solves min-weight perfect matching on the local indices in `live`.
fn solve(q: &[Vec<i64>], live: &[usize]) -> Solved {
    let m = live.len();
    let qmax = live.iter().flat_map(|&a| live.iter().map(move |&b| q[a][b])).max().unwrap_or(0);
    // Large enough that every maximum-weight matching is perfect.
    let big = qmax * (m as i64 / 2) + 1;
    let mut edges = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for a in 0..m {
        for b in (a + 1)..m {
            edges.push((a, b, big - q[live[a]][live[b]]));
        }
    }
    let sol = max_weight_matching(m, &edges);
    let mut partner = vec![UNMATCHED; q.len()];
    let mut cost = 0;
    for a in 0..m {
        let b = sol.mate[a];
        assert!(b != UNMATCHED, "blossom solver returned an imperfect matching");
        partner[live[a]] = live[b];
        if a < b {
            cost += q[live[a]][live[b]];
        }
    }
    Solved { partner, sol, cost, big }
}

/// Exact minimum-weight perfect matching on the complete graph over
/// `verts`. Among optimal matchings the one with the lexicographically
/// smallest sorted pair list is returned.
pub fn min_weight_perfect_matching(d: &DistanceMatrix, verts: &[usize]) -> Result<Matching> {
    let verts = check_vertices(d, verts)?;
    if verts.is_empty() {
        return Ok(Matching { pairs: Vec::new(), weight: 0.0 });
    }
    let q = quantize(d, &verts);
    let m = verts.len();

    let mut live: Vec<usize> = (0..m).collect();
    let mut cur = solve(&q, &live);
    let mut optimum = cur.cost;
    // Position of each local index inside the last solve, for dual lookups.
    let mut pos: Vec<usize> = (0..m).collect();
    let mut fixed = Vec::with_capacity(m / 2);

    while let Some(&v0) = live.first() {
        let mut mate = cur.partner[v0];
        let mut resolved = None;
        for &u in live.iter().skip(1).take_while(|&&u| u < mate) {
            // Any optimal completion is optimal for the last solve too, so
            // its edges are tight there. Loose edges need no re-solve.
            if cur.sol.slack(pos[v0], pos[u], cur.big - q[v0][u]) != 0 {
                continue;
            }
            let rest: Vec<usize> = live.iter().copied().filter(|&x| x != v0 && x != u).collect();
            let next = solve(&q, &rest);
            if next.cost + q[v0][u] == optimum {
                mate = u;
                resolved = Some((rest, next));
                break;
            }
        }
        fixed.push((verts[v0], verts[mate]));
        match resolved {
            Some((rest, next)) => {
                for (k, &x) in rest.iter().enumerate() {
                    pos[x] = k;
                }
                live = rest;
                optimum = next.cost;
                cur = next;
            }
            None => {
                optimum -= q[v0][mate];
                live.retain(|&x| x != v0 && x != mate);
            }
        }
    }
    Ok(Matching::from_pairs(fixed, d))
}

/// Pairs vertices cheapest edge first, ties by `(u, v)`.
pub fn greedy_matching(d: &DistanceMatrix, verts: &[usize]) -> Result<Matching> {
    let verts = check_vertices(d, verts)?;
    let mut edges = Vec::with_capacity(verts.len() * verts.len() / 2);
    for (a, &u) in verts.iter().enumerate() {
        for &v in &verts[a + 1..] {
            edges.push((d.get(u, v), u, v));
        }
    }
    edges.sort_unstable_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));
    let mut used = vec![false; d.n()];
    let mut pairs = Vec::with_capacity(verts.len() / 2);
    for (_, u, v) in edges {
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            pairs.push((u, v));
        }
    }
    Ok(Matching::from_pairs(pairs, d))
}

/// Dispatches on `mode`.
pub fn match_vertices(d: &DistanceMatrix, verts: &[usize], mode: MatchingMode) -> Result<Matching> {
    match mode {
        MatchingMode::Exact => min_weight_perfect_matching(d, verts),
        MatchingMode::Greedy => greedy_matching(d, verts),
    }
}
