//! 2-opt and 3-opt local search over neighbor-list candidates, and
//! sampling of locally optimal tour lengths.

mod neighbors;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use neighbors::{NeighborLists, DEFAULT_NEIGHBOR_COUNT};

use crate::error::{Error, Result};
use crate::tour::{cycle_length, random_tour, DistanceMatrix, Tour};

/// A move must shorten the tour by more than this fraction of its length.
pub const IMPROVEMENT_EPS: f64 = 1e-12;

/// Local search settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Opt order, 2 or 3.
    pub level: u8,
    pub neighbor_count: usize,
    pub max_passes: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { level: 2, neighbor_count: DEFAULT_NEIGHBOR_COUNT, max_passes: 10_000, seed: 0 }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !matches!(self.level, 2 | 3) {
            return Err(Error::Usage(format!("opt level must be 2 or 3, got {}", self.level)));
        }
        if self.max_passes == 0 {
            return Err(Error::Usage("max_passes must be at least 1".into()));
        }
        if self.neighbor_count == 0 {
            return Err(Error::Usage("neighbor_count must be at least 1".into()));
        }
        Ok(())
    }
}

/// Tour as an array plus the inverse permutation.
struct Working<'a> {
    d: &'a DistanceMatrix,
    order: Vec<usize>,
    pos: Vec<usize>,
    length: f64,
}

impl<'a> Working<'a> {
    fn new(t: &Tour, d: &'a DistanceMatrix, nl: &NeighborLists) -> Result<Self> {
        let n = t.len();
        if d.n() != n || nl.n() != n {
            return Err(Error::Usage(format!(
                "tour has {n} cities but matrix has {} and neighbor lists {}",
                d.n(),
                nl.n()
            )));
        }
        d.require_symmetric("local search")?;
        let order = t.order().to_vec();
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let length = cycle_length(&order, d);
        Ok(Working { d, order, pos, length })
    }

    #[inline]
    fn c(&self, a: usize, b: usize) -> f64 {
        self.d.get(a, b)
    }

    #[inline]
    fn at(&self, i: usize) -> usize {
        self.order[i % self.order.len()]
    }

    fn threshold(&self) -> f64 {
        -IMPROVEMENT_EPS * self.length
    }

    fn reverse(&mut self, lo: usize, hi: usize) {
        self.order[lo..=hi].reverse();
        for i in lo..=hi {
            self.pos[self.order[i]] = i;
        }
    }

    fn into_tour(self) -> Tour {
        Tour::from_order_unchecked(self.order)
    }

    /// One 2-opt pass. For each scan position the first improving
    /// exchange (successor side, then predecessor side) is applied.
    fn two_opt_pass(&mut self, nl: &NeighborLists, on_move: &mut dyn FnMut(&[usize])) -> bool {
        let n = self.order.len();
        if n < 4 {
            return false;
        }
        let mut improved = false;
        for i in 0..n {
            let a = self.order[i];
            if self.two_opt_at(a, true, nl) || self.two_opt_at(a, false, nl) {
                improved = true;
                on_move(&self.order);
            }
        }
        improved
    }

    fn two_opt_at(&mut self, a: usize, forward: bool, nl: &NeighborLists) -> bool {
        let n = self.order.len();
        let pa = self.pos[a];
        let b = if forward { self.at(pa + 1) } else { self.at(pa + n - 1) };
        let dab = self.c(a, b);
        for &c in nl.of(a) {
            let dac = self.c(a, c);
            if dac >= dab {
                // Sorted lists: no later candidate can gain on this side.
                break;
            }
            let pc = self.pos[c];
            let d = if forward { self.at(pc + 1) } else { self.at(pc + n - 1) };
            if c == b || d == a {
                continue;
            }
            let delta = dac + self.c(b, d) - dab - self.c(c, d);
            if delta < self.threshold() {
                // Forward: a b .. c d -> a c .. b d. Backward mirrors it.
                let (lo, hi) = if forward {
                    if pa < pc {
                        (pa + 1, pc)
                    } else {
                        (pc + 1, pa)
                    }
                } else if pa < pc {
                    (pa, pc - 1)
                } else {
                    (pc, pa - 1)
                };
                self.reverse(lo, hi);
                self.length += delta;
                return true;
            }
        }
        false
    }

    /// One 3-opt pass. Candidate edge triples come from chains
    /// `u -> v in N(u) -> w in N(v)`, taking the tour edge on either side
    /// of each node.
    fn three_opt_pass(&mut self, nl: &NeighborLists, on_move: &mut dyn FnMut(&[usize])) -> bool {
        let n = self.order.len();
        if n < 4 {
            return false;
        }
        let mut improved = false;
        for i in 0..n {
            let u = self.order[i];
            if self.three_opt_at(u, nl) {
                improved = true;
                on_move(&self.order);
            }
        }
        improved
    }

    fn three_opt_at(&mut self, u: usize, nl: &NeighborLists) -> bool {
        let n = self.order.len();
        let sides = |p: usize| [p, (p + n - 1) % n];
        for eu in sides(self.pos[u]) {
            for &v in nl.of(u) {
                for ev in sides(self.pos[v]) {
                    if ev == eu {
                        continue;
                    }
                    for &w in nl.of(v) {
                        for ew in sides(self.pos[w]) {
                            if ew == eu || ew == ev {
                                continue;
                            }
                            let mut e = [eu, ev, ew];
                            e.sort_unstable();
                            if let Some((pattern, delta)) = self.best_reconnection(e) {
                                self.apply_reconnection(e, pattern);
                                self.length += delta;
                                return true;
                            }
                        }
                    }
                }
            }
        }
        false
    }

    /// First improving pattern for removing edges starting at positions
    /// `i < j < k`. Segments are `X = [i+1, j]`, `Y = [j+1, k]`.
    fn best_reconnection(&self, [i, j, k]: [usize; 3]) -> Option<(usize, f64)> {
        let (a, b, c) = (self.at(i), self.at(i + 1), self.at(j));
        let (d, e, f) = (self.at(j + 1), self.at(k), self.at(k + 1));
        let removed = self.c(a, b) + self.c(c, d) + self.c(e, f);
        let x = (b, c);
        let xr = (c, b);
        let y = (d, e);
        let yr = (e, d);
        let limit = self.threshold();
        for (p, (s1, s2)) in PATTERNS.iter().zip([(xr, y), (x, yr), (xr, yr), (y, x), (yr, x), (y, xr), (yr, xr)]) {
            let added = self.c(a, s1.0) + self.c(s1.1, s2.0) + self.c(s2.1, f);
            let delta = added - removed;
            if delta < limit {
                return Some((p.index, delta));
            }
        }
        None
    }

    fn apply_reconnection(&mut self, [i, j, k]: [usize; 3], pattern: usize) {
        let spec = &PATTERNS[pattern];
        let x = &self.order[i + 1..=j];
        let y = &self.order[j + 1..=k];
        let (first, second) = if spec.swap { (y, x) } else { (x, y) };
        let (r1, r2) = if spec.swap { (spec.rev_y, spec.rev_x) } else { (spec.rev_x, spec.rev_y) };
        let mut seg = Vec::with_capacity(k - i);
        if r1 {
            seg.extend(first.iter().rev());
        } else {
            seg.extend_from_slice(first);
        }
        if r2 {
            seg.extend(second.iter().rev());
        } else {
            seg.extend_from_slice(second);
        }
        self.order[i + 1..=k].copy_from_slice(&seg);
        for p in i + 1..=k {
            self.pos[self.order[p]] = p;
        }
    }
}

struct Pattern {
    index: usize,
    swap: bool,
    rev_x: bool,
    rev_y: bool,
}

/// The seven non-identity ways to reinsert `X` and `Y` between `a` and `f`:
/// `X'Y, XY', X'Y', YX, Y'X, YX', Y'X'`.
const PATTERNS: [Pattern; 7] = [
    Pattern { index: 0, swap: false, rev_x: true, rev_y: false },
    Pattern { index: 1, swap: false, rev_x: false, rev_y: true },
    Pattern { index: 2, swap: false, rev_x: true, rev_y: true },
    Pattern { index: 3, swap: true, rev_x: false, rev_y: false },
    Pattern { index: 4, swap: true, rev_x: false, rev_y: true },
    Pattern { index: 5, swap: true, rev_x: true, rev_y: false },
    Pattern { index: 6, swap: true, rev_x: true, rev_y: true },
];

/// One 2-opt pass. Returns the new tour and whether any move was applied.
pub fn two_opt_improve(t: &Tour, d: &DistanceMatrix, nl: &NeighborLists) -> Result<(Tour, bool)> {
    let mut w = Working::new(t, d, nl)?;
    let improved = w.two_opt_pass(nl, &mut |_| {});
    Ok((w.into_tour(), improved))
}

/// One 3-opt pass. Returns the new tour and whether any move was applied.
pub fn three_opt_improve(t: &Tour, d: &DistanceMatrix, nl: &NeighborLists) -> Result<(Tour, bool)> {
    let mut w = Working::new(t, d, nl)?;
    let improved = w.three_opt_pass(nl, &mut |_| {});
    Ok((w.into_tour(), improved))
}

/// Repeats passes until one applies no move or `cfg.max_passes` is hit.
/// Returns the tour and the number of passes run.
pub fn local_search(t: &Tour, d: &DistanceMatrix, cfg: &SearchConfig) -> Result<(Tour, usize)> {
    cfg.validate()?;
    let nl = NeighborLists::build(d, cfg.neighbor_count)?;
    local_search_with(t, d, &nl, cfg, &mut |_| {})
}

/// [`local_search`] with prebuilt neighbor lists; `on_move` sees the tour
/// order after every applied move.
pub fn local_search_with(
    t: &Tour,
    d: &DistanceMatrix,
    nl: &NeighborLists,
    cfg: &SearchConfig,
    on_move: &mut dyn FnMut(&[usize]),
) -> Result<(Tour, usize)> {
    cfg.validate()?;
    let mut w = Working::new(t, d, nl)?;
    let mut passes = 0;
    while passes < cfg.max_passes {
        passes += 1;
        // Re-anchor the running length so the threshold does not drift.
        w.length = cycle_length(&w.order, d);
        let improved = match cfg.level {
            2 => w.two_opt_pass(nl, on_move),
            _ => w.three_opt_pass(nl, on_move),
        };
        if !improved {
            break;
        }
    }
    Ok((w.into_tour(), passes))
}

/// Lengths of `count` local optima reached from random starts. Run `r`
/// starts from the tour seeded with `cfg.seed + r`.
pub fn sample_lengths(d: &DistanceMatrix, count: usize, cfg: &SearchConfig) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::Usage(format!("need at least 2 samples to fit moments, got {count}")));
    }
    cfg.validate()?;
    let nl = NeighborLists::build(d, cfg.neighbor_count)?;
    (0..count as u64)
        .into_par_iter()
        .map(|r| {
            let start = random_tour(d.n(), cfg.seed.wrapping_add(r))?;
            let (t, _) = local_search_with(&start, d, &nl, cfg, &mut |_| {})?;
            Ok(cycle_length(t.order(), d))
        })
        .collect()
}
