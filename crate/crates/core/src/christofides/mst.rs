use crate::error::{Error, Result};
use crate::tour::DistanceMatrix;

/// A spanning tree over all `n` nodes, edges stored as `(min, max)` pairs
/// in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    n: usize,
    pub edges: Vec<(usize, usize)>,
    pub weight: f64,
}

impl SpanningTree {
    pub(crate) fn new(n: usize, edges: Vec<(usize, usize)>, weight: f64) -> Self {
        SpanningTree { n, edges, weight }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }
}

/// Edge order used for every tie: cost first, then the normalized pair.
#[inline]
fn edge_key_lt(w: f64, a: (usize, usize), bw: f64, b: (usize, usize)) -> bool {
    w < bw || (w == bw && a < b)
}

#[inline]
fn norm(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Prim's algorithm on the complete graph in `O(n^2)`.
///
/// Keys compare `(cost, min endpoint, max endpoint)`, a strict total
/// order, so the tree is the unique minimum under it and equals what
/// Kruskal would produce with the same ordering.
pub fn minimum_spanning_tree(d: &DistanceMatrix) -> Result<SpanningTree> {
    let n = d.n();
    if n < 2 {
        return Err(Error::Usage(format!("a spanning tree needs n >= 2, got {n}")));
    }
    d.require_symmetric("minimum spanning tree")?;

    let mut in_tree = vec![false; n];
    let mut best_w = vec![f64::INFINITY; n];
    let mut best_from = vec![0usize; n];
    in_tree[0] = true;
    best_w[1..].copy_from_slice(&d.row(0)[1..]);

    let mut edges = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let mut pick = usize::MAX;
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            if pick == usize::MAX
                || edge_key_lt(best_w[v], norm(v, best_from[v]), best_w[pick], norm(pick, best_from[pick]))
            {
                pick = v;
            }
        }
        in_tree[pick] = true;
        edges.push(norm(pick, best_from[pick]));
        for u in 0..n {
            if !in_tree[u] {
                let w = d.get(pick, u);
                if edge_key_lt(w, norm(u, pick), best_w[u], norm(u, best_from[u])) {
                    best_w[u] = w;
                    best_from[u] = pick;
                }
            }
        }
    }
    edges.sort_unstable();
    let weight = edges.iter().map(|&(u, v)| d.get(u, v)).sum();
    Ok(SpanningTree::new(n, edges, weight))
}

/// Nodes of odd degree in the tree, ascending. Always an even count.
pub fn odd_degree_vertices(t: &SpanningTree) -> Vec<usize> {
    t.degrees().into_iter().enumerate().filter(|&(_, deg)| deg % 2 == 1).map(|(v, _)| v).collect()
}
