use super::{Matching, SpanningTree};
use crate::christofides::mst::odd_degree_vertices;
use crate::error::{Error, Result};
use crate::tour::{DistanceMatrix, Tour};

/// Multigraph in which every node has even degree.
#[derive(Debug, Clone)]
pub struct EvenMultiGraph {
    edges: Vec<(usize, usize)>,
    /// Per node: `(neighbor, edge id)` sorted ascending.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl EvenMultiGraph {
    /// Builds the graph, checking even degrees and connectivity of the
    /// non-isolated nodes.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n || u == v {
                return Err(Error::Internal(format!("invalid multigraph edge ({u}, {v})")));
            }
            adjacency[u].push((v, id));
            adjacency[v].push((u, id));
        }
        if let Some(v) = adjacency.iter().position(|a| a.len() % 2 == 1) {
            return Err(Error::Internal(format!("node {v} has odd degree")));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let g = EvenMultiGraph { edges, adjacency };
        if !g.is_connected() {
            return Err(Error::Internal("multigraph is disconnected".into()));
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let n = self.adjacency.len();
        let Some(start) = (0..n).find(|&v| !self.adjacency[v].is_empty()) else {
            return true;
        };
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &(u, _) in &self.adjacency[v] {
                if !std::mem::replace(&mut seen[u], true) {
                    stack.push(u);
                }
            }
        }
        (0..n).all(|v| seen[v] || self.adjacency[v].is_empty())
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }
}

/// Joins tree and matching edges; a pair present in both appears twice.
pub fn unite(t: &SpanningTree, m: &Matching) -> Result<EvenMultiGraph> {
    let mut covered: Vec<usize> = m.pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
    covered.sort_unstable();
    if covered != odd_degree_vertices(t) {
        return Err(Error::Internal("matching does not cover exactly the odd-degree tree vertices".into()));
    }
    let edges = t.edges.iter().chain(&m.pairs).copied().collect();
    EvenMultiGraph::new(t.n(), edges)
}

/// Hierholzer's algorithm from the lowest non-isolated node, always taking
/// the lowest-index unused neighbor. The walk is closed: it ends where it
/// starts and has `edges + 1` entries.
pub fn eulerian_circuit(g: &EvenMultiGraph) -> Result<Vec<usize>> {
    let Some(start) = (0..g.n()).find(|&v| g.degree(v) > 0) else {
        return Ok(Vec::new());
    };
    let mut used = vec![false; g.edges.len()];
    let mut next = vec![0usize; g.n()];
    let mut stack = vec![start];
    let mut circuit = Vec::with_capacity(g.edges.len() + 1);
    while let Some(&v) = stack.last() {
        let adj = &g.adjacency[v];
        while next[v] < adj.len() && used[adj[next[v]].1] {
            next[v] += 1;
        }
        if let Some(&(u, e)) = adj.get(next[v]) {
            used[e] = true;
            stack.push(u);
        } else {
            circuit.push(v);
            stack.pop();
        }
    }
    circuit.reverse();
    if circuit.len() != g.edges.len() + 1 {
        return Err(Error::Internal("Euler walk did not use every edge".into()));
    }
    Ok(circuit)
}

/// Sum of consecutive legs along a walk.
pub fn walk_length(walk: &[usize], d: &DistanceMatrix) -> f64 {
    walk.windows(2).map(|w| d.get(w[0], w[1])).sum()
}

/// Keeps the first occurrence of each node in the walk.
pub fn shortcut(walk: &[usize], d: &DistanceMatrix) -> Result<Tour> {
    let n = d.n();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for &v in walk {
        if v >= n {
            return Err(Error::Internal(format!("walk node {v} out of range")));
        }
        if !std::mem::replace(&mut seen[v], true) {
            order.push(v);
        }
    }
    if order.len() != n {
        return Err(Error::Internal(format!("walk visits {} of {n} nodes", order.len())));
    }
    Ok(Tour::from_order_unchecked(order))
}
