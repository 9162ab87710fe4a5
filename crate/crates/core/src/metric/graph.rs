//! Shortest-path metrics of weighted undirected graphs.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use rayon::prelude::*;

use super::{FiniteMetricSpace, MetricError};

#[derive(Clone, Copy, PartialEq)]
struct State {
    dist: f64,
    node: usize,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, ties on node index
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(adj: &[Vec<(usize, f64)>], src: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(State {
        dist: 0.0,
        node: src,
    });
    while let Some(State { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &(next, w) in &adj[node] {
            let nd = d + w;
            if nd < dist[next] {
                dist[next] = nd;
                heap.push(State {
                    dist: nd,
                    node: next,
                });
            }
        }
    }
    dist
}

/// All-pairs shortest paths over dense vertex ids `0..n`.
///
/// Row `i` is computed by Dijkstra from `i`; the matrix is symmetrized from
/// the lower-index row so `d(i, j) == d(j, i)` holds bit for bit.
fn apsp(n: usize, edges: &[(usize, usize, f64)]) -> Result<Vec<f64>, (usize, usize)> {
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(u, v, w) in edges {
        if u != v {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
    }
    let rows: Vec<Vec<f64>> = (0..n).into_par_iter().map(|s| dijkstra(&adj, s)).collect();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = rows[i][j];
            if !d.is_finite() {
                return Err((i, j));
            }
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    Ok(dist)
}

fn check_weight(u: usize, v: usize, w: f64) -> Result<(), MetricError> {
    if !(w > 0.0 && w.is_finite()) {
        return Err(MetricError::NonpositiveWeight(u, v, w));
    }
    Ok(())
}

/// Shortest-path metric of an undirected graph given as `(u, v, weight)`.
///
/// Vertex ids that are exactly `0..n` are used as-is; any other id set is
/// remapped to dense indices in increasing id order and the original ids
/// become the point labels. Parallel edges keep their minimum weight and
/// self-loops are ignored.
pub fn from_graph(edges: &[(usize, usize, f64)]) -> Result<FiniteMetricSpace, MetricError> {
    for &(u, v, w) in edges {
        check_weight(u, v, w)?;
    }
    let ids: BTreeSet<usize> = edges.iter().flat_map(|&(u, v, _)| [u, v]).collect();
    if ids.is_empty() {
        return Err(MetricError::EmptyGraph);
    }
    let n = ids.len();
    let dense = *ids.iter().next_back().unwrap() + 1 == n;
    let index: HashMap<usize, usize> = ids.iter().enumerate().map(|(k, &id)| (id, k)).collect();
    let mapped: Vec<(usize, usize, f64)> = edges
        .iter()
        .map(|&(u, v, w)| (index[&u], index[&v], w))
        .collect();
    let original: Vec<usize> = ids.into_iter().collect();
    let dist = apsp(n, &mapped)
        .map_err(|(i, j)| MetricError::DisconnectedGraph(original[i], original[j]))?;
    let space = FiniteMetricSpace::from_trusted(n, dist);
    if dense {
        Ok(space)
    } else {
        space.with_labels(original.iter().map(|id| id.to_string()).collect())
    }
}

/// Shortest-path metric of a graph with named vertices. Points are numbered
/// in order of first appearance and labeled by name.
pub fn from_labeled_graph<S: AsRef<str>>(
    edges: &[(S, S, f64)],
) -> Result<FiniteMetricSpace, MetricError> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut id = |s: &str| -> usize {
        if let Some(&k) = index.get(s) {
            return k;
        }
        index.insert(s.to_string(), names.len());
        names.push(s.to_string());
        names.len() - 1
    };
    let mut mapped = Vec::with_capacity(edges.len());
    for (u, v, w) in edges {
        let (a, b) = (id(u.as_ref()), id(v.as_ref()));
        check_weight(a, b, *w)?;
        mapped.push((a, b, *w));
    }
    if names.is_empty() {
        return Err(MetricError::EmptyGraph);
    }
    let n = names.len();
    let dist = apsp(n, &mapped).map_err(|(i, j)| MetricError::DisconnectedGraph(i, j))?;
    FiniteMetricSpace::from_trusted(n, dist).with_labels(names)
}
