//! Structural node features exported for downstream classification.
//!
//! Clustering and eigenvector centrality work on the undirected view of the
//! graph (an edge counts if either direction exists); HITS keeps direction.

use crate::graph::{DirectedGraph, NodeId};

const TOL: f64 = 1e-8;
const MAX_ITERS: usize = 100;

/// Per-node feature row.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeFeatures {
    pub in_degree: usize,
    pub out_degree: usize,
    /// in/out degree, unclamped; a node with no out-edges maps to its
    /// in-degree so the value stays finite.
    pub degree_ratio: f64,
    pub clustering: f64,
    pub hub: f64,
    pub authority: f64,
    pub eigenvector: f64,
}

/// Feature rows in ascending node-id order plus power-iteration health.
#[derive(Debug, Clone)]
pub struct FeatureTable {
    pub rows: Vec<(NodeId, NodeFeatures)>,
    pub hits_converged: bool,
    pub eigenvector_converged: bool,
}

impl FeatureTable {
    pub fn get(&self, id: NodeId) -> Option<&NodeFeatures> {
        self.rows
            .binary_search_by_key(&id, |(n, _)| *n)
            .ok()
            .map(|i| &self.rows[i].1)
    }
}

/// Computes every node's feature row.
///
/// Hub/authority/eigenvector vectors have unit L2 norm (all-zero on an
/// edgeless graph). Power iterations stop on an L2 change below 1e-8 or
/// after 100 rounds; the flags report which happened. Eigenvector
/// centrality legitimately oscillates on bipartite graphs — callers get
/// the last iterate and a `false` flag rather than an error.
pub fn node_features(g: &DirectedGraph) -> FeatureTable {
    let n = g.node_count();
    let (hub, authority, hits_converged) = hits(g);
    let (eigen, eigenvector_converged) = eigenvector(g);

    let mut rows = Vec::with_capacity(n);
    for idx in 0..n {
        let ind = g.in_degree(idx);
        let outd = g.out_degree(idx);
        let degree_ratio = if outd > 0 {
            ind as f64 / outd as f64
        } else {
            ind as f64
        };
        rows.push((
            g.id_of(idx),
            NodeFeatures {
                in_degree: ind,
                out_degree: outd,
                degree_ratio,
                clustering: clustering_idx(g, idx),
                hub: hub[idx],
                authority: authority[idx],
                eigenvector: eigen[idx],
            },
        ));
    }
    FeatureTable {
        rows,
        hits_converged,
        eigenvector_converged,
    }
}

/// Fraction of closed triads around `idx` in the undirected view.
fn clustering_idx(g: &DirectedGraph, idx: usize) -> f64 {
    let nbrs = g.neighbors_idx(idx);
    let k = nbrs.len();
    if k < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for (pos, &a) in nbrs.iter().enumerate() {
        let a_nbrs = g.neighbors_idx(a);
        for &b in &nbrs[pos + 1..] {
            if a_nbrs.binary_search(&b).is_ok() {
                links += 1;
            }
        }
    }
    2.0 * links as f64 / (k * (k - 1)) as f64
}

fn hits(g: &DirectedGraph) -> (Vec<f64>, Vec<f64>, bool) {
    let n = g.node_count();
    let mut hub = uniform(n);
    let mut auth = vec![0.0; n];
    for _ in 0..MAX_ITERS {
        let mut auth_new: Vec<f64> = (0..n)
            .map(|v| g.in_idx(v).iter().map(|&u| hub[u]).sum())
            .collect();
        normalize(&mut auth_new);
        let mut hub_new: Vec<f64> = (0..n)
            .map(|u| g.out_idx(u).iter().map(|&v| auth_new[v]).sum())
            .collect();
        normalize(&mut hub_new);
        let delta = l2_delta(&hub_new, &hub).max(l2_delta(&auth_new, &auth));
        hub = hub_new;
        auth = auth_new;
        if delta < TOL {
            return (hub, auth, true);
        }
    }
    (hub, auth, false)
}

fn eigenvector(g: &DirectedGraph) -> (Vec<f64>, bool) {
    let n = g.node_count();
    let mut x = uniform(n);
    for _ in 0..MAX_ITERS {
        let mut next: Vec<f64> = (0..n)
            .map(|i| g.neighbors_idx(i).iter().map(|&j| x[j]).sum())
            .collect();
        normalize(&mut next);
        let delta = l2_delta(&next, &x);
        x = next;
        if delta < TOL {
            return (x, true);
        }
    }
    (x, false)
}

fn uniform(n: usize) -> Vec<f64> {
    vec![1.0 / (n as f64).sqrt(); n]
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

fn l2_delta(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
