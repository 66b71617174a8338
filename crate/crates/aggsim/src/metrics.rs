//! State/transition metrics between two labelings of the same graph.
//!
//! A metric vector compares a baseline labeling (T_0 or the earlier crawl)
//! against a later one. State fractions describe the baseline; transition
//! fractions are normalized by total node/edge counts, so each transition
//! row sums back to its baseline state fraction. Edge states read the
//! directed endpoints in storage order: for u→v the first letter is u's
//! label ("NA" = influenced normal, influencer aggressive).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::state::Label;

/// The 26 metric names in canonical (CSV header) order.
pub const METRIC_NAMES: [&str; 26] = [
    "n", "a", "NN", "NA", "AN", "AA", "n_to_n", "n_to_a", "a_to_n", "a_to_a", "NN_to_NN",
    "NN_to_NA", "NN_to_AN", "NN_to_AA", "NA_to_NN", "NA_to_NA", "NA_to_AN", "NA_to_AA",
    "AN_to_NN", "AN_to_NA", "AN_to_AN", "AN_to_AA", "AA_to_NN", "AA_to_NA", "AA_to_AN",
    "AA_to_AA",
];

/// The 22 retained names: the full set minus n, n_to_n, NN, NN_to_NN.
pub const VALIDATION_NAMES: [&str; 22] = [
    "a", "NA", "AN", "AA", "n_to_a", "a_to_n", "a_to_a", "NN_to_NA", "NN_to_AN", "NN_to_AA",
    "NA_to_NN", "NA_to_NA", "NA_to_AN", "NA_to_AA", "AN_to_NN", "AN_to_NA", "AN_to_AN",
    "AN_to_AA", "AA_to_NN", "AA_to_NA", "AA_to_AN", "AA_to_AA",
];

/// Node label as an array index: normal = 0, aggressive = 1.
fn lidx(l: Label) -> usize {
    match l {
        Label::Normal => 0,
        Label::Aggressive => 1,
    }
}

/// All 26 metrics. Indices follow [N, A] for nodes and
/// [NN, NA, AN, AA] for edges.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricVector {
    /// [n, a] — label fractions at the baseline.
    pub node_state: [f64; 2],
    /// [NN, NA, AN, AA] at the baseline.
    pub edge_state: [f64; 4],
    /// node_transition[from][to], fractions of all nodes.
    pub node_transition: [[f64; 2]; 2],
    /// edge_transition[from][to], fractions of all edges.
    pub edge_transition: [[f64; 4]; 4],
}

impl MetricVector {
    /// Inverse of `values`: rebuilds the struct from a canonical row.
    pub fn from_values(vals: &[f64; 26]) -> MetricVector {
        let mut mv = MetricVector {
            node_state: [vals[0], vals[1]],
            edge_state: [vals[2], vals[3], vals[4], vals[5]],
            ..MetricVector::default()
        };
        let mut k = 6;
        for from in 0..2 {
            for to in 0..2 {
                mv.node_transition[from][to] = vals[k];
                k += 1;
            }
        }
        for from in 0..4 {
            for to in 0..4 {
                mv.edge_transition[from][to] = vals[k];
                k += 1;
            }
        }
        mv
    }

    /// Flattens to the canonical 26-entry order of `METRIC_NAMES`.
    pub fn values(&self) -> [f64; 26] {
        let mut out = [0.0; 26];
        out[0] = self.node_state[0];
        out[1] = self.node_state[1];
        out[2..6].copy_from_slice(&self.edge_state);
        let mut k = 6;
        for from in 0..2 {
            for to in 0..2 {
                out[k] = self.node_transition[from][to];
                k += 1;
            }
        }
        for from in 0..4 {
            for to in 0..4 {
                out[k] = self.edge_transition[from][to];
                k += 1;
            }
        }
        out
    }
}

/// The 22 retained metrics in the canonical order of `VALIDATION_NAMES`.
pub type ValidationVector = [f64; 22];

/// Thresholds a score vector (aligned to the graph's dense indices) into
/// labels: aggressive iff score ≥ t_a.
pub fn binarize(
    g: &DirectedGraph,
    scores: &[f64],
    t_a: f64,
) -> Result<BTreeMap<NodeId, Label>> {
    if !(t_a > 0.0 && t_a < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "aggression threshold must be in (0, 1), got {t_a}"
        )));
    }
    if scores.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            left: scores.len(),
            right: g.node_count(),
        });
    }
    Ok(g.nodes()
        .zip(scores)
        .map(|(id, &s)| {
            let label = if s >= t_a {
                Label::Aggressive
            } else {
                Label::Normal
            };
            (id, label)
        })
        .collect())
}

/// Computes the full metric vector between two complete labelings.
pub fn metric_vector(
    g: &DirectedGraph,
    baseline: &BTreeMap<NodeId, Label>,
    later: &BTreeMap<NodeId, Label>,
) -> Result<MetricVector> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let n = g.node_count();
    let mut l0 = Vec::with_capacity(n);
    let mut l1 = Vec::with_capacity(n);
    for id in g.nodes() {
        l0.push(lidx(*baseline.get(&id).ok_or(Error::MissingLabel(id))?));
        l1.push(lidx(*later.get(&id).ok_or(Error::MissingLabel(id))?));
    }

    let mut node_state = [0usize; 2];
    let mut node_trans = [[0usize; 2]; 2];
    for i in 0..n {
        node_state[l0[i]] += 1;
        node_trans[l0[i]][l1[i]] += 1;
    }
    let mut edge_state = [0usize; 4];
    let mut edge_trans = [[0usize; 4]; 4];
    for u in 0..n {
        for &v in g.out_idx(u) {
            let s0 = 2 * l0[u] + l0[v];
            let s1 = 2 * l1[u] + l1[v];
            edge_state[s0] += 1;
            edge_trans[s0][s1] += 1;
        }
    }

    let nv = n as f64;
    let ne = g.edge_count() as f64;
    let node_frac = |c: usize| c as f64 / nv;
    // an edgeless graph legitimately reports zero edge mass
    let edge_frac = |c: usize| if ne > 0.0 { c as f64 / ne } else { 0.0 };

    let mut mv = MetricVector::default();
    for s in 0..2 {
        mv.node_state[s] = node_frac(node_state[s]);
        for t in 0..2 {
            mv.node_transition[s][t] = node_frac(node_trans[s][t]);
        }
    }
    for s in 0..4 {
        mv.edge_state[s] = edge_frac(edge_state[s]);
        for t in 0..4 {
            mv.edge_transition[s][t] = edge_frac(edge_trans[s][t]);
        }
    }
    Ok(mv)
}

/// Projects out the four dominant metrics, keeping the canonical order.
pub fn validation_vector(mv: &MetricVector) -> ValidationVector {
    let mut out = [0.0; 22];
    out[0] = mv.node_state[1];
    out[1] = mv.edge_state[1];
    out[2] = mv.edge_state[2];
    out[3] = mv.edge_state[3];
    out[4] = mv.node_transition[0][1];
    out[5] = mv.node_transition[1][0];
    out[6] = mv.node_transition[1][1];
    let mut k = 7;
    for from in 0..4 {
        for to in 0..4 {
            if from == 0 && to == 0 {
                continue;
            }
            out[k] = mv.edge_transition[from][to];
            k += 1;
        }
    }
    out
}

/// Ground-truth change vector between two crawls of the same graph.
pub fn ground_truth_vector(
    g: &DirectedGraph,
    earlier: &BTreeMap<NodeId, Label>,
    later: &BTreeMap<NodeId, Label>,
) -> Result<ValidationVector> {
    Ok(validation_vector(&metric_vector(g, earlier, later)?))
}
