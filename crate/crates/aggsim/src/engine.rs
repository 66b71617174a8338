//! Interaction scheduling and the propagation loop.
//!
//! A run is: sample a fraction of the directed edges, order them with one
//! of five strategies, then fire the model's update once per edge, in
//! place, capturing equally spaced snapshots of the whole score state.
//! For a stored edge u→v the influenced node is u and the influencer v —
//! influence flows from the followed account to the follower.

use std::cmp::Reverse;
use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::models::{apply_model, ModelSpec, NeighborView, UpdateContext};
use crate::state::{Label, NodeState, NodeStates};

/// How the sampled edges are sequenced before firing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderingKind {
    Random,
    MostPopular,
    LeastPopular,
    Neighborhood,
    NetworkId,
}

impl OrderingKind {
    pub const ALL: [OrderingKind; 5] = [
        OrderingKind::Random,
        OrderingKind::MostPopular,
        OrderingKind::LeastPopular,
        OrderingKind::Neighborhood,
        OrderingKind::NetworkId,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OrderingKind::Random => "random",
            OrderingKind::MostPopular => "most-popular",
            OrderingKind::LeastPopular => "least-popular",
            OrderingKind::Neighborhood => "neighborhood",
            OrderingKind::NetworkId => "network-id",
        }
    }

    pub fn parse(name: &str) -> Result<OrderingKind> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == name)
            .ok_or_else(|| {
                let valid = Self::ALL.map(|k| k.as_str()).join(", ");
                Error::InvalidParameter(format!("unknown ordering `{name}`; valid: {valid}"))
            })
    }
}

/// The sampled interaction set, before ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    /// (influenced, influencer) pairs.
    pub edges: Vec<(NodeId, NodeId)>,
    pub selection_fraction: f64,
    pub rng_seed: u64,
}

/// round(fraction · edges), kept within [1, edges].
pub fn sample_count(fraction: f64, edge_count: usize) -> usize {
    ((fraction * edge_count as f64).round() as usize).clamp(1, edge_count.max(1))
}

/// Uniform sample of `fraction` of the graph's edges, without replacement.
pub fn select_edges(g: &DirectedGraph, fraction: f64, rng_seed: u64) -> Result<Schedule> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "edge fraction must be in (0, 1], got {fraction}"
        )));
    }
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let all: Vec<(NodeId, NodeId)> = g.edges().collect();
    let amount = sample_count(fraction, all.len());
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let picked = rand::seq::index::sample(&mut rng, all.len(), amount);
    Ok(Schedule {
        edges: picked.iter().map(|i| all[i]).collect(),
        selection_fraction: fraction,
        rng_seed,
    })
}

/// Sequences the sampled edges. All strategies are deterministic given the
/// seed; tie-breaks always fall back to ascending (influenced, influencer).
pub fn order_edges(
    edges: &[(NodeId, NodeId)],
    kind: OrderingKind,
    g: &DirectedGraph,
    rng_seed: u64,
) -> Result<Vec<(NodeId, NodeId)>> {
    let mut out = edges.to_vec();
    let idx_of = |id: NodeId| g.node_index(id).ok_or(Error::UnknownNode(id));
    match kind {
        OrderingKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            out.shuffle(&mut rng);
        }
        OrderingKind::MostPopular => {
            let mut keyed = keyed_by_influencer_degree(&out, g, idx_of)?;
            keyed.sort_unstable_by_key(|&(deg, i, j)| (Reverse(deg), i, j));
            out = keyed.into_iter().map(|(_, i, j)| (i, j)).collect();
        }
        OrderingKind::LeastPopular => {
            let mut keyed = keyed_by_influencer_degree(&out, g, idx_of)?;
            keyed.sort_unstable();
            out = keyed.into_iter().map(|(_, i, j)| (i, j)).collect();
        }
        OrderingKind::Neighborhood => {
            let disc = bfs_discovery(g);
            let mut keyed: Vec<(usize, NodeId, NodeId)> = Vec::with_capacity(out.len());
            for &(i, j) in &out {
                keyed.push((disc[idx_of(i)?], i, j));
            }
            keyed.sort_unstable();
            out = keyed.into_iter().map(|(_, i, j)| (i, j)).collect();
        }
        OrderingKind::NetworkId => out.sort_unstable(),
    }
    Ok(out)
}

fn keyed_by_influencer_degree(
    edges: &[(NodeId, NodeId)],
    g: &DirectedGraph,
    idx_of: impl Fn(NodeId) -> Result<usize>,
) -> Result<Vec<(usize, NodeId, NodeId)>> {
    edges
        .iter()
        .map(|&(i, j)| Ok((g.total_degree(idx_of(j)?), i, j)))
        .collect()
}

/// Breadth-first discovery index of every node on the undirected view.
///
/// Each component is explored from its highest-total-degree node (ties to
/// the smallest id); components themselves start in that same priority.
fn bfs_discovery(g: &DirectedGraph) -> Vec<usize> {
    let n = g.node_count();
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_unstable_by_key(|&i| (Reverse(g.total_degree(i)), i));

    let mut disc = vec![usize::MAX; n];
    let mut next = 0usize;
    let mut queue = VecDeque::new();
    for start in starts {
        if disc[start] != usize::MAX {
            continue;
        }
        disc[start] = next;
        next += 1;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors_idx(u) {
                if disc[w] == usize::MAX {
                    disc[w] = next;
                    next += 1;
                    queue.push_back(w);
                }
            }
        }
    }
    disc
}

/// Full score state at one point of the run; `scores` is aligned to the
/// graph's dense node indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub index: usize,
    pub interactions_done: usize,
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// T_0 first, then `snapshot_count` more.
    pub snapshots: Vec<Snapshot>,
    /// Interactions whose update actually fired (HK can veto).
    pub effective_interactions: usize,
    pub model: String,
}

struct PairInfo {
    idx: usize,
    weight: f64,
    power: f64,
}

/// Runs one full pass over the schedule.
///
/// Updates are asynchronous: each fired interaction immediately rewrites
/// the influenced node's score, and later interactions see the new value.
/// Snapshots land every ⌈m/snapshot_count⌉ interactions, the last one
/// absorbing rounding so it always covers the whole schedule; a schedule
/// shorter than the snapshot count duplicates the final state.
pub fn run_simulation(
    g: &DirectedGraph,
    states: &NodeStates,
    spec: &ModelSpec,
    schedule: &Schedule,
    ordering: OrderingKind,
    snapshot_count: usize,
) -> Result<RunResult> {
    if snapshot_count == 0 {
        return Err(Error::InvalidParameter(
            "snapshot count must be at least 1".into(),
        ));
    }
    if states.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            left: states.len(),
            right: g.node_count(),
        });
    }
    let ordered = order_edges(
        &schedule.edges,
        ordering,
        g,
        derive_seed(schedule.rng_seed, "order"),
    )?;
    let mut resolved: Vec<(usize, usize)> = Vec::with_capacity(ordered.len());
    for (u, v) in ordered {
        let ui = g.node_index(u).ok_or(Error::UnknownNode(u))?;
        let vi = g.node_index(v).ok_or(Error::UnknownNode(v))?;
        resolved.push((ui, vi));
    }

    let n = g.node_count();
    let power: Vec<f64> = (0..n).map(|i| g.power_idx(i)).collect();
    let mut st: Vec<NodeState> = states.clone();
    // per-node neighborhood info, built lazily on first interaction
    let mut cache: Vec<Option<Vec<PairInfo>>> = (0..n).map(|_| None).collect();
    let mut views: Vec<NeighborView> = Vec::new();

    let m = resolved.len();
    let stride = m.div_ceil(snapshot_count);
    let snap = |index: usize, done: usize, st: &[NodeState]| Snapshot {
        index,
        interactions_done: done,
        scores: st.iter().map(|s| s.score).collect(),
    };
    let mut snapshots = Vec::with_capacity(snapshot_count + 1);
    snapshots.push(snap(0, 0, &st));
    let mut next_k = 1usize;
    let mut effective = 0usize;

    for (t, &(u, v)) in resolved.iter().enumerate() {
        let t = t + 1;
        let infos = cache[u].get_or_insert_with(|| {
            g.neighbors_idx(u)
                .iter()
                .map(|&j| PairInfo {
                    idx: j,
                    weight: g.jaccard_idx(u, j),
                    power: power[j],
                })
                .collect()
        });
        let pos = infos
            .binary_search_by_key(&v, |p| p.idx)
            .map_err(|_| {
                Error::InvalidParameter(format!(
                    "scheduled edge {} -> {} is not in the graph",
                    g.id_of(u),
                    g.id_of(v)
                ))
            })?;
        if spec.is_neighborhood() {
            views.clear();
            views.extend(infos.iter().map(|p| NeighborView {
                id: g.id_of(p.idx),
                score: st[p.idx].score,
                weight: p.weight,
                power: p.power,
            }));
        } else {
            views.clear();
        }
        let ctx = UpdateContext {
            influenced: g.id_of(u),
            influencer: g.id_of(v),
            score_self: st[u].score,
            score_other: st[v].score,
            initial_self: st[u].initial_score,
            edge_weight: infos[pos].weight,
            power_self: power[u],
            power_other: power[v],
            neighbors: &views,
        };
        let update = apply_model(spec, &ctx);
        st[u].score = update.score;
        effective += update.applied as usize;

        while next_k <= snapshot_count && t == (next_k * stride).min(m) {
            snapshots.push(snap(next_k, t, &st));
            next_k += 1;
        }
    }
    // short or empty schedules: pad with copies of the final state
    while next_k <= snapshot_count {
        snapshots.push(snap(next_k, m, &st));
        next_k += 1;
    }

    Ok(RunResult {
        snapshots,
        effective_interactions: effective,
        model: spec.name.to_string(),
    })
}

/// Snapshot score means grouped by each node's initial label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMeans {
    /// Absent when no node carries the label.
    pub aggressive: Option<f64>,
    pub normal: Option<f64>,
    pub all: f64,
}

pub fn mean_scores_by_class(
    g: &DirectedGraph,
    snapshot: &Snapshot,
    labels: &std::collections::BTreeMap<NodeId, Label>,
) -> Result<ClassMeans> {
    if snapshot.scores.len() != g.node_count() || g.node_count() == 0 {
        return Err(Error::DimensionMismatch {
            left: snapshot.scores.len(),
            right: g.node_count(),
        });
    }
    let (mut a_sum, mut a_n) = (0.0, 0usize);
    let (mut n_sum, mut n_n) = (0.0, 0usize);
    for (idx, id) in g.nodes().enumerate() {
        let s = snapshot.scores[idx];
        match labels.get(&id) {
            Some(Label::Aggressive) => {
                a_sum += s;
                a_n += 1;
            }
            _ => {
                n_sum += s;
                n_n += 1;
            }
        }
    }
    let mean = |sum: f64, n: usize| (n > 0).then(|| sum / n as f64);
    Ok(ClassMeans {
        aggressive: mean(a_sum, a_n),
        normal: mean(n_sum, n_n),
        all: (a_sum + n_sum) / (a_n + n_n) as f64,
    })
}

/// FNV-1a over raw bytes; the stable hash behind all derived seeds.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Stable per-purpose seed: hash of the base seed plus a tag string.
pub fn derive_seed(base: u64, tag: &str) -> u64 {
    let mut buf = Vec::with_capacity(8 + tag.len());
    buf.extend_from_slice(&base.to_le_bytes());
    buf.extend_from_slice(tag.as_bytes());
    fnv1a64(&buf)
}
