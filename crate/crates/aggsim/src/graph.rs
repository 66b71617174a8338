//! Directed social graph storage and structural queries.
//!
//! The graph is immutable once built: adjacency is stored as sorted index
//! lists in both directions plus the undirected union used by neighborhood
//! lookups and edge weights. Node ids are arbitrary non-negative integers;
//! internally every node gets a dense index in ascending id order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Integer id of a node as it appears in the input edge list.
///
/// Ids double as the ordering key of the `network-id` schedule (older
/// accounts have smaller ids).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for NodeId {
    fn from(v: u64) -> Self {
        NodeId(v)
    }
}

/// What the loader dropped while enforcing the simple-graph invariants.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub self_loops_dropped: usize,
    pub duplicate_edges_dropped: usize,
}

/// Immutable directed graph over integer node ids.
///
/// No self-loops, no duplicate edges; `in` adjacency is the exact transpose
/// of `out` adjacency. Safe to share across threads once built.
#[derive(Debug, Clone)]
pub struct DirectedGraph {
    ids: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    /// Undirected neighborhood: union of out- and in-neighbors, sorted.
    nbr: Vec<Vec<usize>>,
    edge_count: usize,
}

impl DirectedGraph {
    /// Builds a graph from an explicit node set plus directed edges.
    ///
    /// Endpoints not listed in `nodes` are added; self-loops and duplicate
    /// edges are dropped and counted.
    pub fn from_edges(
        nodes: impl IntoIterator<Item = NodeId>,
        edges: &[(NodeId, NodeId)],
    ) -> (Self, LoadStats) {
        let mut id_set: BTreeSet<NodeId> = nodes.into_iter().collect();
        for &(u, v) in edges {
            id_set.insert(u);
            id_set.insert(v);
        }
        let ids: Vec<NodeId> = id_set.into_iter().collect();
        let index: HashMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &n)| (n, i)).collect();

        let mut stats = LoadStats::default();
        let n = ids.len();
        let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                stats.self_loops_dropped += 1;
                continue;
            }
            pairs.push((index[&u], index[&v]));
        }
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        stats.duplicate_edges_dropped = before - pairs.len();

        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(u, v) in &pairs {
            out[u].push(v);
            inn[v].push(u);
        }
        for l in inn.iter_mut() {
            l.sort_unstable();
        }

        let mut nbr = vec![Vec::new(); n];
        for (u, list) in nbr.iter_mut().enumerate() {
            *list = merge_sorted(&out[u], &inn[u]);
        }

        let edge_count = pairs.len();
        (
            DirectedGraph {
                ids,
                index,
                out,
                inn,
                nbr,
                edge_count,
            },
            stats,
        )
    }

    /// Parses a plain edge-list stream: one `u v` or `u,v` pair per line,
    /// `#` comments and blank lines skipped.
    pub fn from_edge_list(reader: impl BufRead) -> Result<(Self, LoadStats)> {
        let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut tokens = trimmed.split(|c: char| c == ',' || c.is_whitespace());
            let mut next_tok = || tokens.by_ref().find(|t| !t.is_empty());
            let u = next_tok()
                .ok_or_else(|| Error::parse(lineno, "expected two node ids, found none"))?;
            let v = next_tok()
                .ok_or_else(|| Error::parse(lineno, "expected two node ids, found one"))?;
            if let Some(extra) = next_tok() {
                return Err(Error::parse(
                    lineno,
                    format!("unexpected trailing token `{extra}`"),
                ));
            }
            let u: u64 = u
                .parse()
                .map_err(|_| Error::parse(lineno, format!("invalid node id `{u}`")))?;
            let v: u64 = v
                .parse()
                .map_err(|_| Error::parse(lineno, format!("invalid node id `{v}`")))?;
            edges.push((NodeId(u), NodeId(v)));
        }
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(Self::from_edges(std::iter::empty(), &edges))
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Node ids in ascending order.
    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        self.ids.iter().copied()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index.contains_key(&id)
    }

    /// Dense index of `id`; indices follow ascending id order.
    pub fn node_index(&self, id: NodeId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn id_of(&self, idx: usize) -> NodeId {
        self.ids[idx]
    }

    fn require(&self, id: NodeId) -> Result<usize> {
        self.node_index(id).ok_or(Error::UnknownNode(id))
    }

    pub fn out_idx(&self, idx: usize) -> &[usize] {
        &self.out[idx]
    }

    pub fn in_idx(&self, idx: usize) -> &[usize] {
        &self.inn[idx]
    }

    /// Undirected neighborhood as sorted dense indices.
    pub fn neighbors_idx(&self, idx: usize) -> &[usize] {
        &self.nbr[idx]
    }

    pub fn out_degree(&self, idx: usize) -> usize {
        self.out[idx].len()
    }

    pub fn in_degree(&self, idx: usize) -> usize {
        self.inn[idx].len()
    }

    /// In-degree plus out-degree, the popularity key of the ordering strategies.
    pub fn total_degree(&self, idx: usize) -> usize {
        self.out[idx].len() + self.inn[idx].len()
    }

    /// Directed edges in canonical order: ascending source id, then target id.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(move |(u, targets)| targets.iter().map(move |&v| (self.ids[u], self.ids[v])))
    }

    /// The neighborhood of `i`: union of its out- and in-neighbors.
    pub fn neighbors(&self, i: NodeId) -> Result<BTreeSet<NodeId>> {
        let idx = self.require(i)?;
        Ok(self.nbr[idx].iter().map(|&j| self.ids[j]).collect())
    }

    /// Jaccard overlap of the two nodes' neighborhoods, in [0, 1].
    ///
    /// Returns 0 when both neighborhoods are empty.
    pub fn jaccard_weight(&self, i: NodeId, j: NodeId) -> Result<f64> {
        let ui = self.require(i)?;
        let uj = self.require(j)?;
        Ok(self.jaccard_idx(ui, uj))
    }

    pub fn jaccard_idx(&self, ui: usize, uj: usize) -> f64 {
        let a = &self.nbr[ui];
        let b = &self.nbr[uj];
        if a.is_empty() && b.is_empty() {
            return 0.0;
        }
        let mut inter = 0usize;
        let (mut x, mut y) = (0usize, 0usize);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    inter += 1;
                    x += 1;
                    y += 1;
                }
            }
        }
        let union = a.len() + b.len() - inter;
        inter as f64 / union as f64
    }

    /// In/out degree ratio clamped to [0, 1].
    ///
    /// A node with no out-edges gets 1 when it has in-edges (maximal power)
    /// and 0 when fully isolated.
    pub fn power_score(&self, i: NodeId) -> Result<f64> {
        let idx = self.require(i)?;
        Ok(self.power_idx(idx))
    }

    pub fn power_idx(&self, idx: usize) -> f64 {
        let ind = self.inn[idx].len();
        let outd = self.out[idx].len();
        if outd == 0 {
            if ind > 0 {
                1.0
            } else {
                0.0
            }
        } else {
            (ind as f64 / outd as f64).min(1.0)
        }
    }

    /// Vertex-induced subgraph on the largest strongly connected component.
    ///
    /// Ties between equally sized components go to the one containing the
    /// smallest node id.
    pub fn largest_scc(&self) -> Result<DirectedGraph> {
        if self.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let components = self.tarjan_scc();
        let best = components
            .iter()
            .min_by_key(|comp| {
                let min_id = comp.iter().map(|&v| self.ids[v]).min().unwrap();
                (std::cmp::Reverse(comp.len()), min_id)
            })
            .unwrap();
        let members: BTreeSet<usize> = best.iter().copied().collect();
        let nodes: Vec<NodeId> = members.iter().map(|&v| self.ids[v]).collect();
        let mut edges = Vec::new();
        for &u in &members {
            for &v in &self.out[u] {
                if members.contains(&v) {
                    edges.push((self.ids[u], self.ids[v]));
                }
            }
        }
        let (sub, _) = DirectedGraph::from_edges(nodes, &edges);
        Ok(sub)
    }

    /// Iterative Tarjan; recursion would overflow on deep real-world graphs.
    fn tarjan_scc(&self) -> Vec<Vec<usize>> {
        let n = self.ids.len();
        let mut idx = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut counter = 0usize;
        // (node, next out-edge position to visit)
        let mut call: Vec<(usize, usize)> = Vec::new();

        for root in 0..n {
            if idx[root] != usize::MAX {
                continue;
            }
            call.push((root, 0));
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if *pos == 0 {
                    idx[v] = counter;
                    low[v] = counter;
                    counter += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                if let Some(&w) = self.out[v].get(*pos) {
                    *pos += 1;
                    if idx[w] == usize::MAX {
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(idx[w]);
                    }
                } else {
                    if low[v] == idx[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack underflow");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comps.push(comp);
                    }
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                }
            }
        }
        comps
    }
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0usize, 0usize);
    while x < a.len() || y < b.len() {
        let take_a = match (a.get(x), b.get(y)) {
            (Some(&av), Some(&bv)) => {
                if av == bv {
                    y += 1;
                    true
                } else {
                    av < bv
                }
            }
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        if take_a {
            merged.push(a[x]);
            x += 1;
        } else {
            merged.push(b[y]);
            y += 1;
        }
    }
    merged
}
