//! Node labels and per-run aggression state.

use std::collections::BTreeMap;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Normal,
    Aggressive,
}

impl Label {
    pub fn parse(token: &str) -> Option<Label> {
        if token.eq_ignore_ascii_case("aggressive") {
            Some(Label::Aggressive)
        } else if token.eq_ignore_ascii_case("normal") {
            Some(Label::Normal)
        } else {
            None
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Normal => "normal",
            Label::Aggressive => "aggressive",
        }
    }
}

/// Mutable per-run state of one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeState {
    /// Current aggression score in [0, 1].
    pub score: f64,
    /// Score at seeding time; never touched afterwards.
    pub initial_score: f64,
    pub label: Option<Label>,
}

/// One entry per node, aligned to the graph's dense indices.
pub type NodeStates = Vec<NodeState>;

/// Parses a `node,label` file into the entries it actually contains.
///
/// A leading `node,label` header, blank lines, and `#` comments are
/// skipped; labels are case-insensitive; a node listed twice keeps the
/// last entry. Nodes missing from the file are *not* filled in here —
/// seeding treats them as normal.
pub fn load_labels(reader: impl BufRead) -> Result<BTreeMap<NodeId, Label>> {
    let mut map = BTreeMap::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.splitn(2, ',');
        let node_tok = parts.next().unwrap_or("").trim();
        let label_tok = parts.next().map(str::trim).ok_or_else(|| {
            Error::parse(lineno, "expected `node,label`")
        })?;
        if node_tok.eq_ignore_ascii_case("node") && label_tok.eq_ignore_ascii_case("label") {
            continue; // header
        }
        let node: u64 = node_tok
            .parse()
            .map_err(|_| Error::parse(lineno, format!("invalid node id `{node_tok}`")))?;
        let label = Label::parse(label_tok).ok_or_else(|| {
            Error::parse(
                lineno,
                format!("unknown label `{label_tok}` (expected aggressive or normal)"),
            )
        })?;
        map.insert(NodeId(node), label);
    }
    Ok(map)
}

/// Seeds every node's state from the label map.
///
/// Aggressive nodes start at score 1, everyone else (including nodes
/// absent from the map) at 0.
pub fn seed_states(g: &DirectedGraph, labels: &BTreeMap<NodeId, Label>) -> NodeStates {
    g.nodes()
        .map(|id| {
            let label = labels.get(&id).copied();
            let score = match label {
                Some(Label::Aggressive) => 1.0,
                _ => 0.0,
            };
            NodeState {
                score,
                initial_score: score,
                label,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn labels(text: &str) -> BTreeMap<NodeId, Label> {
        load_labels(Cursor::new(text)).unwrap()
    }

    #[test]
    fn parses_single_entry() {
        let m = labels("7,aggressive");
        assert_eq!(m.len(), 1);
        assert_eq!(m[&NodeId(7)], Label::Aggressive);
    }

    #[test]
    fn labels_are_case_insensitive() {
        let m = labels("7,Aggressive\n9,normal");
        assert_eq!(m[&NodeId(7)], Label::Aggressive);
        assert_eq!(m[&NodeId(9)], Label::Normal);
    }

    #[test]
    fn rejects_unknown_label() {
        let err = load_labels(Cursor::new("7,bully")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn skips_optional_header() {
        let m = labels("node,label\n7,aggressive");
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn later_duplicate_wins() {
        let m = labels("7,aggressive\n7,normal");
        assert_eq!(m[&NodeId(7)], Label::Normal);
    }

    #[test]
    fn seeding_follows_labels() {
        let (g, _) = DirectedGraph::from_edges(
            std::iter::empty(),
            &[(NodeId(7), NodeId(8)), (NodeId(8), NodeId(9))],
        );
        let states = seed_states(&g, &labels("7,aggressive"));
        let at = |id: u64| states[g.node_index(NodeId(id)).unwrap()];
        assert_eq!(at(7).score, 1.0);
        assert_eq!(at(7).initial_score, 1.0);
        assert_eq!(at(7).label, Some(Label::Aggressive));
        // unlabeled nodes default to normal scores
        assert_eq!(at(8).score, 0.0);
        assert_eq!(at(9).label, None);
    }

    #[test]
    fn empty_label_map_seeds_zeroes() {
        let (g, _) =
            DirectedGraph::from_edges(std::iter::empty(), &[(NodeId(1), NodeId(2))]);
        let states = seed_states(&g, &BTreeMap::new());
        assert!(states.iter().all(|s| s.score == 0.0 && s.initial_score == 0.0));
    }
}
