//! Deterministic simulation of aggression propagation on directed social
//! graphs.
//!
//! The pipeline: load a directed graph and seed labels, sample a fraction
//! of its edges, order them, fire one of 26 opinion-dynamics update rules
//! per interaction, snapshot the score state at regular intervals, then
//! reduce snapshots to state/transition metrics and compare those against
//! a ground-truth change vector. Everything is seeded and reproducible:
//! the same inputs always produce byte-identical outputs.

pub mod engine;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod models;
pub mod similarity;
pub mod state;

pub use engine::{
    derive_seed, fnv1a64, mean_scores_by_class, order_edges, run_simulation, sample_count,
    select_edges, ClassMeans, OrderingKind, RunResult, Schedule, Snapshot,
};
pub use error::{Error, Result};
pub use evaluation::{auc, precision_recall, prediction_report, Confusion, PredictionReport};
pub use features::{node_features, FeatureTable, NodeFeatures};
pub use graph::{DirectedGraph, LoadStats, NodeId};
pub use metrics::{
    binarize, ground_truth_vector, metric_vector, validation_vector, MetricVector,
    ValidationVector, METRIC_NAMES, VALIDATION_NAMES,
};
pub use models::{
    apply_model, find_model, model_catalog, ModelFamily, ModelSpec, NeighborView, SelectorKind,
    Update, UpdateContext,
};
pub use similarity::{
    compare_run, cosine, euclidean, measure, pearson, spearman, DegeneracyFlags, Similarity,
    SimilarityReport,
};
pub use state::{load_labels, seed_states, Label, NodeState, NodeStates};
