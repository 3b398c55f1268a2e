//! Local community detection from seed nodes using effective resistance
//! germination and personalized PageRank.

// Parameter checks use `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod generators;
pub mod germination;
pub mod graph;
pub mod io;
pub mod laplacian;
pub mod pipeline;
pub mod ppr;
pub mod resistance;
pub mod scoring;
pub mod spanning_tree;

pub use error::{Error, Result};
pub use experiment::{run_experiment, ExperimentReport, ExperimentSpec};
pub use generators::{generate_hsbm, generate_lfr_like, LfrParams, PlantedGraph};
pub use germination::{germinate, GerminationConfig, GerminationResult};
pub use graph::{build_graph, cut_size, volume, Graph, NodeSet};
pub use pipeline::{detect, DetectionOutcome, Detector, DetectorConfig, Method};
pub use ppr::{personalized_pagerank, ppr_sweep, PprBackend, ScoreVector};
pub use resistance::{edge_resistances, EdgeResistanceMap, ResistanceBackend};
pub use scoring::{conductance, precision_recall_f1, CutRule, SweepProfile};
