//! Synthetic benchmark graphs with planted ground-truth communities.

mod hsbm;
mod lfr;

pub use hsbm::{generate_hsbm, hierarchical_matrix, planted_partition_matrix, HsbmParams};
pub use lfr::{generate_lfr_like, LfrParams};

use serde::Serialize;

use crate::graph::{Graph, NodeSet};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "model")]
pub enum GeneratorParams {
    Hsbm(HsbmParams),
    Lfr(LfrParams),
}

/// A generated graph with its ground-truth partition.
#[derive(Debug, Clone)]
pub struct PlantedGraph {
    pub graph: Graph,
    pub communities: Vec<NodeSet>,
    pub params: GeneratorParams,
}

impl PlantedGraph {
    /// Community index of every node.
    pub fn membership(&self) -> Vec<usize> {
        let mut m = vec![usize::MAX; self.graph.node_count()];
        for (c, set) in self.communities.iter().enumerate() {
            for v in set.iter() {
                m[v] = c;
            }
        }
        m
    }

    /// Mean over nodes with at least one edge of the share of their edges
    /// that leave their community.
    pub fn realized_mixing(&self) -> f64 {
        let m = self.membership();
        let g = &self.graph;
        let (sum, count) = (0..g.node_count())
            .filter(|&v| g.degree(v) > 0)
            .map(|v| {
                let out = g.neighbors(v).iter().filter(|&&w| m[w] != m[v]).count();
                out as f64 / g.degree(v) as f64
            })
            .fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
        if count == 0 {
            0.0
        } else {
            sum / count as f64
        }
    }
}
