//! Fixtures shared by the criterion benchmarks.

use seedgerm::generators::{generate_hsbm, generate_lfr_like, planted_partition_matrix};
use seedgerm::{LfrParams, NodeSet, PlantedGraph};

/// Two-block planted partition with `block` nodes per block.
pub fn hsbm_fixture(block: usize) -> PlantedGraph {
    generate_hsbm(&[block, block], &planted_partition_matrix(2, 0.3, 0.01), 1).expect("valid hsbm")
}

pub fn lfr_fixture(n: usize) -> PlantedGraph {
    generate_lfr_like(&LfrParams {
        n,
        seed: 1,
        ..LfrParams::default()
    })
    .expect("valid lfr parameters")
}

pub fn single_seed(v: usize) -> NodeSet {
    [v].into_iter().collect()
}
