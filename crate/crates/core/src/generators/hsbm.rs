use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{GeneratorParams, PlantedGraph};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HsbmParams {
    pub block_sizes: Vec<usize>,
    pub probabilities: Vec<Vec<f64>>,
    pub seed: u64,
}

/// Stochastic block model: nodes are numbered block by block and each pair
/// is joined independently with its block-pair probability. The blocks are
/// the ground truth.
pub fn generate_hsbm(block_sizes: &[usize], prob_matrix: &[Vec<f64>], seed: u64) -> Result<PlantedGraph> {
    let k = block_sizes.len();
    if k == 0 || block_sizes.contains(&0) {
        return Err(Error::InvalidParameter("blocks must be nonempty".into()));
    }
    if prob_matrix.len() != k || prob_matrix.iter().any(|row| row.len() != k) {
        return Err(Error::InvalidParameter(format!(
            "probability matrix must be {k}x{k}"
        )));
    }
    for (i, row) in prob_matrix.iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")));
            }
            if p != prob_matrix[j][i] {
                return Err(Error::InvalidParameter("probability matrix is not symmetric".into()));
            }
        }
    }

    let block: Vec<usize> = block_sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
        .collect();
    let n = block.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        let row = &prob_matrix[block[u]];
        for v in u + 1..n {
            if rng.random::<f64>() < row[block[v]] {
                edges.push((u, v));
            }
        }
    }
    let graph = Graph::from_edges(n, &edges)?;
    let mut start = 0;
    let communities = block_sizes
        .iter()
        .map(|&s| {
            let set: NodeSet = (start..start + s).collect();
            start += s;
            set
        })
        .collect();
    Ok(PlantedGraph {
        graph,
        communities,
        params: GeneratorParams::Hsbm(HsbmParams {
            block_sizes: block_sizes.to_vec(),
            probabilities: prob_matrix.to_vec(),
            seed,
        }),
    })
}

/// `blocks × blocks` matrix with `p_in` on the diagonal and `p_out` elsewhere.
pub fn planted_partition_matrix(blocks: usize, p_in: f64, p_out: f64) -> Vec<Vec<f64>> {
    (0..blocks)
        .map(|i| (0..blocks).map(|j| if i == j { p_in } else { p_out }).collect())
        .collect()
}

/// Nested block probabilities for a tree of `levels` levels with `branching`
/// children per node (`branching^levels` leaf blocks). Two leaf blocks whose
/// lowest common ancestor is `h` levels up are joined with `p_levels[h]`;
/// `p_levels[0]` applies within a block.
pub fn hierarchical_matrix(levels: usize, branching: usize, p_levels: &[f64]) -> Result<Vec<Vec<f64>>> {
    if branching < 2 || levels == 0 {
        return Err(Error::InvalidParameter(
            "hierarchy needs at least one level and branching of at least 2".into(),
        ));
    }
    if p_levels.len() != levels + 1 {
        return Err(Error::InvalidParameter(format!(
            "expected {} level probabilities, got {}",
            levels + 1,
            p_levels.len()
        )));
    }
    let blocks = branching.pow(levels as u32);
    let height = |mut a: usize, mut b: usize| {
        let mut h = 0;
        while a != b {
            a /= branching;
            b /= branching;
            h += 1;
        }
        h
    };
    Ok((0..blocks)
        .map(|i| (0..blocks).map(|j| p_levels[height(i, j)]).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjoint_cliques() {
        let pg = generate_hsbm(&[4, 5], &planted_partition_matrix(2, 1.0, 0.0), 1).unwrap();
        assert_eq!(pg.graph.edge_count(), 6 + 10);
        assert_eq!(pg.graph.components().count, 2);
        assert_eq!(pg.communities[1].sorted(), vec![4, 5, 6, 7, 8]);
    }

    #[test]
    fn single_block_complete() {
        let pg = generate_hsbm(&[6], &[vec![1.0]], 3).unwrap();
        assert_eq!(pg.graph.edge_count(), 15);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = vec![vec![0.5, 0.1], vec![0.2, 0.5]];
        assert!(generate_hsbm(&[3, 3], &m, 0).is_err());
        assert!(generate_hsbm(&[3, 0], &planted_partition_matrix(2, 0.5, 0.1), 0).is_err());
        assert!(generate_hsbm(&[3], &[vec![1.5]], 0).is_err());
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let m = planted_partition_matrix(2, 0.3, 0.05);
        let a = generate_hsbm(&[30, 30], &m, 5).unwrap();
        let b = generate_hsbm(&[30, 30], &m, 5).unwrap();
        let c = generate_hsbm(&[30, 30], &m, 6).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_ne!(a.graph.edges(), c.graph.edges());
    }

    #[test]
    fn hierarchy_levels() {
        let m = hierarchical_matrix(2, 2, &[0.9, 0.3, 0.01]).unwrap();
        assert_eq!(m.len(), 4);
        assert_eq!(m[0], vec![0.9, 0.3, 0.01, 0.01]);
        assert_eq!(m[3], vec![0.01, 0.01, 0.3, 0.9]);
        assert!(hierarchical_matrix(2, 2, &[0.9, 0.3]).is_err());
    }
}
