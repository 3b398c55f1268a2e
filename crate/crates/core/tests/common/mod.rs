#![allow(dead_code)]

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seedgerm::Graph;

/// Random connected graph: a random spanning tree plus each other pair with
/// probability `p`.
pub fn random_connected(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        edges.push((perm[i], perm[j]));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Random graph that may be disconnected.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn connected_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n, 0.0..0.5f64, any::<u64>()).prop_map(|(n, p, s)| random_connected(n, p, s))
}

pub fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0..0.6f64, any::<u64>()).prop_map(|(n, p, s)| random_graph(n, p, s))
}

/// Cycle on `n` nodes.
pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Two `k`-cliques joined by the bridge `(k-1, k)`.
pub fn barbell(k: usize) -> Graph {
    let mut edges = Vec::new();
    for off in [0, k] {
        for u in 0..k {
            for v in u + 1..k {
                edges.push((off + u, off + v));
            }
        }
    }
    edges.push((k - 1, k));
    Graph::from_edges(2 * k, &edges).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
