//! Uniform spanning tree sampling with Wilson's algorithm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// One spanning tree, stored as parent pointers toward a random root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTreeSample {
    pub parent: Vec<Option<usize>>,
    pub seed: u64,
    pub stream: u64,
}

impl SpanningTreeSample {
    pub fn root(&self) -> usize {
        self.parent.iter().position(|p| p.is_none()).unwrap()
    }

    /// Tree edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .parent
            .iter()
            .enumerate()
            .filter_map(|(u, p)| p.map(|v| (u.min(v), u.max(v))))
            .collect();
        e.sort_unstable();
        e
    }
}

/// Rng for sample `stream` of a run seeded with `seed`. Streams are
/// independent, so samples can be drawn in any order or in parallel.
pub fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws a spanning tree uniformly at random. Fails on disconnected graphs.
pub fn sample_spanning_tree(g: &Graph, seed: u64, stream: u64) -> Result<SpanningTreeSample> {
    if !g.is_connected() {
        return Err(Error::Disconnected(
            "spanning trees exist only on connected graphs".into(),
        ));
    }
    let mut rng = sample_rng(seed, stream);
    let mut parent = vec![None; g.node_count()];
    wilson(g, &mut rng, &mut parent, &mut vec![false; g.node_count()]);
    Ok(SpanningTreeSample {
        parent,
        seed,
        stream,
    })
}

/// Wilson's loop-erased random walk sampler. The graph must be connected.
/// `parent` and `in_tree` are scratch buffers of length `n`, overwritten.
pub(crate) fn wilson<R: Rng>(
    g: &Graph,
    rng: &mut R,
    parent: &mut [Option<usize>],
    in_tree: &mut [bool],
) {
    let n = g.node_count();
    in_tree.iter_mut().for_each(|b| *b = false);
    parent.iter_mut().for_each(|p| *p = None);
    let root = rng.random_range(0..n);
    in_tree[root] = true;
    for start in 0..n {
        // Overwriting `parent` on revisits erases the loops of the walk.
        let mut u = start;
        while !in_tree[u] {
            let nbrs = g.neighbors(u);
            let next = nbrs[rng.random_range(0..nbrs.len())];
            parent[u] = Some(next);
            u = next;
        }
        u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            u = parent[u].unwrap();
        }
    }
}
