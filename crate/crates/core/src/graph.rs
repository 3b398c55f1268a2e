//! Undirected, unweighted graph storage.
//!
//! [`Graph`] is a CSR adjacency structure with sorted neighbor lists. Every
//! undirected edge also has a dense id in `0..m`, which lets per-edge data
//! (effective resistances, spanning-tree counts) live in flat vectors.
//!
//! Node ids are dense integers `0..n`. Each node keeps the external label it
//! was built from so that files can be written back in their original ids.

use std::collections::{HashMap, HashSet};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    slot_edge: Vec<usize>,
    edges: Vec<(usize, usize)>,
    labels: Vec<u64>,
}

impl Graph {
    /// Builds a graph on nodes `0..node_count` from an edge list.
    ///
    /// Self-loops and duplicate edges are dropped. Nodes without edges are kept.
    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        if node_count == 0 {
            return Err(Error::EmptyGraph);
        }
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= node_count {
                    return Err(Error::NodeOutOfRange {
                        node: w,
                        node_count,
                    });
                }
            }
        }
        let labels = (0..node_count as u64).collect();
        Ok(Self::assemble(labels, edges.iter().copied()))
    }

    fn assemble(labels: Vec<u64>, raw: impl Iterator<Item = (usize, usize)>) -> Graph {
        let n = labels.len();
        let mut self_loops = 0usize;
        let mut total = 0usize;
        let mut edges: Vec<(usize, usize)> = raw
            .filter_map(|(u, v)| {
                total += 1;
                if u == v {
                    self_loops += 1;
                    None
                } else {
                    Some((u.min(v), u.max(v)))
                }
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let duplicates = total - self_loops - edges.len();
        if self_loops > 0 || duplicates > 0 {
            log::info!(
                "input cleaning: dropped {self_loops} self-loops and {duplicates} duplicate edges"
            );
        }

        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0usize; 2 * edges.len()];
        let mut slot_edge = vec![0usize; 2 * edges.len()];
        // Edges are sorted by (u, v), so filling in this order leaves every
        // neighbor list sorted.
        for (id, &(u, v)) in edges.iter().enumerate() {
            targets[cursor[u]] = v;
            slot_edge[cursor[u]] = id;
            cursor[u] += 1;
        }
        for (id, &(u, v)) in edges.iter().enumerate() {
            targets[cursor[v]] = u;
            slot_edge[cursor[v]] = id;
            cursor[v] += 1;
        }
        for v in 0..n {
            let (lo, hi) = (offsets[v], offsets[v + 1]);
            let mut pairs: Vec<(usize, usize)> = targets[lo..hi]
                .iter()
                .copied()
                .zip(slot_edge[lo..hi].iter().copied())
                .collect();
            pairs.sort_unstable();
            for (k, (t, e)) in pairs.into_iter().enumerate() {
                targets[lo + k] = t;
                slot_edge[lo + k] = e;
            }
        }

        Graph {
            offsets,
            targets,
            slot_edge,
            edges,
            labels,
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sum of all degrees, `2m`.
    pub fn total_volume(&self) -> usize {
        self.targets.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|v| self.degree(v)).collect()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Neighbors of `v` paired with the id of the connecting edge.
    pub fn incident(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.slot_edge[range].iter().copied())
    }

    /// Undirected edges as `(u, v)` with `u < v`, indexed by edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.node_count() || v >= self.node_count() {
            return None;
        }
        let lo = self.offsets[u];
        self.neighbors(u)
            .binary_search(&v)
            .ok()
            .map(|k| self.slot_edge[lo + k])
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// External label of node `v`.
    pub fn label(&self, v: usize) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Map from external label to dense node id.
    pub fn label_index(&self) -> HashMap<u64, usize> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i))
            .collect()
    }

    /// Applies the Laplacian `D - A` to `x`.
    pub fn laplacian_apply(&self, x: &[f64], out: &mut [f64]) {
        for v in 0..self.node_count() {
            let s: f64 = self.neighbors(v).iter().map(|&w| x[w]).sum();
            out[v] = self.degree(v) as f64 * x[v] - s;
        }
    }

    /// Applies the signed incidence matrix (one row per edge, `+1` at the
    /// smaller endpoint and `-1` at the larger one).
    pub fn incidence_apply(&self, x: &[f64], out: &mut [f64]) {
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            out[e] = x[u] - x[v];
        }
    }

    /// Applies the transposed incidence matrix to a per-edge vector.
    pub fn incidence_transpose_apply(&self, y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            out[u] += y[e];
            out[v] -= y[e];
        }
    }

    pub fn components(&self) -> Components {
        let n = self.node_count();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        Components { label, count }
    }

    pub fn is_connected(&self) -> bool {
        self.components().count == 1
    }

    /// Induced subgraph on `nodes`, returning the subgraph and the map from
    /// subgraph ids back to ids in `self`. Labels are carried over.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<(Graph, Vec<usize>)> {
        if nodes.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut local = HashMap::with_capacity(nodes.len());
        for (i, &v) in nodes.iter().enumerate() {
            if v >= self.node_count() {
                return Err(Error::NodeOutOfRange {
                    node: v,
                    node_count: self.node_count(),
                });
            }
            local.insert(v, i);
        }
        let mut edges = Vec::new();
        for (i, &v) in nodes.iter().enumerate() {
            for &w in self.neighbors(v) {
                if let Some(&j) = local.get(&w) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        let labels = nodes.iter().map(|&v| self.labels[v]).collect();
        Ok((Self::assemble(labels, edges.into_iter()), nodes.to_vec()))
    }
}

/// Builds a graph from externally labelled edge pairs.
///
/// Self-loops and duplicates are removed, then the labels that remain are
/// compacted to `0..n` in ascending order. The labels stay available through
/// [`Graph::label`].
pub fn build_graph(pairs: &[(u64, u64)]) -> Result<Graph> {
    let mut ids: Vec<u64> = pairs
        .iter()
        .filter(|(u, v)| u != v)
        .flat_map(|&(u, v)| [u, v])
        .collect();
    ids.sort_unstable();
    ids.dedup();
    if ids.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let index: HashMap<u64, usize> = ids.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let loops_on_unknown = pairs
        .iter()
        .filter(|(u, v)| u == v && !index.contains_key(u))
        .count();
    if loops_on_unknown > 0 {
        log::info!("input cleaning: dropped {loops_on_unknown} self-loops on otherwise unused ids");
    }
    let raw = pairs
        .iter()
        .filter(|(u, v)| u != v || index.contains_key(u))
        .map(|(u, v)| (index[u], index[v]));
    Ok(Graph::assemble(ids, raw))
}

#[derive(Debug, Clone)]
pub struct Components {
    pub label: Vec<usize>,
    pub count: usize,
}

impl Components {
    /// Nodes of component `c` in ascending order.
    pub fn members(&self, c: usize) -> Vec<usize> {
        self.label
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l == c)
            .map(|(v, _)| v)
            .collect()
    }
}

/// A set of nodes that remembers insertion order.
#[derive(Debug, Clone, Default)]
pub struct NodeSet {
    order: Vec<usize>,
    members: HashSet<usize>,
}

impl NodeSet {
    pub fn new() -> NodeSet {
        NodeSet::default()
    }

    /// Collects `nodes`, keeping the first occurrence of repeats, and checks
    /// every id against `node_count`.
    pub fn from_nodes(nodes: impl IntoIterator<Item = usize>, node_count: usize) -> Result<NodeSet> {
        let mut set = NodeSet::new();
        for v in nodes {
            if v >= node_count {
                return Err(Error::NodeOutOfRange { node: v, node_count });
            }
            set.insert(v);
        }
        Ok(set)
    }

    /// Returns false if `v` was already present.
    pub fn insert(&mut self, v: usize) -> bool {
        if self.members.insert(v) {
            self.order.push(v);
            true
        } else {
            false
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Members in insertion order.
    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.order.iter().copied()
    }

    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.order.clone();
        v.sort_unstable();
        v
    }

    pub fn intersection_size(&self, other: &NodeSet) -> usize {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().filter(|&v| large.contains(v)).count()
    }

    pub fn is_superset_of(&self, other: &NodeSet) -> bool {
        other.iter().all(|v| self.contains(v))
    }
}

impl PartialEq for NodeSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for NodeSet {}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = NodeSet::new();
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl Serialize for NodeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.order.serialize(serializer)
    }
}

/// Sum of degrees over `set`.
pub fn volume(g: &Graph, set: &NodeSet) -> usize {
    set.iter().map(|v| g.degree(v)).sum()
}

/// Number of edges with exactly one endpoint in `set`.
pub fn cut_size(g: &Graph, set: &NodeSet) -> usize {
    set.iter()
        .map(|v| g.neighbors(v).iter().filter(|&&w| !set.contains(w)).count())
        .sum()
}
