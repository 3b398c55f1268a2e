//! Effective resistances on graph edges.
//!
//! Only edge-incident resistances are stored: one value per undirected edge,
//! indexed by the graph's edge id. Two routes fill the map:
//!
//! - exact: `r(u,v) = (e_u − e_v)ᵀ L⁺ (e_u − e_v)`, either from a dense
//!   factorization of the grounded Laplacian (small components) or one
//!   iterative Laplacian solve per edge;
//! - sampled: the fraction of uniform spanning trees that contain the edge.

use std::hash::{DefaultHasher, Hash, Hasher};
use std::io::{BufRead, Write};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::laplacian::{dense_pseudoinverse, LaplacianSystem, DENSE_LIMIT};
use crate::spanning_tree::{sample_rng, wilson};

pub const DEFAULT_NUM_TREES: usize = 2000;

/// Automatic backend selection switches from exact solves to tree sampling
/// above this many edges, unless every component fits the dense route.
pub const AUTO_EXACT_EDGE_LIMIT: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum ResistanceMethod {
    Exact,
    Sampled { trees: usize, seed: u64 },
}

/// How exact resistances are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ExactSolver {
    /// Dense when every component has at most [`DENSE_LIMIT`] nodes,
    /// iterative otherwise.
    #[default]
    Auto,
    Dense,
    Iterative,
}

/// Backend for building a resistance map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResistanceBackend {
    Auto { trees: usize, seed: u64 },
    Exact(ExactSolver),
    Sampled { trees: usize, seed: u64 },
}

impl Default for ResistanceBackend {
    fn default() -> Self {
        ResistanceBackend::Auto {
            trees: DEFAULT_NUM_TREES,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeResistanceMap {
    values: Vec<f64>,
    method: ResistanceMethod,
    node_count: usize,
    fingerprint: u64,
}

fn fingerprint(g: &Graph) -> u64 {
    let mut h = DefaultHasher::new();
    g.node_count().hash(&mut h);
    g.edges().hash(&mut h);
    h.finish()
}

impl EdgeResistanceMap {
    fn new(g: &Graph, values: Vec<f64>, method: ResistanceMethod) -> Self {
        EdgeResistanceMap {
            values,
            method,
            node_count: g.node_count(),
            fingerprint: fingerprint(g),
        }
    }

    pub fn method(&self) -> ResistanceMethod {
        self.method
    }

    /// Resistances indexed by edge id.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn by_edge(&self, edge: usize) -> f64 {
        self.values[edge]
    }

    /// Errors unless the map was built on `g`.
    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.node_count != g.node_count() || self.fingerprint != fingerprint(g) {
            return Err(Error::InvalidInput(
                "resistance map was built on a different graph".into(),
            ));
        }
        Ok(())
    }

    /// Resistance between the endpoints of edge `(u, v)`, in either order.
    pub fn resistance(&self, g: &Graph, u: usize, v: usize) -> Result<f64> {
        g.edge_id(u, v)
            .map(|e| self.values[e])
            .ok_or(Error::ResistanceNotStored(u, v))
    }

    /// Sum of all stored resistances; `n − 1` on a connected graph.
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Writes one `u\tv\tr` line per edge with `u < v` in external labels,
    /// preceded by a header line describing the method.
    pub fn write_tsv<W: Write>(&self, g: &Graph, mut out: W) -> Result<()> {
        self.check_graph(g)?;
        match self.method {
            ResistanceMethod::Exact => writeln!(out, "# method=exact")?,
            ResistanceMethod::Sampled { trees, seed } => {
                writeln!(out, "# method=sampled trees={trees} seed={seed}")?
            }
        }
        let mut rows: Vec<(u64, u64, f64)> = g
            .edges()
            .iter()
            .zip(&self.values)
            .map(|(&(u, v), &r)| {
                let (a, b) = (g.label(u), g.label(v));
                (a.min(b), a.max(b), r)
            })
            .collect();
        rows.sort_by_key(|&(a, b, _)| (a, b));
        for (a, b, r) in rows {
            writeln!(out, "{a}\t{b}\t{r:.16e}")?;
        }
        Ok(())
    }

    /// Reads a map written by [`write_tsv`](Self::write_tsv) back onto `g`.
    pub fn read_tsv<R: BufRead>(g: &Graph, input: R) -> Result<EdgeResistanceMap> {
        let index = g.label_index();
        let mut values = vec![f64::NAN; g.edge_count()];
        let mut method = None;
        let mut seen = 0usize;
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            let parse_err = |message: String| Error::Parse {
                line: lineno,
                message,
            };
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(header) = trimmed.strip_prefix('#') {
                if method.is_none() {
                    method = Some(parse_header(header).map_err(parse_err)?);
                }
                continue;
            }
            let fields: Vec<&str> = trimmed.split('\t').collect();
            if fields.len() != 3 {
                return Err(parse_err(format!("expected 3 fields, found {}", fields.len())));
            }
            let label = |s: &str| -> Result<usize> {
                let l: u64 = s
                    .parse()
                    .map_err(|_| parse_err(format!("bad node id {s:?}")))?;
                index
                    .get(&l)
                    .copied()
                    .ok_or_else(|| parse_err(format!("node {l} not in graph")))
            };
            let (u, v) = (label(fields[0])?, label(fields[1])?);
            let r: f64 = fields[2]
                .parse()
                .map_err(|_| parse_err(format!("bad resistance {:?}", fields[2])))?;
            let e = g
                .edge_id(u, v)
                .ok_or_else(|| parse_err(format!("({}, {}) is not an edge", fields[0], fields[1])))?;
            if !values[e].is_nan() {
                return Err(parse_err("duplicate edge".into()));
            }
            values[e] = r;
            seen += 1;
        }
        if seen != g.edge_count() {
            return Err(Error::InvalidInput(format!(
                "resistance file covers {seen} of {} edges",
                g.edge_count()
            )));
        }
        let method = method.ok_or_else(|| Error::InvalidInput("missing header line".into()))?;
        Ok(EdgeResistanceMap::new(g, values, method))
    }
}

fn parse_header(header: &str) -> std::result::Result<ResistanceMethod, String> {
    let mut kind = None;
    let mut trees = None;
    let mut seed = None;
    for tok in header.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| format!("bad header token {tok:?}"))?;
        match k {
            "method" => kind = Some(v.to_string()),
            "trees" => trees = Some(v.parse().map_err(|_| format!("bad trees {v:?}"))?),
            "seed" => seed = Some(v.parse().map_err(|_| format!("bad seed {v:?}"))?),
            _ => return Err(format!("unknown header key {k:?}")),
        }
    }
    match kind.as_deref() {
        Some("exact") => Ok(ResistanceMethod::Exact),
        Some("sampled") => Ok(ResistanceMethod::Sampled {
            trees: trees.ok_or("sampled header missing trees")?,
            seed: seed.ok_or("sampled header missing seed")?,
        }),
        _ => Err("header must name method=exact or method=sampled".into()),
    }
}

/// Builds a resistance map with the chosen backend.
pub fn edge_resistances(g: &Graph, backend: ResistanceBackend) -> Result<EdgeResistanceMap> {
    match backend {
        ResistanceBackend::Exact(solver) => exact_edge_resistances_with(g, solver),
        ResistanceBackend::Sampled { trees, seed } => sampled_edge_resistances(g, trees, seed),
        ResistanceBackend::Auto { trees, seed } => {
            if g.edge_count() <= AUTO_EXACT_EDGE_LIMIT || largest_component(g) <= DENSE_LIMIT {
                exact_edge_resistances(g)
            } else {
                sampled_edge_resistances(g, trees, seed)
            }
        }
    }
}

fn largest_component(g: &Graph) -> usize {
    let comps = g.components();
    let mut sizes = vec![0usize; comps.count];
    for &c in &comps.label {
        sizes[c] += 1;
    }
    sizes.into_iter().max().unwrap_or(0)
}

/// Exact resistances of every edge. Disconnected graphs are handled one
/// component at a time.
pub fn exact_edge_resistances(g: &Graph) -> Result<EdgeResistanceMap> {
    exact_edge_resistances_with(g, ExactSolver::Auto)
}

pub fn exact_edge_resistances_with(g: &Graph, solver: ExactSolver) -> Result<EdgeResistanceMap> {
    let solver = match solver {
        ExactSolver::Auto if largest_component(g) <= DENSE_LIMIT => ExactSolver::Dense,
        ExactSolver::Auto => ExactSolver::Iterative,
        s => s,
    };
    let mut values = match solver {
        ExactSolver::Dense => dense_grounded(g)?,
        _ => iterative(g)?,
    };
    for r in &mut values {
        *r = r.min(1.0);
    }
    Ok(EdgeResistanceMap::new(g, values, ResistanceMethod::Exact))
}

fn iterative(g: &Graph) -> Result<Vec<f64>> {
    let system = LaplacianSystem::new(g);
    let n = g.node_count();
    g.edges()
        .par_iter()
        .map(|&(u, v)| {
            let mut b = vec![0.0; n];
            b[u] = 1.0;
            b[v] = -1.0;
            let p = system.solve(&b)?;
            Ok(p[u] - p[v])
        })
        .collect()
}

/// Grounds one node per component and inverts the remaining (positive
/// definite) block with a Cholesky factorization.
fn dense_grounded(g: &Graph) -> Result<Vec<f64>> {
    let comps = g.components();
    let mut values = vec![0.0; g.edge_count()];
    for c in 0..comps.count {
        let members = comps.members(c);
        let k = members.len();
        if k == 1 {
            continue;
        }
        if k > DENSE_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "dense resistance route limited to components of {DENSE_LIMIT} nodes, found {k}"
            )));
        }
        let mut local = vec![usize::MAX; g.node_count()];
        for (i, &v) in members.iter().enumerate() {
            local[v] = i;
        }
        // The last member is grounded (potential zero) and left out.
        let dim = k - 1;
        let mut lap = DMatrix::<f64>::zeros(dim, dim);
        for &v in &members[..dim] {
            let i = local[v];
            lap[(i, i)] = g.degree(v) as f64;
            for &w in g.neighbors(v) {
                let j = local[w];
                if j < dim {
                    lap[(i, j)] = -1.0;
                }
            }
        }
        let inv = lap
            .cholesky()
            .ok_or_else(|| Error::SingularSystem("grounded Laplacian not positive definite".into()))?
            .inverse();
        let entry = |i: usize, j: usize| if i < dim && j < dim { inv[(i, j)] } else { 0.0 };
        for &v in &members {
            for (w, e) in g.incident(v) {
                if v < w {
                    let (i, j) = (local[v], local[w]);
                    values[e] = entry(i, i) + entry(j, j) - 2.0 * entry(i, j);
                }
            }
        }
    }
    Ok(values)
}

/// Monte Carlo resistances: the share of `num_trees` uniform spanning trees
/// containing each edge. Edges never sampled get `1 / (2 · num_trees)`.
///
/// Each tree uses its own rng stream derived from `seed`, so the result does
/// not depend on the number of threads.
pub fn sampled_edge_resistances(g: &Graph, num_trees: usize, seed: u64) -> Result<EdgeResistanceMap> {
    if num_trees == 0 {
        return Err(Error::InvalidParameter("num_trees must be at least 1".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected(
            "tree sampling needs a connected graph".into(),
        ));
    }
    let n = g.node_count();
    let m = g.edge_count();
    let counts = (0..num_trees as u64)
        .into_par_iter()
        .fold(
            || (vec![0u32; m], vec![None; n], vec![false; n]),
            |(mut counts, mut parent, mut in_tree), stream| {
                let mut rng = sample_rng(seed, stream);
                wilson(g, &mut rng, &mut parent, &mut in_tree);
                for (u, p) in parent.iter().enumerate() {
                    if let Some(v) = *p {
                        counts[g.edge_id(u, v).expect("tree edge in graph")] += 1;
                    }
                }
                (counts, parent, in_tree)
            },
        )
        .map(|(counts, _, _)| counts)
        .reduce(
            || vec![0u32; m],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let floor = 1.0 / (2.0 * num_trees as f64);
    let values = counts
        .into_iter()
        .map(|c| match c {
            0 => floor,
            c => c as f64 / num_trees as f64,
        })
        .collect();
    Ok(EdgeResistanceMap::new(
        g,
        values,
        ResistanceMethod::Sampled {
            trees: num_trees,
            seed,
        },
    ))
}

/// Expected round-trip time of a random walk across edge `(u, v)`: `2m · r(u,v)`.
pub fn commute_time(g: &Graph, rmap: &EdgeResistanceMap, u: usize, v: usize) -> Result<f64> {
    Ok(2.0 * g.edge_count() as f64 * rmap.resistance(g, u, v)?)
}

/// All-pairs effective resistance from the dense pseudoinverse. Intended for
/// small graphs (at most [`DENSE_LIMIT`] nodes).
#[derive(Debug, Clone)]
pub struct PairwiseResistance {
    matrix: DMatrix<f64>,
}

impl PairwiseResistance {
    pub fn from_graph(g: &Graph) -> Result<PairwiseResistance> {
        let pinv = dense_pseudoinverse(g)?;
        let n = g.node_count();
        let matrix = DMatrix::from_fn(n, n, |u, v| {
            pinv[(u, u)] + pinv[(v, v)] - 2.0 * pinv[(u, v)]
        });
        Ok(PairwiseResistance { matrix })
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.matrix[(u, v)]
    }

    /// Largest pairwise resistance within `nodes` (0 for fewer than two).
    pub fn diameter(&self, nodes: &[usize]) -> f64 {
        let mut d: f64 = 0.0;
        for (i, &u) in nodes.iter().enumerate() {
            for &v in &nodes[i + 1..] {
                d = d.max(self.get(u, v));
            }
        }
        d
    }
}
