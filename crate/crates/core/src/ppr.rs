//! Personalized PageRank and sweep-cut extraction.
//!
//! Both backends compute the fixed point of
//!
//! ```text
//! x = α·s + (1 − α)·W x,   W = (I + A D⁻¹) / 2
//! ```
//!
//! where `s` is uniform on the seeds. `W` is the half-lazy random walk;
//! isolated nodes keep their mass. Power iteration converges to it directly;
//! the push backend is the local residual-push approximation, which leaves a
//! residual below `ε · deg(u)` at every node.

use std::collections::VecDeque;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};
use crate::scoring::{CutRule, SweepProfile, SweepTracker};

pub const DEFAULT_ALPHA: f64 = 0.15;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_EPSILON: f64 = 1e-7;
pub const MAX_ITERATIONS: usize = 10_000;

/// Node count above which the power-iteration product runs in parallel.
const PARALLEL_THRESHOLD: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "backend")]
pub enum PprBackend {
    /// Seed vector only; no propagation.
    Seed,
    PowerIteration { tol: f64 },
    Push { epsilon: f64 },
}

impl Default for PprBackend {
    fn default() -> Self {
        PprBackend::PowerIteration {
            tol: DEFAULT_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub mass: Vec<f64>,
    pub alpha: f64,
    pub seeds: NodeSet,
    pub backend: PprBackend,
    pub iterations: usize,
}

impl ScoreVector {
    /// `node\tscore` lines in external labels, for every node with nonzero score.
    pub fn write_tsv<W: Write>(&self, g: &Graph, mut out: W) -> Result<()> {
        for (v, &x) in self.mass.iter().enumerate() {
            if x != 0.0 {
                writeln!(out, "{}\t{x}", g.label(v))?;
            }
        }
        Ok(())
    }
}

fn check_seeds(g: &Graph, seeds: &NodeSet) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::InvalidInput("seed set is empty".into()));
    }
    if let Some(v) = seeds.iter().find(|&v| v >= g.node_count()) {
        return Err(Error::NodeOutOfRange {
            node: v,
            node_count: g.node_count(),
        });
    }
    Ok(())
}

/// Uniform `1/|seeds|` on the seeds, zero elsewhere.
pub fn seed_vector(g: &Graph, seeds: &NodeSet) -> Result<ScoreVector> {
    check_seeds(g, seeds)?;
    let mut mass = vec![0.0; g.node_count()];
    let w = 1.0 / seeds.len() as f64;
    for v in seeds.iter() {
        mass[v] = w;
    }
    Ok(ScoreVector {
        mass,
        alpha: 1.0,
        seeds: seeds.clone(),
        backend: PprBackend::Seed,
        iterations: 0,
    })
}

fn lazy_walk(g: &Graph, x: &[f64], out: &mut [f64]) {
    let step = |v: usize| -> f64 {
        if g.degree(v) == 0 {
            return x[v];
        }
        let spread: f64 = g
            .neighbors(v)
            .iter()
            .map(|&u| x[u] / g.degree(u) as f64)
            .sum();
        0.5 * (x[v] + spread)
    };
    if g.node_count() >= PARALLEL_THRESHOLD {
        out.par_iter_mut().enumerate().for_each(|(v, o)| *o = step(v));
    } else {
        out.iter_mut().enumerate().for_each(|(v, o)| *o = step(v));
    }
}

pub fn ppr_power_iteration(g: &Graph, seeds: &NodeSet, alpha: f64, tol: f64) -> Result<ScoreVector> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let s = seed_vector(g, seeds)?.mass;
    let mut x = s.clone();
    let mut walked = vec![0.0; x.len()];
    let mut iterations = 0;
    loop {
        if iterations >= MAX_ITERATIONS {
            return Err(Error::NotConverged {
                what: "pagerank power iteration",
                iterations,
                residual: f64::NAN,
            });
        }
        lazy_walk(g, &x, &mut walked);
        let mut change = 0.0;
        for v in 0..x.len() {
            let next = alpha * s[v] + (1.0 - alpha) * walked[v];
            change += (next - x[v]).abs();
            x[v] = next;
        }
        iterations += 1;
        if change < tol {
            break;
        }
    }
    Ok(ScoreVector {
        mass: x,
        alpha,
        seeds: seeds.clone(),
        backend: PprBackend::PowerIteration { tol },
        iterations,
    })
}

/// Residual-push approximation. On return every node satisfies
/// `residual(u) < epsilon · max(deg(u), 1)`.
pub fn ppr_push(g: &Graph, seeds: &NodeSet, alpha: f64, epsilon: f64) -> Result<ScoreVector> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let n = g.node_count();
    let mut residual = seed_vector(g, seeds)?.mass;
    let mut mass = vec![0.0; n];
    let threshold = |v: usize| epsilon * g.degree(v).max(1) as f64;
    let mut queued = vec![false; n];
    let mut queue = VecDeque::new();
    for v in seeds.iter() {
        if residual[v] >= threshold(v) {
            queued[v] = true;
            queue.push_back(v);
        }
    }
    let mut pushes = 0usize;
    while let Some(u) = queue.pop_front() {
        queued[u] = false;
        let ru = residual[u];
        if ru < threshold(u) {
            continue;
        }
        pushes += 1;
        mass[u] += alpha * ru;
        let d = g.degree(u);
        if d == 0 {
            residual[u] = (1.0 - alpha) * ru;
        } else {
            residual[u] = 0.5 * (1.0 - alpha) * ru;
            let share = 0.5 * (1.0 - alpha) * ru / d as f64;
            for &w in g.neighbors(u) {
                residual[w] += share;
                if !queued[w] && residual[w] >= threshold(w) {
                    queued[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if !queued[u] && residual[u] >= threshold(u) {
            queued[u] = true;
            queue.push_back(u);
        }
    }
    Ok(ScoreVector {
        mass,
        alpha,
        seeds: seeds.clone(),
        backend: PprBackend::Push { epsilon },
        iterations: pushes,
    })
}

pub fn personalized_pagerank(
    g: &Graph,
    seeds: &NodeSet,
    alpha: f64,
    backend: PprBackend,
) -> Result<ScoreVector> {
    match backend {
        PprBackend::Seed => seed_vector(g, seeds),
        PprBackend::PowerIteration { tol } => ppr_power_iteration(g, seeds, alpha, tol),
        PprBackend::Push { epsilon } => ppr_push(g, seeds, alpha, epsilon),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ranking {
    /// Order by raw score.
    #[default]
    Raw,
    /// Order by score divided by degree.
    DegreeNormalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepConfig {
    pub rule: CutRule,
    pub ranking: Ranking,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            rule: CutRule::sweep(),
            ranking: Ranking::Raw,
        }
    }
}

/// Orders the seeds first, then every other node with positive score by
/// descending rank (ties to the lower id), scores each prefix by conductance
/// and cuts it according to `config.rule`.
pub fn ppr_sweep(
    g: &Graph,
    x: &ScoreVector,
    seeds: &NodeSet,
    config: &SweepConfig,
) -> Result<(NodeSet, SweepProfile)> {
    check_seeds(g, seeds)?;
    config.rule.validate()?;
    if x.mass.len() != g.node_count() {
        return Err(Error::InvalidInput("score vector does not match graph".into()));
    }
    if x.mass.iter().all(|&m| m == 0.0) {
        return Err(Error::InvalidInput("score vector is all zero".into()));
    }
    let key = |v: usize| match config.ranking {
        Ranking::Raw => x.mass[v],
        Ranking::DegreeNormalized => x.mass[v] / g.degree(v).max(1) as f64,
    };
    let mut rest: Vec<usize> = (0..g.node_count())
        .filter(|&v| x.mass[v] > 0.0 && !seeds.contains(v))
        .collect();
    rest.sort_by(|&a, &b| key(b).total_cmp(&key(a)).then(a.cmp(&b)));

    let mut ordering: Vec<usize> = seeds.iter().collect();
    let mut tracker = SweepTracker::new(g);
    for v in seeds.iter() {
        tracker.add(v);
    }
    let mut scores = Vec::new();
    if let Some(s) = tracker.conductance() {
        scores.push(s);
        for &v in &rest {
            ordering.push(v);
            tracker.add(v);
            match tracker.conductance() {
                Some(s) => scores.push(s),
                None => break,
            }
        }
    }
    let (selected, selection) = config.rule.select(&scores);
    let profile = SweepProfile {
        ordering,
        seed_count: seeds.len(),
        scores,
        selected,
        selection,
    };
    let community = profile.selected_nodes().iter().copied().collect();
    Ok((community, profile))
}
