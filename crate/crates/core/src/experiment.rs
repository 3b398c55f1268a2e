//! Repeated seed-set expansion experiments against ground-truth communities.
//!
//! Each run samples a community and a set of seeds inside it, then runs
//! every configured detector on exactly those seeds and scores the estimate
//! against the community. Runs are independent (each draws from its own rng
//! stream of the master seed) and execute in parallel; rows are merged in run
//! order so reports do not depend on scheduling.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{
    generate_hsbm, generate_lfr_like, planted_partition_matrix, LfrParams, PlantedGraph,
};
use crate::graph::{Graph, NodeSet};
use crate::io::{parse_communities, parse_edge_list};
use crate::pipeline::{Detector, DetectorConfig, Method};
use crate::scoring::{pr_curve, precision_recall_f1, PrPoint};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "source")]
pub enum DatasetSource {
    Files {
        edges: PathBuf,
        communities: PathBuf,
    },
    Hsbm {
        block_sizes: Vec<usize>,
        p_in: f64,
        p_out: f64,
        seed: u64,
    },
    Lfr(LfrParams),
}

impl DatasetSource {
    pub fn load(&self) -> Result<(Graph, Vec<NodeSet>)> {
        match self {
            DatasetSource::Files { edges, communities } => {
                let g = parse_edge_list(edges)?;
                let c = parse_communities(communities, &g)?;
                Ok((g, c.communities))
            }
            DatasetSource::Hsbm {
                block_sizes,
                p_in,
                p_out,
                seed,
            } => {
                let m = planted_partition_matrix(block_sizes.len(), *p_in, *p_out);
                let pg = generate_hsbm(block_sizes, &m, *seed)?;
                Ok((pg.graph, pg.communities))
            }
            DatasetSource::Lfr(p) => {
                let PlantedGraph {
                    graph, communities, ..
                } = generate_lfr_like(p)?;
                Ok((graph, communities))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            DatasetSource::Files { edges, .. } => edges.display().to_string(),
            DatasetSource::Hsbm { block_sizes, .. } => format!("hsbm{block_sizes:?}"),
            DatasetSource::Lfr(p) => format!("lfr(n={}, tau={})", p.n, p.degree_exponent),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CommunityPolicy {
    /// A fresh community every run.
    #[default]
    Varying,
    /// One community for all runs; only the seeds change.
    Fixed,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentSpec {
    pub dataset: DatasetSource,
    pub methods: Vec<DetectorConfig>,
    pub seeds_per_run: usize,
    pub runs: usize,
    pub policy: CommunityPolicy,
    /// Defaults to `max(seeds_per_run + 2, 5)`.
    pub min_community_size: Option<usize>,
    pub master_seed: u64,
    /// Keep per-run precision-recall curves.
    #[serde(skip)]
    pub curves: bool,
    /// Record wall-clock runtimes (makes reports non-reproducible).
    #[serde(skip)]
    pub timings: bool,
}

impl ExperimentSpec {
    pub fn new(dataset: DatasetSource, methods: &[Method]) -> Self {
        ExperimentSpec {
            dataset,
            methods: methods.iter().map(|&m| DetectorConfig::new(m)).collect(),
            seeds_per_run: 1,
            runs: 10,
            policy: CommunityPolicy::Varying,
            min_community_size: None,
            master_seed: 0,
            curves: false,
            timings: false,
        }
    }

    fn min_size(&self) -> usize {
        self.min_community_size
            .unwrap_or((self.seeds_per_run + 2).max(5))
    }

    fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidParameter("runs must be at least 1".into()));
        }
        if self.seeds_per_run == 0 {
            return Err(Error::InvalidParameter("seeds_per_run must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidParameter("no detector configured".into()));
        }
        for m in &self.methods {
            m.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRow {
    pub run: usize,
    pub method: Method,
    pub community: usize,
    pub community_size: usize,
    pub seeds: Vec<u64>,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub estimate_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage_boundary: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
    #[serde(skip)]
    pub curve: Option<Vec<PrPoint>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodSummary {
    pub method: Method,
    pub runs: usize,
    pub mean_f1: f64,
    pub sd_f1: f64,
    pub mean_precision: f64,
    pub mean_recall: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub dataset: String,
    pub nodes: usize,
    pub edges: usize,
    pub runs: usize,
    pub seeds_per_run: usize,
    pub policy: CommunityPolicy,
    pub master_seed: u64,
    pub rows: Vec<RunRow>,
    pub summaries: Vec<MethodSummary>,
    /// Share of runs where germination followed by PageRank beat PageRank
    /// alone on F1; present when both methods ran.
    pub improvement_fraction: Option<f64>,
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

impl ExperimentReport {
    /// Per-method aggregates recomputed from `rows`.
    pub fn summarize(rows: &[RunRow], methods: &[Method]) -> Vec<MethodSummary> {
        methods
            .iter()
            .map(|&method| {
                let of = |f: fn(&RunRow) -> f64| -> Vec<f64> {
                    rows.iter().filter(|r| r.method == method).map(f).collect()
                };
                let f1s = of(|r| r.f1);
                let (mean_f1, sd_f1) = mean_sd(&f1s);
                MethodSummary {
                    method,
                    runs: f1s.len(),
                    mean_f1,
                    sd_f1,
                    mean_precision: mean_sd(&of(|r| r.precision)).0,
                    mean_recall: mean_sd(&of(|r| r.recall)).0,
                }
            })
            .collect()
    }

    pub fn improvement(rows: &[RunRow]) -> Option<f64> {
        let f1_of = |run: usize, m: Method| {
            rows.iter()
                .find(|r| r.run == run && r.method == m)
                .map(|r| r.f1)
        };
        let runs: Vec<usize> = {
            let mut v: Vec<usize> = rows.iter().map(|r| r.run).collect();
            v.dedup();
            v
        };
        let pairs: Vec<(f64, f64)> = runs
            .iter()
            .filter_map(|&r| Some((f1_of(r, Method::GerminateThenPpr)?, f1_of(r, Method::PprOnly)?)))
            .collect();
        if pairs.is_empty() {
            return None;
        }
        Some(pairs.iter().filter(|(g, p)| g > p).count() as f64 / pairs.len() as f64)
    }

    pub fn summary(&self, method: Method) -> Option<&MethodSummary> {
        self.summaries.iter().find(|s| s.method == method)
    }

    /// Human-readable table: one line per method with mean F1 and its sd.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "dataset: {}  n={}  m={}  runs={}  seeds/run={}",
            self.dataset, self.nodes, self.edges, self.runs, self.seeds_per_run
        );
        let _ = writeln!(
            s,
            "{:<20} {:>8} {:>8} {:>10} {:>8}",
            "method", "mean_f1", "(sd)", "precision", "recall"
        );
        for m in &self.summaries {
            let _ = writeln!(
                s,
                "{:<20} {:>8.4} {:>8.4} {:>10.4} {:>8.4}",
                m.method.name(),
                m.mean_f1,
                m.sd_f1,
                m.mean_precision,
                m.mean_recall
            );
        }
        if let Some(f) = self.improvement_fraction {
            let _ = writeln!(s, "germination improved on ppr in {:.1}% of runs", 100.0 * f);
        }
        s
    }
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let (g, communities) = spec.dataset.load()?;
    run_on(&g, &communities, spec)
}

/// Samples `k` seeds from `community`, all inside the graph component of the
/// first one drawn.
fn sample_seeds<R: Rng>(
    community: &NodeSet,
    component: &[usize],
    k: usize,
    rng: &mut R,
) -> Option<NodeSet> {
    let members = community.sorted();
    let first = *members.choose(rng)?;
    let pool: Vec<usize> = members
        .into_iter()
        .filter(|&v| v != first && component[v] == component[first])
        .collect();
    if pool.len() + 1 < k {
        return None;
    }
    let mut seeds = vec![first];
    seeds.extend(pool.choose_multiple(rng, k - 1).copied());
    let mut rest = seeds.split_off(1);
    rest.shuffle(rng);
    seeds.extend(rest);
    Some(seeds.into_iter().collect())
}

/// Runs the experiment on an already loaded graph and ground truth.
pub fn run_on(g: &Graph, communities: &[NodeSet], spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let min_size = spec.min_size();
    let eligible: Vec<usize> = (0..communities.len())
        .filter(|&c| communities[c].len() >= min_size.max(spec.seeds_per_run))
        .collect();
    if eligible.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no ground-truth community has at least {min_size} nodes"
        )));
    }
    let fixed = {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.master_seed);
        eligible[rng.random_range(0..eligible.len())]
    };
    let component = g.components().label;
    let detector = Detector::new(g);

    let per_run: Vec<Result<Vec<RunRow>>> = (0..spec.runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.master_seed);
            rng.set_stream(run as u64 + 1);
            let c = match spec.policy {
                CommunityPolicy::Fixed => fixed,
                CommunityPolicy::Varying => eligible[rng.random_range(0..eligible.len())],
            };
            let truth = &communities[c];
            let seeds = sample_seeds(truth, &component, spec.seeds_per_run, &mut rng).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "community {c} has fewer than {} connected members",
                    spec.seeds_per_run
                ))
            })?;
            spec.methods
                .iter()
                .map(|cfg| {
                    let t = Instant::now();
                    let out = detector.detect(&seeds, cfg)?;
                    let elapsed = t.elapsed();
                    let prf = precision_recall_f1(&out.estimate, truth)?;
                    let curve = if spec.curves {
                        Some(pr_curve(&out.ordering, truth)?)
                    } else {
                        None
                    };
                    Ok(RunRow {
                        run,
                        method: cfg.method,
                        community: c,
                        community_size: truth.len(),
                        seeds: seeds.iter().map(|v| g.label(v)).collect(),
                        precision: prf.precision,
                        recall: prf.recall,
                        f1: prf.f1,
                        estimate_size: out.estimate.len(),
                        stage_boundary: out.stage_boundary,
                        runtime_ms: spec.timings.then_some(elapsed.as_secs_f64() * 1e3),
                        curve,
                    })
                })
                .collect()
        })
        .collect();

    let mut rows = Vec::with_capacity(spec.runs * spec.methods.len());
    for r in per_run {
        rows.extend(r?);
    }
    let methods: Vec<Method> = spec.methods.iter().map(|c| c.method).collect();
    let summaries = ExperimentReport::summarize(&rows, &methods);
    let improvement_fraction = ExperimentReport::improvement(&rows);
    Ok(ExperimentReport {
        dataset: spec.dataset.describe(),
        nodes: g.node_count(),
        edges: g.edge_count(),
        runs: spec.runs,
        seeds_per_run: spec.seeds_per_run,
        policy: spec.policy,
        master_seed: spec.master_seed,
        rows,
        summaries,
        improvement_fraction,
    })
}
