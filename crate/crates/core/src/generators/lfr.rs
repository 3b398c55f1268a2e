//! LFR-style benchmark built on the configuration model.
//!
//! Degrees and community sizes follow truncated power laws. Every node keeps
//! `⌈(1 − μ)·d⌉` stubs inside its community and the rest outside; stubs are
//! paired at random, rejecting self-loops, repeated edges and (for outside
//! stubs) pairs within one community. This keeps the two knobs the LFR
//! family is used for (size and power-law shape, plus the mixing share) but
//! skips the original rewiring procedure.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{GeneratorParams, PlantedGraph};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};

const ASSIGNMENT_ATTEMPTS: usize = 20;
const CONNECTIVITY_ATTEMPTS: usize = 10;
const PAIRING_ROUNDS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LfrParams {
    pub n: usize,
    pub degree_exponent: f64,
    pub community_exponent: f64,
    pub mixing: f64,
    pub avg_degree: f64,
    pub max_degree: usize,
    pub min_community: usize,
    pub max_community: usize,
    pub seed: u64,
}

impl Default for LfrParams {
    fn default() -> Self {
        LfrParams {
            n: 1000,
            degree_exponent: 2.5,
            community_exponent: 1.5,
            mixing: 0.2,
            avg_degree: 15.0,
            max_degree: 50,
            min_community: 20,
            max_community: 100,
            seed: 0,
        }
    }
}

impl LfrParams {
    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.degree_exponent <= 1.0 || self.community_exponent <= 1.0 {
            return bad("power-law exponents must exceed 1".into());
        }
        if !(self.mixing > 0.0 && self.mixing < 1.0) {
            return bad(format!("mixing must lie in (0, 1), got {}", self.mixing));
        }
        if self.min_community < 2 || self.min_community > self.max_community {
            return bad("community size range must satisfy 2 <= min <= max".into());
        }
        if self.max_community > self.n {
            return bad("max community size exceeds n".into());
        }
        if !(self.avg_degree >= 1.0) || (self.max_degree as f64) < self.avg_degree {
            return bad("need 1 <= avg_degree <= max_degree".into());
        }
        if self.max_degree >= self.n {
            return bad("max_degree must be below n".into());
        }
        let max_intra = intra_degree(self.max_degree, self.mixing);
        if max_intra + 1 > self.max_community {
            return Err(Error::Infeasible(format!(
                "a node of degree {} needs {} neighbors inside its community, \
                 but communities hold at most {} nodes",
                self.max_degree, max_intra, self.max_community
            )));
        }
        Ok(())
    }
}

fn intra_degree(d: usize, mixing: f64) -> usize {
    ((1.0 - mixing) * d as f64).ceil() as usize
}

/// Draws from the continuous power law `x^-exponent` on `[lo, hi]`.
fn power_law_sample<R: Rng>(rng: &mut R, exponent: f64, lo: f64, hi: f64) -> f64 {
    let a = 1.0 - exponent;
    let u: f64 = rng.random();
    (lo.powf(a) + u * (hi.powf(a) - lo.powf(a))).powf(1.0 / a)
}

fn power_law_mean(exponent: f64, lo: f64, hi: f64) -> f64 {
    let moment = |k: f64| {
        let a = k + 1.0 - exponent;
        if a.abs() < 1e-12 {
            (hi / lo).ln()
        } else {
            (hi.powf(a) - lo.powf(a)) / a
        }
    };
    moment(1.0) / moment(0.0)
}

/// Lower cutoff that makes the truncated power law have the requested mean.
fn lower_cutoff(exponent: f64, mean: f64, hi: f64) -> Result<f64> {
    let (mut lo, mut up) = (1.0, hi);
    if power_law_mean(exponent, lo, hi) > mean {
        return Err(Error::Infeasible(format!(
            "average degree {mean} is below the smallest achievable mean {:.3}",
            power_law_mean(exponent, lo, hi)
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + up);
        if power_law_mean(exponent, mid, hi) < mean {
            lo = mid;
        } else {
            up = mid;
        }
    }
    Ok(0.5 * (lo + up))
}

fn sample_degrees<R: Rng>(p: &LfrParams, rng: &mut R) -> Result<Vec<usize>> {
    let hi = p.max_degree as f64;
    let lo = lower_cutoff(p.degree_exponent, p.avg_degree, hi)?;
    Ok((0..p.n)
        .map(|_| {
            let x = power_law_sample(rng, p.degree_exponent, lo, hi);
            (x.round() as usize).clamp(1, p.max_degree)
        })
        .collect())
}

fn sample_community_sizes<R: Rng>(p: &LfrParams, rng: &mut R) -> Result<Vec<usize>> {
    let (lo, hi) = (p.min_community, p.max_community);
    let mut sizes = Vec::new();
    let mut total = 0;
    while total < p.n {
        let s = power_law_sample(rng, p.community_exponent, lo as f64, hi as f64 + 0.999);
        let s = (s.floor() as usize).clamp(lo, hi);
        sizes.push(s);
        total += s;
    }
    // Shrink, then grow, one node at a time until the sizes sum to n.
    let mut i = 0;
    while total > p.n {
        if sizes.iter().all(|&s| s == lo) {
            total -= sizes.pop().unwrap();
            break;
        }
        let k = i % sizes.len();
        if sizes[k] > lo {
            sizes[k] -= 1;
            total -= 1;
        }
        i += 1;
    }
    while total < p.n {
        if sizes.is_empty() || sizes.iter().all(|&s| s == hi) {
            return Err(Error::Infeasible(
                "community sizes cannot be made to cover all nodes".into(),
            ));
        }
        let k = i % sizes.len();
        if sizes[k] < hi {
            sizes[k] += 1;
            total += 1;
        }
        i += 1;
    }
    Ok(sizes)
}

/// Assigns nodes (largest intra-degree first) to random communities that can
/// hold their intra-community neighbors.
fn assign<R: Rng>(intra: &[usize], sizes: &[usize], rng: &mut R) -> Option<Vec<usize>> {
    let n = intra.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order.sort_by(|&a, &b| intra[b].cmp(&intra[a]));
    let mut free = sizes.to_vec();
    let mut community = vec![0; n];
    for v in order {
        let open: usize = (0..sizes.len())
            .filter(|&c| sizes[c] > intra[v])
            .map(|c| free[c])
            .sum();
        if open == 0 {
            return None;
        }
        let mut pick = rng.random_range(0..open);
        let c = (0..sizes.len())
            .filter(|&c| sizes[c] > intra[v])
            .find(|&c| {
                if pick < free[c] {
                    true
                } else {
                    pick -= free[c];
                    false
                }
            })
            .unwrap();
        free[c] -= 1;
        community[v] = c;
    }
    Some(community)
}

/// Pairs stubs at random, rejecting pairs for which `allowed` fails or which
/// repeat an existing edge. Unpairable stubs are dropped.
fn pair_stubs<R: Rng>(
    mut stubs: Vec<usize>,
    edges: &mut HashSet<(usize, usize)>,
    allowed: impl Fn(usize, usize) -> bool,
    rng: &mut R,
) {
    if stubs.len() % 2 == 1 {
        let k = rng.random_range(0..stubs.len());
        stubs.swap_remove(k);
    }
    for _ in 0..PAIRING_ROUNDS {
        if stubs.len() < 2 {
            break;
        }
        stubs.shuffle(rng);
        let mut rejected = Vec::new();
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u != v && allowed(u, v) && edges.insert((u, v)) {
                continue;
            }
            rejected.extend_from_slice(pair);
        }
        if rejected.len() == stubs.len() {
            break;
        }
        stubs = rejected;
    }
}

/// Generates an LFR-style graph. Communities are regenerated (bounded number
/// of times) until each one induces a connected subgraph when `mixing <= 0.3`.
pub fn generate_lfr_like(params: &LfrParams) -> Result<PlantedGraph> {
    params.validate()?;
    let mut last_err = None;
    for attempt in 0..CONNECTIVITY_ATTEMPTS as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(attempt);
        let pg = generate_once(params, &mut rng)?;
        if params.mixing > 0.3 || communities_connected(&pg) {
            return Ok(pg);
        }
        last_err = Some(Error::Infeasible(format!(
            "some community is internally disconnected after {} attempts",
            attempt + 1
        )));
    }
    Err(last_err.unwrap())
}

fn communities_connected(pg: &PlantedGraph) -> bool {
    pg.communities.iter().all(|c| {
        pg.graph
            .induced_subgraph(&c.sorted())
            .map(|(sub, _)| sub.is_connected())
            .unwrap_or(false)
    })
}

fn generate_once<R: Rng>(p: &LfrParams, rng: &mut R) -> Result<PlantedGraph> {
    let degrees = sample_degrees(p, rng)?;
    let intra: Vec<usize> = degrees.iter().map(|&d| intra_degree(d, p.mixing)).collect();

    let mut assigned = None;
    for _ in 0..ASSIGNMENT_ATTEMPTS {
        let sizes = sample_community_sizes(p, rng)?;
        if let Some(c) = assign(&intra, &sizes, rng) {
            assigned = Some((sizes.len(), c));
            break;
        }
    }
    let (k, community) = assigned.ok_or_else(|| {
        Error::Infeasible(format!(
            "could not place nodes into communities of {}..={} nodes after {ASSIGNMENT_ATTEMPTS} attempts",
            p.min_community, p.max_community
        ))
    })?;

    let mut edges = HashSet::new();
    let mut members = vec![Vec::new(); k];
    for (v, &c) in community.iter().enumerate() {
        members[c].push(v);
    }
    for nodes in &members {
        let stubs = nodes
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v, intra[v]))
            .collect();
        pair_stubs(stubs, &mut edges, |_, _| true, rng);
    }
    let outer = (0..p.n)
        .flat_map(|v| std::iter::repeat_n(v, degrees[v] - intra[v]))
        .collect();
    pair_stubs(outer, &mut edges, |u, v| community[u] != community[v], rng);

    let mut edges: Vec<(usize, usize)> = edges.into_iter().collect();
    edges.sort_unstable();
    let graph = Graph::from_edges(p.n, &edges)?;
    let communities = members
        .into_iter()
        .map(|nodes| nodes.into_iter().collect::<NodeSet>())
        .collect();
    Ok(PlantedGraph {
        graph,
        communities,
        params: GeneratorParams::Lfr(p.clone()),
    })
}
