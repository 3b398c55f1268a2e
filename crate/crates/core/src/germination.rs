//! Seed germination: greedy growth of the seed set by smallest effective
//! resistance.
//!
//! Starting from the seeds, each step adds the unused node whose smallest
//! resistance to the current set is smallest (ties go to the lowest node id).
//! Only nodes with an edge into the current set are candidates, since only
//! edge resistances are known. Conductance is recorded after every addition
//! and growth stops at the first local minimum followed by a 5% rise; the
//! returned set is trimmed back to that minimum. If no minimum qualifies,
//! everything added is returned.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use ordered_float::OrderedFloat;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};
use crate::resistance::{EdgeResistanceMap, PairwiseResistance};
use crate::scoring::{
    LocalMinDetector, Selection, SweepProfile, SweepTracker, DEFAULT_MIN_STEPS, GERMINATION_RISE,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GerminationConfig {
    pub rise_threshold: f64,
    pub min_steps: usize,
    /// Defaults to `max(5000, 50 · seed_count)` when unset.
    pub step_cap: Option<usize>,
    /// When false, growth ignores the stopping rule and runs until the cap or
    /// the frontier is exhausted.
    pub stop_at_minimum: bool,
}

impl Default for GerminationConfig {
    fn default() -> Self {
        GerminationConfig {
            rise_threshold: GERMINATION_RISE,
            min_steps: DEFAULT_MIN_STEPS,
            step_cap: None,
            stop_at_minimum: true,
        }
    }
}

impl GerminationConfig {
    pub fn step_cap_for(&self, seed_count: usize) -> usize {
        self.step_cap.unwrap_or((50 * seed_count).max(5000))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    LocalMinimum,
    FrontierExhausted,
    StepCap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GerminationResult {
    pub seeds: NodeSet,
    pub germinated: NodeSet,
    pub profile: SweepProfile,
    /// Resistance that selected each addition, aligned with
    /// `profile.ordering[seed_count..]`.
    pub per_step_min_er: Vec<f64>,
    pub stop_reason: StopReason,
}

impl GerminationResult {
    pub fn full_ordering(&self) -> &[usize] {
        &self.profile.ordering
    }

    pub fn steps(&self) -> usize {
        self.per_step_min_er.len()
    }

    /// JSON-ready view in external node labels.
    pub fn report(&self, g: &Graph) -> GerminationReport {
        let labels = |v: &[usize]| v.iter().map(|&x| g.label(x)).collect();
        GerminationReport {
            seeds: labels(self.seeds.as_slice()),
            germinated: labels(self.germinated.as_slice()),
            ordering: labels(&self.profile.ordering),
            scores: self.profile.scores.clone(),
            min_ers: self.per_step_min_er.clone(),
            stopped_at: self.profile.selected,
            stop_reason: self.stop_reason,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GerminationReport {
    pub seeds: Vec<u64>,
    pub germinated: Vec<u64>,
    pub ordering: Vec<u64>,
    pub scores: Vec<f64>,
    pub min_ers: Vec<f64>,
    pub stopped_at: Option<usize>,
    pub stop_reason: StopReason,
}

/// Errors unless every seed lies in one connected component.
pub(crate) fn check_single_component(g: &Graph, seeds: &NodeSet) -> Result<()> {
    let comps = g.components();
    let first = comps.label[seeds.as_slice()[0]];
    if seeds.iter().any(|v| comps.label[v] != first) {
        return Err(Error::InvalidInput(
            "seeds span more than one connected component".into(),
        ));
    }
    Ok(())
}

pub fn germinate(
    g: &Graph,
    rmap: &EdgeResistanceMap,
    seeds: &NodeSet,
    config: &GerminationConfig,
) -> Result<GerminationResult> {
    if seeds.is_empty() {
        return Err(Error::InvalidInput("seed set is empty".into()));
    }
    if let Some(v) = seeds.iter().find(|&v| v >= g.node_count()) {
        return Err(Error::NodeOutOfRange {
            node: v,
            node_count: g.node_count(),
        });
    }
    if !(config.rise_threshold > 0.0) {
        return Err(Error::InvalidParameter("rise threshold must be positive".into()));
    }
    rmap.check_graph(g)?;
    check_single_component(g, seeds)?;

    let n = g.node_count();
    let cap = config.step_cap_for(seeds.len());
    let mut tracker = SweepTracker::new(g);
    let mut best = vec![f64::INFINITY; n];
    let mut frontier: BinaryHeap<Reverse<(OrderedFloat<f64>, usize)>> = BinaryHeap::new();
    let mut ordering: Vec<usize> = seeds.iter().collect();
    let mut scores = Vec::new();
    let mut min_ers = Vec::new();
    let mut detector = LocalMinDetector::new(config.rise_threshold, config.min_steps);

    let relax = |v: usize,
                 tracker: &SweepTracker,
                 best: &mut [f64],
                 frontier: &mut BinaryHeap<Reverse<(OrderedFloat<f64>, usize)>>| {
        for (w, e) in g.incident(v) {
            let r = rmap.by_edge(e);
            if !tracker.contains(w) && r < best[w] {
                best[w] = r;
                frontier.push(Reverse((OrderedFloat(r), w)));
            }
        }
    };

    for v in seeds.iter() {
        tracker.add(v);
    }
    for v in seeds.iter() {
        relax(v, &tracker, &mut best, &mut frontier);
    }
    let mut defined = match tracker.conductance() {
        Some(s) => {
            scores.push(s);
            detector.push(s);
            true
        }
        None => false,
    };

    let stop_reason = loop {
        if min_ers.len() >= cap {
            break StopReason::StepCap;
        }
        // Entries are stale once their node joined or found a smaller value.
        let next = loop {
            match frontier.pop() {
                Some(Reverse((r, w))) if !tracker.contains(w) && r.0 == best[w] => break Some((r.0, w)),
                Some(_) => continue,
                None => break None,
            }
        };
        let Some((r, v)) = next else {
            break StopReason::FrontierExhausted;
        };
        tracker.add(v);
        ordering.push(v);
        min_ers.push(r);
        relax(v, &tracker, &mut best, &mut frontier);
        match tracker.conductance() {
            Some(s) if defined => {
                scores.push(s);
                if detector.push(s).is_some() && config.stop_at_minimum {
                    break StopReason::LocalMinimum;
                }
            }
            // Conductance is undefined once the set is the whole graph.
            _ => defined = false,
        }
    };

    let (selected, selection) = match detector.fired() {
        Some(k) if config.stop_at_minimum => (Some(k), Selection::LocalMinimum),
        _ => (None, Selection::Everything),
    };
    let profile = SweepProfile {
        ordering,
        seed_count: seeds.len(),
        scores,
        selected,
        selection,
    };
    let germinated = profile.selected_nodes().iter().copied().collect();
    Ok(GerminationResult {
        seeds: seeds.clone(),
        germinated,
        profile,
        per_step_min_er: min_ers,
        stop_reason,
    })
}

/// Checks that each addition grew the resistance diameter of the current set
/// by at most the resistance that selected it (tolerance `1e-9`).
pub fn check_theorem2_bound(result: &GerminationResult, pairwise: &PairwiseResistance) -> bool {
    step_diameters(result, pairwise)
        .windows(2)
        .zip(&result.per_step_min_er)
        .all(|(d, &r)| d[1] <= d[0] + r + 1e-9)
}

/// Resistance diameter of every prefix, from the seed set through each
/// addition.
pub fn step_diameters(result: &GerminationResult, pairwise: &PairwiseResistance) -> Vec<f64> {
    let order = &result.profile.ordering;
    let k = result.profile.seed_count;
    let mut diam = pairwise.diameter(&order[..k]);
    let mut out = vec![diam];
    for i in k..k + result.per_step_min_er.len() {
        let v = order[i];
        for &u in &order[..i] {
            diam = diam.max(pairwise.get(u, v));
        }
        out.push(diam);
    }
    out
}
