//! Community scores, sweep profiles and classification metrics.
//!
//! Conductance of a node set `S` is `cut(S) / min(vol(S), vol(V∖S))`.
//!
//! A sweep profile holds one score per growth step, starting with the score of
//! the full seed set at index 0. Index `k` therefore describes the prefix of
//! length `seed_count + k` of the ordering.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{cut_size, volume, Graph, NodeSet};

/// Rise required after a germination minimum.
pub const GERMINATION_RISE: f64 = 0.05;
/// Rise required after a PageRank sweep minimum.
pub const SWEEP_RISE: f64 = 0.20;
/// Fewest growth steps before a minimum can be accepted.
pub const DEFAULT_MIN_STEPS: usize = 2;

pub fn conductance(g: &Graph, set: &NodeSet) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::InvalidInput("conductance of an empty set".into()));
    }
    let vol = volume(g, set);
    let denom = vol.min(g.total_volume() - vol);
    if denom == 0 {
        return Err(Error::InvalidInput(
            "conductance undefined: set or complement has zero volume".into(),
        ));
    }
    Ok(cut_size(g, set) as f64 / denom as f64)
}

/// Incremental conductance of a growing node set.
#[derive(Debug, Clone)]
pub struct SweepTracker<'g> {
    graph: &'g Graph,
    in_set: Vec<bool>,
    volume: usize,
    cut: usize,
}

impl<'g> SweepTracker<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        SweepTracker {
            graph,
            in_set: vec![false; graph.node_count()],
            volume: 0,
            cut: 0,
        }
    }

    /// Adds `v`; no-op if already present.
    pub fn add(&mut self, v: usize) {
        if self.in_set[v] {
            return;
        }
        let inside = self
            .graph
            .neighbors(v)
            .iter()
            .filter(|&&w| self.in_set[w])
            .count();
        let d = self.graph.degree(v);
        self.in_set[v] = true;
        self.volume += d;
        self.cut = self.cut + d - 2 * inside;
    }

    pub fn contains(&self, v: usize) -> bool {
        self.in_set[v]
    }

    pub fn volume(&self) -> usize {
        self.volume
    }

    pub fn cut(&self) -> usize {
        self.cut
    }

    /// `None` when either side has zero volume.
    pub fn conductance(&self) -> Option<f64> {
        let denom = self.volume.min(self.graph.total_volume() - self.volume);
        (denom > 0).then(|| self.cut as f64 / denom as f64)
    }
}

/// Online first-local-minimum detector.
///
/// Index `i` is a local minimum when `s[i] < s[i-1]` and `s[i] <= s[i+1]`.
/// It qualifies once some later score reaches `(1 + rise) · s[i]` before any
/// later score drops below `s[i]`. Only indices `>= min_index` count.
#[derive(Debug, Clone)]
pub struct LocalMinDetector {
    rise: f64,
    min_index: usize,
    scores: Vec<f64>,
    candidate: Option<usize>,
    fired: Option<usize>,
}

impl LocalMinDetector {
    pub fn new(rise: f64, min_index: usize) -> Self {
        LocalMinDetector {
            rise,
            min_index,
            scores: Vec::new(),
            candidate: None,
            fired: None,
        }
    }

    /// Feeds the next score. Returns the qualifying index the first time one
    /// is found; later calls keep returning it.
    pub fn push(&mut self, score: f64) -> Option<usize> {
        if self.fired.is_some() {
            return self.fired;
        }
        self.scores.push(score);
        let k = self.scores.len() - 1;
        let s = &self.scores;
        if self.candidate.is_none() && k >= 2 {
            let i = k - 1;
            if i >= self.min_index && s[i] < s[i - 1] && s[i] <= s[k] {
                self.candidate = Some(i);
            }
        }
        if let Some(c) = self.candidate {
            if s[k] >= (1.0 + self.rise) * s[c] && k > c {
                self.fired = Some(c);
            } else if s[k] < s[c] {
                self.candidate = None;
            }
        }
        self.fired
    }

    pub fn fired(&self) -> Option<usize> {
        self.fired
    }
}

/// Smallest index `>= min_index` that is a local minimum followed by a rise of
/// at least `rise_threshold` (relative) before being undercut.
pub fn detect_first_local_min(scores: &[f64], rise_threshold: f64, min_index: usize) -> Option<usize> {
    let mut det = LocalMinDetector::new(rise_threshold, min_index);
    scores.iter().find_map(|&s| det.push(s))
}

/// Index of the smallest score; earliest on ties.
pub fn global_min(scores: &[f64]) -> Option<usize> {
    scores
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, &s)| match best {
            Some((_, b)) if b <= s => best,
            _ => Some((i, s)),
        })
        .map(|(i, _)| i)
}

/// What to do when no local minimum qualifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Fallback {
    GlobalMinimum,
    Everything,
}

/// Rule for picking the cut point of a sweep profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum CutRule {
    FirstLocalMinimum {
        rise: f64,
        min_steps: usize,
        fallback: Fallback,
    },
    GlobalMinimum,
}

impl CutRule {
    /// Local-minimum rule used for PageRank sweeps.
    pub fn sweep() -> Self {
        CutRule::FirstLocalMinimum {
            rise: SWEEP_RISE,
            min_steps: DEFAULT_MIN_STEPS,
            fallback: Fallback::GlobalMinimum,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let CutRule::FirstLocalMinimum { rise, .. } = self {
            if !(*rise > 0.0 && rise.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "rise threshold must be positive, got {rise}"
                )));
            }
        }
        Ok(())
    }

    /// Chosen score index, or `None` when the whole ordering is kept.
    pub fn select(&self, scores: &[f64]) -> (Option<usize>, Selection) {
        match *self {
            CutRule::GlobalMinimum => match global_min(scores) {
                Some(k) => (Some(k), Selection::GlobalMinimum),
                None => (None, Selection::Everything),
            },
            CutRule::FirstLocalMinimum {
                rise,
                min_steps,
                fallback,
            } => match detect_first_local_min(scores, rise, min_steps) {
                Some(k) => (Some(k), Selection::LocalMinimum),
                None => match fallback {
                    Fallback::GlobalMinimum => CutRule::GlobalMinimum.select(scores),
                    Fallback::Everything => (None, Selection::Everything),
                },
            },
        }
    }
}

/// How a profile's cut point was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    LocalMinimum,
    GlobalMinimum,
    /// No minimum qualified and the whole ordering was kept.
    Everything,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepProfile {
    pub ordering: Vec<usize>,
    pub seed_count: usize,
    pub scores: Vec<f64>,
    pub selected: Option<usize>,
    pub selection: Selection,
}

impl SweepProfile {
    /// Length of the selected prefix of `ordering`.
    pub fn prefix_len(&self) -> usize {
        match self.selected {
            Some(k) => self.seed_count + k,
            None => self.ordering.len(),
        }
    }

    pub fn selected_nodes(&self) -> &[usize] {
        &self.ordering[..self.prefix_len()]
    }

    /// CSV with header `prefix,conductance`, where `prefix` is the number of
    /// nodes in the prefix.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "prefix,conductance")?;
        for (k, s) in self.scores.iter().enumerate() {
            writeln!(out, "{},{}", self.seed_count + k, s)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrecisionRecall {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Set when the estimate was empty and precision is reported as 0.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub empty_estimate: bool,
}

pub fn precision_recall_f1(estimate: &NodeSet, truth: &NodeSet) -> Result<PrecisionRecall> {
    if truth.is_empty() {
        return Err(Error::InvalidInput("ground truth set is empty".into()));
    }
    if estimate.is_empty() {
        return Ok(PrecisionRecall {
            precision: 0.0,
            recall: 0.0,
            f1: 0.0,
            empty_estimate: true,
        });
    }
    let hits = estimate.intersection_size(truth) as f64;
    let precision = hits / estimate.len() as f64;
    let recall = hits / truth.len() as f64;
    Ok(PrecisionRecall {
        precision,
        recall,
        f1: f1(precision, recall),
        empty_estimate: false,
    })
}

fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrPoint {
    pub prefix: usize,
    pub precision: f64,
    pub recall: f64,
}

/// Precision and recall of every prefix `1..=len` of `ordering`.
pub fn pr_curve(ordering: &[usize], truth: &NodeSet) -> Result<Vec<PrPoint>> {
    if ordering.is_empty() {
        return Err(Error::InvalidInput("empty ordering".into()));
    }
    if truth.is_empty() {
        return Err(Error::InvalidInput("ground truth set is empty".into()));
    }
    let mut hits = 0usize;
    Ok(ordering
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if truth.contains(v) {
                hits += 1;
            }
            PrPoint {
                prefix: i + 1,
                precision: hits as f64 / (i + 1) as f64,
                recall: hits as f64 / truth.len() as f64,
            }
        })
        .collect())
}

/// CSV with header `prefix,precision,recall`.
pub fn write_pr_curve_csv<W: Write>(curve: &[PrPoint], mut out: W) -> Result<()> {
    writeln!(out, "prefix,precision,recall")?;
    for p in curve {
        writeln!(out, "{},{},{}", p.prefix, p.precision, p.recall)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> NodeSet {
        v.iter().copied().collect()
    }

    fn barbell() -> Graph {
        Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]).unwrap()
    }

    #[test]
    fn barbell_triangle_conductance() {
        assert!((conductance(&barbell(), &set(&[0, 1, 2])).unwrap() - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn k4_pairs() {
        let mut e = Vec::new();
        for u in 0..4 {
            for v in u + 1..4 {
                e.push((u, v));
            }
        }
        let k4 = Graph::from_edges(4, &e).unwrap();
        for &(u, v) in &e {
            assert!((conductance(&k4, &set(&[u, v])).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn independent_set_has_conductance_one() {
        let g = barbell();
        assert_eq!(conductance(&g, &set(&[0, 4])).unwrap(), 1.0);
    }

    #[test]
    fn undefined_conductance() {
        let g = barbell();
        assert!(conductance(&g, &NodeSet::new()).is_err());
        assert!(conductance(&g, &set(&[0, 1, 2, 3, 4, 5])).is_err());
    }

    #[test]
    fn tracker_matches_direct() {
        let g = barbell();
        let mut t = SweepTracker::new(&g);
        let mut s = NodeSet::new();
        for v in [3, 0, 2, 1, 5] {
            t.add(v);
            s.insert(v);
            assert_eq!(t.conductance().unwrap(), conductance(&g, &s).unwrap());
        }
        t.add(4);
        assert_eq!(t.conductance(), None);
    }

    #[test]
    fn local_min_examples() {
        assert_eq!(detect_first_local_min(&[0.9, 0.5, 0.7, 0.6], 0.05, 0), Some(1));
        assert_eq!(detect_first_local_min(&[0.9, 0.5, 0.51, 0.4], 0.05, 0), None);
        assert_eq!(detect_first_local_min(&[0.9, 0.8, 0.5, 0.3, 0.1], 0.05, 0), None);
        assert_eq!(detect_first_local_min(&[], 0.05, 0), None);
    }

    #[test]
    fn local_min_respects_min_index() {
        let s = [0.9, 0.5, 0.7, 0.8, 0.4, 0.6];
        assert_eq!(detect_first_local_min(&s, 0.05, 0), Some(1));
        assert_eq!(detect_first_local_min(&s, 0.05, 2), Some(4));
    }

    #[test]
    fn plateau_minimum() {
        // Flat bottom is accepted at its left end.
        assert_eq!(detect_first_local_min(&[1.0, 0.5, 0.5, 0.6], 0.1, 0), Some(1));
        // Rise must be reached before an undercut.
        assert_eq!(detect_first_local_min(&[1.0, 0.5, 0.5, 0.49, 0.9], 0.1, 0), Some(3));
    }

    #[test]
    fn global_minimum_earliest() {
        assert_eq!(global_min(&[0.3, 0.1, 0.2, 0.1]), Some(1));
        assert_eq!(global_min(&[]), None);
    }

    #[test]
    fn prf_examples() {
        let t = set(&[1, 2, 3]);
        let r = precision_recall_f1(&t, &t).unwrap();
        assert_eq!((r.precision, r.recall, r.f1), (1.0, 1.0, 1.0));
        let r = precision_recall_f1(&set(&[1, 2, 3, 4, 5, 6]), &t).unwrap();
        assert_eq!((r.precision, r.recall), (0.5, 1.0));
        assert!((r.f1 - 2.0 / 3.0).abs() < 1e-15);
        let r = precision_recall_f1(&set(&[7, 8]), &t).unwrap();
        assert_eq!((r.precision, r.recall, r.f1), (0.0, 0.0, 0.0));
        let r = precision_recall_f1(&NodeSet::new(), &t).unwrap();
        assert!(r.empty_estimate);
        assert!(precision_recall_f1(&t, &NodeSet::new()).is_err());
    }

    #[test]
    fn pr_curve_barbell() {
        let c = pr_curve(&[0, 1, 3, 2], &set(&[0, 1, 2])).unwrap();
        let p: Vec<f64> = c.iter().map(|x| x.precision).collect();
        let r: Vec<f64> = c.iter().map(|x| x.recall).collect();
        assert_eq!(p, vec![1.0, 1.0, 2.0 / 3.0, 0.75]);
        assert_eq!(r, vec![1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 1.0]);
    }

    #[test]
    fn pr_curve_truth_then_outsiders() {
        let c = pr_curve(&[2, 0, 1, 5, 6], &set(&[0, 1, 2])).unwrap();
        assert_eq!(c[2].precision, 1.0);
        assert!(c[3].precision < c[2].precision && c[4].precision < c[3].precision);
        assert!(c[2..].iter().all(|p| p.recall == 1.0));
    }

    #[test]
    fn csv_output() {
        let mut buf = Vec::new();
        write_pr_curve_csv(&pr_curve(&[0, 9], &set(&[0])).unwrap(), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "prefix,precision,recall\n1,1,1\n2,0.5,1\n");
        let prof = SweepProfile {
            ordering: vec![0, 1, 2],
            seed_count: 1,
            scores: vec![1.0, 0.5],
            selected: Some(1),
            selection: Selection::LocalMinimum,
        };
        let mut buf = Vec::new();
        prof.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "prefix,conductance\n1,1\n2,0.5\n");
        assert_eq!(prof.selected_nodes(), &[0, 1]);
    }
}
