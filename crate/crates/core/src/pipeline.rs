//! The three detectors: PageRank alone, resistance growth alone, and
//! germination followed by PageRank.
//!
//! Detection runs inside the connected component of the seeds. When the
//! graph is disconnected the component is extracted once and cached together
//! with its resistance map, so repeated queries on one graph share the work.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::germination::{germinate, GerminationConfig, GerminationReport, GerminationResult};
use crate::graph::{Components, Graph, NodeSet};
use crate::ppr::{personalized_pagerank, ppr_sweep, PprBackend, SweepConfig, DEFAULT_ALPHA};
use crate::resistance::{edge_resistances, EdgeResistanceMap, ResistanceBackend};
use crate::scoring::{Selection, SweepProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    PprOnly,
    ErOnly,
    GerminateThenPpr,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::PprOnly, Method::ErOnly, Method::GerminateThenPpr];

    pub fn name(self) -> &'static str {
        match self {
            Method::PprOnly => "ppr_only",
            Method::ErOnly => "er_only",
            Method::GerminateThenPpr => "germinate_then_ppr",
        }
    }

    pub fn needs_resistances(self) -> bool {
        self != Method::PprOnly
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectorConfig {
    pub method: Method,
    #[serde(skip)]
    pub resistance: ResistanceBackend,
    pub alpha: f64,
    pub ppr_backend: PprBackend,
    pub germination: GerminationConfig,
    pub sweep: SweepConfig,
}

impl DetectorConfig {
    pub fn new(method: Method) -> Self {
        DetectorConfig {
            method,
            resistance: ResistanceBackend::default(),
            alpha: DEFAULT_ALPHA,
            ppr_backend: PprBackend::default(),
            germination: GerminationConfig::default(),
            sweep: SweepConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        if !(self.germination.rise_threshold > 0.0) {
            return Err(Error::InvalidParameter(
                "germination rise threshold must be positive".into(),
            ));
        }
        self.sweep.rule.validate()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub resistance: Duration,
    pub germination: Duration,
    pub ppr: Duration,
}

impl StageTimings {
    pub fn total(&self) -> Duration {
        self.resistance + self.germination + self.ppr
    }
}

/// Result of one detection. Node ids refer to the input graph.
#[derive(Debug, Clone)]
pub struct DetectionOutcome {
    pub method: Method,
    pub seeds: NodeSet,
    pub estimate: NodeSet,
    /// Full growth order of the final stage, seeds first.
    pub ordering: Vec<usize>,
    pub germination: Option<GerminationResult>,
    /// Profile that produced the estimate.
    pub sweep: Option<SweepProfile>,
    /// Position in `ordering` where germination handed over to PageRank.
    pub stage_boundary: Option<usize>,
    /// Set when the cut excluded an original seed and was extended to cover it.
    pub seeds_extended: bool,
    pub restricted_to_component: bool,
    pub timings: StageTimings,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub scores: Vec<f64>,
    pub selected: Option<usize>,
    pub selection: Selection,
}

#[derive(Debug, Clone, Serialize)]
pub struct DetectionReport {
    pub method: Method,
    pub seeds: Vec<u64>,
    pub estimate: Vec<u64>,
    pub ordering: Vec<u64>,
    pub stage_boundary: Option<usize>,
    pub seeds_extended: bool,
    pub restricted_to_component: bool,
    pub germination: Option<GerminationReport>,
    pub sweep: Option<SweepReport>,
}

impl DetectionOutcome {
    /// JSON-ready view in external node labels.
    pub fn report(&self, g: &Graph) -> DetectionReport {
        let labels = |v: &[usize]| v.iter().map(|&x| g.label(x)).collect::<Vec<_>>();
        DetectionReport {
            method: self.method,
            seeds: labels(self.seeds.as_slice()),
            estimate: labels(self.estimate.as_slice()),
            ordering: labels(&self.ordering),
            stage_boundary: self.stage_boundary,
            seeds_extended: self.seeds_extended,
            restricted_to_component: self.restricted_to_component,
            germination: self.germination.as_ref().map(|r| r.report(g)),
            sweep: self.sweep.as_ref().map(|p| SweepReport {
                scores: p.scores.clone(),
                selected: p.selected,
                selection: p.selection,
            }),
        }
    }
}

struct ComponentView {
    /// `None` when the component is the whole graph.
    sub: Option<(Graph, Vec<usize>)>,
    resistances: Mutex<HashMap<ResistanceBackend, Arc<EdgeResistanceMap>>>,
}

impl ComponentView {
    fn graph<'a>(&'a self, full: &'a Graph) -> &'a Graph {
        self.sub.as_ref().map(|(g, _)| g).unwrap_or(full)
    }
}

/// Runs detections on one graph, caching component subgraphs and resistance
/// maps between calls. Safe to share across threads.
pub struct Detector<'g> {
    graph: &'g Graph,
    components: Components,
    views: Mutex<HashMap<usize, Arc<ComponentView>>>,
}

impl<'g> Detector<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Detector {
            graph,
            components: graph.components(),
            views: Mutex::new(HashMap::new()),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    fn view(&self, component: usize) -> Result<Arc<ComponentView>> {
        let mut views = self.views.lock().unwrap();
        if let Some(v) = views.get(&component) {
            return Ok(v.clone());
        }
        let sub = if self.components.count == 1 {
            None
        } else {
            let members = self.components.members(component);
            log::info!(
                "restricting detection to the seeds' component ({} of {} nodes)",
                members.len(),
                self.graph.node_count()
            );
            Some(self.graph.induced_subgraph(&members)?)
        };
        let view = Arc::new(ComponentView {
            sub,
            resistances: Mutex::new(HashMap::new()),
        });
        views.insert(component, view.clone());
        Ok(view)
    }

    fn resistances(&self, view: &ComponentView, backend: ResistanceBackend) -> Result<Arc<EdgeResistanceMap>> {
        let mut cache = view.resistances.lock().unwrap();
        if let Some(r) = cache.get(&backend) {
            return Ok(r.clone());
        }
        let r = Arc::new(edge_resistances(view.graph(self.graph), backend)?);
        cache.insert(backend, r.clone());
        Ok(r)
    }

    /// Resistance map of the component containing `node`, in component-local ids.
    pub fn component_resistances(&self, node: usize, backend: ResistanceBackend) -> Result<Arc<EdgeResistanceMap>> {
        let view = self.view(self.components.label[node])?;
        self.resistances(&view, backend)
    }

    pub fn detect(&self, seeds: &NodeSet, config: &DetectorConfig) -> Result<DetectionOutcome> {
        config.validate()?;
        let g = self.graph;
        if seeds.is_empty() {
            return Err(Error::InvalidInput("seed set is empty".into()));
        }
        if let Some(v) = seeds.iter().find(|&v| v >= g.node_count()) {
            return Err(Error::NodeOutOfRange {
                node: v,
                node_count: g.node_count(),
            });
        }
        let comp = self.components.label[seeds.as_slice()[0]];
        if seeds.iter().any(|v| self.components.label[v] != comp) {
            return Err(Error::InvalidInput(
                "seeds span more than one connected component".into(),
            ));
        }
        let view = self.view(comp)?;
        let local_graph = view.graph(g);
        let (to_global, local_seeds): (Box<dyn Fn(usize) -> usize>, NodeSet) = match &view.sub {
            None => (Box::new(|v| v), seeds.clone()),
            Some((_, map)) => {
                let index: HashMap<usize, usize> =
                    map.iter().enumerate().map(|(i, &v)| (v, i)).collect();
                let local = seeds.iter().map(|v| index[&v]).collect();
                (Box::new(move |v| map[v]), local)
            }
        };

        let mut timings = StageTimings::default();
        let rmap = if config.method.needs_resistances() {
            let t = Instant::now();
            let r = self
                .resistances(&view, config.resistance)
                .map_err(|e| e.in_stage("resistance"))?;
            timings.resistance = t.elapsed();
            Some(r)
        } else {
            None
        };

        let mut germination = None;
        let mut stage_boundary = None;
        let (ordering, prefix_len, profile) = match config.method {
            Method::PprOnly => {
                let t = Instant::now();
                let (_, prof) = run_ppr(local_graph, &local_seeds, config)?;
                timings.ppr = t.elapsed();
                (prof.ordering.clone(), prof.prefix_len(), prof)
            }
            Method::GerminateThenPpr => {
                let t = Instant::now();
                let res = germinate(local_graph, rmap.as_ref().unwrap(), &local_seeds, &config.germination)
                    .map_err(|e| e.in_stage("germination"))?;
                timings.germination = t.elapsed();
                let t = Instant::now();
                let (_, prof) = run_ppr(local_graph, &res.germinated, config)?;
                timings.ppr = t.elapsed();
                stage_boundary = Some(res.germinated.len());
                germination = Some(res);
                (prof.ordering.clone(), prof.prefix_len(), prof)
            }
            Method::ErOnly => {
                let t = Instant::now();
                let grow = GerminationConfig {
                    stop_at_minimum: false,
                    ..config.germination
                };
                let res = germinate(local_graph, rmap.as_ref().unwrap(), &local_seeds, &grow)
                    .map_err(|e| e.in_stage("germination"))?;
                timings.germination = t.elapsed();
                let mut prof = res.profile.clone();
                let (selected, selection) = config.sweep.rule.select(&prof.scores);
                prof.selected = selected;
                prof.selection = selection;
                germination = Some(res);
                (prof.ordering.clone(), prof.prefix_len(), prof)
            }
        };

        let (prefix_len, seeds_extended) = cover_seeds(&ordering, prefix_len, &local_seeds);
        let mut estimate: NodeSet = ordering[..prefix_len].iter().map(|&v| to_global(v)).collect();
        for v in seeds.iter() {
            estimate.insert(v);
        }

        let map_nodes = |v: &[usize]| v.iter().map(|&x| to_global(x)).collect::<Vec<_>>();
        let map_profile = |p: SweepProfile| SweepProfile {
            ordering: map_nodes(&p.ordering),
            ..p
        };
        let germination = germination.map(|r| GerminationResult {
            seeds: r.seeds.iter().map(&to_global).collect(),
            germinated: r.germinated.iter().map(&to_global).collect(),
            profile: map_profile(r.profile),
            ..r
        });
        Ok(DetectionOutcome {
            method: config.method,
            seeds: seeds.clone(),
            estimate,
            ordering: map_nodes(&ordering),
            germination,
            sweep: Some(map_profile(profile)),
            stage_boundary,
            seeds_extended,
            restricted_to_component: view.sub.is_some(),
            timings,
        })
    }
}

fn run_ppr(g: &Graph, seeds: &NodeSet, config: &DetectorConfig) -> Result<(NodeSet, SweepProfile)> {
    let x = personalized_pagerank(g, seeds, config.alpha, config.ppr_backend)
        .map_err(|e| e.in_stage("ppr"))?;
    ppr_sweep(g, &x, seeds, &config.sweep).map_err(|e| e.in_stage("ppr"))
}

/// Smallest prefix length `>= prefix_len` that includes every seed.
fn cover_seeds(ordering: &[usize], prefix_len: usize, seeds: &NodeSet) -> (usize, bool) {
    let last_seed = ordering
        .iter()
        .rposition(|&v| seeds.contains(v))
        .map_or(0, |p| p + 1);
    if last_seed > prefix_len {
        log::warn!("sweep cut dropped an original seed; extending prefix to cover it");
        (last_seed, true)
    } else {
        (prefix_len, false)
    }
}

/// One-shot detection.
pub fn detect(g: &Graph, seeds: &NodeSet, config: &DetectorConfig) -> Result<DetectionOutcome> {
    Detector::new(g).detect(seeds, config)
}
