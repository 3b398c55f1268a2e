use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use seedgerm::experiment::{run_on, CommunityPolicy, DatasetSource, ExperimentSpec};
use seedgerm::generators::{generate_hsbm, generate_lfr_like, hierarchical_matrix, planted_partition_matrix};
use seedgerm::germination::{germinate, GerminationConfig};
use seedgerm::io::{
    parse_communities, parse_edge_list, parse_labels, resolve_labels, write_communities, write_edge_list,
};
use seedgerm::ppr::{personalized_pagerank, ppr_sweep, Ranking, SweepConfig};
use seedgerm::resistance::{
    edge_resistances, EdgeResistanceMap, ExactSolver, ResistanceBackend, DEFAULT_NUM_TREES,
};
use seedgerm::scoring::{pr_curve, precision_recall_f1, write_pr_curve_csv};
use seedgerm::{Detector, DetectorConfig, Error, Graph, LfrParams, Method, NodeSet, PprBackend};

#[derive(Parser)]
#[command(name = "seedgerm", version, about = "Seed set germination and local community detection")]
struct Cli {
    /// Master seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic graph with planted communities.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Compute effective resistances of every edge.
    Er(ErArgs),
    /// Grow a seed set by greedy effective resistance minimization.
    Germinate(GerminateArgs),
    /// Personalized PageRank and sweep cut.
    Ppr(PprArgs),
    /// Detect the community around a seed set.
    Detect(DetectArgs),
    /// Run a repeated experiment against ground-truth communities.
    Bench(BenchArgs),
    /// Score a node list against a ground-truth community.
    Eval(EvalArgs),
}

#[derive(Args)]
struct Output {
    /// Edge list output path.
    #[arg(long)]
    out_edges: PathBuf,
    /// Community file output path.
    #[arg(long)]
    out_communities: PathBuf,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Stochastic block model (planted partition or nested hierarchy).
    Hsbm {
        /// Block sizes, comma separated (planted partition).
        #[arg(long, value_delimiter = ',')]
        blocks: Vec<usize>,
        #[arg(long, default_value_t = 0.3)]
        p_in: f64,
        #[arg(long, default_value_t = 0.01)]
        p_out: f64,
        /// Hierarchy depth; with --branching and --p-levels replaces --p-in/--p-out.
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long, default_value_t = 2)]
        branching: usize,
        /// Probabilities from within-block up to the root, comma separated.
        #[arg(long, value_delimiter = ',')]
        p_levels: Vec<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Power-law benchmark with mixing parameter.
    Lfr {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 2.5)]
        degree_exponent: f64,
        #[arg(long, default_value_t = 1.5)]
        community_exponent: f64,
        #[arg(long, default_value_t = 0.2)]
        mu: f64,
        #[arg(long, default_value_t = 15.0)]
        avg_degree: f64,
        #[arg(long, default_value_t = 50)]
        max_degree: usize,
        #[arg(long, default_value_t = 20)]
        min_community: usize,
        #[arg(long, default_value_t = 100)]
        max_community: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ErMethod {
    Auto,
    Exact,
    Dense,
    Iterative,
    Sampled,
}

#[derive(Args)]
struct ErOptions {
    #[arg(long, value_enum, default_value_t = ErMethod::Auto)]
    er_method: ErMethod,
    /// Spanning trees for sampled resistances.
    #[arg(long, default_value_t = DEFAULT_NUM_TREES)]
    trees: usize,
}

impl ErOptions {
    fn backend(&self, seed: u64) -> ResistanceBackend {
        let trees = self.trees;
        match self.er_method {
            ErMethod::Auto => ResistanceBackend::Auto { trees, seed },
            ErMethod::Exact => ResistanceBackend::Exact(ExactSolver::Auto),
            ErMethod::Dense => ResistanceBackend::Exact(ExactSolver::Dense),
            ErMethod::Iterative => ResistanceBackend::Exact(ExactSolver::Iterative),
            ErMethod::Sampled => ResistanceBackend::Sampled { trees, seed },
        }
    }
}

#[derive(Args)]
struct ErArgs {
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    er: ErOptions,
    /// TSV output path; the map goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SeedArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Seed node ids as they appear in the edge list, comma or space separated.
    #[arg(long)]
    seeds: String,
}

#[derive(Args)]
struct GermOptions {
    #[arg(long, default_value_t = seedgerm::scoring::GERMINATION_RISE)]
    germ_rise: f64,
    #[arg(long)]
    step_cap: Option<usize>,
    /// Precomputed resistance map (TSV from `er`).
    #[arg(long)]
    resistances: Option<PathBuf>,
}

impl GermOptions {
    fn config(&self) -> GerminationConfig {
        GerminationConfig {
            rise_threshold: self.germ_rise,
            step_cap: self.step_cap,
            ..GerminationConfig::default()
        }
    }
}

#[derive(Args)]
struct GerminateArgs {
    #[command(flatten)]
    input: SeedArgs,
    #[command(flatten)]
    germ: GermOptions,
    #[command(flatten)]
    er: ErOptions,
    /// Conductance profile CSV output.
    #[arg(long)]
    profile_csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PprMethod {
    Power,
    Push,
}

#[derive(Args)]
struct PprOptions {
    #[arg(long, default_value_t = seedgerm::ppr::DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = PprMethod::Power)]
    ppr_backend: PprMethod,
    #[arg(long, default_value_t = seedgerm::ppr::DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long, default_value_t = seedgerm::ppr::DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = seedgerm::scoring::SWEEP_RISE)]
    sweep_rise: f64,
    /// Pick the global conductance minimum instead of the first local one.
    #[arg(long)]
    global_min: bool,
    /// Rank by score / degree during the sweep.
    #[arg(long)]
    degree_normalized: bool,
}

impl PprOptions {
    fn backend(&self) -> PprBackend {
        match self.ppr_backend {
            PprMethod::Power => PprBackend::PowerIteration { tol: self.tol },
            PprMethod::Push => PprBackend::Push { epsilon: self.epsilon },
        }
    }

    fn sweep(&self) -> SweepConfig {
        let mut cfg = SweepConfig::default();
        if self.global_min {
            cfg.rule = seedgerm::CutRule::GlobalMinimum;
        } else if let seedgerm::CutRule::FirstLocalMinimum { rise, .. } = &mut cfg.rule {
            *rise = self.sweep_rise;
        }
        if self.degree_normalized {
            cfg.ranking = Ranking::DegreeNormalized;
        }
        cfg
    }
}

#[derive(Args)]
struct PprArgs {
    #[command(flatten)]
    input: SeedArgs,
    #[command(flatten)]
    ppr: PprOptions,
    /// Score vector TSV output.
    #[arg(long)]
    scores: Option<PathBuf>,
    #[arg(long)]
    profile_csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    PprOnly,
    ErOnly,
    GerminateThenPpr,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::PprOnly => Method::PprOnly,
            MethodArg::ErOnly => Method::ErOnly,
            MethodArg::GerminateThenPpr => Method::GerminateThenPpr,
        }
    }
}

#[derive(Args)]
struct DetectorOptions {
    #[command(flatten)]
    ppr: PprOptions,
    #[arg(long, default_value_t = seedgerm::scoring::GERMINATION_RISE)]
    germ_rise: f64,
    #[arg(long)]
    step_cap: Option<usize>,
    #[command(flatten)]
    er: ErOptions,
}

impl DetectorOptions {
    fn config(&self, method: Method, seed: u64) -> DetectorConfig {
        let mut c = DetectorConfig::new(method);
        c.alpha = self.ppr.alpha;
        c.ppr_backend = self.ppr.backend();
        c.sweep = self.ppr.sweep();
        c.germination.rise_threshold = self.germ_rise;
        c.germination.step_cap = self.step_cap;
        c.resistance = self.er.backend(seed);
        c
    }
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    input: SeedArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::GerminateThenPpr)]
    method: MethodArg,
    #[command(flatten)]
    detector: DetectorOptions,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Varying,
    Fixed,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    communities: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [MethodArg::PprOnly, MethodArg::GerminateThenPpr])]
    methods: Vec<MethodArg>,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long, default_value_t = 3)]
    seeds_per_run: usize,
    #[arg(long, value_enum, default_value_t = PolicyArg::Varying)]
    policy: PolicyArg,
    /// Smallest eligible community (default max(seeds_per_run + 2, 5)).
    #[arg(long)]
    min_community_size: Option<usize>,
    /// Directory for per-run precision-recall CSV files.
    #[arg(long)]
    curves: Option<PathBuf>,
    /// Record runtimes in the report (output is then not reproducible).
    #[arg(long)]
    timings: bool,
    #[command(flatten)]
    detector: DetectorOptions,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    communities: PathBuf,
    /// Zero-based line index of the ground-truth community.
    #[arg(long, default_value_t = 0)]
    community: usize,
    /// Estimated community node ids, comma or space separated.
    #[arg(long, conflicts_with = "estimate_file")]
    estimate: Option<String>,
    #[arg(long)]
    estimate_file: Option<PathBuf>,
}

type CliResult = Result<(), Error>;

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> CliResult {
    let mut out = io::stdout().lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, value)?;
            writeln!(out)?;
        }
        Format::Text => write!(out, "{}", text())?,
    }
    Ok(())
}

fn with_path(path: &Path, e: io::Error) -> Error {
    Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(path).map_err(|e| with_path(path, e))?))
}

fn load_seeds(input: &SeedArgs) -> Result<(Graph, NodeSet), Error> {
    let g = parse_edge_list(&input.graph)?;
    let seeds = resolve_labels(&g, &parse_labels(&input.seeds)?)?;
    if seeds.is_empty() {
        return Err(Error::InvalidInput("no seeds given".into()));
    }
    Ok((g, seeds))
}

fn labels(g: &Graph, nodes: &[usize]) -> Vec<u64> {
    nodes.iter().map(|&v| g.label(v)).collect()
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_gen(cmd: &GenCommand, seed: u64, format: Format) -> CliResult {
    let (pg, out) = match cmd {
        GenCommand::Hsbm {
            blocks,
            p_in,
            p_out,
            levels,
            branching,
            p_levels,
            out,
        } => {
            let (sizes, matrix) = match levels {
                Some(l) => {
                    let m = hierarchical_matrix(*l, *branching, p_levels)?;
                    let sizes = match blocks.as_slice() {
                        [s] => vec![*s; m.len()],
                        b if b.len() == m.len() => b.to_vec(),
                        _ => {
                            return Err(Error::InvalidParameter(format!(
                                "hierarchy has {} leaf blocks; give one size or one per block",
                                m.len()
                            )))
                        }
                    };
                    (sizes, m)
                }
                None => (blocks.clone(), planted_partition_matrix(blocks.len(), *p_in, *p_out)),
            };
            (generate_hsbm(&sizes, &matrix, seed)?, out)
        }
        GenCommand::Lfr {
            n,
            degree_exponent,
            community_exponent,
            mu,
            avg_degree,
            max_degree,
            min_community,
            max_community,
            out,
        } => {
            let params = LfrParams {
                n: *n,
                degree_exponent: *degree_exponent,
                community_exponent: *community_exponent,
                mixing: *mu,
                avg_degree: *avg_degree,
                max_degree: *max_degree,
                min_community: *min_community,
                max_community: *max_community,
                seed,
            };
            (generate_lfr_like(&params)?, out)
        }
    };
    let mut w = create(&out.out_edges)?;
    write_edge_list(&pg.graph, &mut w)?;
    w.flush()?;
    let mut w = create(&out.out_communities)?;
    write_communities(&pg.graph, &pg.communities, &mut w)?;
    w.flush()?;
    let summary = json!({
        "nodes": pg.graph.node_count(),
        "edges": pg.graph.edge_count(),
        "communities": pg.communities.len(),
        "realized_mixing": pg.realized_mixing(),
        "params": pg.params,
    });
    emit(format, &summary, || {
        format!(
            "nodes {}  edges {}  communities {}  realized mixing {:.4}\n",
            pg.graph.node_count(),
            pg.graph.edge_count(),
            pg.communities.len(),
            pg.realized_mixing()
        )
    })
}

fn cmd_er(args: &ErArgs, seed: u64, format: Format) -> CliResult {
    let g = parse_edge_list(&args.graph)?;
    let rmap = edge_resistances(&g, args.er.backend(seed))?;
    match &args.out {
        None => {
            let mut out = io::stdout().lock();
            rmap.write_tsv(&g, &mut out)?;
            Ok(())
        }
        Some(path) => {
            let mut w = create(path)?;
            rmap.write_tsv(&g, &mut w)?;
            w.flush()?;
            let summary = json!({
                "nodes": g.node_count(),
                "edges": g.edge_count(),
                "method": rmap.method(),
                "total": rmap.total(),
            });
            emit(format, &summary, || {
                format!(
                    "{} edges, total resistance {:.6}, written to {}\n",
                    g.edge_count(),
                    rmap.total(),
                    path.display()
                )
            })
        }
    }
}

fn cmd_germinate(args: &GerminateArgs, seed: u64, format: Format) -> CliResult {
    let (g, seeds) = load_seeds(&args.input)?;
    let rmap = match &args.germ.resistances {
        Some(p) => EdgeResistanceMap::read_tsv(&g, BufReader::new(File::open(p).map_err(|e| with_path(p, e))?))?,
        None => edge_resistances(&g, args.er.backend(seed))?,
    };
    let res = germinate(&g, &rmap, &seeds, &args.germ.config())?;
    if let Some(p) = &args.profile_csv {
        let mut w = create(p)?;
        res.profile.write_csv(&mut w)?;
        w.flush()?;
    }
    let report = res.report(&g);
    emit(format, &report, || {
        format!(
            "germinated {} nodes ({:?}): {}\n",
            report.germinated.len(),
            report.stop_reason,
            join(&report.germinated)
        )
    })
}

fn cmd_ppr(args: &PprArgs, format: Format) -> CliResult {
    let (g, seeds) = load_seeds(&args.input)?;
    let x = personalized_pagerank(&g, &seeds, args.ppr.alpha, args.ppr.backend())?;
    if let Some(p) = &args.scores {
        let mut w = create(p)?;
        x.write_tsv(&g, &mut w)?;
        w.flush()?;
    }
    let (community, profile) = ppr_sweep(&g, &x, &seeds, &args.ppr.sweep())?;
    if let Some(p) = &args.profile_csv {
        let mut w = create(p)?;
        profile.write_csv(&mut w)?;
        w.flush()?;
    }
    let community = labels(&g, &community.sorted());
    let report = json!({
        "seeds": labels(&g, seeds.as_slice()),
        "community": community,
        "ordering": labels(&g, &profile.ordering),
        "scores": profile.scores,
        "selected": profile.selected,
        "selection": profile.selection,
        "iterations": x.iterations,
    });
    emit(format, &report, || format!("community of {} nodes: {}\n", community.len(), join(&community)))
}

fn cmd_detect(args: &DetectArgs, seed: u64, format: Format) -> CliResult {
    let (g, seeds) = load_seeds(&args.input)?;
    let config = args.detector.config(args.method.into(), seed);
    let outcome = Detector::new(&g).detect(&seeds, &config)?;
    let report = outcome.report(&g);
    emit(format, &report, || {
        let est = labels(&g, &outcome.estimate.sorted());
        format!("{}: community of {} nodes: {}\n", outcome.method.name(), est.len(), join(&est))
    })
}

fn cmd_bench(args: &BenchArgs, seed: u64, format: Format) -> CliResult {
    let g = parse_edge_list(&args.graph)?;
    let communities = parse_communities(&args.communities, &g)?.communities;
    let methods: Vec<Method> = args.methods.iter().map(|&m| m.into()).collect();
    let spec = ExperimentSpec {
        dataset: DatasetSource::Files {
            edges: args.graph.clone(),
            communities: args.communities.clone(),
        },
        methods: methods.iter().map(|&m| args.detector.config(m, seed)).collect(),
        seeds_per_run: args.seeds_per_run,
        runs: args.runs,
        policy: match args.policy {
            PolicyArg::Varying => CommunityPolicy::Varying,
            PolicyArg::Fixed => CommunityPolicy::Fixed,
        },
        min_community_size: args.min_community_size,
        master_seed: seed,
        curves: args.curves.is_some(),
        timings: args.timings,
    };
    let report = run_on(&g, &communities, &spec)?;
    if let Some(dir) = &args.curves {
        std::fs::create_dir_all(dir)?;
        for row in &report.rows {
            if let Some(curve) = &row.curve {
                let path = dir.join(format!("run{:03}_{}.csv", row.run, row.method.name()));
                let mut w = create(&path)?;
                write_pr_curve_csv(curve, &mut w)?;
                w.flush()?;
            }
        }
    }
    emit(format, &report, || report.to_text())
}

fn cmd_eval(args: &EvalArgs, format: Format) -> CliResult {
    let g = parse_edge_list(&args.graph)?;
    let communities = parse_communities(&args.communities, &g)?.communities;
    let truth = communities.get(args.community).ok_or_else(|| {
        Error::InvalidInput(format!(
            "community index {} out of range ({} communities)",
            args.community,
            communities.len()
        ))
    })?;
    let text = match (&args.estimate, &args.estimate_file) {
        (Some(s), _) => s.clone(),
        (None, Some(p)) => std::fs::read_to_string(p).map_err(|e| with_path(p, e))?,
        (None, None) => return Err(Error::InvalidInput("give --estimate or --estimate-file".into())),
    };
    let order = resolve_labels(&g, &parse_labels(&text)?)?;
    let prf = precision_recall_f1(&order, truth)?;
    let curve = if order.is_empty() { Vec::new() } else { pr_curve(order.as_slice(), truth)? };
    let report = json!({
        "estimate_size": order.len(),
        "truth_size": truth.len(),
        "precision": prf.precision,
        "recall": prf.recall,
        "f1": prf.f1,
        "curve": curve,
    });
    emit(format, &report, || {
        format!("precision {:.4}  recall {:.4}  f1 {:.4}\n", prf.precision, prf.recall, prf.f1)
    })
}

fn run(cli: &Cli) -> CliResult {
    let (seed, format) = (cli.seed, cli.format);
    match &cli.command {
        Command::Gen(c) => cmd_gen(c, seed, format),
        Command::Er(a) => cmd_er(a, seed, format),
        Command::Germinate(a) => cmd_germinate(a, seed, format),
        Command::Ppr(a) => cmd_ppr(a, format),
        Command::Detect(a) => cmd_detect(a, seed, format),
        Command::Bench(a) => cmd_bench(a, seed, format),
        Command::Eval(a) => cmd_eval(a, format),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        pool = pool.num_threads(t);
    }
    let result = match pool.build() {
        Ok(pool) => pool.install(|| run(&cli)),
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(3);
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_data_error() { 2 } else { 3 })
        }
    }
}
