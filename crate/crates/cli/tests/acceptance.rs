//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Criterion 9 needs SNAP data and is skipped unless
//! `SEEDGERM_SNAP_DIR` points at a directory holding the Amazon or DBLP
//! edge list and top-5000 community file.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use seedgerm::experiment::{run_on, DatasetSource, ExperimentSpec};
use seedgerm::germination::{check_theorem2_bound, germinate, GerminationConfig};
use seedgerm::io::{parse_communities, parse_edge_list};
use seedgerm::ppr::{ppr_power_iteration, ppr_push, seed_vector};
use seedgerm::resistance::{
    exact_edge_resistances, exact_edge_resistances_with, sampled_edge_resistances, ExactSolver,
    PairwiseResistance,
};
use seedgerm::scoring::{pr_curve, PrPoint};
use seedgerm::spanning_tree::sample_spanning_tree;
use seedgerm::{Detector, DetectorConfig, Graph, LfrParams, Method, NodeSet};

enum Verdict {
    Pass,
    Fail,
    Skip,
}

struct Outcome {
    verdict: Verdict,
    detail: String,
}

impl Outcome {
    fn check(ok: bool, detail: String) -> Outcome {
        Outcome {
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            detail,
        }
    }
}

fn within(elapsed: Duration, budget_secs: u64) -> bool {
    elapsed <= Duration::from_secs(budget_secs)
}

fn random_connected(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        edges.push((perm[i], perm[j]));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges).unwrap()
}

type Criterion = (&'static str, fn() -> Outcome);
type Case = (Graph, Vec<((usize, usize), f64)>);

fn c1_exactness() -> Outcome {
    let t = Instant::now();
    let cases: Vec<Case> = vec![
        (graph(2, &[(0, 1)]), vec![((0, 1), 1.0)]),
        (
            graph(3, &[(0, 1), (1, 2), (0, 2)]),
            vec![((0, 1), 2.0 / 3.0), ((1, 2), 2.0 / 3.0), ((0, 2), 2.0 / 3.0)],
        ),
        (
            graph(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]),
            vec![((0, 1), 0.75), ((1, 2), 0.75), ((2, 3), 0.75), ((0, 3), 0.75)],
        ),
        (
            graph(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]),
            vec![((2, 3), 1.0), ((0, 1), 2.0 / 3.0), ((4, 5), 2.0 / 3.0)],
        ),
    ];
    let mut worst: f64 = 0.0;
    for (g, expected) in &cases {
        for solver in [ExactSolver::Auto, ExactSolver::Dense, ExactSolver::Iterative] {
            let r = if solver == ExactSolver::Auto {
                exact_edge_resistances(g).unwrap()
            } else {
                exact_edge_resistances_with(g, solver).unwrap()
            };
            for &((u, v), x) in expected {
                worst = worst.max((r.resistance(g, u, v).unwrap() - x).abs());
            }
        }
    }
    let elapsed = t.elapsed();
    Outcome::check(
        worst <= 1e-8 && elapsed < Duration::from_secs(1),
        format!("max abs error {worst:.2e} over edge/triangle/C4/barbell, {elapsed:.2?}"),
    )
}

fn c2_foster() -> Outcome {
    let t = Instant::now();
    let results: Vec<(f64, f64)> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(i);
            let n = rng.random_range(10..=200);
            let d = rng.random_range(3.0..8.0);
            let g = random_connected(n, d / (n - 1) as f64, 7000 + i);
            let target = (n - 1) as f64;
            let exact = exact_edge_resistances(&g).unwrap().total();
            let sampled = sampled_edge_resistances(&g, 5000, i).unwrap().total();
            ((exact - target).abs(), (sampled - target).abs() / target)
        })
        .collect();
    let exact_err = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let sampled_err = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let elapsed = t.elapsed();
    Outcome::check(
        exact_err <= 1e-6 && sampled_err <= 0.05 && within(elapsed, 60),
        format!(
            "50 graphs: exact max |sum - (n-1)| {exact_err:.2e}, sampled T=5000 max rel err {:.2}%, {elapsed:.2?}",
            100.0 * sampled_err
        ),
    )
}

fn chi_square_p(g: &Graph, trees: u64, seed: u64, expected_trees: usize) -> f64 {
    let mut counts: HashMap<Vec<(usize, usize)>, u64> = HashMap::new();
    for i in 0..trees {
        *counts.entry(sample_spanning_tree(g, seed, i).unwrap().edges()).or_default() += 1;
    }
    if counts.len() != expected_trees {
        return 0.0;
    }
    let e = trees as f64 / expected_trees as f64;
    let stat: f64 = counts.values().map(|&c| (c as f64 - e).powi(2) / e).sum();
    1.0 - ChiSquared::new((expected_trees - 1) as f64).unwrap().cdf(stat)
}

fn c3_sampler() -> Outcome {
    let triangle = graph(3, &[(0, 1), (1, 2), (0, 2)]);
    let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
    let p_tri = chi_square_p(&triangle, 30_000, 2024, 3);
    let p_c4 = chi_square_p(&c4, 30_000, 2024, 4);
    let worst = (0..10u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + i);
            let n = rng.random_range(5..=30);
            let g = random_connected(n, rng.random_range(0.05..0.4), 300 + i);
            let exact = exact_edge_resistances(&g).unwrap();
            let sampled = sampled_edge_resistances(&g, 20_000, i).unwrap();
            exact
                .values()
                .iter()
                .zip(sampled.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Outcome::check(
        p_tri > 0.001 && p_c4 > 0.001 && worst <= 0.03,
        format!("chi-square p: triangle {p_tri:.3}, C4 {p_c4:.3}; 10 graphs T=20000 max |sampled - exact| {worst:.4}"),
    )
}

fn c4_theorem2() -> Outcome {
    let results: Vec<(bool, usize)> = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(9000 + i);
            let n = rng.random_range(5..=40);
            let g = random_connected(n, rng.random_range(0.0..0.4), i);
            let k = rng.random_range(1..=3.min(n));
            let seeds: NodeSet = rand::seq::index::sample(&mut rng, n, k).into_iter().collect();
            let r = exact_edge_resistances(&g).unwrap();
            let cfg = GerminationConfig {
                stop_at_minimum: i % 2 == 0,
                ..GerminationConfig::default()
            };
            let res = germinate(&g, &r, &seeds, &cfg).unwrap();
            let pairwise = PairwiseResistance::from_graph(&g).unwrap();
            (check_theorem2_bound(&res, &pairwise), res.steps())
        })
        .collect();
    let passed = results.iter().filter(|r| r.0).count();
    let steps: usize = results.iter().map(|r| r.1).sum();
    Outcome::check(
        passed == 200,
        format!("{passed}/200 runs satisfy the per-step diameter bound ({steps} steps checked)"),
    )
}

fn c5_ppr_agreement() -> Outcome {
    let worst = (0..20u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(500 + i);
            let n = rng.random_range(5..=100);
            let g = random_connected(n, rng.random_range(0.0..0.15), i);
            let k = rng.random_range(1..=3.min(n));
            let seeds: NodeSet = rand::seq::index::sample(&mut rng, n, k).into_iter().collect();
            let mut worst: f64 = 0.0;
            for alpha in [0.15, 0.5] {
                let push = ppr_push(&g, &seeds, alpha, 1e-9).unwrap();
                let power = ppr_power_iteration(&g, &seeds, alpha, 1e-12).unwrap();
                for v in 0..n {
                    worst = worst.max((push.mass[v] - power.mass[v]).abs());
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    let g = random_connected(50, 0.1, 1);
    let seeds: NodeSet = [3, 17].into_iter().collect();
    let identity = ppr_power_iteration(&g, &seeds, 1.0, 1e-12).unwrap().mass == seed_vector(&g, &seeds).unwrap().mass;
    Outcome::check(
        worst <= 1e-6 && identity,
        format!("20 graphs n<=100: max |push - power| {worst:.2e}; alpha=1 identity {identity}"),
    )
}

/// Runs one single-run experiment per generated graph and returns F1 per method.
fn per_graph_f1(
    runs: u64,
    methods: &[Method],
    dataset: impl Fn(u64) -> DatasetSource + Sync,
) -> Vec<BTreeMap<&'static str, f64>> {
    (0..runs)
        .into_par_iter()
        .map(|run| {
            let source = dataset(run);
            let (g, communities) = source.load().unwrap();
            let mut spec = ExperimentSpec::new(source, methods);
            spec.runs = 1;
            spec.master_seed = run;
            let report = run_on(&g, &communities, &spec).unwrap();
            report.rows.iter().map(|r| (r.method.name(), r.f1)).collect()
        })
        .collect()
}

fn mean_of(rows: &[BTreeMap<&'static str, f64>], m: Method) -> f64 {
    rows.iter().map(|r| r[m.name()]).sum::<f64>() / rows.len() as f64
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn c6_hsbm() -> Outcome {
    let t = Instant::now();
    let sizes = [100usize, 200, 300, 400];
    let mut means: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for &s in &sizes {
        let rows = per_graph_f1(20, &Method::ALL, |run| DatasetSource::Hsbm {
            block_sizes: vec![s, s],
            p_in: 0.3,
            p_out: 0.01,
            seed: 10_000 * s as u64 + run,
        });
        for m in Method::ALL {
            means.entry(m.name()).or_default().push(mean_of(&rows, m));
        }
    }
    let elapsed = t.elapsed();
    let xs: Vec<f64> = sizes.iter().map(|&s| s as f64 / 100.0).collect();
    let mut ok = within(elapsed, 300);
    let mut parts = Vec::new();
    for (name, ys) in &means {
        let sl = slope(&xs, ys);
        ok &= ys.iter().all(|&y| y >= 0.9) && sl >= -0.02;
        let cells: Vec<String> = ys.iter().map(|y| format!("{y:.3}")).collect();
        parts.push(format!("{name} [{}] slope {sl:+.3}", cells.join(" ")));
    }
    Outcome::check(
        ok,
        format!("mean F1 at block sizes 100..400: {}; {elapsed:.1?}", parts.join("; ")),
    )
}

fn c7_lfr() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for tau in [2.1, 2.5, 3.0] {
        let rows = per_graph_f1(20, &[Method::PprOnly, Method::GerminateThenPpr], |run| {
            DatasetSource::Lfr(LfrParams {
                n: 1000,
                degree_exponent: tau,
                mixing: 0.2,
                seed: 20_000 + run,
                ..LfrParams::default()
            })
        });
        let ppr = mean_of(&rows, Method::PprOnly);
        let germ = mean_of(&rows, Method::GerminateThenPpr);
        let improved = rows
            .iter()
            .filter(|r| r[Method::GerminateThenPpr.name()] > r[Method::PprOnly.name()])
            .count() as f64
            / rows.len() as f64;
        ok &= germ >= ppr && improved >= 0.6;
        parts.push(format!(
            "tau {tau}: ppr {ppr:.3} germ {germ:.3} improved {:.0}%",
            100.0 * improved
        ));
    }
    let elapsed = t.elapsed();
    ok &= within(elapsed, 900);
    Outcome::check(ok, format!("{}; {elapsed:.1?}", parts.join("; ")))
}

/// Ring of cliques with random sizes, one bridge between neighbours and a few
/// random extra edges between cliques.
fn clique_family(seed: u64) -> (Graph, Vec<NodeSet>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes: Vec<usize> = (0..6).map(|_| rng.random_range(10..=16)).collect();
    let mut start = vec![0];
    for s in &sizes {
        start.push(start.last().unwrap() + s);
    }
    let n = *start.last().unwrap();
    let mut edges = Vec::new();
    for c in 0..sizes.len() {
        for u in start[c]..start[c + 1] {
            for v in u + 1..start[c + 1] {
                edges.push((u, v));
            }
        }
        let next = (c + 1) % sizes.len();
        edges.push((start[c + 1] - 1, start[next]));
    }
    for a in 0..sizes.len() {
        for b in a + 1..sizes.len() {
            if rng.random::<f64>() < 0.3 {
                let u = rng.random_range(start[a]..start[a + 1]);
                let v = rng.random_range(start[b]..start[b + 1]);
                edges.push((u, v));
            }
        }
    }
    let communities = (0..sizes.len()).map(|c| (start[c]..start[c + 1]).collect()).collect();
    (Graph::from_edges(n, &edges).unwrap(), communities)
}

/// Best precision reachable at recall at least `r` (0 if unreachable).
fn interpolated_precision(curve: &[PrPoint], r: f64) -> f64 {
    curve
        .iter()
        .filter(|p| p.recall >= r - 1e-12)
        .map(|p| p.precision)
        .fold(0.0, f64::max)
}

fn c8_precision_profile() -> Outcome {
    let results: Vec<(bool, bool)> = (0..20u64)
        .into_par_iter()
        .map(|run| {
            let (g, communities) = clique_family(30_000 + run);
            let mut rng = ChaCha8Rng::seed_from_u64(run);
            let seed = rng.random_range(0..g.node_count());
            let truth = communities.iter().find(|c| c.contains(seed)).unwrap();
            let seeds: NodeSet = [seed].into_iter().collect();
            let det = Detector::new(&g);
            let er = det.detect(&seeds, &DetectorConfig::new(Method::ErOnly)).unwrap();
            let half = truth.len() / 2;
            let pure = er.ordering[1..=half].iter().all(|&v| truth.contains(v));

            let germ = det.detect(&seeds, &DetectorConfig::new(Method::GerminateThenPpr)).unwrap();
            let ppr = det.detect(&seeds, &DetectorConfig::new(Method::PprOnly)).unwrap();
            let gc = pr_curve(&germ.ordering, truth).unwrap();
            let pc = pr_curve(&ppr.ordering, truth).unwrap();
            let boundary = germ.stage_boundary.unwrap().max(1);
            let handoff = gc[boundary - 1].recall;
            let k = truth.len();
            let dominates = (0..=k)
                .map(|j| j as f64 / k as f64)
                .filter(|&r| r >= handoff - 1e-12)
                .all(|r| interpolated_precision(&gc, r) >= interpolated_precision(&pc, r) - 1e-12);
            (pure, dominates)
        })
        .collect();
    let pure = results.iter().filter(|r| r.0).count();
    let dominated = results.iter().filter(|r| r.1).count();
    Outcome::check(
        pure == 20 && dominated * 10 >= 20 * 6,
        format!(
            "er_only pure for first |C|/2 additions in {pure}/20 runs; germination curve dominates at recall >= handoff in {dominated}/20 runs"
        ),
    )
}

fn c9_snap() -> Outcome {
    let Some(dir) = std::env::var_os("SEEDGERM_SNAP_DIR").map(PathBuf::from) else {
        return Outcome {
            verdict: Verdict::Skip,
            detail: "set SEEDGERM_SNAP_DIR to a directory with com-amazon or com-dblp files".into(),
        };
    };
    let found: Vec<(PathBuf, PathBuf)> = ["amazon", "dblp"]
        .iter()
        .map(|d| {
            (
                dir.join(format!("com-{d}.ungraph.txt")),
                dir.join(format!("com-{d}.top5000.cmty.txt")),
            )
        })
        .filter(|(e, c)| e.exists() && c.exists())
        .collect();
    if found.is_empty() {
        return Outcome {
            verdict: Verdict::Skip,
            detail: format!("no SNAP files found in {}", dir.display()),
        };
    }
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (edges, comms) in found {
        let g = parse_edge_list(&edges).unwrap();
        let communities = parse_communities(&comms, &g).unwrap().communities;
        let mut spec = ExperimentSpec::new(
            DatasetSource::Files {
                edges: edges.clone(),
                communities: comms,
            },
            &[Method::PprOnly, Method::GerminateThenPpr],
        );
        spec.runs = 10;
        spec.seeds_per_run = 3;
        let rep = run_on(&g, &communities, &spec).unwrap();
        let ppr = rep.summary(Method::PprOnly).unwrap().mean_f1;
        let germ = rep.summary(Method::GerminateThenPpr).unwrap().mean_f1;
        ok &= germ >= ppr - 0.02;
        parts.push(format!("{}: ppr {ppr:.3} germ {germ:.3}", file_name(&edges)));
    }
    let elapsed = t.elapsed();
    ok &= within(elapsed, 1800);
    Outcome::check(ok, format!("{}; {elapsed:.1?}", parts.join("; ")))
}

fn file_name(p: &Path) -> String {
    p.file_name().unwrap().to_string_lossy().into_owned()
}

/// Runs the CLI in a fresh directory; returns stdout and every file written.
type Captured = (Vec<u8>, BTreeMap<String, Vec<u8>>);

fn invoke(args: &[&str], threads: usize, inputs: &Path) -> Result<Captured, String> {
    let work = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_seedgerm"))
        .args(["--seed", "7", "--threads", &threads.to_string()])
        .args(args)
        .env("IN", inputs)
        .current_dir(work.path())
        .output()
        .unwrap();
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    let mut files = BTreeMap::new();
    collect_files(work.path(), work.path(), &mut files);
    Ok((out.stdout, files))
}

fn collect_files(root: &Path, dir: &Path, into: &mut BTreeMap<String, Vec<u8>>) {
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.is_dir() {
            collect_files(root, &p, into);
        } else {
            let key = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
            into.insert(key, std::fs::read(&p).unwrap());
        }
    }
}

fn c10_determinism() -> Outcome {
    let inputs = tempfile::tempdir().unwrap();
    let edges = inputs.path().join("g.txt");
    let comms = inputs.path().join("c.txt");
    let status = Command::new(env!("CARGO_BIN_EXE_seedgerm"))
        .args(["--seed", "7", "gen", "lfr", "--n", "400", "--out-edges"])
        .arg(&edges)
        .arg("--out-communities")
        .arg(&comms)
        .output()
        .unwrap();
    if !status.status.success() {
        return Outcome::check(false, "could not generate input graph".into());
    }
    let (e, c) = (edges.to_str().unwrap(), comms.to_str().unwrap());
    let commands: Vec<Vec<&str>> = vec![
        vec!["gen", "lfr", "--n", "300", "--out-edges", "g.txt", "--out-communities", "c.txt"],
        vec!["gen", "hsbm", "--blocks", "40,40,40", "--out-edges", "g.txt", "--out-communities", "c.txt"],
        vec!["er", "--graph", e, "--er-method", "sampled", "--trees", "400", "--out", "r.tsv"],
        vec!["er", "--graph", e, "--er-method", "exact", "--out", "r.tsv"],
        vec!["germinate", "--graph", e, "--seeds", "3", "--er-method", "sampled", "--trees", "400"],
        vec!["germinate", "--graph", e, "--seeds", "3,10", "--profile-csv", "p.csv"],
        vec!["ppr", "--graph", e, "--seeds", "3", "--scores", "s.tsv", "--profile-csv", "p.csv"],
        vec!["ppr", "--graph", e, "--seeds", "3", "--ppr-backend", "push"],
        vec!["detect", "--graph", e, "--seeds", "3", "--method", "ppr-only"],
        vec!["detect", "--graph", e, "--seeds", "3", "--method", "er-only"],
        vec!["detect", "--graph", e, "--seeds", "3", "--method", "germinate-then-ppr", "--er-method", "sampled", "--trees", "400"],
        vec!["bench", "--graph", e, "--communities", c, "--runs", "6", "--seeds-per-run", "1", "--methods", "ppr-only,er-only,germinate-then-ppr", "--curves", "curves"],
        vec!["eval", "--graph", e, "--communities", c, "--estimate", "0 1 2 3 4 5"],
    ];
    let mut failures = Vec::new();
    for args in &commands {
        let runs: Result<Vec<_>, String> = [1, 1, 8].iter().map(|&t| invoke(args, t, inputs.path())).collect();
        match runs {
            Err(e) => failures.push(e),
            Ok(r) => {
                if r[0] != r[1] || r[0] != r[2] {
                    failures.push(format!("{} {}: output differs", args[0], args[1]));
                }
            }
        }
    }
    Outcome::check(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} invocations identical across repeats and --threads 1/8", commands.len())
        } else {
            failures.join("; ")
        },
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 ER exactness", c1_exactness),
        ("2 Foster identity", c2_foster),
        ("3 sampler correctness", c3_sampler),
        ("4 diameter growth bound", c4_theorem2),
        ("5 PPR backend agreement", c5_ppr_agreement),
        ("6 HSBM quality and scaling", c6_hsbm),
        ("7 LFR improvement direction", c7_lfr),
        ("8 ER-alone precision profile", c8_precision_profile),
        ("9 SNAP datasets", c9_snap),
        ("10 CLI determinism", c10_determinism),
    ];
    let only: Option<String> = std::env::args().nth(1).filter(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (name, f) in criteria {
        if let Some(filter) = &only {
            if !name.contains(filter.as_str()) {
                continue;
            }
        }
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome::check(false, format!("panicked: {msg}"))
        });
        let tag = match outcome.verdict {
            Verdict::Pass => "PASS",
            Verdict::Skip => "SKIP",
            Verdict::Fail => {
                failed += 1;
                "FAIL"
            }
        };
        println!("{tag} criterion {name}: {} [{:.1?}]", outcome.detail, t.elapsed());
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
