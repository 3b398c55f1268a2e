//! SNAP-style edge lists and community files.
//!
//! Edge list: one `u v` pair per line, tab or space separated, `#` starts a
//! comment line. Community file: one community per line as whitespace
//! separated node ids. Ids in files are external labels; the graph maps them
//! to dense ids.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{build_graph, Graph, NodeSet};

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    Ok(BufReader::new(f))
}

pub fn parse_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    read_edge_list(open(path.as_ref())?)
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph> {
    let mut pairs = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut fields = t.split_whitespace();
        let mut id = || -> Result<u64> {
            let f = fields.next().ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "expected two node ids".into(),
            })?;
            f.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("invalid node id {f:?}"),
            })
        };
        let (u, v) = (id()?, id()?);
        pairs.push((u, v));
    }
    build_graph(&pairs)
}

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "# nodes: {} edges: {}", g.node_count(), g.edge_count())?;
    for &(u, v) in g.edges() {
        writeln!(out, "{}\t{}", g.label(u), g.label(v))?;
    }
    Ok(())
}

/// Communities read from a file, plus how many ids could not be resolved.
#[derive(Debug, Clone)]
pub struct ParsedCommunities {
    pub communities: Vec<NodeSet>,
    pub unknown_ids: usize,
    pub dropped_communities: usize,
}

pub fn parse_communities(path: impl AsRef<Path>, g: &Graph) -> Result<ParsedCommunities> {
    read_communities(open(path.as_ref())?, g)
}

/// Reads one community per line. Ids missing from `g` are skipped with a
/// warning; communities left empty are dropped.
pub fn read_communities<R: BufRead>(input: R, g: &Graph) -> Result<ParsedCommunities> {
    let index = g.label_index();
    let mut communities = Vec::new();
    let mut unknown_ids = 0;
    let mut dropped_communities = 0;
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut set = NodeSet::new();
        for f in t.split_whitespace() {
            let label: u64 = f.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("invalid node id {f:?}"),
            })?;
            match index.get(&label) {
                Some(&v) => {
                    set.insert(v);
                }
                None => {
                    log::warn!("community line {}: node {label} not in graph, skipped", i + 1);
                    unknown_ids += 1;
                }
            }
        }
        if set.is_empty() {
            log::warn!("community line {}: no node found in graph, dropped", i + 1);
            dropped_communities += 1;
        } else {
            communities.push(set);
        }
    }
    Ok(ParsedCommunities {
        communities,
        unknown_ids,
        dropped_communities,
    })
}

pub fn write_communities<W: Write>(g: &Graph, communities: &[NodeSet], mut out: W) -> Result<()> {
    for c in communities {
        let line: Vec<String> = c.sorted().into_iter().map(|v| g.label(v).to_string()).collect();
        writeln!(out, "{}", line.join("\t"))?;
    }
    Ok(())
}

/// Whitespace or comma separated external ids.
pub fn parse_labels(text: &str) -> Result<Vec<u64>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse().map_err(|_| Error::Parse {
                line: 1,
                message: format!("invalid node id {s:?}"),
            })
        })
        .collect()
}

/// Resolves external labels to a node set of `g`; unknown labels are errors.
pub fn resolve_labels(g: &Graph, labels: &[u64]) -> Result<NodeSet> {
    let index = g.label_index();
    labels
        .iter()
        .map(|l| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| Error::InvalidInput(format!("node {l} not in graph")))
        })
        .collect()
}
