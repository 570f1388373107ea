//! The graph text format.
//!
//! One graph per file:
//!
//! ```text
//! # kind=dag n=3
//! 1 -> 2
//! 2 -> 3
//! ```
//!
//! The first line is the header; later `#`-prefixed lines are comments and
//! blank lines are ignored. Edge lines are `a -> b` (directed) or `a <-> b`
//! (bidirected), whitespace-tolerant. The writer emits directed edges first,
//! each group sorted, which is the canonical form: parsing and re-writing a
//! canonical file reproduces it byte for byte.

use std::fmt;
use std::fs;
use std::path::Path;

use anyhow::Context;
use mecsize_core::{GraphError, GraphKind, MixedGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatError {
    MissingHeader,
    BadHeader { line: String },
    BadEdgeLine { lineno: usize, line: String },
    Graph(GraphError),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::MissingHeader => {
                write!(f, "missing `# kind=<dag|admg|dcg> n=<int>` header line")
            }
            FormatError::BadHeader { line } => write!(f, "malformed header line: `{line}`"),
            FormatError::BadEdgeLine { lineno, line } => {
                write!(f, "line {lineno}: expected `a -> b` or `a <-> b`, got `{line}`")
            }
            FormatError::Graph(e) => write!(f, "invalid graph: {e}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<GraphError> for FormatError {
    fn from(e: GraphError) -> Self {
        FormatError::Graph(e)
    }
}

pub fn parse_kind(s: &str) -> Option<GraphKind> {
    match s {
        "dag" => Some(GraphKind::Dag),
        "admg" => Some(GraphKind::Admg),
        "dcg" => Some(GraphKind::Dcg),
        _ => None,
    }
}

/// Parses the text format into a validated graph.
pub fn parse_graph(text: &str) -> Result<MixedGraph, FormatError> {
    let mut lines = text.lines().enumerate();
    let (kind, n) = loop {
        let Some((_, line)) = lines.next() else {
            return Err(FormatError::MissingHeader);
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        break parse_header(trimmed).ok_or_else(|| FormatError::BadHeader {
            line: trimmed.to_string(),
        })?;
    };

    let mut directed = Vec::new();
    let mut bidirected = Vec::new();
    for (i, line) in lines {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let bad = || FormatError::BadEdgeLine {
            lineno: i + 1,
            line: trimmed.to_string(),
        };
        if let Some((a, b)) = trimmed.split_once("<->") {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().parse().map_err(|_| bad())?;
            bidirected.push((a, b));
        } else if let Some((a, b)) = trimmed.split_once("->") {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().parse().map_err(|_| bad())?;
            directed.push((a, b));
        } else {
            return Err(bad());
        }
    }
    Ok(MixedGraph::new(n, &directed, &bidirected, kind)?)
}

fn parse_header(line: &str) -> Option<(GraphKind, u32)> {
    let rest = line.strip_prefix('#')?.trim();
    let mut kind = None;
    let mut n = None;
    for token in rest.split_whitespace() {
        if let Some(v) = token.strip_prefix("kind=") {
            kind = parse_kind(v);
        } else {
            let v = token.strip_prefix("n=")?;
            n = v.parse::<u32>().ok().filter(|&n| n >= 1);
        }
    }
    Some((kind?, n?))
}

/// Serializes a graph in canonical form.
pub fn write_graph(g: &MixedGraph) -> String {
    let mut out = format!("# kind={} n={}\n", g.kind().name(), g.n());
    for &(a, b) in g.directed_edges() {
        out.push_str(&format!("{a} -> {b}\n"));
    }
    for &(a, b) in g.bidirected_edges() {
        out.push_str(&format!("{a} <-> {b}\n"));
    }
    out
}

pub fn read_graph_file(path: &Path) -> anyhow::Result<MixedGraph> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading graph file {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("parsing graph file {}", path.display()))
}

pub fn write_graph_file(path: &Path, g: &MixedGraph) -> anyhow::Result<()> {
    fs::write(path, write_graph(g))
        .with_context(|| format!("writing graph file {}", path.display()))
}
