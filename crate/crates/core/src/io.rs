//! The `.mpx` text format, JSON documents and DOT exports.
//!
//! ```text
//! mpx <rank> <flags>
//! # name: square
//! 1 0 3 2 5 4 7 6
//! 7 2 1 4 3 6 5 0
//! ```
//!
//! Row `c` lists `adj_c(v)` for every flag `v`. Anything after `#` is a
//! comment; `# name:` and `# provenance:` comments are kept as metadata.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{ColouredGraph, GraphError};
use crate::poset::{ElementId, RankedPoset};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MpxError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpxDocument {
    pub graph: ColouredGraph,
    pub name: Option<String>,
    pub provenance: Option<String>,
}

impl MpxDocument {
    pub fn new(graph: ColouredGraph) -> Self {
        MpxDocument { graph, name: None, provenance: None }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = Some(provenance.into());
        self
    }
}

#[derive(Serialize)]
struct MpxJson<'a> {
    format: &'static str,
    name: Option<&'a str>,
    provenance: Option<&'a str>,
    rank: usize,
    flag_count: usize,
    matchings: Vec<&'a [usize]>,
}

impl Serialize for MpxDocument {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let g = &self.graph;
        MpxJson {
            format: "mpx",
            name: self.name.as_deref(),
            provenance: self.provenance.as_deref(),
            rank: g.rank(),
            flag_count: g.flag_count(),
            matchings: (0..g.rank()).map(|c| g.matching(c)).collect(),
        }
        .serialize(s)
    }
}

fn parse_err(line: usize, reason: impl Into<String>) -> MpxError {
    MpxError::Parse { line, reason: reason.into() }
}

pub fn read_mpx(text: &str) -> Result<MpxDocument, MpxError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut row_lines: Vec<usize> = Vec::new();
    let mut name = None;
    let mut provenance = None;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let (content, comment) = match raw.find('#') {
            Some(at) => (&raw[..at], Some(raw[at + 1..].trim())),
            None => (raw, None),
        };
        if let Some(comment) = comment {
            if let Some(v) = comment.strip_prefix("name:") {
                name = Some(v.trim().to_string());
            } else if let Some(v) = comment.strip_prefix("provenance:") {
                provenance = Some(v.trim().to_string());
            }
        }
        let mut tokens = content.split_whitespace().peekable();
        if tokens.peek().is_none() {
            continue;
        }
        match header {
            None => {
                let tag = tokens.next().unwrap_or_default();
                if tag != "mpx" {
                    return Err(parse_err(line, format!("expected header `mpx <rank> <flags>`, found `{tag}`")));
                }
                let mut number = |what: &str| -> Result<usize, MpxError> {
                    let tok = tokens.next().ok_or_else(|| parse_err(line, format!("header is missing {what}")))?;
                    tok.parse().map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
                };
                let rank = number("rank")?;
                let flags = number("flag count")?;
                if let Some(extra) = tokens.next() {
                    return Err(parse_err(line, format!("unexpected `{extra}` after header")));
                }
                header = Some((rank, flags, line));
            }
            Some((rank, flags, _)) => {
                if rows.len() == rank {
                    return Err(parse_err(line, format!("more than {rank} rows")));
                }
                let row = tokens
                    .map(|t| t.parse::<usize>().map_err(|_| parse_err(line, format!("bad flag `{t}`"))))
                    .collect::<Result<Vec<_>, _>>()?;
                if row.len() != flags {
                    return Err(parse_err(line, format!("expected {flags} entries, found {}", row.len())));
                }
                rows.push(row);
                row_lines.push(line);
            }
        }
    }

    let (rank, _, header_line) = header.ok_or_else(|| parse_err(1, "missing header"))?;
    if rows.len() != rank {
        let line = text.lines().count().max(1);
        return Err(parse_err(line, format!("expected {rank} rows, found {}", rows.len())));
    }
    let graph = ColouredGraph::new(rank, rows).map_err(|source| {
        let line = match &source {
            GraphError::OutOfRange { colour, .. }
            | GraphError::FixedPoint { colour, .. }
            | GraphError::NotInvolution { colour, .. } => row_lines[*colour],
            GraphError::MultiEdge { second, .. } => row_lines[*second],
            _ => header_line,
        };
        MpxError::Graph { line, source }
    })?;
    Ok(MpxDocument { graph, name, provenance })
}

pub fn write_mpx(doc: &MpxDocument) -> String {
    let g = &doc.graph;
    let mut out = format!("mpx {} {}\n", g.rank(), g.flag_count());
    if let Some(name) = &doc.name {
        let _ = writeln!(out, "# name: {name}");
    }
    if let Some(p) = &doc.provenance {
        let _ = writeln!(out, "# provenance: {p}");
    }
    for c in 0..g.rank() {
        let row: Vec<String> = g.matching(c).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Pretty JSON of any serializable document or report.
pub fn write_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn graph_to_dot(g: &ColouredGraph) -> String {
    let mut out = String::from("graph maniplex {\n");
    for v in 0..g.flag_count() {
        let _ = writeln!(out, "  {v};");
    }
    for c in 0..g.rank() {
        for v in 0..g.flag_count() {
            let w = g.adj(c, v);
            if v < w {
                let _ = writeln!(out, "  {v} -- {w} [color={c}];");
            }
        }
    }
    out.push_str("}\n");
    out
}

fn node(id: ElementId) -> String {
    if id.rank < 0 {
        format!("\"F{}_{}\"", "m1", id.index)
    } else {
        format!("\"F{}_{}\"", id.rank, id.index)
    }
}

/// Hasse diagram, bottom to top, one row per rank.
pub fn poset_to_dot(p: &RankedPoset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
    for r in -1..=p.rank() {
        let nodes: Vec<String> = (0..p.count_at(r)).map(|i| node(ElementId::new(r, i))).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", nodes.join("; "));
    }
    for (level, covers) in p.covers().iter().enumerate() {
        let r = level as isize - 1;
        for &(lo, hi) in covers {
            let _ = writeln!(out, "  {} -> {};", node(ElementId::new(r, lo)), node(ElementId::new(r + 1, hi)));
        }
    }
    out.push_str("}\n");
    out
}
