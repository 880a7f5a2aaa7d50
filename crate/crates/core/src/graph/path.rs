use serde::Serialize;

use super::{EdgeIx, Graph, Vertex};
use crate::error::{Error, Result};

/// A finite path: a composable edge sequence, or a vertex seen as a path of
/// length zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Path {
    source: Vertex,
    range: Vertex,
    edges: Vec<EdgeIx>,
}

impl Path {
    pub fn empty(v: Vertex) -> Path {
        Path {
            source: v,
            range: v,
            edges: Vec::new(),
        }
    }

    /// Checks composability `r(e_i) = s(e_{i+1})`. `edges` must be non-empty.
    pub fn new(g: &Graph, edges: Vec<EdgeIx>) -> Result<Path> {
        let first = *edges
            .first()
            .ok_or_else(|| Error::MalformedPath("empty edge list without base vertex".into()))?;
        for pair in edges.windows(2) {
            let (a, b) = (g.edge(pair[0]), g.edge(pair[1]));
            if a.range != b.source {
                return Err(Error::NotComposable {
                    first: a.id.clone(),
                    second: b.id.clone(),
                });
            }
        }
        let last = *edges.last().unwrap();
        Ok(Path {
            source: g.edge(first).source,
            range: g.edge(last).range,
            edges,
        })
    }

    pub fn from_ids(g: &Graph, ids: &[&str]) -> Result<Path> {
        let edges = ids
            .iter()
            .map(|id| g.edge_by_id(id))
            .collect::<Result<Vec<_>>>()?;
        Path::new(g, edges)
    }

    pub fn edge(g: &Graph, e: EdgeIx) -> Path {
        let edge = g.edge(e);
        Path {
            source: edge.source,
            range: edge.range,
            edges: vec![e],
        }
    }

    pub fn source(&self) -> Vertex {
        self.source
    }

    pub fn range(&self) -> Vertex {
        self.range
    }

    pub fn edges(&self) -> &[EdgeIx] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn weight(&self, g: &Graph) -> f64 {
        self.edges.iter().map(|&e| g.edge(e).weight).sum()
    }

    /// Is this path a loop (positive length, `s = r`)?
    pub fn is_loop(&self) -> bool {
        !self.is_empty() && self.source == self.range
    }

    /// Sequence of vertices visited, `len() + 1` entries.
    pub fn vertices(&self, g: &Graph) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.edges.len() + 1);
        out.push(self.source);
        out.extend(self.edges.iter().map(|&e| g.edge(e).range));
        out
    }

    /// `self · other`; `None` unless `r(self) = s(other)`.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        if self.range != other.source {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Some(Path {
            source: self.source,
            range: other.range,
            edges,
        })
    }

    /// Appends one edge, `None` if it does not compose.
    pub fn push(&self, g: &Graph, e: EdgeIx) -> Option<Path> {
        self.concat(&Path::edge(g, e))
    }

    /// Prepends one edge, `None` if it does not compose.
    pub fn prepend(&self, g: &Graph, e: EdgeIx) -> Option<Path> {
        Path::edge(g, e).concat(self)
    }

    pub fn is_prefix_of(&self, other: &Path) -> bool {
        self.source == other.source && other.edges.starts_with(&self.edges)
    }

    /// If `self = prefix · rest`, returns `rest`.
    pub fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        if !prefix.is_prefix_of(self) {
            return None;
        }
        Some(Path {
            source: prefix.range,
            range: self.range,
            edges: self.edges[prefix.edges.len()..].to_vec(),
        })
    }

    /// The first `n` edges.
    pub fn prefix(&self, g: &Graph, n: usize) -> Path {
        if n == 0 {
            return Path::empty(self.source);
        }
        let edges = self.edges[..n].to_vec();
        Path {
            source: self.source,
            range: g.edge(edges[n - 1]).range,
            edges,
        }
    }

    /// Cyclic rotation of a loop so that it starts with edge `k`.
    pub fn rotate(&self, g: &Graph, k: usize) -> Path {
        debug_assert!(self.is_loop());
        let mut edges = self.edges[k..].to_vec();
        edges.extend_from_slice(&self.edges[..k]);
        let start = g.edge(edges[0]).source;
        Path {
            source: start,
            range: start,
            edges,
        }
    }

    pub fn display(&self, g: &Graph) -> String {
        if self.edges.is_empty() {
            format!("@{}", g.name(self.source))
        } else {
            self.edges
                .iter()
                .map(|&e| g.edge(e).id.as_str())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    /// Parses `e1,e2,...` or `@v` (empty path at `v`).
    pub fn parse(g: &Graph, text: &str) -> Result<Path> {
        let text = text.trim();
        if let Some(v) = text.strip_prefix('@') {
            return Ok(Path::empty(g.vertex(v.trim())?));
        }
        if text.is_empty() {
            return Err(Error::MalformedPath(
                "empty path must be written as @vertex".into(),
            ));
        }
        let ids: Vec<&str> = text.split(',').map(str::trim).collect();
        Path::from_ids(g, &ids)
    }
}
