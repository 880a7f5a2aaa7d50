//! Finite directed multigraphs carrying a real weight `F` on every edge.
//!
//! Vertices and edges are addressed by dense indices ([`Vertex`], [`EdgeIx`])
//! whose order is the declaration order; that order is the canonical
//! tie-breaker everywhere in the crate.

mod components;
mod cycles;
mod path;
pub(crate) mod scc;
mod sign;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use components::{components, Component};
pub use cycles::simple_cycles;
pub use path::Path;
pub use sign::{sign_profile, SignProfile, SignTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Vertex(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeIx(pub usize);

pub type VertexSet = BTreeSet<Vertex>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Edge {
    pub id: String,
    pub source: Vertex,
    pub range: Vertex,
    pub weight: f64,
}

/// Size caps applied to graphs before any exponential enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_vertices: usize,
    pub max_simple_cycles: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: 64,
            max_simple_cycles: 100_000,
        }
    }
}

/// An immutable weighted multigraph. Parallel edges and self-loops are allowed.
#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeIx>>,
    inc: Vec<Vec<EdgeIx>>,
    vertex_index: HashMap<String, Vertex>,
    edge_index: HashMap<String, EdgeIx>,
    limits: Limits,
}

#[derive(Default, Debug, Clone)]
pub struct GraphBuilder {
    vertices: Vec<String>,
    edges: Vec<(String, String, String, f64)>,
    limits: Limits,
}

impl GraphBuilder {
    pub fn vertex(mut self, id: impl Into<String>) -> Self {
        self.vertices.push(id.into());
        self
    }

    pub fn vertices<I, S>(mut self, ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.vertices.extend(ids.into_iter().map(Into::into));
        self
    }

    pub fn edge(
        mut self,
        id: impl Into<String>,
        source: impl Into<String>,
        range: impl Into<String>,
        weight: f64,
    ) -> Self {
        self.edges
            .push((id.into(), source.into(), range.into(), weight));
        self
    }

    pub fn limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn build(self) -> Result<Graph> {
        Graph::with_limits(self.vertices, self.edges, self.limits)
    }
}

impl Graph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn new(vertices: Vec<String>, edges: Vec<(String, String, String, f64)>) -> Result<Graph> {
        Self::with_limits(vertices, edges, Limits::default())
    }

    pub fn with_limits(
        vertices: Vec<String>,
        edges: Vec<(String, String, String, f64)>,
        limits: Limits,
    ) -> Result<Graph> {
        if vertices.len() > limits.max_vertices {
            return Err(Error::TooManyVertices {
                count: vertices.len(),
                limit: limits.max_vertices,
            });
        }
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), Vertex(i)).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let mut out = vec![Vec::new(); vertices.len()];
        let mut inc = vec![Vec::new(); vertices.len()];
        let mut edge_index = HashMap::new();
        let mut list = Vec::with_capacity(edges.len());
        for (i, (id, s, r, w)) in edges.into_iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFiniteWeight {
                    edge: id,
                    weight: w,
                });
            }
            let source = *vertex_index
                .get(&s)
                .ok_or_else(|| Error::UnknownVertex(s.clone()))?;
            let range = *vertex_index
                .get(&r)
                .ok_or_else(|| Error::UnknownVertex(r.clone()))?;
            if edge_index.insert(id.clone(), EdgeIx(i)).is_some() {
                return Err(Error::DuplicateEdge(id));
            }
            out[source.0].push(EdgeIx(i));
            inc[range.0].push(EdgeIx(i));
            list.push(Edge {
                id,
                source,
                range,
                weight: w,
            });
        }
        Ok(Graph {
            vertices,
            edges: list,
            out,
            inc,
            vertex_index,
            edge_index,
            limits,
        })
    }

    /// Same vertices and edges, new weight function.
    pub fn reweighted(&self, weight: impl Fn(&Edge) -> f64) -> Result<Graph> {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                (
                    e.id.clone(),
                    self.name(e.source).to_string(),
                    self.name(e.range).to_string(),
                    weight(e),
                )
            })
            .collect();
        Graph::with_limits(self.vertices.clone(), edges, self.limits)
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertices.len()).map(Vertex)
    }

    pub fn edge_ixs(&self) -> impl Iterator<Item = EdgeIx> + '_ {
        (0..self.edges.len()).map(EdgeIx)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeIx) -> &Edge {
        &self.edges[e.0]
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertex(&self, id: &str) -> Result<Vertex> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge_by_id(&self, id: &str) -> Result<EdgeIx> {
        self.edge_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    /// Resolves vertex ids into a set.
    pub fn vertex_set(&self, ids: &[&str]) -> Result<VertexSet> {
        ids.iter().map(|id| self.vertex(id)).collect()
    }

    pub fn names(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|&v| self.name(v).to_string()).collect()
    }

    pub fn out_edges(&self, v: Vertex) -> &[EdgeIx] {
        &self.out[v.0]
    }

    pub fn in_edges(&self, v: Vertex) -> &[EdgeIx] {
        &self.inc[v.0]
    }

    pub fn is_sink(&self, v: Vertex) -> bool {
        self.out[v.0].is_empty()
    }

    /// Vertices emitting no edge, in canonical order.
    pub fn sinks(&self) -> Vec<Vertex> {
        self.vertex_ids().filter(|&v| self.is_sink(v)).collect()
    }

    /// All vertices with a path into `set` (reflexive).
    pub fn closure(&self, set: &VertexSet) -> VertexSet {
        self.reach(set, |v| {
            self.inc[v.0].iter().map(|&e| self.edges[e.0].source)
        })
    }

    /// All vertices reachable from `set` (reflexive).
    pub fn hereditary_closure(&self, set: &VertexSet) -> VertexSet {
        self.reach(set, |v| {
            self.out[v.0].iter().map(|&e| self.edges[e.0].range)
        })
    }

    fn reach<I>(&self, set: &VertexSet, next: impl Fn(Vertex) -> I) -> VertexSet
    where
        I: Iterator<Item = Vertex>,
    {
        let mut seen = set.clone();
        let mut queue: VecDeque<Vertex> = set.iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            for w in next(v) {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// `true` when `v` reaches `w` by a path of length ≥ 0.
    pub fn talks_to(&self, v: Vertex, w: Vertex) -> bool {
        self.hereditary_closure(&VertexSet::from([v])).contains(&w)
    }

    pub fn fmt_set(&self, set: &VertexSet) -> String {
        format!("{{{}}}", self.names(set).join(","))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            writeln!(f, "vertex {v}")?;
        }
        for e in &self.edges {
            writeln!(
                f,
                "edge {} {} {} {}",
                e.id,
                self.name(e.source),
                self.name(e.range),
                e.weight
            )?;
        }
        Ok(())
    }
}
