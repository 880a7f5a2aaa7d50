//! Ground states: minimal-weight potentials, the tight subgraph, membership
//! in the set of boundary paths of minimal weight, and the census of
//! ground-state families when that set has a simple shape.
//!
//! A boundary path `x` has minimal weight iff `m(s(x)) = 0` and every edge
//! of `x` is tight: each prefix `z` then has `F(z) = m(r(z))`, the least
//! weight of any path into `r(z)`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::graph::scc::strongly_connected;
use crate::graph::{EdgeIx, Graph, Path, Vertex, VertexSet};

/// `m(v)`: a finite nonpositive real or `-∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PotentialValue {
    Finite(f64),
    NegInfinity,
}

impl PotentialValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            PotentialValue::Finite(x) => Some(x),
            PotentialValue::NegInfinity => None,
        }
    }

    pub fn is_zero(self) -> bool {
        matches!(self, PotentialValue::Finite(x) if x.abs() <= TOL.eig)
    }
}

impl fmt::Display for PotentialValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialValue::Finite(x) => write!(f, "{x}"),
            PotentialValue::NegInfinity => write!(f, "-inf"),
        }
    }
}

impl Serialize for PotentialValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PotentialValue::Finite(x) => s.serialize_f64(*x),
            PotentialValue::NegInfinity => s.serialize_str("-inf"),
        }
    }
}

/// Least weight of a path ending at each vertex (the empty path counts).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Potential {
    pub values: Vec<PotentialValue>,
}

impl Potential {
    pub fn get(&self, v: Vertex) -> PotentialValue {
        self.values[v.0]
    }
}

/// Bellman–Ford relaxation from 0 at every vertex; vertices still improving
/// after `|V|` rounds, and everything they reach, get `-∞`.
pub fn potentials(g: &Graph) -> Potential {
    let n = g.vertex_count();
    let mut m = vec![0.0_f64; n];
    let relax = |m: &mut Vec<f64>| -> VertexSet {
        let mut improved = VertexSet::new();
        for e in g.edges() {
            let cand = m[e.source.0] + e.weight;
            if cand < m[e.range.0] - TOL.eig {
                m[e.range.0] = cand;
                improved.insert(e.range);
            }
        }
        improved
    };
    for _ in 0..n {
        if relax(&mut m).is_empty() {
            break;
        }
    }
    let unstable = relax(&mut m.clone());
    let unbounded = g.hereditary_closure(&unstable);
    Potential {
        values: (0..n)
            .map(|i| {
                if unbounded.contains(&Vertex(i)) {
                    PotentialValue::NegInfinity
                } else {
                    PotentialValue::Finite(m[i])
                }
            })
            .collect(),
    }
}

/// Start vertices (`m = 0`) and tight edges (`m(r) = m(s) + F`, finite).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TightSubgraph {
    pub start_vertices: VertexSet,
    pub tight_edges: Vec<EdgeIx>,
}

impl TightSubgraph {
    pub fn is_tight(&self, e: EdgeIx) -> bool {
        self.tight_edges.binary_search(&e).is_ok()
    }

    pub fn describe(&self, g: &Graph) -> String {
        let edges: Vec<&str> = self
            .tight_edges
            .iter()
            .map(|&e| g.edge(e).id.as_str())
            .collect();
        format!(
            "start vertices {}; tight edges [{}]",
            g.fmt_set(&self.start_vertices),
            edges.join(",")
        )
    }
}

pub fn tight_subgraph(g: &Graph, m: &Potential) -> TightSubgraph {
    let start_vertices = g.vertex_ids().filter(|&v| m.get(v).is_zero()).collect();
    let tight_edges = g
        .edge_ixs()
        .filter(|&e| {
            let edge = g.edge(e);
            match (m.get(edge.source), m.get(edge.range)) {
                (PotentialValue::Finite(s), PotentialValue::Finite(r)) => {
                    (r - (s + edge.weight)).abs() <= TOL.eig
                }
                _ => false,
            }
        })
        .collect();
    TightSubgraph {
        start_vertices,
        tight_edges,
    }
}

/// A boundary path of a finite graph: a finite path ending at a sink, or
/// an eventually periodic infinite path `prefix · cycle^∞`.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryPath {
    Finite(Path),
    Periodic { prefix: Path, cycle: Path },
}

impl BoundaryPath {
    pub fn source(&self) -> Vertex {
        match self {
            BoundaryPath::Finite(p) => p.source(),
            BoundaryPath::Periodic { prefix, .. } => prefix.source(),
        }
    }
}

pub fn min_membership(g: &Graph, x: &BoundaryPath) -> Result<bool> {
    let edges: Vec<EdgeIx> = match x {
        BoundaryPath::Finite(p) => {
            if !g.is_sink(p.range()) {
                return Err(Error::MalformedPath(
                    "a finite boundary path must end at a sink".into(),
                ));
            }
            p.edges().to_vec()
        }
        BoundaryPath::Periodic { prefix, cycle } => {
            if !cycle.is_loop() || prefix.range() != cycle.source() {
                return Err(Error::MalformedPath(
                    "periodic part must be a loop starting where the prefix ends".into(),
                ));
            }
            prefix
                .edges()
                .iter()
                .chain(cycle.edges())
                .copied()
                .collect()
        }
    };
    let m = potentials(g);
    let tight = tight_subgraph(g, &m);
    Ok(m.get(x.source()).is_zero() && edges.iter().all(|&e| tight.is_tight(e)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SinkOrbit {
    pub sink: Vertex,
    pub label: String,
    /// Tight paths from start vertices to the sink: the size of the matrix
    /// algebra this orbit contributes.
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleOrbit {
    #[serde(serialize_with = "serialize_path_ids")]
    pub cycle: Path,
    pub label: String,
    /// Tight first-entry paths from start vertices into the cycle.
    pub count: u64,
}

fn serialize_path_ids<S: Serializer>(p: &Path, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.edges().iter().map(|e| e.0))
}

/// Ground-state families when the tight subgraph is simple; `rich` with
/// the tight subgraph attached otherwise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Census {
    pub sink_orbits: Vec<SinkOrbit>,
    pub cycle_orbits: Vec<CycleOrbit>,
    pub rich: bool,
    pub tight: TightSubgraph,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl Census {
    /// `M_n(C)` per sink orbit and `M_n(C(T))` per cycle orbit.
    pub fn summary(&self) -> Vec<String> {
        let mat = |n: u64, base: &str| {
            if n == 1 {
                base.to_string()
            } else {
                format!("M_{n}({base})")
            }
        };
        self.sink_orbits
            .iter()
            .map(|o| format!("{}: {}", o.label, mat(o.count, "C")))
            .chain(
                self.cycle_orbits
                    .iter()
                    .map(|o| format!("{}: {} (circle family)", o.label, mat(o.count, "C(T)"))),
            )
            .collect()
    }
}

pub fn census(g: &Graph) -> Result<Census> {
    let m = potentials(g);
    let tight = tight_subgraph(g, &m);
    let n = g.vertex_count();
    let tight_out = |v: Vertex| {
        g.out_edges(v)
            .iter()
            .copied()
            .filter(|&e| tight.is_tight(e))
            .collect::<Vec<_>>()
    };

    // reachable from start vertices along tight edges
    let mut reach = tight.start_vertices.clone();
    let mut stack: Vec<Vertex> = reach.iter().copied().collect();
    while let Some(v) = stack.pop() {
        for e in tight_out(v) {
            if reach.insert(g.edge(e).range) {
                stack.push(g.edge(e).range);
            }
        }
    }
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            if reach.contains(&Vertex(i)) {
                tight_out(Vertex(i))
                    .iter()
                    .map(|&e| g.edge(e).range.0)
                    .collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let cyclic: Vec<Vec<usize>> = strongly_connected(&adj)
        .into_iter()
        .filter(|c| c.len() > 1 || adj[c[0]].contains(&c[0]))
        .collect();

    // live: can still continue to a sink or a tight cycle
    let mut live: VertexSet = reach
        .iter()
        .copied()
        .filter(|&v| g.is_sink(v) || cyclic.iter().any(|c| c.contains(&v.0)))
        .collect();
    loop {
        let before = live.len();
        for &v in &reach {
            if adj[v.0].iter().any(|&w| live.contains(&Vertex(w))) {
                live.insert(v);
            }
        }
        if live.len() == before {
            break;
        }
    }
    let live_edges: Vec<EdgeIx> = tight
        .tight_edges
        .iter()
        .copied()
        .filter(|&e| live.contains(&g.edge(e).source) && live.contains(&g.edge(e).range))
        .collect();

    let rich = |reason: String| Census {
        sink_orbits: Vec::new(),
        cycle_orbits: Vec::new(),
        rich: true,
        diagnostic: Some(format!("{reason}; {}", tight.describe(g))),
        tight: tight.clone(),
    };

    // each cyclic class must be one simple cycle with no live exit
    let mut cycles: Vec<(VertexSet, Path)> = Vec::new();
    for class in &cyclic {
        let members: VertexSet = class.iter().map(|&i| Vertex(i)).collect();
        let mut loop_edges = Vec::new();
        for &v in &members {
            let out: Vec<EdgeIx> = live_edges
                .iter()
                .copied()
                .filter(|&e| g.edge(e).source == v)
                .collect();
            let inside: Vec<EdgeIx> = out
                .iter()
                .copied()
                .filter(|&e| members.contains(&g.edge(e).range))
                .collect();
            if inside.len() != 1 {
                return Ok(rich(format!("{} lies on several tight cycles", g.name(v))));
            }
            if out.len() != 1 {
                return Ok(rich(format!(
                    "a tight path leaves the cycle at {}",
                    g.name(v)
                )));
            }
            loop_edges.push(inside[0]);
        }
        let first = members
            .iter()
            .copied()
            .find(|v| tight.start_vertices.contains(v))
            .unwrap_or_else(|| *members.first().expect("nonempty class"));
        let mut path = Vec::new();
        let mut v = first;
        for _ in 0..members.len() {
            let e = *loop_edges
                .iter()
                .find(|&&e| g.edge(e).source == v)
                .expect("one edge per member");
            path.push(e);
            v = g.edge(e).range;
        }
        cycles.push((members, Path::new(g, path)?));
    }

    // count tight paths from start vertices over the acyclic remainder
    let on_cycle = |v: Vertex| cycles.iter().any(|(m, _)| m.contains(&v));
    let mut memo: Vec<Option<u64>> = vec![None; n];
    fn count_into(
        g: &Graph,
        v: Vertex,
        starts: &VertexSet,
        edges: &[EdgeIx],
        blocked: &dyn Fn(Vertex) -> bool,
        memo: &mut Vec<Option<u64>>,
    ) -> Result<u64> {
        if let Some(c) = memo[v.0] {
            return Ok(c);
        }
        let mut c: u64 = u64::from(starts.contains(&v));
        for &e in edges {
            let edge = g.edge(e);
            if edge.range == v && !blocked(edge.source) {
                let sub = count_into(g, edge.source, starts, edges, blocked, memo)?;
                c = c.checked_add(sub).ok_or(Error::CountOverflow)?;
            }
        }
        memo[v.0] = Some(c);
        Ok(c)
    }

    let mut sink_orbits = Vec::new();
    for &s in &live {
        if g.is_sink(s) {
            let count = count_into(
                g,
                s,
                &tight.start_vertices,
                &live_edges,
                &on_cycle,
                &mut memo,
            )?;
            sink_orbits.push(SinkOrbit {
                sink: s,
                label: g.name(s).to_string(),
                count,
            });
        }
    }
    let mut cycle_orbits = Vec::new();
    for (members, path) in &cycles {
        let mut count: u64 = 0;
        for &w in members {
            count += u64::from(tight.start_vertices.contains(&w));
            for &e in &live_edges {
                let edge = g.edge(e);
                if edge.range == w && !members.contains(&edge.source) {
                    let sub = count_into(
                        g,
                        edge.source,
                        &tight.start_vertices,
                        &live_edges,
                        &on_cycle,
                        &mut memo,
                    )?;
                    count = count.checked_add(sub).ok_or(Error::CountOverflow)?;
                }
            }
        }
        cycle_orbits.push(CycleOrbit {
            label: path.display(g),
            cycle: path.clone(),
            count,
        });
    }
    Ok(Census {
        sink_orbits,
        cycle_orbits,
        rich: false,
        diagnostic: None,
        tight,
    })
}
