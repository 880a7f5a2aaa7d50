use serde::Serialize;

use super::scc::strongly_connected;
use super::{Graph, Path, VertexSet};

/// A strong-connectivity class containing at least one edge.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Component {
    /// `C1, C2, ...` by least member vertex.
    pub label: String,
    pub members: VertexSet,
    /// The induced subgraph is exactly one simple cycle.
    pub circular: bool,
    /// The unique loop of a circular component, based at the least member.
    #[serde(skip)]
    pub loop_path: Option<Path>,
}

impl Component {
    pub fn least(&self) -> super::Vertex {
        *self.members.first().expect("components are non-empty")
    }

    pub fn contains(&self, v: super::Vertex) -> bool {
        self.members.contains(&v)
    }
}

/// All components, ordered by least member vertex.
pub fn components(g: &Graph) -> Vec<Component> {
    let adj: Vec<Vec<usize>> = g
        .vertex_ids()
        .map(|v| g.out_edges(v).iter().map(|&e| g.edge(e).range.0).collect())
        .collect();
    let mut classes = strongly_connected(&adj);
    classes.sort_by_key(|c| c[0]);

    let mut out = Vec::new();
    for class in classes {
        let members: VertexSet = class.iter().map(|&i| super::Vertex(i)).collect();
        let inside = |v: super::Vertex| {
            g.out_edges(v)
                .iter()
                .copied()
                .filter(|&e| members.contains(&g.edge(e).range))
                .collect::<Vec<_>>()
        };
        let inside_counts: Vec<usize> = members.iter().map(|&v| inside(v).len()).collect();
        let total: usize = inside_counts.iter().sum();
        if total == 0 {
            continue;
        }
        let circular = inside_counts.iter().all(|&c| c == 1);
        let loop_path = circular.then(|| {
            let start = *members.first().unwrap();
            let mut edges = Vec::with_capacity(members.len());
            let mut v = start;
            loop {
                let e = inside(v)[0];
                edges.push(e);
                v = g.edge(e).range;
                if v == start {
                    break;
                }
            }
            Path::new(g, edges).expect("cycle edges compose")
        });
        out.push(Component {
            label: String::new(),
            members,
            circular,
            loop_path,
        });
    }
    for (i, c) in out.iter_mut().enumerate() {
        c.label = format!("C{}", i + 1);
    }
    out
}
