//! Johnson's elementary-circuit enumeration, adapted to multigraphs: each
//! choice among parallel edges gives a distinct cycle.

use std::collections::BTreeSet;

use super::scc::strongly_connected;
use super::{EdgeIx, Graph, Path, Vertex, VertexSet};
use crate::error::{Error, Result};

/// Every simple cycle of the subgraph induced by `region`, each starting at
/// its least vertex. Fails once more than `g.limits().max_simple_cycles`
/// cycles are found.
pub fn simple_cycles(g: &Graph, region: &VertexSet) -> Result<Vec<Path>> {
    let limit = g.limits().max_simple_cycles;
    let order: Vec<Vertex> = region.iter().copied().collect();
    let mut found = Vec::new();

    for (k, &start) in order.iter().enumerate() {
        let allowed: VertexSet = order[k..].iter().copied().collect();
        let scc = class_of(g, &allowed, start);
        if !scc
            .iter()
            .any(|&v| inside_edges(g, &scc, v).next().is_some())
        {
            continue;
        }
        let mut search = Search {
            g,
            scc: &scc,
            start,
            blocked: vec![false; g.vertex_count()],
            blocked_by: vec![BTreeSet::new(); g.vertex_count()],
            stack: Vec::new(),
            found: &mut found,
            limit,
        };
        search.circuit(start)?;
    }
    Ok(found)
}

fn inside_edges<'a>(
    g: &'a Graph,
    set: &'a VertexSet,
    v: Vertex,
) -> impl Iterator<Item = EdgeIx> + 'a {
    g.out_edges(v)
        .iter()
        .copied()
        .filter(move |&e| set.contains(&g.edge(e).range))
}

/// The strongly connected class of `v` inside the subgraph induced by `allowed`.
fn class_of(g: &Graph, allowed: &VertexSet, v: Vertex) -> VertexSet {
    let local: Vec<Vertex> = allowed.iter().copied().collect();
    let pos = |w: Vertex| local.binary_search(&w).ok();
    let adj: Vec<Vec<usize>> = local
        .iter()
        .map(|&u| {
            inside_edges(g, allowed, u)
                .filter_map(|e| pos(g.edge(e).range))
                .collect()
        })
        .collect();
    let target = pos(v).expect("start vertex is allowed");
    strongly_connected(&adj)
        .into_iter()
        .find(|c| c.contains(&target))
        .map(|c| c.into_iter().map(|i| local[i]).collect())
        .unwrap_or_default()
}

struct Search<'a> {
    g: &'a Graph,
    scc: &'a VertexSet,
    start: Vertex,
    blocked: Vec<bool>,
    blocked_by: Vec<BTreeSet<Vertex>>,
    stack: Vec<EdgeIx>,
    found: &'a mut Vec<Path>,
    limit: usize,
}

impl Search<'_> {
    fn circuit(&mut self, v: Vertex) -> Result<bool> {
        let mut closed = false;
        self.blocked[v.0] = true;
        let edges: Vec<EdgeIx> = inside_edges(self.g, self.scc, v).collect();
        for &e in &edges {
            let w = self.g.edge(e).range;
            if w == self.start {
                let mut cycle = self.stack.clone();
                cycle.push(e);
                self.found
                    .push(Path::new(self.g, cycle).expect("stack composes"));
                if self.found.len() > self.limit {
                    return Err(Error::CycleLimit(self.limit));
                }
                closed = true;
            } else if !self.blocked[w.0] {
                self.stack.push(e);
                if self.circuit(w)? {
                    closed = true;
                }
                self.stack.pop();
            }
        }
        if closed {
            self.unblock(v);
        } else {
            for &e in &edges {
                let w = self.g.edge(e).range;
                self.blocked_by[w.0].insert(v);
            }
        }
        Ok(closed)
    }

    fn unblock(&mut self, v: Vertex) {
        self.blocked[v.0] = false;
        let waiting = std::mem::take(&mut self.blocked_by[v.0]);
        for w in waiting {
            if self.blocked[w.0] {
                self.unblock(w);
            }
        }
    }
}
