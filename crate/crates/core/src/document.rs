//! Graph documents: a line-oriented text format and an equivalent JSON form,
//! both carrying named weight profiles.
//!
//! Text format, one construct per line, `#` starts a comment:
//!
//! ```text
//! profile F1
//! vertex v
//! vertex w
//! edge e v w 1.0 F1=-2
//! ```
//!
//! The fourth `edge` field is the base weight; `NAME=value` overrides it
//! under profile `NAME`.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: String,
    pub source: String,
    pub range: String,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub overrides: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    #[serde(default)]
    pub profiles: Vec<String>,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn number(line: usize, (col, tok): (usize, &str)) -> Result<f64> {
    let x: f64 = tok
        .parse()
        .map_err(|_| parse_error(line, col, format!("expected a number, found `{tok}`")))?;
    if !x.is_finite() {
        return Err(parse_error(
            line,
            col,
            format!("weight `{tok}` is not finite"),
        ));
    }
    Ok(x)
}

impl GraphDocument {
    /// Parses either format; JSON is recognised by a leading `{`.
    pub fn parse(text: &str) -> Result<GraphDocument> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_text(text)
        }
    }

    pub fn parse_json(text: &str) -> Result<GraphDocument> {
        let doc: GraphDocument = serde_json::from_str(text)
            .map_err(|e| parse_error(e.line(), e.column(), e.to_string()))?;
        doc.validate(|_| (0, 0))?;
        Ok(doc)
    }

    pub fn parse_text(text: &str) -> Result<GraphDocument> {
        let mut doc = GraphDocument::default();
        // line/column of each vertex and edge declaration, for error reports
        let mut positions: Vec<(usize, usize)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("");
            let toks = tokens(content);
            let Some(&(col, keyword)) = toks.first() else {
                continue;
            };
            match keyword {
                "profile" => {
                    if toks.len() != 2 {
                        return Err(parse_error(line, col, "expected `profile <name>`"));
                    }
                    let name = toks[1].1.to_string();
                    if !doc.profiles.contains(&name) {
                        doc.profiles.push(name);
                    }
                }
                "vertex" => {
                    if toks.len() != 2 {
                        return Err(parse_error(line, col, "expected `vertex <id>`"));
                    }
                    doc.vertices.push(toks[1].1.to_string());
                    positions.push((line, toks[1].0));
                }
                "edge" => {
                    if toks.len() < 5 {
                        return Err(parse_error(
                            line,
                            col,
                            "expected `edge <id> <source> <range> <weight> [PROFILE=weight ...]`",
                        ));
                    }
                    let mut overrides = BTreeMap::new();
                    for &(c, tok) in &toks[5..] {
                        let (name, value) = tok.split_once('=').ok_or_else(|| {
                            parse_error(line, c, format!("expected PROFILE=weight, found `{tok}`"))
                        })?;
                        if name.is_empty() {
                            return Err(parse_error(line, c, "empty profile name"));
                        }
                        let w = number(line, (c + name.len() + 1, value))?;
                        overrides.insert(name.to_string(), w);
                    }
                    doc.edges.push(EdgeSpec {
                        id: toks[1].1.to_string(),
                        source: toks[2].1.to_string(),
                        range: toks[3].1.to_string(),
                        weight: number(line, toks[4])?,
                        overrides,
                    });
                    positions.push((line, toks[1].0));
                }
                other => {
                    return Err(parse_error(line, col, format!("unknown keyword `{other}`")));
                }
            }
        }
        let nv = doc.vertices.len();
        doc.validate(|i| positions.get(i).copied().unwrap_or((0, 0)))
            .map_err(|e| match e {
                // endpoint errors point at the offending edge
                Error::Parse { .. } => e,
                other => other,
            })?;
        debug_assert_eq!(positions.len(), nv + doc.edges.len());
        Ok(doc)
    }

    /// `pos(i)` gives the source position of declaration `i` (vertices first,
    /// then edges).
    fn validate(&self, pos: impl Fn(usize) -> (usize, usize)) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(parse_error(1, 1, "document declares no vertices"));
        }
        let mut seen = BTreeSet::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if !seen.insert(v.as_str()) {
                let (l, c) = pos(i);
                return Err(parse_error(l, c, format!("duplicate vertex id `{v}`")));
            }
        }
        let mut edge_ids = BTreeSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            let (l, c) = pos(self.vertices.len() + i);
            if !edge_ids.insert(e.id.as_str()) {
                return Err(parse_error(l, c, format!("duplicate edge id `{}`", e.id)));
            }
            for end in [&e.source, &e.range] {
                if !seen.contains(end.as_str()) {
                    return Err(parse_error(
                        l,
                        c,
                        format!("edge `{}` refers to undeclared vertex `{end}`", e.id),
                    ));
                }
            }
            if !e.weight.is_finite() || e.overrides.values().any(|w| !w.is_finite()) {
                return Err(parse_error(
                    l,
                    c,
                    format!("edge `{}` has a non-finite weight", e.id),
                ));
            }
        }
        Ok(())
    }

    /// Declared profiles plus every name used in an override.
    pub fn profile_names(&self) -> Vec<String> {
        let mut names = self.profiles.clone();
        for e in &self.edges {
            for k in e.overrides.keys() {
                if !names.contains(k) {
                    names.push(k.clone());
                }
            }
        }
        names
    }

    /// Builds the graph; `profile` selects override weights.
    pub fn graph(&self, profile: Option<&str>) -> Result<Graph> {
        if let Some(p) = profile {
            if !self.profile_names().iter().any(|n| n == p) {
                return Err(Error::UnknownProfile(p.to_string()));
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let w = profile
                    .and_then(|p| e.overrides.get(p).copied())
                    .unwrap_or(e.weight);
                (e.id.clone(), e.source.clone(), e.range.clone(), w)
            })
            .collect();
        Graph::new(self.vertices.clone(), edges)
    }

    /// Document of a single graph with no profiles.
    pub fn from_graph(g: &Graph) -> GraphDocument {
        GraphDocument {
            profiles: Vec::new(),
            vertices: g.vertex_ids().map(|v| g.name(v).to_string()).collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    source: g.name(e.source).to_string(),
                    range: g.name(e.range).to_string(),
                    weight: e.weight,
                    overrides: BTreeMap::new(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.profiles {
            out.push_str(&format!("profile {p}\n"));
        }
        for v in &self.vertices {
            out.push_str(&format!("vertex {v}\n"));
        }
        for e in &self.edges {
            // `{:?}` keeps the shortest round-tripping representation
            out.push_str(&format!(
                "edge {} {} {} {:?}",
                e.id, e.source, e.range, e.weight
            ));
            for (k, w) in &e.overrides {
                out.push_str(&format!(" {k}={w:?}"));
            }
            out.push('\n');
        }
        out
    }
}
