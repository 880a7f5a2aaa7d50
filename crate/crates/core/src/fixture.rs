//! The bundled eleven-vertex example graph and its three weight profiles.

use crate::document::GraphDocument;
use crate::graph::Graph;

pub const EXAMPLE_GRAPH: &str = include_str!("../fixtures/example.graph");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// `F ≡ 1`.
    Gauge,
    /// `a = b = -2`, `c = 0`, else 1.
    F1,
    /// `a = -1`, `d = -3/2`, else 1.
    F2,
}

impl Profile {
    pub const ALL: [Profile; 3] = [Profile::Gauge, Profile::F1, Profile::F2];

    pub fn name(self) -> &'static str {
        match self {
            Profile::Gauge => "gauge",
            Profile::F1 => "F1",
            Profile::F2 => "F2",
        }
    }
}

pub fn example_document() -> GraphDocument {
    GraphDocument::parse(EXAMPLE_GRAPH).expect("bundled fixture parses")
}

pub fn example_graph(profile: Profile) -> Graph {
    example_document()
        .graph(Some(profile.name()))
        .expect("bundled fixture is a valid graph")
}
