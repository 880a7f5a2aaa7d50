//! Inputs shared by the benchmarks in `benches/`.

use graphkms::{Graph, GraphDocument};

/// A strongly connected ring of `n` vertices with a chord from every
/// third vertex, weights cycling through 1, 2, 3.
pub fn ring_with_chords(n: usize) -> Graph {
    let mut text = String::new();
    for i in 0..n {
        text.push_str(&format!("vertex v{i}\n"));
    }
    for i in 0..n {
        let w = 1 + i % 3;
        text.push_str(&format!("edge r{i} v{i} v{} {w}\n", (i + 1) % n));
        if i % 3 == 0 {
            text.push_str(&format!("edge c{i} v{i} v{} {w}\n", (i * 7 + 2) % n));
        }
    }
    GraphDocument::parse(&text)
        .and_then(|doc| doc.graph(None))
        .expect("generated document is valid")
}
