use serde::Serialize;

use super::{simple_cycles, Graph, Path, VertexSet};
use crate::config::TOL;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignTag {
    /// The region contains no loop at all.
    NoLoops,
    AllPositive,
    AllNegative,
    HasZeroLoop,
    Mixed,
}

/// Sign pattern of the loop weights in a vertex set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignProfile {
    pub tag: SignTag,
    /// A zero cycle for `HasZeroLoop`; a positive and a negative cycle for `Mixed`.
    #[serde(skip)]
    pub witness: Vec<Path>,
}

impl SignProfile {
    /// Every loop positive, vacuously true without loops.
    pub fn all_positive(&self) -> bool {
        matches!(self.tag, SignTag::NoLoops | SignTag::AllPositive)
    }

    pub fn all_negative(&self) -> bool {
        matches!(self.tag, SignTag::NoLoops | SignTag::AllNegative)
    }
}

/// Classifies the loops inside `region` by sign. Every loop decomposes into
/// simple cycles, so inspecting simple cycles suffices.
pub fn sign_profile(g: &Graph, region: &VertexSet) -> Result<SignProfile> {
    let cycles = simple_cycles(g, region)?;
    let mut positive = None;
    let mut negative = None;
    let mut zero = None;
    for c in cycles {
        let w = c.weight(g);
        if w.abs() <= TOL.zero_weight {
            zero.get_or_insert(c);
        } else if w > 0.0 {
            positive.get_or_insert(c);
        } else {
            negative.get_or_insert(c);
        }
    }
    let (tag, witness) = match (positive, negative, zero) {
        (Some(p), Some(n), _) => (SignTag::Mixed, vec![p, n]),
        (_, _, Some(z)) => (SignTag::HasZeroLoop, vec![z]),
        (Some(_), None, None) => (SignTag::AllPositive, vec![]),
        (None, Some(_), None) => (SignTag::AllNegative, vec![]),
        (None, None, None) => (SignTag::NoLoops, vec![]),
    };
    Ok(SignProfile { tag, witness })
}
