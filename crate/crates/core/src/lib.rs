//! KMS states of generalized gauge actions on graph C*-algebras of finite
//! graphs: spectral tools, harmonic vectors, the classification of extremal
//! KMS states for `β ≠ 0`, evaluation of states on words, trace states at
//! `β = 0`, and ground states.

pub mod config;
pub mod document;
pub mod error;
pub mod fixture;
pub mod graph;
pub mod ground;
pub mod harmonic;
pub mod kms;
pub mod spectral;
pub mod state;
pub mod trace;

pub use config::{Tolerances, TOL};
pub use document::{EdgeSpec, GraphDocument};
pub use error::{Error, Result};
pub use graph::{
    components, sign_profile, simple_cycles, Component, Edge, EdgeIx, Graph, GraphBuilder, Limits,
    Path, SignProfile, SignTag, Vertex, VertexSet,
};
pub use ground::{
    census, min_membership, potentials, tight_subgraph, BoundaryPath, Census, Potential,
    PotentialValue,
};
pub use harmonic::{
    decompose, extreme_points, is_almost_harmonic, phi_component, phi_sink, ExtremeKind,
    ExtremePoint, HarmonicVector, Harmonicity, SimplexDecomposition,
};
pub use kms::{
    beta_c, classify, classify_component, classify_sink, closed_form, kms_sets, spectrum,
    Classification, ComponentVerdict, Interval, KmsSets, RowShape, SinkVerdict, SpectrumRow,
    Verdict,
};
pub use spectral::{
    a_beta, neumann_inverse, perron_vector, restrict, riesz_decompose, spectral_radius, RieszParts,
    WeightMatrix,
};
pub use state::{
    circular_normalizer, eval_gauge_invariant, eval_omega_lambda, eval_state, kms_check,
    word_multiply, CircularData, CircularState, KmsState, KmsStateSpec, Measure, Word,
};
pub use trace::{
    algebra_structure, build_representation, multiplicity, zero_sets, AlgebraSummand,
    Representation, ZeroSets,
};
