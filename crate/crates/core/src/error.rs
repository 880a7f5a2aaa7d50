use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` has non-finite weight {weight}")]
    NonFiniteWeight { edge: String, weight: f64 },
    #[error("graph has {count} vertices, limit is {limit}")]
    TooManyVertices { count: usize, limit: usize },
    #[error("edges `{first}` and `{second}` are not composable")]
    NotComposable { first: String, second: String },
    #[error("malformed path: {0}")]
    MalformedPath(String),
    #[error("more than {0} simple cycles; raise the cycle limit")]
    CycleLimit(usize),

    #[error("{what} did not converge after {iterations} iterations (gap {gap:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        gap: f64,
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is reducible")]
    Reducible,
    #[error("spectral radius {0} is not 1")]
    RadiusNotOne(f64),
    #[error("spectral radius {0} is too close to (or above) 1 for a Neumann series")]
    NotContracting(f64),
    #[error("residual {residual:e} exceeds tolerance {tolerance:e} in {what}")]
    Residual {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },
    #[error("vector is not superharmonic at vertex {vertex} (excess {excess:e})")]
    NotSuperharmonic { vertex: String, excess: f64 },
    #[error("vector is not almost harmonic")]
    NotAlmostHarmonic,
    #[error("vector is not normalized (sum {0})")]
    NotNormalized(f64),

    #[error("vertex `{0}` is not a sink")]
    NotASink(String),
    #[error("sink `{sink}` is not summable (radius {radius})")]
    NotSummable { sink: String, radius: f64 },
    #[error("component {component} is not harmonic: {reason}")]
    NotHarmonicComponent { component: String, reason: String },
    #[error("component {component} has no critical inverse temperature ({profile})")]
    NoCriticalBeta { component: String, profile: String },
    #[error("inverse temperature 0 must be handled by the trace-state analysis")]
    BetaZero,
    #[error("inverse temperature {beta} is outside the admissible interval of {source_label}")]
    OutsideInterval { source_label: String, beta: f64 },
    #[error("component {0} is not circular with a zero-weight loop")]
    NotZeroCircular(String),
    #[error("invalid state specification: {0}")]
    InvalidState(String),
    #[error("decomposition residual {0:e} exceeds tolerance")]
    Decomposition(f64),

    #[error("`{0}` does not contribute to the trace-state structure")]
    InvalidSource(String),
    #[error("representation check failed: {0}")]
    Representation(String),
    #[error("path count overflow")]
    CountOverflow,

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown weight profile `{0}`")]
    UnknownProfile(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
