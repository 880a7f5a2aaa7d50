//! Numerical tolerances shared by every module.

/// One record holding every tolerance the library uses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Absolute accuracy of spectral radii.
    pub eig: f64,
    /// Harmonicity of constructed vectors and Riesz preconditions.
    pub harmonicity: f64,
    /// β-equality and interval margins.
    pub classification: f64,
    /// Tolerance of the almost-harmonic predicate.
    pub almost_harmonic: f64,
    /// Eigen-residual accepted for Perron vectors.
    pub perron_residual: f64,
    /// Residual of `(I - B) X = I` accepted for Neumann inverses.
    pub neumann_residual: f64,
    /// Successive-difference threshold of the Riesz limit.
    pub riesz_cauchy: f64,
    /// Number of consecutive small differences required by the Riesz limit.
    pub riesz_window: usize,
    /// Reconstruction and decomposition residuals.
    pub reconstruction: f64,
    /// Loop weights below this magnitude count as zero.
    pub zero_weight: f64,
    /// Bracket width at which root finding for β_C stops.
    pub beta_root: f64,
    /// Iteration cap for every iterative routine.
    pub max_iterations: usize,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        eig: 1e-12,
        harmonicity: 1e-10,
        classification: 1e-9,
        almost_harmonic: 1e-9,
        perron_residual: 1e-10,
        neumann_residual: 1e-10,
        riesz_cauchy: 1e-12,
        riesz_window: 5,
        reconstruction: 1e-8,
        zero_weight: 1e-12,
        beta_root: 1e-13,
        max_iterations: 100_000,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// The tolerances used throughout the crate.
pub const TOL: Tolerances = Tolerances::DEFAULT;
