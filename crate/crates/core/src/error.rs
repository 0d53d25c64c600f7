use thiserror::Error;

/// Errors raised by the library. Variants carry enough context to build a
/// CLI diagnostic without re-running the computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e} exceeds {bound:.3e})")]
    NotHermitian { asymmetry: f64, bound: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("degenerate frame in generic part: {0}")]
    DegenerateFrame(String),

    #[error("{clusters} eigenvalue clusters exceed the enumeration cap of {cap}")]
    TooManyClusters { clusters: usize, cap: usize },

    #[error("{components} minimal reducing components exceed the enumeration cap of {cap}")]
    TooManyComponents { components: usize, cap: usize },

    #[error("subspace is not invariant (defect {defect:.3e} exceeds {bound:.3e})")]
    NotInvariant { defect: f64, bound: f64 },

    #[error("operator is not contractive (norm {norm:.17})")]
    NotContractive { norm: f64 },

    #[error("graph projections do not commute (commutator {commutator:.3e} exceeds {bound:.3e})")]
    ProjectionsDontCommute { commutator: f64, bound: f64 },

    #[error("not a Riccati solution (residual {residual:.3e} exceeds {bound:.3e})")]
    NotASolution { residual: f64, bound: f64 },

    #[error("solution graph is not a spectral subspace")]
    NotSpectral,

    #[error("invalid subspace: {}", .violations.join("; "))]
    InvalidSubspace { violations: Vec<String> },

    #[error("graph complement identity violated (span distance {distance:.3e})")]
    ComplementMismatch { distance: f64 },

    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
