use thiserror::Error;

/// Crate-wide error type. Exact arithmetic either succeeds or reports a
/// structural reason; there are no tolerances anywhere.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in F_{{{p}^{k}}}")]
    DivisionByZero { p: u32, k: usize },

    #[error("{0}")]
    InvalidField(String),

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("supercommutator of basis pair ({i}, {j}) leaves the given span")]
    ClosureFailure { i: usize, j: usize },

    #[error("unsupported builtin algebra: {0}")]
    UnsupportedBuiltin(String),

    #[error("algebra validation failed: {0}")]
    InvalidAlgebra(String),

    #[error("elements belong to different ambient algebras or basis orders")]
    SpecMismatch,

    #[error("twisted adjoint action needs parity-homogeneous input; split the element first")]
    MixedParity,

    #[error("budget exceeded: operation would need a {rows} x {cols} matrix (limit {limit} entries)")]
    BudgetExceeded {
        rows: usize,
        cols: usize,
        limit: usize,
    },

    #[error("missing triangular/root data for this operation")]
    MissingRootData,

    #[error("weight is not admissible for the given p-character")]
    WeightNotAdmissible,

    #[error("p-character mismatch between modules")]
    ChiMismatch,

    #[error("p-character does not vanish on the required Borel nilradical")]
    ChiNotStandard,

    #[error("central_scalar: element does not act as a scalar (non-central input or non-split action)")]
    NotScalar { matrix: String },

    #[error("automorphism does not preserve brackets or the p-mapping")]
    NotAutomorphism,

    #[error("simple head is not unique")]
    HeadNotUnique,

    #[error("generators do not pairwise commute")]
    NonCommutingGenerators,

    #[error("{0}")]
    Cli(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
