use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    /// `column` is zero-based; `deviation` is the signed column-sum error of the worst column.
    #[error("column {column} sums to 1{deviation:+e}")]
    ColumnSumMismatch { column: usize, deviation: f64 },

    #[error("{rows} realizations cannot carry {cols} conditions")]
    TooFewRealizations { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("signal {signal} has zero probability")]
    ZeroProbabilitySignal { signal: usize },

    #[error("prior {prior} is not between the beliefs {lo} and {hi}")]
    PriorOutsideSupport { lo: f64, hi: f64, prior: f64 },

    #[error("invalid belief {0}")]
    InvalidBelief(f64),

    #[error("invalid belief distribution: {0}")]
    InvalidDistribution(String),

    #[error("barycenter mismatch: expected {expected}, found {found}")]
    BarycenterMismatch { expected: f64, found: f64 },

    #[error("garbling is rank-deficient; the feasible set is the single point (prior, prior)")]
    SingularGarbling,

    #[error("distribution cannot be induced through this garbling")]
    NotSigmaPlausible,

    #[error("prior {0} is degenerate for a nondegenerate belief distribution")]
    DegeneratePrior(f64),

    #[error("invalid utility: {0}")]
    InvalidUtility(String),

    #[error("empty domain [{lo}, {hi}]")]
    EmptyDomain { lo: f64, hi: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("scenario: {0}")]
    Scenario(String),

    #[error("linear program failed: {0}")]
    Solver(String),
}
