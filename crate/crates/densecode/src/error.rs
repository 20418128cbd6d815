use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("tolerances must be strictly positive and below 1e-3 (abs_tol = {abs_tol}, rank_tol = {rank_tol})")]
    InvalidTolerance { abs_tol: f64, rank_tol: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains non-finite entries")]
    NonFiniteEntries,

    #[error("state vector is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("zero vector or empty input where a nonzero input is required")]
    ZeroInput,

    #[error("vectors are linearly dependent at the configured rank tolerance")]
    LinearlyDependent,

    #[error("matrix is not Hermitian within tolerance (max deviation = {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not a valid density operator: {0}")]
    NotDensity(String),

    #[error("matrix is not positive semidefinite (minimum eigenvalue = {0:.3e})")]
    NotPositive(f64),

    #[error("invalid coefficient list: {0}")]
    InvalidCoefficients(String),

    #[error("operation requires Schmidt rank >= {required}, got {got}")]
    RankTooSmall { required: usize, got: usize },

    #[error(
        "Schmidt rank {rank} exceeds channel dimension {d_chan}; isometric encoding is impossible"
    )]
    RankExceedsChannel { rank: usize, d_chan: usize },

    #[error("Schmidt rank {rank} does not exceed channel dimension {d_chan}; use the saturated protocol instead")]
    RankWithinChannel { rank: usize, d_chan: usize },

    #[error("matrix is not an isometry within tolerance (max deviation = {0:.3e})")]
    NotIsometry(f64),

    #[error("Kraus operators violate the completeness relation (max deviation = {0:.3e})")]
    IncompleteChannel(f64),

    #[error("encoding family is not pairwise trace-orthogonal (max deviation = {0:.3e})")]
    NotOrthogonalFamily(f64),

    #[error(
        "orthogonal extension is impossible: {n} members exceed the target dimension {d_chan}"
    )]
    ExtensionObstructed { n: usize, d_chan: usize },

    #[error("no orthogonal extension found after {attempts} seeded attempts")]
    ExtensionNotFound { attempts: usize },

    #[error("Schmidt rank {rank} is not a multiple of the channel dimension {d_chan}")]
    RankNotMultiple { rank: usize, d_chan: usize },

    #[error("coefficient group {group} is not uniform at relative tolerance {rel_tol:.1e}")]
    GroupingFailed { group: usize, rel_tol: f64 },

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),

    #[error("message count {l} exceeds the deterministic cap floor(D / lambda_1^2) = {cap} for this state (lambda_1^2 = {lambda1_sq:.6})")]
    ExceedsDeterministicCap {
        l: usize,
        cap: usize,
        lambda1_sq: f64,
    },

    #[error("invalid search configuration: {0}")]
    InvalidSearchConfig(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
