use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("vertex {0} has degree zero")]
    IsolatedVertex(String),

    #[error("empty vertex set")]
    EmptySet,

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("cap exceeded: {what} is {value}, limit is {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("not an orthogonal projection: {0}")]
    NotProjection(String),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("negative weight {0}")]
    NegativeWeight(String),

    /// An exact identity that must hold failed. Both sides are carried as text.
    #[error("identity violated: {name}: {lhs} != {rhs}")]
    IdentityViolation {
        name: &'static str,
        lhs: String,
        rhs: String,
    },

    #[error("majorization certificate failed:\n{0}")]
    MajorizationFailure(String),

    /// A graph failed the campaign; `graph` holds it in the text format.
    #[error("theorem check failed for graph\n{graph}{detail}")]
    Violation { graph: String, detail: String },
}
