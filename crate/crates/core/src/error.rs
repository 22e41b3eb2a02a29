//! Shared error type for the solver library.
//!
//! Every fallible operation returns [`Error`]; the CLI maps these onto exit
//! codes (usage vs. numerical failure) at the boundary.

/// Library-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Dimension mismatch between operands.
    #[error("shape: {0}")]
    Shape(String),

    /// Negative threshold passed to a proximal operator.
    #[error("bad-threshold: {0} is negative")]
    BadThreshold(f64),

    /// Group partition does not cover the coordinates exactly once.
    #[error("bad-partition: {0}")]
    BadPartition(String),

    /// Box bounds with `lo > hi`.
    #[error("bad-box: lo {lo} > hi {hi}")]
    BadBox { lo: f64, hi: f64 },

    /// Label vector contains an entry outside {-1, +1}.
    #[error("bad-labels: entry {value} at index {index} is not +1 or -1")]
    BadLabels { index: usize, value: f64 },

    /// The eta recurrence was seeded with a value outside (0, 1].
    #[error("bad-eta: {0} is outside (0, 1]")]
    BadEta(f64),

    /// Backtracking shrank the step below the underflow floor.
    #[error("step-underflow: backtracking step fell below {0:e}")]
    StepUnderflow(f64),

    /// Objective or iterate became non-finite.
    #[error("diverged: non-finite value at iteration {0}")]
    Diverged(usize),

    /// Jacobi SVD did not reach the off-diagonal tolerance within the sweep cap.
    #[error("svd-no-converge: off-diagonal mass {off:e} after {sweeps} sweeps")]
    SvdNoConverge { off: f64, sweeps: usize },

    /// Exact line search hit a direction with no curvature.
    #[error("flat-direction: curvature {0:e} below threshold")]
    FlatDirection(f64),

    /// Alternating projection failed to reach the feasible set.
    #[error(
        "feasibility-stall: box residual {box_residual:e}, hyperplane residual \
         {hyperplane_residual:e} after {rounds} rounds"
    )]
    FeasibilityStall {
        box_residual: f64,
        hyperplane_residual: f64,
        rounds: usize,
    },

    /// A matrix or vector argument that must be non-empty was empty.
    #[error("empty-data: {0}")]
    EmptyData(String),

    /// Zero or otherwise unusable iteration budget.
    #[error("bad-budget: {0}")]
    BadBudget(String),

    /// Invalid scalar argument (lambda, C, tolerance, fraction, ...).
    #[error("bad-argument: {0}")]
    BadArgument(String),

    /// Malformed text input, with the 1-based line it came from.
    #[error("parse: {path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// I/O failure wrapped with the path involved.
    #[error("io: {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Build an [`Error::Io`] carrying the offending path.
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
