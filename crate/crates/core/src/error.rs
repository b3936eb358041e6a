use thiserror::Error;

use crate::geometry::NoBlackHoleReason;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Input parameters violate a precondition of the called operation.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The parameters describe no black hole with the horizon structure we need.
    #[error("no black hole: {0}")]
    NoBlackHole(NoBlackHoleReason),

    /// A point lies outside the domain of a map or operator.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive step control shrank the step below representable size.
    #[error("step size underflow at y = {y:.6e} (h = {h:.3e}); near a degenerate horizon use the extremal parametrization")]
    StepUnderflow { y: f64, h: f64 },

    /// An iterative procedure failed to meet its tolerance within budget.
    #[error("no convergence: {what} (last estimates {last:?})")]
    NoConvergence { what: String, last: Vec<f64> },

    /// A computed quantity violates a proven bound; indicates a bug upstream.
    #[error("bound violated: {0}")]
    BoundViolated(String),

    /// Configuration could not be parsed or is inconsistent.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
