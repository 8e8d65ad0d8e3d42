use thiserror::Error;

/// Errors raised by the numeric and symbolic pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SewingError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("series tolerance not met after {terms} terms (tail bound {achieved:e})")]
    ToleranceNotMet { terms: usize, achieved: f64 },

    #[error("evaluation point lies on the period lattice")]
    Pole,

    #[error("index {index} outside the supported range (max {max})")]
    Range { index: usize, max: usize },

    #[error("near-degenerate sewing: smallest singular value {smallest_singular_value:e}")]
    NearDegenerate { smallest_singular_value: f64 },

    #[error("point outside the sewing domain (margin {margin:.6})")]
    OutOfDomain { margin: f64 },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    Divergence { iterations: usize, residual: f64 },

    #[error("Newton iterate left the sewing domain at iteration {iteration}")]
    DomainExit { iteration: usize },

    #[error("necklace enumeration exceeded its budget of {budget} necklaces")]
    BudgetExceeded { budget: usize },

    #[error("truncation too coarse: determinant routes disagree by {discrepancy:e}")]
    TruncationTooCoarse { discrepancy: f64 },

    #[error("group action is singular at this period matrix")]
    ActionSingular,

    #[error("generator {0} has no assigned value")]
    UnassignedGenerator(String),

    #[error("series order {order} outside the supported range (max {max})")]
    OrderOutOfRange { order: u32, max: u32 },
}

pub type Result<T> = std::result::Result<T, SewingError>;
