use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument {value} outside the domain of {function}")]
    Domain { function: &'static str, value: f64 },

    #[error("{function} is singular at t = {at}")]
    Singularity { function: &'static str, at: f64 },

    #[error("vector norm {norm} too far from 1 to renormalize")]
    NotUnit { norm: f64 },

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("unknown invariant `{0}`")]
    UnknownInvariant(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("group closure for {name} exceeded expected order {expected}")]
    GroupClosure { name: String, expected: usize },

    #[error("singular interpolation system: {0}")]
    SingularInterpolation(String),

    #[error("ill-conditioned probe system for {0}")]
    IllConditioned(String),

    #[error("point is not on a rotation axis of the symmetry group")]
    NotOnAxis,

    #[error("classifier statistic {0} is too close to 1")]
    Degenerate(f64),

    #[error("POVM is not a catalog symmetric family; use the numerical optimizer instead")]
    NotSymmetric,

    #[error("enumeration of {needed} sequences exceeds the budget of {budget}")]
    EnumerationBudget { needed: u128, budget: u128 },

    #[error("interval signs remain ambiguous at {precision} bits")]
    AmbiguousSign { precision: u32 },

    #[error("Sturm chain degenerated: {0}")]
    ChainDegenerate(String),

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
