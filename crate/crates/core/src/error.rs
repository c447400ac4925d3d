use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("state is not normalized (norm² = {norm_squared}); rescale the coefficients or request normalization")]
    Unnormalized { norm_squared: f64 },

    #[error("scaled variant singular at origin")]
    ScaledAtOrigin,

    #[error("truncation did not converge by order {max_order}: tail estimate {tail:e} exceeds {tolerance:e}")]
    TruncationNotConverged {
        max_order: usize,
        tail: f64,
        tolerance: f64,
    },

    #[error("quadratic form has imaginary residual {im:e} against real part {re:e}")]
    ImaginaryResidual { re: f64, im: f64 },

    #[error("quadrature did not converge: {coarse} with {coarse_nodes} nodes vs {fine} with {fine_nodes}")]
    QuadratureNotConverged {
        coarse: f64,
        fine: f64,
        coarse_nodes: usize,
        fine_nodes: usize,
    },

    #[error("coherent state of width {state_width} cannot be expanded in a basis of width {basis_width}; use the closed form")]
    CrossWidth { state_width: f64, basis_width: f64 },

    #[error("no closed form available for {0}")]
    NoClosedForm(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
