use thiserror::Error;

/// Errors raised anywhere in the moment → Hessenberg → Laurent pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("InvalidPolygon: {0}")]
    InvalidPolygon(String),

    #[error("InvalidDomain: {0}")]
    InvalidDomain(String),

    #[error("InsufficientNodes: {nodes} quadrature nodes given, at least {required} required")]
    InsufficientNodes { nodes: usize, required: usize },

    #[error("NonJordanBoundary: sampled boundary curve self-intersects")]
    NonJordanBoundary,

    #[error("DegreeExceedsMoments: degree {needed} requested, moments available to degree {available}")]
    DegreeExceedsMoments { needed: usize, available: usize },

    #[error("IncompleteRealMoments: tau[{m}][{n}] is missing")]
    IncompleteRealMoments { m: usize, n: usize },

    #[error("NonHermitianInput: Hermitian deviation {deviation:e} exceeds tolerance {tolerance:e}")]
    NonHermitianInput { deviation: f64, tolerance: f64 },

    #[error("MomentsNotPositiveDefinite: squared residual norm {norm2:e} at step {step}")]
    MomentsNotPositiveDefinite { step: usize, norm2: f64 },

    #[error("PrecisionTooLow: {required} mantissa bits required, {actual} configured")]
    PrecisionTooLow { required: u32, actual: u32 },

    #[error("IndexOutOfRange: {0}")]
    IndexOutOfRange(String),

    #[error("NoConvergence: QR iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("EvaluationOverflow: non-finite value produced")]
    EvaluationOverflow,

    #[error("ZeroArgument: Laurent map evaluated at w = 0")]
    ZeroArgument,

    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),

    #[error("Parse: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("Json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
