use thiserror::Error;

/// Errors shared by the function calculus. Improper values (−∞ for convex
/// functions, +∞ for concave ones) are never constructed; the operations that
/// would produce them fail with the corresponding variant instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric (max asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("columns are not orthonormal (max deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("quadratic part is not convex on the feasible set (min eigenvalue {min_eigenvalue:.3e})")]
    NotConvex { min_eigenvalue: f64 },

    #[error("curvature coefficient {0} is negative")]
    NegativeCurvature(f64),

    #[error("infimum diverges to -inf along the eliminated directions")]
    UnboundedBelow,

    #[error("supremum diverges to +inf along the eliminated directions")]
    UnboundedAbove,

    #[error("improper input: {0}")]
    ImproperInput(String),

    #[error("polarity mismatch: {0}")]
    PolarityMismatch(String),

    #[error("observed value lies outside the support of the joint state")]
    InfeasibleObservation,
}

pub type Result<T> = std::result::Result<T, Error>;
