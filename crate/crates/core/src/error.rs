use crate::poly::Cpx;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("declared bidegree ({}, {}) is below the actual bidegree ({}, {})", .declared.0, .declared.1, .actual.0, .actual.1)]
    DegreeMismatch {
        declared: (usize, usize),
        actual: (usize, usize),
    },

    #[error("degree error: {0}")]
    Degree(String),

    #[error("the zero polynomial has no well-defined root set")]
    ZeroPolynomial,

    #[error("root solver did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize, best: Vec<Cpx> },

    #[error("denominator vanishes in the open bidisk near z1 = {z1}, z2 = {z2}")]
    UnstableDenominator { z1: Cpx, z2: Cpx },

    #[error("singular point on collapsing fiber lambda = {lambda} has |tau1| = {} (non-atoral input?)", .tau1.norm())]
    NonUnimodularTau { tau1: Cpx, lambda: Cpx },

    #[error("radial boundary limit at ({z1}, {z2}) did not converge")]
    NonconvergentLimit { z1: Cpx, z2: Cpx },

    #[error("p2 vanishes at lambda = {lambda}; fixed points are not given by the quadratic there")]
    LambdaSharpPoint { lambda: Cpx },

    #[error("Q_alpha is identically zero: fixed points form parabolic lines, use psi_branches/fiber_map directly")]
    QIdenticallyZero,

    #[error("boundary fiber at angle {angle} cannot be classified unambiguously ({detail})")]
    AmbiguousBoundary { angle: f64, detail: String },

    #[error("closed form has a vanishing denominator")]
    DenominatorZero,

    #[error("operation requires a simple bidegree (1, n) skew-product")]
    NotSimple,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Validation and input problems map to exit code 2, numeric failures to 3.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::NonconvergentLimit { .. }
                | Error::AmbiguousBoundary { .. }
                | Error::DenominatorZero
                | Error::NonUnimodularTau { .. }
                | Error::LambdaSharpPoint { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
