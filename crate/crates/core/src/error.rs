use thiserror::Error;

use crate::linalg::SymMatrix;

pub type Result<T> = std::result::Result<T, MeansError>;

#[derive(Debug, Error)]
pub enum MeansError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not positive semidefinite: eigenvalue {min_eigenvalue:e} below slack")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is numerically singular: min eigenvalue {min_eigenvalue:e}")]
    Singular { min_eigenvalue: f64 },

    #[error("symmetric eigensolver did not converge on {dim}x{dim} matrix (frobenius norm {norm:e})")]
    EigenFailure { dim: usize, norm: f64 },

    #[error("function evaluation failed at {x:e} (got {value})")]
    FunctionEval { x: f64, value: f64 },

    #[error("epsilon-limit did not converge: last step distance {distance:e}")]
    NonConvergence {
        distance: f64,
        last: Box<SymMatrix>,
        previous: Box<SymMatrix>,
    },

    #[error("weight {0} outside [0, 1]")]
    InvalidWeight(f64),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("X σ X = A has no positive definite solution: f(1) = {f_at_1:e}")]
    NoSolution { f_at_1: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}
