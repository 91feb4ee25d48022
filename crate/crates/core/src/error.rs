use thiserror::Error;

use crate::network::Diagnostic;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        found: usize,
    },

    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (min eigenvalue {min_eig:e}, max eigenvalue {max_eig:e})")]
    NotPositiveDefinite { min_eig: f64, max_eig: f64 },

    #[error("linear part is not controllable: Gramian eigenvalues in [{min_eig:e}, {max_eig:e}]")]
    NotControllable { min_eig: f64, max_eig: f64 },

    #[error("invalid time horizon: {0}")]
    InvalidHorizon(String),

    #[error("invalid network ({} diagnostics): {}", .0.len(), join_diagnostics(.0))]
    InvalidNetwork(Vec<Diagnostic>),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
