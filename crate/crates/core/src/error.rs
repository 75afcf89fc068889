//! Error types shared across the crate.

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Operand dimensions do not conform.
    #[error("shape mismatch in {op}: {lhs} is not compatible with {rhs}")]
    Shape {
        op: &'static str,
        lhs: String,
        rhs: String,
    },

    /// Input lacks the structure an operation requires (symmetry, antisymmetry, ...).
    #[error("input is not {expected}: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    Structure {
        expected: &'static str,
        deviation: f64,
        tol: f64,
    },

    /// A stated precondition does not hold (e.g. k > n eigenpairs).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A numerical kernel failed.
    #[error("numerical failure in {op}: {detail}")]
    Numerical { op: &'static str, detail: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input file; `detail` carries serde's line/column context.
    #[error("failed to parse {path}: {detail}")]
    Parse { path: PathBuf, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn shape(op: &'static str, lhs: impl Into<String>, rhs: impl Into<String>) -> Self {
        Error::Shape {
            op,
            lhs: lhs.into(),
            rhs: rhs.into(),
        }
    }
}
