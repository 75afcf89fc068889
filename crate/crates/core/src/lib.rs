//! Reduced-biquaternion (RBQ) matrix algebra and least-squares Hermitian
//! solvers for the two-sided equation pair `(AXB, CXD) = (E, F)`.
//!
//! The primary solver transforms the constrained RBQ problem into an
//! unconstrained real least-squares system through the real representation
//! of RBQ matrices ([`rr`]); the prior complex-representation method is kept
//! as a verifiable baseline ([`cr`]). A complex-field specialization of the
//! real-representation route powers a partially-described inverse eigenvalue
//! solver ([`pdiep`]), and [`mod@bench`] reproduces the error/timing protocols
//! used to compare the two methods.
//!
//! All value types are immutable after construction and operations are pure
//! functions, so solves for different instances can run on separate threads
//! without coordination.

pub mod bench;
pub mod cmatrix;
pub mod cr;
pub mod error;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod pdiep;
pub mod rr;
pub mod scalar;
pub mod structure;

#[cfg(test)]
pub(crate) mod testutil;

pub use cmatrix::CMatrix;
pub use error::{Error, Result};
pub use matrix::{ComplexPairRep, RbqMatrix, RealRep, RealRepRow, HERMITIAN_TOL};
pub use rr::{Method, RbmeProblem, SolveReport};
pub use scalar::RbqScalar;
