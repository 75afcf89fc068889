//! Complex matrices as explicit (real, imaginary) pairs.
//!
//! The complex-representation baseline and the complex-field specialization
//! are specified in terms of real arithmetic on `Re`/`Im` parts; keeping the
//! pair explicit makes that cost visible and lets both solver families share
//! one real kernel.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::kron;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub re: DMatrix<f64>,
    pub im: DMatrix<f64>,
}

impl CMatrix {
    pub fn new(re: DMatrix<f64>, im: DMatrix<f64>) -> Self {
        assert_eq!(re.shape(), im.shape(), "re/im planes must agree");
        CMatrix { re, im }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            re: DMatrix::zeros(rows, cols),
            im: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        CMatrix {
            re: DMatrix::identity(n, n),
            im: DMatrix::zeros(n, n),
        }
    }

    pub fn from_real(re: DMatrix<f64>) -> Self {
        let im = DMatrix::zeros(re.nrows(), re.ncols());
        CMatrix { re, im }
    }

    pub fn nrows(&self) -> usize {
        self.re.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.re.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.re.shape()
    }

    pub fn get(&self, i: usize, j: usize) -> (f64, f64) {
        (self.re[(i, j)], self.im[(i, j)])
    }

    pub fn set(&mut self, i: usize, j: usize, re: f64, im: f64) {
        self.re[(i, j)] = re;
        self.im[(i, j)] = im;
    }

    pub fn add(&self, rhs: &CMatrix) -> Result<CMatrix> {
        self.check_same("add", rhs)?;
        Ok(CMatrix {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        })
    }

    pub fn sub(&self, rhs: &CMatrix) -> Result<CMatrix> {
        self.check_same("sub", rhs)?;
        Ok(CMatrix {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        })
    }

    fn check_same(&self, op: &'static str, rhs: &CMatrix) -> Result<()> {
        if self.shape() != rhs.shape() {
            return Err(Error::shape(
                op,
                format!("{}x{}", self.nrows(), self.ncols()),
                format!("{}x{}", rhs.nrows(), rhs.ncols()),
            ));
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.ncols() != rhs.nrows() {
            return Err(Error::shape(
                "complex mul",
                format!("{}x{}", self.nrows(), self.ncols()),
                format!("{}x{}", rhs.nrows(), rhs.ncols()),
            ));
        }
        Ok(CMatrix {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix {
            re: self.re.transpose(),
            im: -self.im.transpose(),
        }
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix {
            re: self.re.transpose(),
            im: self.im.transpose(),
        }
    }

    pub fn scale(&self, re: f64, im: f64) -> CMatrix {
        CMatrix {
            re: &self.re * re - &self.im * im,
            im: &self.re * im + &self.im * re,
        }
    }

    pub fn norm(&self) -> f64 {
        (self.re.norm_squared() + self.im.norm_squared()).sqrt()
    }

    pub fn column(&self, j: usize) -> (DVector<f64>, DVector<f64>) {
        (self.re.column(j).into(), self.im.column(j).into())
    }

    /// Kronecker product over ℂ, expanded into real parts.
    pub fn kron(&self, rhs: &CMatrix) -> Result<CMatrix> {
        Ok(CMatrix {
            re: kron(&self.re, &rhs.re)? - kron(&self.im, &rhs.im)?,
            im: kron(&self.re, &rhs.im)? + kron(&self.im, &rhs.re)?,
        })
    }

    /// The 2m×2n real representation `[X0 -X1; X1 X0]` of `X = X0 + X1 i`.
    pub fn real_rep(&self) -> DMatrix<f64> {
        let (m, n) = self.shape();
        let mut r = DMatrix::zeros(2 * m, 2 * n);
        r.view_mut((0, 0), (m, n)).copy_from(&self.re);
        r.view_mut((0, n), (m, n)).copy_from(&(-&self.im));
        r.view_mut((m, 0), (m, n)).copy_from(&self.im);
        r.view_mut((m, n), (m, n)).copy_from(&self.re);
        r
    }

    /// First block row `[X0, -X1]` of `real_rep`; preserves the Frobenius norm.
    pub fn real_rep_row(&self) -> DMatrix<f64> {
        let (m, n) = self.shape();
        let mut r = DMatrix::zeros(m, 2 * n);
        r.view_mut((0, 0), (m, n)).copy_from(&self.re);
        r.view_mut((0, n), (m, n)).copy_from(&(-&self.im));
        r
    }

    /// Complex Hermitian: `Re` symmetric, `Im` antisymmetric.
    pub fn is_hermitian(&self, tol: f64) -> Result<bool> {
        if self.nrows() != self.ncols() {
            return Err(Error::shape(
                "is_hermitian",
                format!("{}x{}", self.nrows(), self.ncols()),
                "a square matrix".to_string(),
            ));
        }
        let scale = self.norm().max(1.0);
        let dev = (&self.re - self.re.transpose())
            .norm()
            .max((&self.im + self.im.transpose()).norm());
        Ok(dev <= tol * scale)
    }
}
