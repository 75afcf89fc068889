//! Reduced-biquaternion matrices stored as four real component planes.
//!
//! `A = A0 + A1 i + A2 j + A3 k` is kept as four dense real matrices. All
//! solver paths consume component blocks, so this layout feeds them without
//! reshuffling; the 4m×4n real representation is only materialized on
//! request.

use nalgebra::DMatrix;

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::RbqScalar;

#[derive(Debug, Clone, PartialEq)]
pub struct RbqMatrix {
    rows: usize,
    cols: usize,
    comp: [DMatrix<f64>; 4],
}

/// The 4m×4n real representation of an RBQ matrix:
///
/// ```text
/// [ A0 -A1  A2 -A3 ]
/// [ A1  A0  A3  A2 ]
/// [ A2 -A3  A0 -A1 ]
/// [ A3  A2  A1  A0 ]
/// ```
///
/// Matrix multiplication over RBQ maps to real multiplication of these
/// blocks, and `‖A‖_F = ½‖A^R‖_F`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealRep(pub DMatrix<f64>);

/// First block row `[A0, -A1, A2, -A3]` of the real representation; carries
/// the full information of `A` and preserves the Frobenius norm.
#[derive(Debug, Clone, PartialEq)]
pub struct RealRepRow(pub DMatrix<f64>);

/// `A = C1 + C2 j` with `C1 = A0 + A1 i` and `C2 = A2 + A3 i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPairRep {
    pub c1: CMatrix,
    pub c2: CMatrix,
}

impl RealRep {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

impl RealRepRow {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

impl RbqMatrix {
    pub fn from_components(
        c0: DMatrix<f64>,
        c1: DMatrix<f64>,
        c2: DMatrix<f64>,
        c3: DMatrix<f64>,
    ) -> Result<Self> {
        let shape = c0.shape();
        for (name, c) in [("x1", &c1), ("x2", &c2), ("x3", &c3)] {
            if c.shape() != shape {
                return Err(Error::shape(
                    "RbqMatrix::from_components",
                    format!("x0 {}x{}", shape.0, shape.1),
                    format!("{name} {}x{}", c.shape().0, c.shape().1),
                ));
            }
        }
        Ok(RbqMatrix {
            rows: shape.0,
            cols: shape.1,
            comp: [c0, c1, c2, c3],
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RbqMatrix {
            rows,
            cols,
            comp: std::array::from_fn(|_| DMatrix::zeros(rows, cols)),
        }
    }

    /// Real identity lifted to RBQ.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.comp[0] = DMatrix::identity(n, n);
        m
    }

    /// Real matrix embedded as the `x0` plane.
    pub fn from_real(r: DMatrix<f64>) -> Self {
        let (rows, cols) = r.shape();
        let mut m = Self::zeros(rows, cols);
        m.comp[0] = r;
        m
    }

    /// `s · I_n`.
    pub fn scalar_identity(s: RbqScalar, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for (plane, v) in s.components().into_iter().enumerate() {
            if v != 0.0 {
                m.comp[plane] = DMatrix::identity(n, n) * v;
            }
        }
        m
    }

    /// 1×1 matrix holding a single scalar.
    pub fn from_scalar(s: RbqScalar) -> Self {
        Self::scalar_identity(s, 1)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn component(&self, t: usize) -> &DMatrix<f64> {
        &self.comp[t]
    }

    pub fn component_mut(&mut self, t: usize) -> &mut DMatrix<f64> {
        &mut self.comp[t]
    }

    pub fn get(&self, i: usize, j: usize) -> RbqScalar {
        RbqScalar::new(
            self.comp[0][(i, j)],
            self.comp[1][(i, j)],
            self.comp[2][(i, j)],
            self.comp[3][(i, j)],
        )
    }

    pub fn set(&mut self, i: usize, j: usize, v: RbqScalar) {
        for (t, c) in v.components().into_iter().enumerate() {
            self.comp[t][(i, j)] = c;
        }
    }

    pub fn add(&self, rhs: &RbqMatrix) -> Result<RbqMatrix> {
        self.zip("add", rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &RbqMatrix) -> Result<RbqMatrix> {
        self.zip("sub", rhs, |a, b| a - b)
    }

    pub fn scale(&self, alpha: f64) -> RbqMatrix {
        RbqMatrix {
            rows: self.rows,
            cols: self.cols,
            comp: std::array::from_fn(|t| &self.comp[t] * alpha),
        }
    }

    fn zip(
        &self,
        op: &'static str,
        rhs: &RbqMatrix,
        f: impl Fn(&DMatrix<f64>, &DMatrix<f64>) -> DMatrix<f64>,
    ) -> Result<RbqMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::shape(
                op,
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", rhs.rows, rhs.cols),
            ));
        }
        Ok(RbqMatrix {
            rows: self.rows,
            cols: self.cols,
            comp: std::array::from_fn(|t| f(&self.comp[t], &rhs.comp[t])),
        })
    }

    /// Product over the commutative RBQ algebra, computed directly from the
    /// component expansion (16 real products). The real-representation
    /// homomorphism `(AC)^R = A^R C^R` serves as the test oracle for this.
    pub fn mat_mul(&self, rhs: &RbqMatrix) -> Result<RbqMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::shape(
                "mat_mul",
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", rhs.rows, rhs.cols),
            ));
        }
        let [a0, a1, a2, a3] = &self.comp;
        let [b0, b1, b2, b3] = &rhs.comp;
        let c0 = a0 * b0 - a1 * b1 + a2 * b2 - a3 * b3;
        let c1 = a0 * b1 + a1 * b0 + a2 * b3 + a3 * b2;
        let c2 = a0 * b2 + a2 * b0 - a1 * b3 - a3 * b1;
        let c3 = a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1;
        Ok(RbqMatrix {
            rows: self.rows,
            cols: rhs.cols,
            comp: [c0, c1, c2, c3],
        })
    }

    /// Frobenius norm; equals `½‖A^R‖_F` and `‖A_r^R‖_F`.
    pub fn frobenius(&self) -> f64 {
        self.comp
            .iter()
            .map(|c| c.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    pub fn real_rep(&self) -> RealRep {
        let (m, n) = (self.rows, self.cols);
        let [a0, a1, a2, a3] = &self.comp;
        let mut r = DMatrix::zeros(4 * m, 4 * n);
        // block grid of Eq-pattern signs; row blocks top to bottom
        let pattern: [[(usize, f64); 4]; 4] = [
            [(0, 1.0), (1, -1.0), (2, 1.0), (3, -1.0)],
            [(1, 1.0), (0, 1.0), (3, 1.0), (2, 1.0)],
            [(2, 1.0), (3, -1.0), (0, 1.0), (1, -1.0)],
            [(3, 1.0), (2, 1.0), (1, 1.0), (0, 1.0)],
        ];
        let planes = [a0, a1, a2, a3];
        for (bi, row) in pattern.iter().enumerate() {
            for (bj, &(t, s)) in row.iter().enumerate() {
                r.view_mut((bi * m, bj * n), (m, n))
                    .copy_from(&(planes[t] * s));
            }
        }
        RealRep(r)
    }

    /// `[A0, -A1, A2, -A3]`, the first block row of `real_rep`.
    pub fn real_rep_row(&self) -> RealRepRow {
        let (m, n) = (self.rows, self.cols);
        let [a0, a1, a2, a3] = &self.comp;
        let mut r = DMatrix::zeros(m, 4 * n);
        r.view_mut((0, 0), (m, n)).copy_from(a0);
        r.view_mut((0, n), (m, n)).copy_from(&(-a1));
        r.view_mut((0, 2 * n), (m, n)).copy_from(a2);
        r.view_mut((0, 3 * n), (m, n)).copy_from(&(-a3));
        RealRepRow(r)
    }

    /// Split as `A = C1 + C2 j`; the round trip is bit-exact.
    pub fn complex_pair(&self) -> ComplexPairRep {
        ComplexPairRep {
            c1: CMatrix::new(self.comp[0].clone(), self.comp[1].clone()),
            c2: CMatrix::new(self.comp[2].clone(), self.comp[3].clone()),
        }
    }

    pub fn from_complex_pair(rep: &ComplexPairRep) -> Result<Self> {
        RbqMatrix::from_components(
            rep.c1.re.clone(),
            rep.c1.im.clone(),
            rep.c2.re.clone(),
            rep.c2.im.clone(),
        )
    }

    /// Hermitian over RBQ means `X0` symmetric and `X1, X2, X3` antisymmetric.
    /// Deviations are measured against `tol · max(1, ‖X‖_F)`.
    pub fn is_hermitian(&self, tol: f64) -> Result<bool> {
        if self.rows != self.cols {
            return Err(Error::shape(
                "is_hermitian",
                format!("{}x{}", self.rows, self.cols),
                "a square matrix".to_string(),
            ));
        }
        let scale = self.frobenius().max(1.0);
        let dev_sym = (&self.comp[0] - self.comp[0].transpose()).norm();
        let dev_anti = (1..4)
            .map(|t| (&self.comp[t] + self.comp[t].transpose()).norm())
            .fold(0.0_f64, f64::max);
        Ok(dev_sym.max(dev_anti) <= tol * scale)
    }
}

/// Default relative tolerance for Hermitian checks: an order above
/// double-precision accumulation at the benchmark dimensions.
pub const HERMITIAN_TOL: f64 = 1e-10;
