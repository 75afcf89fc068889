//! Partially described inverse eigenvalue problem: reconstruct a complex
//! Hermitian matrix from k prescribed eigenpairs.
//!
//! With `Λ = diag(λ_1..λ_k)` and `Φ = [u_1..u_k]`, the constraint
//! `MΦ = ΦΛ` is the single complex equation `AXB = E` under
//! `A = I_n, X = M, B = Φ, E = ΦΛ`, solved over Hermitian `X` by the
//! complex-field specialization. Solvability is the rank test
//! `rank(N) = rank([N, t])` on the packed design.

use nalgebra::{DMatrix, DVector};

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rr::{assemble_complex_design, complex_hermitian_from_packed};

/// k prescribed eigenpairs of an n×n Hermitian matrix. Eigenvalues are real
/// by the data model; complex input cannot be expressed, not silently
/// truncated.
#[derive(Debug, Clone)]
pub struct EigenpairData {
    n: usize,
    lambdas: DVector<f64>,
    phi: CMatrix,
}

impl EigenpairData {
    pub fn new(n: usize, lambdas: DVector<f64>, phi: CMatrix) -> Result<Self> {
        let k = lambdas.len();
        if k > n {
            return Err(Error::Precondition(format!(
                "{k} eigenpairs prescribed for order {n}; k must be <= n"
            )));
        }
        if phi.shape() != (n, k) {
            return Err(Error::shape(
                "EigenpairData",
                format!("{k} eigenvalues of order {n} (phi must be {n}x{k})"),
                format!("phi is {}x{}", phi.nrows(), phi.ncols()),
            ));
        }
        for c in 0..k {
            let (re, im) = phi.column(c);
            if re.norm().hypot(im.norm()) == 0.0 {
                return Err(Error::Precondition(format!(
                    "eigenvector column {c} is zero"
                )));
            }
        }
        Ok(EigenpairData { n, lambdas, phi })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &DVector<f64> {
        &self.lambdas
    }

    pub fn phi(&self) -> &CMatrix {
        &self.phi
    }
}

#[derive(Debug, Clone)]
pub struct PdiepReport {
    /// Reconstructed Hermitian matrix (Hermitian by construction).
    pub matrix: CMatrix,
    /// `‖M̂u_i - λ_i u_i‖₂` per prescribed pair.
    pub residuals: Vec<f64>,
    /// `rank(N) = rank([N, t])` on the packed design.
    pub solvable: bool,
    pub rank: usize,
}

fn design(data: &EigenpairData) -> (DMatrix<f64>, DVector<f64>) {
    let a = CMatrix::identity(data.n);
    let lam = DMatrix::from_diagonal(&data.lambdas);
    let e = CMatrix {
        re: &data.phi.re * &lam,
        im: &data.phi.im * &lam,
    };
    assemble_complex_design(&[(&a, &data.phi, &e)], data.n)
}

fn rank_of_augmented(coeff: &DMatrix<f64>, t: &DVector<f64>) -> Result<usize> {
    let (rows, cols) = coeff.shape();
    let mut aug = DMatrix::zeros(rows, cols + 1);
    aug.view_mut((0, 0), (rows, cols)).copy_from(coeff);
    aug.column_mut(cols).copy_from(t);
    linalg::numerical_rank(&aug, None)
}

/// Min-norm reconstruction (`y = None`) or the family member selected by a
/// free vector `y` of length n².
pub fn reconstruct(data: &EigenpairData, y: Option<&DVector<f64>>) -> Result<PdiepReport> {
    let (coeff, t) = design(data);
    if let Some(y) = y {
        if y.len() != coeff.ncols() {
            return Err(Error::shape(
                "pdiep::reconstruct",
                format!("design with {} free parameters", coeff.ncols()),
                format!("y of length {}", y.len()),
            ));
        }
    }
    let pv = linalg::pinv(&coeff, None)?;
    let min_norm = &pv.pinv * &t;
    let packed = match y {
        None => min_norm,
        Some(y) => &min_norm + y - &pv.pinv * (&coeff * y),
    };
    let matrix = complex_hermitian_from_packed(data.n, &packed);

    let solvable = pv.rank == rank_of_augmented(&coeff, &t)?;
    let residuals = (0..data.k())
        .map(|i| {
            let (ur, ui) = data.phi.column(i);
            let u = CMatrix::new(
                DMatrix::from_column_slice(data.n, 1, ur.as_slice()),
                DMatrix::from_column_slice(data.n, 1, ui.as_slice()),
            );
            let mu = matrix.mul(&u)?;
            let lam_u = u.scale(data.lambdas[i], 0.0);
            Ok(mu.sub(&lam_u)?.norm())
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(PdiepReport {
        matrix,
        residuals,
        solvable,
        rank: pv.rank,
    })
}

/// Solvability rank test without reconstructing.
pub fn check_solvable(data: &EigenpairData) -> Result<bool> {
    let (coeff, t) = design(data);
    let rank_n = linalg::numerical_rank(&coeff, None)?;
    Ok(rank_n == rank_of_augmented(&coeff, &t)?)
}
