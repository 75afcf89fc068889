//! Real dense kernels: Kronecker product, SVD-backed Moore-Penrose
//! pseudoinverse with a hard singular-value threshold, numerical rank, and
//! the least-squares solution family `x = A⁺b + (I - A⁺A)y`.
//!
//! The SVD itself is delegated to faer. nalgebra's own SVD mis-factors
//! roughly 1 in 700 small random matrices (relative reconstruction error up
//! to O(1), reproducible on 3×3 inputs); faer stayed below 2e-14 across the
//! same sweep, so every rank/pseudoinverse decision in this crate routes
//! through it.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default relative tolerance for consistency decisions (`AA⁺b = b` up to
/// scale). Separate from the rank tolerance; exact in theory, scale-aware in
/// floating point.
pub const CONSISTENCY_TOL: f64 = 1e-8;

/// Kronecker product in the standard `a_ij · B` block layout. Guards the
/// dimension products so an oversize request fails as an error instead of an
/// allocation abort.
pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let rows = a.nrows().checked_mul(b.nrows());
    let cols = a.ncols().checked_mul(b.ncols());
    let total = rows.zip(cols).and_then(|(r, c)| r.checked_mul(c));
    match total {
        Some(t) if t <= isize::MAX as usize / std::mem::size_of::<f64>() => Ok(a.kronecker(b)),
        _ => Err(Error::Precondition(format!(
            "kronecker product of {}x{} and {}x{} exceeds addressable size",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        ))),
    }
}

#[derive(Debug, Clone)]
pub struct PinvResult {
    pub pinv: DMatrix<f64>,
    pub rank: usize,
    pub singular_values: DVector<f64>,
    pub tol_used: f64,
}

struct ThinSvd {
    u: DMatrix<f64>,
    s: DVector<f64>,
    v_t: DMatrix<f64>,
}

fn thin_svd(a: &DMatrix<f64>) -> Result<ThinSvd> {
    let (m, n) = a.shape();
    let fa = faer::Mat::from_fn(m, n, |i, j| a[(i, j)]);
    let svd = fa.thin_svd().map_err(|e| Error::Numerical {
        op: "svd",
        detail: format!("{e:?} on a {m}x{n} matrix"),
    })?;
    let k = m.min(n);
    let (u, s, v) = (svd.U(), svd.S(), svd.V());
    Ok(ThinSvd {
        u: DMatrix::from_fn(m, k, |i, j| u[(i, j)]),
        s: DVector::from_fn(k, |i, _| s[i]),
        v_t: DMatrix::from_fn(k, n, |i, j| v[(j, i)]),
    })
}

fn default_tol(a: &DMatrix<f64>, smax: f64, scale_floor: f64) -> f64 {
    a.nrows().max(a.ncols()) as f64 * f64::EPSILON * smax.max(scale_floor)
}

/// Moore-Penrose pseudoinverse. `tol` overrides the default singular-value
/// cutoff `max(m,n) · eps · σ_max`.
pub fn pinv(a: &DMatrix<f64>, tol: Option<f64>) -> Result<PinvResult> {
    pinv_impl(a, tol, 0.0)
}

/// Pseudoinverse with the cutoff referenced to an external problem scale:
/// `max(m,n) · eps · max(σ_max, scale)`. Needed where the argument is a
/// projector product whose exact value may be zero, so its own σ_max carries
/// no information about the working precision.
pub fn pinv_scaled(a: &DMatrix<f64>, scale: f64) -> Result<PinvResult> {
    pinv_impl(a, None, scale)
}

fn pinv_impl(a: &DMatrix<f64>, tol: Option<f64>, scale_floor: f64) -> Result<PinvResult> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Ok(PinvResult {
            pinv: DMatrix::zeros(n, m),
            rank: 0,
            singular_values: DVector::zeros(0),
            tol_used: 0.0,
        });
    }
    if !a.iter().all(|x| x.is_finite()) {
        return Err(Error::Numerical {
            op: "pinv",
            detail: "matrix contains non-finite entries".to_string(),
        });
    }
    let ThinSvd { u, s, v_t } = thin_svd(a)?;
    let smax = s.iter().cloned().fold(0.0_f64, f64::max);
    let tol = tol.unwrap_or_else(|| default_tol(a, smax, scale_floor));
    let rank = s.iter().filter(|&&x| x > tol).count();
    let k = s.len();
    let mut scaled_ut = u.transpose();
    for i in 0..k {
        let f = if s[i] > tol { 1.0 / s[i] } else { 0.0 };
        scaled_ut.row_mut(i).scale_mut(f);
    }
    Ok(PinvResult {
        pinv: v_t.transpose() * scaled_ut,
        rank,
        singular_values: s,
        tol_used: tol,
    })
}

/// Count of singular values above the (default or given) cutoff.
pub fn numerical_rank(a: &DMatrix<f64>, tol: Option<f64>) -> Result<usize> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Ok(0);
    }
    let ThinSvd { s, .. } = thin_svd(a)?;
    let smax = s.iter().cloned().fold(0.0_f64, f64::max);
    let tol = tol.unwrap_or_else(|| default_tol(a, smax, 0.0));
    Ok(s.iter().filter(|&&x| x > tol).count())
}

/// Orthonormal basis of the right null space (columns), with the rank cutoff
/// referenced to `scale`. Wide inputs are padded with zero rows so the full
/// set of right singular vectors is available.
pub fn null_space_basis(a: &DMatrix<f64>, scale: f64) -> Result<DMatrix<f64>> {
    let (m, n) = a.shape();
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    if m == 0 {
        return Ok(DMatrix::identity(n, n));
    }
    let padded;
    let work = if m < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        padded = p;
        &padded
    } else {
        a
    };
    let ThinSvd { s, v_t, .. } = thin_svd(work)?;
    let smax = s.iter().cloned().fold(0.0_f64, f64::max);
    let tol = default_tol(work, smax, scale);
    let null_rows: Vec<usize> = (0..s.len()).filter(|&i| s[i] <= tol).collect();
    let mut basis = DMatrix::zeros(n, null_rows.len());
    for (c, &i) in null_rows.iter().enumerate() {
        basis.column_mut(c).copy_from(&v_t.row(i).transpose());
    }
    Ok(basis)
}

/// Solution family of `Ax = b`: least-squares solutions are
/// `particular + projector · y`, with `particular = A⁺b` the min-norm member.
#[derive(Debug, Clone)]
pub struct LsSolutionFamily {
    pub particular: DVector<f64>,
    /// `I - A⁺A`; idempotent and symmetric.
    pub projector: DMatrix<f64>,
    pub consistent: bool,
    pub residual_norm: f64,
}

pub fn ls_family(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<LsSolutionFamily> {
    if a.nrows() != b.len() {
        return Err(Error::shape(
            "ls_family",
            format!("{}x{}", a.nrows(), a.ncols()),
            format!("rhs of length {}", b.len()),
        ));
    }
    let p = pinv(a, None)?;
    let particular = &p.pinv * b;
    let projector = DMatrix::identity(a.ncols(), a.ncols()) - &p.pinv * a;
    let residual_norm = (a * &particular - b).norm();
    let consistent = residual_norm <= CONSISTENCY_TOL * b.norm().max(1.0);
    Ok(LsSolutionFamily {
        particular,
        projector,
        consistent,
        residual_norm,
    })
}

/// `particular + projector · y`; every member attains the same residual.
pub fn sample_family(fam: &LsSolutionFamily, y: &DVector<f64>) -> Result<DVector<f64>> {
    if y.len() != fam.particular.len() {
        return Err(Error::shape(
            "sample_family",
            format!("family over {} unknowns", fam.particular.len()),
            format!("y of length {}", y.len()),
        ));
    }
    Ok(&fam.particular + &fam.projector * y)
}
