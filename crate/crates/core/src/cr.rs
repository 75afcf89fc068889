//! Complex-representation baseline for the same Hermitian problem, used for
//! cross-validation and the timing comparison.
//!
//! `A = A1 + A2 j` maps to `h(A) = [A1 A2; A2 A1]`. The constrained problem
//! becomes the real system `[Q1; Q2] x = e` with `Q = [M; N]·U`,
//! `Q1 = Re Q`, `Q2 = Im Q`. The stacked pseudoinverse is evaluated through
//! the literal `H`/`R`/`Z` closed forms (including the explicit inverse for
//! `Z` via a dense factorization); an SVD of the stacked matrix serves as
//! the verification oracle in tests, not as the computation path.
//!
//! For timing fairness this module shares the SVD kernel and the sparse
//! selection discipline with the real-representation solver; only the
//! method-prescribed operations differ.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::linalg::{self, CONSISTENCY_TOL};
use crate::matrix::RbqMatrix;
use crate::rr::{problem_residual, Method, RbmeProblem, SolveOptions, SolveReport};
use crate::structure::{build_k_a, build_k_s, build_r_sel, hermitian_param_len, unvec};

/// `h(A) = [A1 A2; A2 A1]` for `A = A1 + A2 j`; multiplicative:
/// `h(AB) = h(A) h(B)`.
pub fn complex_rep(a: &RbqMatrix) -> CMatrix {
    let pair = a.complex_pair();
    let (m, n) = a.shape();
    let mut out = CMatrix::zeros(2 * m, 2 * n);
    for (dst_r, dst_c, src) in [
        (0, 0, &pair.c1),
        (0, n, &pair.c2),
        (m, 0, &pair.c2),
        (m, n, &pair.c1),
    ] {
        out.re.view_mut((dst_r, dst_c), (m, n)).copy_from(&src.re);
        out.im.view_mut((dst_r, dst_c), (m, n)).copy_from(&src.im);
    }
    out
}

/// The assembled baseline system.
#[derive(Debug, Clone)]
pub struct CrSystem {
    /// `h((B1ᵀ⊗A1 + B2ᵀ⊗A2) + (B1ᵀ⊗A2 + B2ᵀ⊗A1) j)`, `2ms × 2n²`.
    pub m_mat: CMatrix,
    /// Same construction from `(C, D)`.
    pub n_mat: CMatrix,
    /// `Re([M; N] U)`, `4ms × (2n²-n)`.
    pub q1: DMatrix<f64>,
    /// `Im([M; N] U)`.
    pub q2: DMatrix<f64>,
    /// Stacked right-hand side of Re/Im parts, `8ms`.
    pub e: DVector<f64>,
    pub n: usize,
}

/// Dense `U = [K_S iK_A 0 0; 0 0 K_A iK_A]` (2n² × (2n²-n)); the assembly
/// applies its columns sparsely, this form exists for inspection and tests.
pub fn build_u_dense(n: usize) -> CMatrix {
    let ks = build_k_s(n).to_dense();
    let ka = build_k_a(n).to_dense();
    let n2 = n * n;
    let cols = hermitian_param_len(n);
    let mut u = CMatrix::zeros(2 * n2, cols);
    let sym = crate::structure::sym_len(n);
    let asym = crate::structure::asym_len(n);
    u.re.view_mut((0, 0), (n2, sym)).copy_from(&ks);
    u.im.view_mut((0, sym), (n2, asym)).copy_from(&ka);
    u.re.view_mut((n2, sym + asym), (n2, asym)).copy_from(&ka);
    u.im.view_mut((n2, sym + 2 * asym), (n2, asym))
        .copy_from(&ka);
    u
}

fn kron_pair_block(x: &RbqMatrix, y: &RbqMatrix) -> Result<CMatrix> {
    // h((Y1ᵀ⊗X1 + Y2ᵀ⊗X2) + (Y1ᵀ⊗X2 + Y2ᵀ⊗X1) j) for operator pair (X, Y)
    let xp = x.complex_pair();
    let yp = y.complex_pair();
    let y1t = yp.c1.transpose();
    let y2t = yp.c2.transpose();
    let g1 = y1t.kron(&xp.c1)?.add(&y2t.kron(&xp.c2)?)?;
    let g2 = y1t.kron(&xp.c2)?.add(&y2t.kron(&xp.c1)?)?;
    let (rows, cols) = g1.shape();
    let mut h = CMatrix::zeros(2 * rows, 2 * cols);
    for (dr, dc, src) in [
        (0, 0, &g1),
        (0, cols, &g2),
        (rows, 0, &g2),
        (rows, cols, &g1),
    ] {
        h.re.view_mut((dr, dc), (rows, cols)).copy_from(&src.re);
        h.im.view_mut((dr, dc), (rows, cols)).copy_from(&src.im);
    }
    Ok(h)
}

pub fn build_cr_system(p: &RbmeProblem) -> Result<CrSystem> {
    let (m, n, s) = p.dims();
    let m_mat = kron_pair_block(p.a(), p.b())?;
    let n_mat = kron_pair_block(p.c(), p.d())?;

    // U = [K_S  iK_A  0    0  ]
    //     [0    0     K_A  iK_A]  applied column-wise to [M; N]
    let ks = build_k_s(n);
    let ka = build_k_a(n);
    let n2 = n * n;
    let cols = hermitian_param_len(n);
    let rows = 4 * m * s;
    let mut q1 = DMatrix::zeros(rows, cols);
    let mut q2 = DMatrix::zeros(rows, cols);

    // (row offset into the 2n² U-rows, imaginary?, selection block)
    let blocks: [(usize, bool, &crate::structure::StructureMatrix); 4] = [
        (0, false, &ks),
        (0, true, &ka),
        (n2, false, &ka),
        (n2, true, &ka),
    ];
    let mut col = 0;
    for (row_off, imaginary, sel) in blocks {
        for c in 0..sel.ncols() {
            for &(r, v) in sel.col_entries(c) {
                let u_row = row_off + r;
                let v = f64::from(v);
                // column u_row of [M; N], split into the two stacked blocks
                for (blk, mat) in [(0usize, &m_mat), (1usize, &n_mat)] {
                    let top = blk * 2 * m * s;
                    let re_col = mat.re.column(u_row);
                    let im_col = mat.im.column(u_row);
                    for i in 0..2 * m * s {
                        if imaginary {
                            // multiply by v·i
                            q1[(top + i, col)] -= v * im_col[i];
                            q2[(top + i, col)] += v * re_col[i];
                        } else {
                            q1[(top + i, col)] += v * re_col[i];
                            q2[(top + i, col)] += v * im_col[i];
                        }
                    }
                }
            }
            col += 1;
        }
    }
    debug_assert_eq!(col, cols);

    let ep = p.e().complex_pair();
    let fp = p.f().complex_pair();
    let mut e = Vec::with_capacity(8 * m * s);
    for plane in [&ep.c1.re, &ep.c2.re, &fp.c1.re, &fp.c2.re] {
        e.extend_from_slice(plane.as_slice());
    }
    for plane in [&ep.c1.im, &ep.c2.im, &fp.c1.im, &fp.c2.im] {
        e.extend_from_slice(plane.as_slice());
    }
    Ok(CrSystem {
        m_mat,
        n_mat,
        q1,
        q2,
        e: DVector::from_vec(e),
        n,
    })
}

/// The closed-form pieces of `[Q1; Q2]⁺`.
#[derive(Debug, Clone)]
pub struct StackedPinvParts {
    pub q1_pinv: DMatrix<f64>,
    /// `(I - Q1⁺Q1) Q2ᵀ`, built from the null-space basis of `Q1` so the
    /// projector product cannot leak roundoff rank.
    pub r: DMatrix<f64>,
    pub r_pinv: DMatrix<f64>,
    /// `(I + (I-R⁺R) Q2Q1⁺ Q1⁺ᵀQ2ᵀ (I-R⁺R))⁻¹`; the inverted matrix is
    /// I + PSD, hence symmetric positive definite.
    pub z: DMatrix<f64>,
    /// `R⁺ + (I-R⁺R) Z Q2 Q1⁺ Q1⁺ᵀ (I - Q2ᵀR⁺)`.
    pub h: DMatrix<f64>,
    pub q1_rank: usize,
    pub r_rank: usize,
}

impl StackedPinvParts {
    /// `[Q1; Q2]⁺ = [Q1⁺ - HᵀQ2Q1⁺, Hᵀ]` applied to a stacked vector.
    pub fn apply_stacked_pinv(&self, q2: &DMatrix<f64>, e: &DVector<f64>) -> DVector<f64> {
        let rows = q2.nrows();
        assert_eq!(e.len(), 2 * rows);
        let e1 = e.rows(0, rows);
        let e2 = e.rows(rows, rows);
        let base = &self.q1_pinv * e1;
        &base + self.h.transpose() * (e2 - q2 * &base)
    }

    /// Dense `[Q1⁺ - HᵀQ2Q1⁺, Hᵀ]`.
    pub fn stacked_pinv_matrix(&self, q2: &DMatrix<f64>) -> DMatrix<f64> {
        let p = self.q1_pinv.nrows();
        let rows = q2.nrows();
        let ht = self.h.transpose();
        let mut out = DMatrix::zeros(p, 2 * rows);
        out.view_mut((0, 0), (p, rows))
            .copy_from(&(&self.q1_pinv - &ht * q2 * &self.q1_pinv));
        out.view_mut((0, rows), (p, rows)).copy_from(&ht);
        out
    }

    /// `I - [Q1;Q2]⁺[Q1;Q2] = I - Q1⁺Q1 - RR⁺`, the family projector.
    pub fn family_projector(&self, q1: &DMatrix<f64>) -> DMatrix<f64> {
        let p = q1.ncols();
        DMatrix::identity(p, p) - &self.q1_pinv * q1 - &self.r * &self.r_pinv
    }

    /// `rank([Q1;Q2])`; the ranges of `Q1ᵀ` and `R` are orthogonal.
    pub fn stacked_rank(&self) -> usize {
        self.q1_rank + self.r_rank
    }
}

/// Evaluate the H/R/Z closed forms. Internal pseudoinverses threshold
/// singular values against the stacked problem scale, since `R` may be an
/// exact zero in theory while carrying only roundoff in practice.
pub fn stacked_pinv(q1: &DMatrix<f64>, q2: &DMatrix<f64>) -> Result<StackedPinvParts> {
    if q1.shape() != q2.shape() {
        return Err(Error::shape(
            "stacked_pinv",
            format!("Q1 {}x{}", q1.nrows(), q1.ncols()),
            format!("Q2 {}x{}", q2.nrows(), q2.ncols()),
        ));
    }
    let rows = q1.nrows();
    let p = q1.ncols();

    let q1_res = linalg::pinv(q1, None)?;
    let scale = q1_res
        .singular_values
        .iter()
        .cloned()
        .fold(0.0_f64, f64::max)
        .max(q2.norm());
    let q1p = q1_res.pinv;

    let null_basis = linalg::null_space_basis(q1, scale)?;
    let r = &null_basis * (null_basis.transpose() * q2.transpose());
    let r_res = linalg::pinv_scaled(&r, scale)?;
    let rp = r_res.pinv;

    let irr = DMatrix::identity(rows, rows) - &rp * &r;
    let g = q2 * &q1p;
    let w = &irr * &g;
    let z_inner = DMatrix::identity(rows, rows) + &w * w.transpose();
    let z = z_inner
        .cholesky()
        .ok_or_else(|| Error::Numerical {
            op: "stacked_pinv",
            detail: "Z system lost positive definiteness".to_string(),
        })?
        .inverse();
    // right-to-left so no extra rows×rows×rows product is needed
    let tail = q1p.transpose() * (DMatrix::identity(p, p) - q2.transpose() * &rp);
    let h = &rp + &irr * (&z * (&g * tail));

    Ok(StackedPinvParts {
        q1_pinv: q1p,
        r,
        r_pinv: rp,
        z,
        h,
        q1_rank: q1_res.rank,
        r_rank: r_res.rank,
    })
}

fn cr_solve_inner(
    p: &RbmeProblem,
    y: Option<&DVector<f64>>,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    let start = Instant::now();
    let sys = build_cr_system(p)?;
    let cols = sys.q1.ncols();
    if let Some(y) = y {
        if y.len() != cols {
            return Err(Error::shape(
                "cr_solve_hermitian",
                format!("design with {cols} free parameters"),
                format!("y of length {}", y.len()),
            ));
        }
    }
    let parts = stacked_pinv(&sys.q1, &sys.q2)?;
    let x_min = parts.apply_stacked_pinv(&sys.q2, &sys.e);
    let x = match y {
        None => x_min.clone(),
        Some(y) => &x_min + parts.family_projector(&sys.q1) * y,
    };

    // x packs (Re X1, Im X1, Re X2, Im X2) = the (X0, X1, X2, X3) components
    let full = build_r_sel(sys.n).apply(&x);
    let n2 = sys.n * sys.n;
    let comp = |t: usize| unvec(&full.as_slice()[t * n2..(t + 1) * n2], sys.n, sys.n);
    let solution = RbqMatrix::from_components(comp(0), comp(1), comp(2), comp(3))?;
    let elapsed = start.elapsed();

    let rows = sys.q1.nrows();
    let mut fit = DVector::zeros(2 * rows);
    fit.rows_mut(0, rows).copy_from(&(&sys.q1 * &x_min));
    fit.rows_mut(rows, rows).copy_from(&(&sys.q2 * &x_min));
    let consistent = (&fit - &sys.e).norm() <= opts.consistency_tol * sys.e.norm().max(1.0);

    Ok(SolveReport {
        residual: problem_residual(p, &solution)?,
        solution,
        consistent,
        unique: parts.stacked_rank() == cols,
        rank: parts.stacked_rank(),
        elapsed,
        method: Method::Cr,
    })
}

/// Baseline Hermitian solve; `y = None` gives the min-norm member.
pub fn cr_solve_hermitian(p: &RbmeProblem, y: Option<&DVector<f64>>) -> Result<SolveReport> {
    cr_solve_inner(p, y, &SolveOptions::default())
}

pub fn cr_solve_hermitian_with(
    p: &RbmeProblem,
    y: Option<&DVector<f64>>,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    cr_solve_inner(p, y, opts)
}

pub fn cr_check_consistency(p: &RbmeProblem) -> Result<bool> {
    let sys = build_cr_system(p)?;
    let parts = stacked_pinv(&sys.q1, &sys.q2)?;
    let x = parts.apply_stacked_pinv(&sys.q2, &sys.e);
    let rows = sys.q1.nrows();
    let mut fit = DVector::zeros(2 * rows);
    fit.rows_mut(0, rows).copy_from(&(&sys.q1 * &x));
    fit.rows_mut(rows, rows).copy_from(&(&sys.q2 * &x));
    Ok((&fit - &sys.e).norm() <= CONSISTENCY_TOL * sys.e.norm().max(1.0))
}

/// Eq-3.12 criterion: `rank([Q1; Q2]) = 2n²-n`, decided on the stacked
/// matrix directly.
pub fn cr_check_uniqueness(p: &RbmeProblem) -> Result<bool> {
    let sys = build_cr_system(p)?;
    let rows = sys.q1.nrows();
    let cols = sys.q1.ncols();
    let mut stacked = DMatrix::zeros(2 * rows, cols);
    stacked.view_mut((0, 0), (rows, cols)).copy_from(&sys.q1);
    stacked.view_mut((rows, 0), (rows, cols)).copy_from(&sys.q2);
    Ok(linalg::numerical_rank(&stacked, None)? == cols)
}
