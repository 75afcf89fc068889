//! Real-representation solver for the least-squares Hermitian problem
//! `(AXB, CXD) = (E, F)` over reduced biquaternions, and its complex-field
//! specialization.
//!
//! The constrained problem is equivalent to an unconstrained real
//! least-squares system over the packed free parameters
//! `[vec_s(X0); vec_a(X1); vec_a(X2); vec_a(X3)]`: the design matrix is the
//! product `P·J·Q` with `P = [(B^R)ᵀ ⊗ A_r^R; (D^R)ᵀ ⊗ C_r^R]`, and the
//! right-hand side stacks `vec(E_r^R)` and `vec(F_r^R)`. The min-norm
//! least-squares packed solution maps back through `R = diag(K_S, K_A, K_A,
//! K_A)` to a Hermitian solution, Hermitian by construction even on
//! inconsistent input.
//!
//! `P` is never formed densely (it is `8ms × 16n²`); design columns are
//! accumulated by applying the ≤ 8 signed unit entries of each `J·Q` column
//! to the Kronecker factors directly.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::linalg::{self, CONSISTENCY_TOL};
use crate::matrix::RbqMatrix;
use crate::structure::{
    build_j, build_j_tilde, build_q_sel, build_q_tilde, build_r_tilde, hermitian_from_packed,
    hermitian_param_len, unvec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "RR")]
    Rr,
    #[serde(rename = "CR")]
    Cr,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Rr => "RR",
            Method::Cr => "CR",
        })
    }
}

/// `(AXB, CXD) = (E, F)` instance with conforming dimensions
/// `A,C: m×n`, `B,D: n×s`, `E,F: m×s`.
#[derive(Debug, Clone)]
pub struct RbmeProblem {
    a: RbqMatrix,
    b: RbqMatrix,
    c: RbqMatrix,
    d: RbqMatrix,
    e: RbqMatrix,
    f: RbqMatrix,
}

impl RbmeProblem {
    pub fn new(
        a: RbqMatrix,
        b: RbqMatrix,
        c: RbqMatrix,
        d: RbqMatrix,
        e: RbqMatrix,
        f: RbqMatrix,
    ) -> Result<Self> {
        let (m, n) = a.shape();
        let s = b.ncols();
        type ShapeRule = (&'static str, (usize, usize), (usize, usize));
        let checks: [ShapeRule; 5] = [
            ("B", b.shape(), (n, s)),
            ("C", c.shape(), (m, n)),
            ("D", d.shape(), (n, s)),
            ("E", e.shape(), (m, s)),
            ("F", f.shape(), (m, s)),
        ];
        for (name, got, want) in checks {
            if got != want {
                return Err(Error::shape(
                    "RbmeProblem",
                    format!("A is {m}x{n} (so {name} must be {}x{})", want.0, want.1),
                    format!("{name} is {}x{}", got.0, got.1),
                ));
            }
        }
        Ok(RbmeProblem { a, b, c, d, e, f })
    }

    pub fn a(&self) -> &RbqMatrix {
        &self.a
    }
    pub fn b(&self) -> &RbqMatrix {
        &self.b
    }
    pub fn c(&self) -> &RbqMatrix {
        &self.c
    }
    pub fn d(&self) -> &RbqMatrix {
        &self.d
    }
    pub fn e(&self) -> &RbqMatrix {
        &self.e
    }
    pub fn f(&self) -> &RbqMatrix {
        &self.f
    }

    /// (m, n, s)
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a.nrows(), self.a.ncols(), self.b.ncols())
    }

    /// Replace the right-hand sides, keeping the operators.
    pub fn with_rhs(&self, e: RbqMatrix, f: RbqMatrix) -> Result<Self> {
        RbmeProblem::new(
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
            e,
            f,
        )
    }
}

/// The assembled real system `coeff · packed = rhs`.
#[derive(Debug, Clone)]
pub struct DesignSystem {
    /// `P·J·Q`, `8ms × (2n²-n)`.
    pub coeff: DMatrix<f64>,
    /// `[vec(E_r^R); vec(F_r^R)]`.
    pub rhs: DVector<f64>,
    pub m: usize,
    pub n: usize,
    pub s: usize,
}

/// Accumulate `sign · (column (block_col, rep_col) of (Rep)ᵀ ⊗ Row)` into a
/// design column. `Rep` is a real representation (rows indexed by
/// `block_col`), `Row` a first-block-row factor with `m` rows.
fn add_kron_column(
    dst: &mut [f64],
    offset: usize,
    row_factor: &DMatrix<f64>,
    rep_factor: &DMatrix<f64>,
    rep_row: usize,
    row_col: usize,
    sign: f64,
) {
    let m = row_factor.nrows();
    let src = row_factor.column(row_col);
    for t in 0..rep_factor.ncols() {
        let w = sign * rep_factor[(rep_row, t)];
        if w != 0.0 {
            let base = offset + t * m;
            for i in 0..m {
                dst[base + i] += w * src[i];
            }
        }
    }
}

/// Build the design system of the RBQ problem.
pub fn assemble_design(p: &RbmeProblem) -> Result<DesignSystem> {
    let (m, n, s) = p.dims();
    let a_rr = p.a.real_rep_row().0;
    let b_r = p.b.real_rep().0;
    let c_rr = p.c.real_rep_row().0;
    let d_r = p.d.real_rep().0;
    let j = build_j(n);
    let q = build_q_sel(n);

    let rows = 8 * m * s;
    let cols = hermitian_param_len(n);
    let mut coeff = DMatrix::zeros(rows, cols);
    let data = coeff.as_mut_slice();
    for c in 0..cols {
        let col = &mut data[c * rows..(c + 1) * rows];
        for &(t, qs) in q.col_entries(c) {
            for &(idx, js) in j.col_entries(t) {
                let sign = f64::from(qs) * f64::from(js);
                let rep_row = idx / (4 * n);
                let row_col = idx % (4 * n);
                add_kron_column(col, 0, &a_rr, &b_r, rep_row, row_col, sign);
                add_kron_column(col, 4 * m * s, &c_rr, &d_r, rep_row, row_col, sign);
            }
        }
    }

    let mut rhs = Vec::with_capacity(rows);
    rhs.extend_from_slice(p.e.real_rep_row().0.as_slice());
    rhs.extend_from_slice(p.f.real_rep_row().0.as_slice());
    Ok(DesignSystem {
        coeff,
        rhs: DVector::from_vec(rhs),
        m,
        n,
        s,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Singular-value cutoff override for the design pseudoinverse.
    pub rank_tol: Option<f64>,
    /// Relative tolerance of the consistency decision.
    pub consistency_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            rank_tol: None,
            consistency_tol: CONSISTENCY_TOL,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Hermitian by construction, also on inconsistent input.
    pub solution: RbqMatrix,
    /// `‖(AXB-E, CXD-F)‖_F`, recomputed in RBQ space.
    pub residual: f64,
    pub consistent: bool,
    /// Rank criterion `rank(PJQ) = 2n²-n`.
    pub unique: bool,
    pub rank: usize,
    pub elapsed: Duration,
    pub method: Method,
}

/// `‖(AXB-E, CXD-F)‖_F` for an arbitrary candidate.
pub fn problem_residual(p: &RbmeProblem, x: &RbqMatrix) -> Result<f64> {
    let r1 = p.a.mat_mul(x)?.mat_mul(&p.b)?.sub(&p.e)?;
    let r2 = p.c.mat_mul(x)?.mat_mul(&p.d)?.sub(&p.f)?;
    Ok((r1.frobenius().powi(2) + r2.frobenius().powi(2)).sqrt())
}

fn solve_inner(
    p: &RbmeProblem,
    y: Option<&DVector<f64>>,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    let start = Instant::now();
    let ds = assemble_design(p)?;
    let cols = ds.coeff.ncols();
    if let Some(y) = y {
        if y.len() != cols {
            return Err(Error::shape(
                "solve_family",
                format!("design with {cols} free parameters"),
                format!("y of length {}", y.len()),
            ));
        }
    }
    let pv = linalg::pinv(&ds.coeff, opts.rank_tol)?;
    let min_norm = &pv.pinv * &ds.rhs;
    let packed = match y {
        None => min_norm.clone(),
        // packed = A⁺b + (I - A⁺A) y, without materializing the projector
        Some(y) => &min_norm + y - &pv.pinv * (&ds.coeff * y),
    };
    let solution = hermitian_from_packed(ds.n, &packed);
    let elapsed = start.elapsed();

    let packed_residual = (&ds.coeff * &min_norm - &ds.rhs).norm();
    let consistent = packed_residual <= opts.consistency_tol * ds.rhs.norm().max(1.0);
    let unique = pv.rank == cols;
    let residual = problem_residual(p, &solution)?;
    Ok(SolveReport {
        solution,
        residual,
        consistent,
        unique,
        rank: pv.rank,
        elapsed,
        method: Method::Rr,
    })
}

/// The distinguished least-squares Hermitian solution: the family member
/// whose packed parameter vector `[vec_s(X0); vec_a(X1); vec_a(X2);
/// vec_a(X3)]` has least 2-norm. When the design has full column rank the
/// least-squares solution is unique and this is also the Hermitian
/// minimizer of `‖X‖_F`; on rank-deficient designs the two norms weight
/// off-diagonal entries differently, and the packed norm is what the
/// pseudoinverse formula minimizes.
pub fn solve_min_norm(p: &RbmeProblem) -> Result<SolveReport> {
    solve_min_norm_with(p, &SolveOptions::default())
}

pub fn solve_min_norm_with(p: &RbmeProblem, opts: &SolveOptions) -> Result<SolveReport> {
    solve_inner(p, None, opts)
}

/// Member of the least-squares family selected by the free vector `y`
/// (length `2n²-n`); every member attains the min-norm residual.
pub fn solve_family(p: &RbmeProblem, y: &DVector<f64>) -> Result<SolveReport> {
    solve_inner(p, Some(y), &SolveOptions::default())
}

pub fn solve_family_with(
    p: &RbmeProblem,
    y: &DVector<f64>,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    solve_inner(p, Some(y), opts)
}

/// Does a Hermitian solution exist (right-hand side in the design range)?
pub fn check_consistency(p: &RbmeProblem) -> Result<bool> {
    check_consistency_with(p, &SolveOptions::default())
}

pub fn check_consistency_with(p: &RbmeProblem, opts: &SolveOptions) -> Result<bool> {
    let ds = assemble_design(p)?;
    let pv = linalg::pinv(&ds.coeff, opts.rank_tol)?;
    let resid = (&ds.coeff * (&pv.pinv * &ds.rhs) - &ds.rhs).norm();
    Ok(resid <= opts.consistency_tol * ds.rhs.norm().max(1.0))
}

/// Is the Hermitian least-squares solution unique (design of full column
/// rank `2n²-n`)?
pub fn check_uniqueness(p: &RbmeProblem) -> Result<bool> {
    let ds = assemble_design(p)?;
    Ok(linalg::numerical_rank(&ds.coeff, None)? == ds.coeff.ncols())
}

// ---------------------------------------------------------------------------
// Complex-field specialization: (AXB, CXD) = (E, F) over ℂ, X Hermitian.
// ---------------------------------------------------------------------------

/// Complex instance with the same dimension contract as [`RbmeProblem`].
#[derive(Debug, Clone)]
pub struct ComplexRbmeProblem {
    a: CMatrix,
    b: CMatrix,
    c: CMatrix,
    d: CMatrix,
    e: CMatrix,
    f: CMatrix,
}

impl ComplexRbmeProblem {
    pub fn new(
        a: CMatrix,
        b: CMatrix,
        c: CMatrix,
        d: CMatrix,
        e: CMatrix,
        f: CMatrix,
    ) -> Result<Self> {
        let (m, n) = a.shape();
        let s = b.ncols();
        type ShapeRule = (&'static str, (usize, usize), (usize, usize));
        let checks: [ShapeRule; 5] = [
            ("B", b.shape(), (n, s)),
            ("C", c.shape(), (m, n)),
            ("D", d.shape(), (n, s)),
            ("E", e.shape(), (m, s)),
            ("F", f.shape(), (m, s)),
        ];
        for (name, got, want) in checks {
            if got != want {
                return Err(Error::shape(
                    "ComplexRbmeProblem",
                    format!("A is {m}x{n} (so {name} must be {}x{})", want.0, want.1),
                    format!("{name} is {}x{}", got.0, got.1),
                ));
            }
        }
        Ok(ComplexRbmeProblem { a, b, c, d, e, f })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a.nrows(), self.a.ncols(), self.b.ncols())
    }
}

#[derive(Debug, Clone)]
pub struct ComplexSolveReport {
    pub solution: CMatrix,
    pub residual: f64,
    pub consistent: bool,
    /// Rank criterion `rank(P̃J̃Q̃) = n²`.
    pub unique: bool,
    pub rank: usize,
    pub elapsed: Duration,
}

/// Design system of one or two complex equations `A_t X B_t = E_t` sharing
/// the Hermitian unknown: rows `2ms` per equation, `n²` packed columns.
pub(crate) fn assemble_complex_design(
    eqs: &[(&CMatrix, &CMatrix, &CMatrix)],
    n: usize,
) -> (DMatrix<f64>, DVector<f64>) {
    let jt = build_j_tilde(n);
    let qt = build_q_tilde(n);
    let cols = n * n;
    let block_rows: Vec<usize> = eqs
        .iter()
        .map(|(a, b, _)| 2 * a.nrows() * b.ncols())
        .collect();
    let rows: usize = block_rows.iter().sum();

    let factors: Vec<(DMatrix<f64>, DMatrix<f64>)> = eqs
        .iter()
        .map(|(a, b, _)| (a.real_rep_row(), b.real_rep()))
        .collect();

    let mut coeff = DMatrix::zeros(rows, cols);
    let data = coeff.as_mut_slice();
    for c in 0..cols {
        let col = &mut data[c * rows..(c + 1) * rows];
        for &(t, qs) in qt.col_entries(c) {
            for &(idx, js) in jt.col_entries(t) {
                let sign = f64::from(qs) * f64::from(js);
                let rep_row = idx / (2 * n);
                let row_col = idx % (2 * n);
                let mut offset = 0;
                for (k, (a_rr, b_r)) in factors.iter().enumerate() {
                    add_kron_column(col, offset, a_rr, b_r, rep_row, row_col, sign);
                    offset += block_rows[k];
                }
            }
        }
    }

    let mut rhs = Vec::with_capacity(rows);
    for (_, _, e) in eqs {
        rhs.extend_from_slice(e.real_rep_row().as_slice());
    }
    (coeff, DVector::from_vec(rhs))
}

pub(crate) fn complex_hermitian_from_packed(n: usize, packed: &DVector<f64>) -> CMatrix {
    let full = build_r_tilde(n).apply(packed);
    let n2 = n * n;
    CMatrix::new(
        unvec(&full.as_slice()[..n2], n, n),
        unvec(&full.as_slice()[n2..], n, n),
    )
}

pub(crate) fn solve_complex_inner(
    eqs: &[(&CMatrix, &CMatrix, &CMatrix)],
    n: usize,
    y: Option<&DVector<f64>>,
    opts: &SolveOptions,
) -> Result<ComplexSolveReport> {
    let start = Instant::now();
    let (coeff, rhs) = assemble_complex_design(eqs, n);
    let cols = coeff.ncols();
    if let Some(y) = y {
        if y.len() != cols {
            return Err(Error::shape(
                "solve_complex",
                format!("design with {cols} free parameters"),
                format!("y of length {}", y.len()),
            ));
        }
    }
    let pv = linalg::pinv(&coeff, opts.rank_tol)?;
    let min_norm = &pv.pinv * &rhs;
    let packed = match y {
        None => min_norm.clone(),
        Some(y) => &min_norm + y - &pv.pinv * (&coeff * y),
    };
    let solution = complex_hermitian_from_packed(n, &packed);
    let elapsed = start.elapsed();

    let packed_residual = (&coeff * &min_norm - &rhs).norm();
    let consistent = packed_residual <= opts.consistency_tol * rhs.norm().max(1.0);
    let residual = eqs
        .iter()
        .map(|(a, b, e)| {
            let r = a.mul(&solution)?.mul(b)?.sub(e)?;
            Ok(r.norm().powi(2))
        })
        .sum::<Result<f64>>()?
        .sqrt();
    Ok(ComplexSolveReport {
        solution,
        residual,
        consistent,
        unique: pv.rank == cols,
        rank: pv.rank,
        elapsed,
    })
}

/// Minimum-norm least-squares complex Hermitian solution of
/// `(AXB, CXD) = (E, F)`.
pub fn solve_complex_min_norm(p: &ComplexRbmeProblem) -> Result<ComplexSolveReport> {
    let (_, n, _) = p.dims();
    solve_complex_inner(
        &[(&p.a, &p.b, &p.e), (&p.c, &p.d, &p.f)],
        n,
        None,
        &SolveOptions::default(),
    )
}

pub fn check_complex_consistency(p: &ComplexRbmeProblem) -> Result<bool> {
    let (_, n, _) = p.dims();
    let (coeff, rhs) = assemble_complex_design(&[(&p.a, &p.b, &p.e), (&p.c, &p.d, &p.f)], n);
    let pv = linalg::pinv(&coeff, None)?;
    let resid = (&coeff * (&pv.pinv * &rhs) - &rhs).norm();
    Ok(resid <= CONSISTENCY_TOL * rhs.norm().max(1.0))
}

pub fn check_complex_uniqueness(p: &ComplexRbmeProblem) -> Result<bool> {
    let (_, n, _) = p.dims();
    let (coeff, _) = assemble_complex_design(&[(&p.a, &p.b, &p.e), (&p.c, &p.d, &p.f)], n);
    Ok(linalg::numerical_rank(&coeff, None)? == coeff.ncols())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::HERMITIAN_TOL;
    use crate::scalar::RbqScalar;
    use crate::structure::pack_hermitian;
    use crate::testutil::*;
    use rand::Rng;

    #[test]
    fn scalar_identity_equation() {
        let one = RbqMatrix::from_scalar(RbqScalar::ONE);
        let e = RbqMatrix::from_scalar(RbqScalar::new(2.5, 0.0, 0.0, 0.0));
        let p = RbmeProblem::new(
            one.clone(),
            one.clone(),
            one.clone(),
            one.clone(),
            e.clone(),
            e.clone(),
        )
        .unwrap();
        let ds = assemble_design(&p).unwrap();
        assert_eq!(ds.coeff.shape(), (8, 1));
        let rep = solve_min_norm(&p).unwrap();
        assert!((rep.solution.get(0, 0).a0 - 2.5).abs() < 1e-12);
        assert!(rep.consistent && rep.unique);
    }

    #[test]
    fn design_has_expected_columns() {
        let mut rng = seeded_rng(51);
        let (p, _) = consistent_problem(2, 2, 2, &mut rng);
        let ds = assemble_design(&p).unwrap();
        assert_eq!(ds.coeff.ncols(), 6);
        assert_eq!(ds.coeff.nrows(), 8 * 2 * 2);
    }

    #[test]
    fn design_maps_packed_solution_to_rhs() {
        let mut rng = seeded_rng(52);
        let (p, x_true) = consistent_problem(3, 3, 2, &mut rng);
        let ds = assemble_design(&p).unwrap();
        let packed = pack_hermitian(&x_true, 1e-12).unwrap();
        let dev = (&ds.coeff * &packed - &ds.rhs).norm();
        assert!(dev <= 1e-12 * ds.rhs.norm().max(1.0), "dev = {dev:.3e}");
    }

    #[test]
    fn identity_operators_recover_hermitian_rhs() {
        let mut rng = seeded_rng(53);
        let x = rand_hermitian(3, &mut rng);
        let id = RbqMatrix::identity(3);
        let p = RbmeProblem::new(
            id.clone(),
            id.clone(),
            id.clone(),
            id.clone(),
            x.clone(),
            x.clone(),
        )
        .unwrap();
        let rep = solve_min_norm(&p).unwrap();
        assert!(rep.solution.sub(&x).unwrap().frobenius() < 1e-12);
        assert!(rep.consistent && rep.unique);
    }

    #[test]
    fn recovery_at_example_scale() {
        let mut rng = seeded_rng(54);
        let (p, x_true) = consistent_problem(4, 4, 2, &mut rng);
        let rep = solve_min_norm(&p).unwrap();
        let err = rep.solution.sub(&x_true).unwrap().frobenius();
        assert!(err.log10() <= -9.0, "log10 err = {}", err.log10());
        assert!(rep.solution.is_hermitian(HERMITIAN_TOL).unwrap());
    }

    #[test]
    fn inconsistent_residual_matches_normal_equations_oracle() {
        let mut rng = seeded_rng(55);
        let (p, _) = consistent_problem(2, 2, 2, &mut rng);
        // perturb E so the rhs leaves the design range
        let noise = rand_rbq(2, 2, &mut rng);
        let e2 = p.e().add(&noise).unwrap();
        let p2 = p.with_rhs(e2, p.f().clone()).unwrap();

        let rep = solve_min_norm(&p2).unwrap();
        assert!(!rep.consistent);

        // dense normal-equations oracle on the 6-column system
        let ds = assemble_design(&p2).unwrap();
        let gram = ds.coeff.transpose() * &ds.coeff;
        let rhs2 = ds.coeff.transpose() * &ds.rhs;
        let packed = gram.lu().solve(&rhs2).expect("full-rank normal equations");
        let oracle_residual = (&ds.coeff * packed - &ds.rhs).norm();
        assert!(
            (rep.residual - oracle_residual).abs() <= 1e-10 * oracle_residual.max(1.0),
            "solver {} vs oracle {}",
            rep.residual,
            oracle_residual
        );
    }

    #[test]
    fn residual_is_a_floor_over_random_hermitian_candidates() {
        let mut rng = seeded_rng(66);
        let (p, _) = consistent_problem(3, 3, 2, &mut rng);
        // make it inconsistent so the minimum is strictly positive
        let p = p
            .with_rhs(p.e().add(&rand_rbq(3, 2, &mut rng)).unwrap(), p.f().clone())
            .unwrap();
        let rep = solve_min_norm(&p).unwrap();
        assert!(!rep.consistent);
        for _ in 0..1000 {
            let mut delta = rand_hermitian(3, &mut rng);
            delta = delta.scale(rng.random_range(0.0..0.5));
            let candidate = rep.solution.add(&delta).unwrap();
            let r = problem_residual(&p, &candidate).unwrap();
            assert!(r + 1e-10 >= rep.residual, "candidate beat the solver");
        }
    }

    #[test]
    fn consistent_case_is_exact_to_tolerance() {
        let mut rng = seeded_rng(67);
        let (p, _) = consistent_problem(3, 2, 2, &mut rng);
        assert!(check_consistency(&p).unwrap());
        let rep = solve_min_norm(&p).unwrap();
        let rhs_scale = (p.e().frobenius().powi(2) + p.f().frobenius().powi(2))
            .sqrt()
            .max(1.0);
        assert!(rep.consistent);
        assert!(rep.residual <= 1e-8 * rhs_scale);
    }

    #[test]
    fn residual_equivalence_between_spaces() {
        let mut rng = seeded_rng(56);
        let (p, _) = consistent_problem(3, 2, 2, &mut rng);
        let noise = rand_rbq(3, 2, &mut rng);
        let p2 = p
            .with_rhs(p.e().add(&noise).unwrap(), p.f().clone())
            .unwrap();
        let ds = assemble_design(&p2).unwrap();
        let mut rng2 = seeded_rng(57);
        let x = rand_hermitian(2, &mut rng2);
        let packed = pack_hermitian(&x, 1e-12).unwrap();
        let rbq_space = problem_residual(&p2, &x).unwrap();
        let packed_space = (&ds.coeff * packed - &ds.rhs).norm();
        assert!((rbq_space - packed_space).abs() <= 1e-12 * rbq_space.max(1.0));
    }

    #[test]
    fn family_y_zero_is_min_norm_and_full_rank_collapses() {
        let mut rng = seeded_rng(58);
        let (p, _) = consistent_problem(3, 2, 2, &mut rng);
        let zero_y = DVector::zeros(6);
        let a = solve_min_norm(&p).unwrap();
        let b = solve_family(&p, &zero_y).unwrap();
        assert!(a.solution.sub(&b.solution).unwrap().frobenius() < 1e-14);

        let y = DVector::from_fn(6, |_, _| rng.random_range(-2.0..2.0));
        let c = solve_family(&p, &y).unwrap();
        // full-column-rank design: the family is a single point
        assert!(a.unique);
        assert!(a.solution.sub(&c.solution).unwrap().frobenius() < 1e-9);
    }

    #[test]
    fn rank_deficient_family_shares_residual_min_norm_dominates() {
        let mut rng = seeded_rng(59);
        // single scalar equation in a 2x2 unknown: rank-deficient design
        let a = rand_rbq(1, 2, &mut rng);
        let b = rand_rbq(2, 1, &mut rng);
        let x = rand_hermitian(2, &mut rng);
        let e = a.mat_mul(&x).unwrap().mat_mul(&b).unwrap();
        let p = RbmeProblem::new(
            a,
            b,
            RbqMatrix::zeros(1, 2),
            RbqMatrix::zeros(2, 1),
            e,
            RbqMatrix::zeros(1, 1),
        )
        .unwrap();
        let base = solve_min_norm(&p).unwrap();
        assert!(!base.unique);
        let base_packed = pack_hermitian(&base.solution, 1e-9).unwrap();
        for _ in 0..10 {
            let y = DVector::from_fn(6, |_, _| rng.random_range(-2.0..2.0));
            let member = solve_family(&p, &y).unwrap();
            assert!((member.residual - base.residual).abs() <= 1e-10);
            assert!(member.solution.is_hermitian(HERMITIAN_TOL).unwrap());
            let member_packed = pack_hermitian(&member.solution, 1e-9).unwrap();
            assert!(
                base_packed.norm() <= member_packed.norm() + 1e-12,
                "min-norm member must dominate in the packed parameter norm"
            );
        }
    }

    #[test]
    fn family_rejects_wrong_length() {
        let mut rng = seeded_rng(60);
        let (p, _) = consistent_problem(2, 2, 1, &mut rng);
        let y = DVector::zeros(5);
        assert!(solve_family(&p, &y).is_err());
    }

    #[test]
    fn consistency_decisions() {
        let mut rng = seeded_rng(61);
        let (p, _) = consistent_problem(3, 2, 2, &mut rng);
        assert!(check_consistency(&p).unwrap());

        // zero rhs is always consistent (X = 0 solves)
        let pz = p
            .with_rhs(RbqMatrix::zeros(3, 2), RbqMatrix::zeros(3, 2))
            .unwrap();
        assert!(check_consistency(&pz).unwrap());

        // unit-norm perturbation outside the design range: project a random
        // vector off range(coeff) via coeff·coeff⁺
        let ds = assemble_design(&p).unwrap();
        let pv = crate::linalg::pinv(&ds.coeff, None).unwrap();
        assert!(pv.rank < ds.coeff.nrows());
        let mut w = DVector::from_fn(ds.coeff.nrows(), |_, _| rng.random_range(-1.0..1.0));
        w -= &ds.coeff * (&pv.pinv * &w);
        w /= w.norm();
        let e_extra = w.rows(0, 4 * 3 * 2).clone_owned();
        let f_extra = w.rows(4 * 3 * 2, 4 * 3 * 2).clone_owned();
        let unvec_block = |v: &DVector<f64>| {
            let mm = crate::structure::unvec(v.as_slice(), 3, 8);
            let mut comp = [
                mm.view((0, 0), (3, 2)).clone_owned(),
                mm.view((0, 2), (3, 2)).clone_owned(),
                mm.view((0, 4), (3, 2)).clone_owned(),
                mm.view((0, 6), (3, 2)).clone_owned(),
            ];
            comp[1] = -&comp[1];
            comp[3] = -&comp[3];
            RbqMatrix::from_components(
                comp[0].clone(),
                comp[1].clone(),
                comp[2].clone(),
                comp[3].clone(),
            )
            .unwrap()
        };
        let p_bad = p
            .with_rhs(
                p.e().add(&unvec_block(&e_extra)).unwrap(),
                p.f().add(&unvec_block(&f_extra)).unwrap(),
            )
            .unwrap();
        assert!(!check_consistency(&p_bad).unwrap());
    }

    #[test]
    fn uniqueness_decisions() {
        let mut rng = seeded_rng(62);
        // m=n=2, s=1 random instance: full column rank, unique
        let (p, _) = consistent_problem(2, 2, 1, &mut rng);
        assert!(check_uniqueness(&p).unwrap());

        // all-zero operators: rank 0
        let z = RbqMatrix::zeros(2, 2);
        let zb = RbqMatrix::zeros(2, 1);
        let ze = RbqMatrix::zeros(2, 1);
        let p0 = RbmeProblem::new(z.clone(), zb.clone(), z, zb, ze.clone(), ze).unwrap();
        assert!(!check_uniqueness(&p0).unwrap());
        assert!(check_consistency(&p0).unwrap());
    }

    #[test]
    fn complex_identity_operators_recover() {
        let mut rng = seeded_rng(63);
        let x = rand_complex_hermitian(3, &mut rng);
        let id = CMatrix::identity(3);
        let p = ComplexRbmeProblem::new(
            id.clone(),
            id.clone(),
            id.clone(),
            id.clone(),
            x.clone(),
            x.clone(),
        )
        .unwrap();
        let rep = solve_complex_min_norm(&p).unwrap();
        assert!(rep.solution.sub(&x).unwrap().norm() < 1e-12);
        assert!(rep.consistent && rep.unique);
        assert!(check_complex_consistency(&p).unwrap());
        assert!(check_complex_uniqueness(&p).unwrap());
    }

    #[test]
    fn complex_constructed_problem_recovers_n4() {
        let mut rng = seeded_rng(64);
        let n = 4;
        let a = rand_cmatrix(n, n, &mut rng);
        let b = rand_cmatrix(n, 2, &mut rng);
        let c = rand_cmatrix(n, n, &mut rng);
        let d = rand_cmatrix(n, 2, &mut rng);
        let x = rand_complex_hermitian(n, &mut rng);
        let e = a.mul(&x).unwrap().mul(&b).unwrap();
        let f = c.mul(&x).unwrap().mul(&d).unwrap();
        let p = ComplexRbmeProblem::new(a, b, c, d, e, f).unwrap();
        let rep = solve_complex_min_norm(&p).unwrap();
        assert!(rep.solution.sub(&x).unwrap().norm() < 1e-9);
        // design has n² columns and 4ms rows
        let (coeff, _) = assemble_complex_design(&[(&p.a, &p.b, &p.e), (&p.c, &p.d, &p.f)], n);
        assert_eq!(coeff.shape(), (4 * n * 2, n * n));
    }

    #[test]
    fn complex_rank_and_perturbed_consistency() {
        let mut rng = seeded_rng(65);
        let n = 3;
        let a = rand_cmatrix(n, n, &mut rng);
        let b = rand_cmatrix(n, n, &mut rng);
        let c = rand_cmatrix(n, n, &mut rng);
        let d = rand_cmatrix(n, n, &mut rng);
        let x = rand_complex_hermitian(n, &mut rng);
        let e = a.mul(&x).unwrap().mul(&b).unwrap();
        let f = c.mul(&x).unwrap().mul(&d).unwrap();
        let p = ComplexRbmeProblem::new(a.clone(), b.clone(), c.clone(), d.clone(), e.clone(), f)
            .unwrap();
        assert!(check_complex_consistency(&p).unwrap());
        let rep = solve_complex_min_norm(&p).unwrap();
        assert_eq!(rep.rank, 9);
        assert!(rep.unique);

        // zero operators: consistent (zero rhs), not unique
        let zp = ComplexRbmeProblem::new(
            CMatrix::zeros(n, n),
            CMatrix::zeros(n, n),
            CMatrix::zeros(n, n),
            CMatrix::zeros(n, n),
            CMatrix::zeros(n, n),
            CMatrix::zeros(n, n),
        )
        .unwrap();
        assert!(check_complex_consistency(&zp).unwrap());
        assert!(!check_complex_uniqueness(&zp).unwrap());

        // left-null-space perturbation flips consistency
        let (coeff, _) = assemble_complex_design(&[(&p.a, &p.b, &p.e), (&p.c, &p.d, &p.f)], n);
        let pv = crate::linalg::pinv(&coeff, None).unwrap();
        let mut w = DVector::from_fn(coeff.nrows(), |_, _| rng.random_range(-1.0..1.0));
        w -= &coeff * (&pv.pinv * &w);
        w /= w.norm();
        // fold the perturbation back through vec(E_r^R), vec(F_r^R)
        let ms = n * n;
        let unfold = |v: &[f64]| {
            let block = crate::structure::unvec(v, n, 2 * n);
            CMatrix::new(
                block.view((0, 0), (n, n)).clone_owned(),
                -block.view((0, n), (n, n)).clone_owned(),
            )
        };
        let e_pert = p.e.add(&unfold(&w.as_slice()[..2 * ms])).unwrap();
        let f_pert = p.f.add(&unfold(&w.as_slice()[2 * ms..])).unwrap();
        let p_bad = ComplexRbmeProblem::new(a, b, c, d, e_pert, f_pert).unwrap();
        assert!(!check_complex_consistency(&p_bad).unwrap());
    }
}
