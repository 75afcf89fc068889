//! Shared helpers for unit tests.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cmatrix::CMatrix;
use crate::matrix::RbqMatrix;
use crate::rr::RbmeProblem;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

pub fn rand_int_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-4..5) as f64)
}

pub fn rand_rank_deficient(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let inner = rows.min(cols).saturating_sub(1).max(1);
    rand_matrix(rows, inner, rng) * rand_matrix(inner, cols, rng)
}

pub fn rand_rbq(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> RbqMatrix {
    RbqMatrix::from_components(
        rand_matrix(rows, cols, rng),
        rand_matrix(rows, cols, rng),
        rand_matrix(rows, cols, rng),
        rand_matrix(rows, cols, rng),
    )
    .unwrap()
}

pub fn rand_int_rbq(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> RbqMatrix {
    RbqMatrix::from_components(
        rand_int_matrix(rows, cols, rng),
        rand_int_matrix(rows, cols, rng),
        rand_int_matrix(rows, cols, rng),
        rand_int_matrix(rows, cols, rng),
    )
    .unwrap()
}

pub fn rand_hermitian(n: usize, rng: &mut ChaCha8Rng) -> RbqMatrix {
    let s0 = rand_matrix(n, n, rng);
    let s1 = rand_matrix(n, n, rng);
    let s2 = rand_matrix(n, n, rng);
    let s3 = rand_matrix(n, n, rng);
    RbqMatrix::from_components(
        &s0 + s0.transpose(),
        &s1 - s1.transpose(),
        &s2 - s2.transpose(),
        &s3 - s3.transpose(),
    )
    .unwrap()
}

pub fn rand_cmatrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::new(rand_matrix(rows, cols, rng), rand_matrix(rows, cols, rng))
}

pub fn rand_complex_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let s = rand_matrix(n, n, rng);
    let a = rand_matrix(n, n, rng);
    CMatrix::new(&s + s.transpose(), &a - a.transpose())
}

/// Consistent problem built from a known Hermitian solution; returns
/// `(problem, x_true)`.
pub fn consistent_problem(
    m: usize,
    n: usize,
    s: usize,
    rng: &mut ChaCha8Rng,
) -> (RbmeProblem, RbqMatrix) {
    let a = rand_rbq(m, n, rng);
    let b = rand_rbq(n, s, rng);
    let c = rand_rbq(m, n, rng);
    let d = rand_rbq(n, s, rng);
    let x = rand_hermitian(n, rng);
    let e = a.mat_mul(&x).unwrap().mat_mul(&b).unwrap();
    let f = c.mat_mul(&x).unwrap().mat_mul(&d).unwrap();
    (RbmeProblem::new(a, b, c, d, e, f).unwrap(), x)
}
