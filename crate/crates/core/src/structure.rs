//! Vectorization operators and the 0/±1 selection matrices linking
//! constrained unknowns to free parameter vectors.
//!
//! `vec` stacks columns. `vec_s`/`vec_a` pack the column-wise lower triangle
//! of symmetric (with diagonal) and antisymmetric (without diagonal)
//! matrices; `K_S`/`K_A` expand them back to full `vec` form. `J` rebuilds
//! the vectorized full real representation from the vectorized first block
//! row, and `Q`/`R` (with their complex-field tilde variants) assemble the
//! block-diagonal selections used by the solvers. All of these are exact
//! integer maps; they are stored as per-column sparse entries and applied by
//! gather/scatter, with dense materialization only on demand.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matrix::RbqMatrix;

/// Column-stacked vectorization. nalgebra stores column-major, so this is a
/// straight copy.
pub fn vec_mat(x: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(x.as_slice())
}

pub fn unvec(v: &[f64], rows: usize, cols: usize) -> DMatrix<f64> {
    assert_eq!(v.len(), rows * cols);
    DMatrix::from_column_slice(rows, cols, v)
}

/// Packed lower triangle (with diagonal) of a symmetric matrix, column-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct PackedSymVec {
    pub n: usize,
    pub data: DVector<f64>,
}

/// Packed strictly-lower triangle of an antisymmetric matrix, column-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct PackedAsymVec {
    pub n: usize,
    pub data: DVector<f64>,
}

pub fn sym_len(n: usize) -> usize {
    n * (n + 1) / 2
}

pub fn asym_len(n: usize) -> usize {
    n * (n - 1) / 2
}

pub fn vec_s(x: &DMatrix<f64>, tol: f64) -> Result<PackedSymVec> {
    let n = square_order(x, "vec_s")?;
    let dev = (x - x.transpose()).norm();
    if dev > tol * x.norm().max(1.0) {
        return Err(Error::Structure {
            expected: "symmetric",
            deviation: dev,
            tol: tol * x.norm().max(1.0),
        });
    }
    let mut data = Vec::with_capacity(sym_len(n));
    for j in 0..n {
        for i in j..n {
            data.push(x[(i, j)]);
        }
    }
    Ok(PackedSymVec {
        n,
        data: DVector::from_vec(data),
    })
}

pub fn unvec_s(p: &PackedSymVec) -> DMatrix<f64> {
    let n = p.n;
    let mut x = DMatrix::zeros(n, n);
    let mut idx = 0;
    for j in 0..n {
        for i in j..n {
            x[(i, j)] = p.data[idx];
            x[(j, i)] = p.data[idx];
            idx += 1;
        }
    }
    x
}

pub fn vec_a(x: &DMatrix<f64>, tol: f64) -> Result<PackedAsymVec> {
    let n = square_order(x, "vec_a")?;
    let dev = (x + x.transpose()).norm();
    if dev > tol * x.norm().max(1.0) {
        return Err(Error::Structure {
            expected: "antisymmetric",
            deviation: dev,
            tol: tol * x.norm().max(1.0),
        });
    }
    let mut data = Vec::with_capacity(asym_len(n));
    for j in 0..n {
        for i in j + 1..n {
            data.push(x[(i, j)]);
        }
    }
    Ok(PackedAsymVec {
        n,
        data: DVector::from_vec(data),
    })
}

pub fn unvec_a(p: &PackedAsymVec) -> DMatrix<f64> {
    let n = p.n;
    let mut x = DMatrix::zeros(n, n);
    let mut idx = 0;
    for j in 0..n {
        for i in j + 1..n {
            x[(i, j)] = p.data[idx];
            x[(j, i)] = -p.data[idx];
            idx += 1;
        }
    }
    x
}

fn square_order(x: &DMatrix<f64>, op: &'static str) -> Result<usize> {
    if x.nrows() != x.ncols() {
        return Err(Error::shape(
            op,
            format!("{}x{}", x.nrows(), x.ncols()),
            "a square matrix".to_string(),
        ));
    }
    Ok(x.nrows())
}

/// Sparse 0/±1 matrix stored per column.
#[derive(Debug, Clone)]
pub struct StructureMatrix {
    rows: usize,
    by_col: Vec<Vec<(usize, i8)>>,
}

impl StructureMatrix {
    fn with_cols(rows: usize, cols: usize) -> Self {
        StructureMatrix {
            rows,
            by_col: vec![Vec::new(); cols],
        }
    }

    fn push(&mut self, row: usize, col: usize, val: i8) {
        debug_assert!(row < self.rows);
        self.by_col[col].push((row, val));
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.by_col.len()
    }

    pub fn nnz(&self) -> usize {
        self.by_col.iter().map(Vec::len).sum()
    }

    pub fn col_entries(&self, c: usize) -> &[(usize, i8)] {
        &self.by_col[c]
    }

    /// y = S x, by scatter.
    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        assert_eq!(x.len(), self.ncols(), "apply: length mismatch");
        let mut y = DVector::zeros(self.rows);
        for (c, entries) in self.by_col.iter().enumerate() {
            let xv = x[c];
            if xv != 0.0 {
                for &(r, v) in entries {
                    y[r] += f64::from(v) * xv;
                }
            }
        }
        y
    }

    /// y = Sᵀ x, by gather.
    pub fn apply_transpose(&self, x: &DVector<f64>) -> DVector<f64> {
        assert_eq!(x.len(), self.rows, "apply_transpose: length mismatch");
        DVector::from_iterator(
            self.ncols(),
            self.by_col.iter().map(|entries| {
                entries
                    .iter()
                    .map(|&(r, v)| f64::from(v) * x[r])
                    .sum::<f64>()
            }),
        )
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.rows, self.ncols());
        for (c, entries) in self.by_col.iter().enumerate() {
            for &(r, v) in entries {
                d[(r, c)] += f64::from(v);
            }
        }
        d
    }

    /// Block-diagonal assembly of signed copies of `K_S`/`K_A`-like blocks.
    fn block_diag(blocks: &[(&StructureMatrix, i8)]) -> StructureMatrix {
        let rows = blocks.iter().map(|(b, _)| b.rows).sum();
        let cols = blocks.iter().map(|(b, _)| b.ncols()).sum();
        let mut out = StructureMatrix::with_cols(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for (b, sign) in blocks {
            for (c, entries) in b.by_col.iter().enumerate() {
                for &(r, v) in entries {
                    out.push(ro + r, co + c, sign * v);
                }
            }
            ro += b.rows;
            co += b.ncols();
        }
        out
    }
}

/// `K_S` (n² × n(n+1)/2): `vec(X) = K_S vec_s(X)` for symmetric `X`.
pub fn build_k_s(n: usize) -> StructureMatrix {
    let mut m = StructureMatrix::with_cols(n * n, sym_len(n));
    let mut p = 0;
    for j in 0..n {
        for i in j..n {
            m.push(j * n + i, p, 1);
            if i != j {
                m.push(i * n + j, p, 1);
            }
            p += 1;
        }
    }
    m
}

/// `K_A` (n² × n(n-1)/2): `vec(X) = K_A vec_a(X)` for antisymmetric `X`.
pub fn build_k_a(n: usize) -> StructureMatrix {
    let mut m = StructureMatrix::with_cols(n * n, asym_len(n));
    let mut p = 0;
    for j in 0..n {
        for i in j + 1..n {
            m.push(j * n + i, p, 1);
            m.push(i * n + j, p, -1);
            p += 1;
        }
    }
    m
}

// Block sign tables of the real-representation layout: block row `beta`,
// block column `b` of J holds sign[beta][b] * J_{g[beta][b]}.
const J_BLOCK: [[usize; 4]; 4] = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];
const J_SIGN: [[i8; 4]; 4] = [[1, -1, 1, -1], [1, 1, 1, 1], [1, -1, 1, -1], [1, 1, 1, 1]];

/// `J` (16n² × 4n²): `vec(X^R) = J vec(X_r^R)`. Each column has exactly 4
/// nonzeros, one per block row.
pub fn build_j(n: usize) -> StructureMatrix {
    let n2 = n * n;
    let mut m = StructureMatrix::with_cols(16 * n2, 4 * n2);
    for b in 0..4 {
        for j in 0..n {
            for i in 0..n {
                let col = b * n2 + j * n + i;
                for beta in 0..4 {
                    let g = J_BLOCK[beta][b];
                    let row = beta * 4 * n2 + j * 4 * n + g * n + i;
                    m.push(row, col, J_SIGN[beta][b]);
                }
            }
        }
    }
    m
}

const JT_BLOCK: [[usize; 2]; 2] = [[0, 1], [1, 0]];
const JT_SIGN: [[i8; 2]; 2] = [[1, -1], [1, 1]];

/// Complex-field analogue of `J` (4n² × 2n²): `vec(X̃^R) = J̃ vec(X̃_r^R)`.
pub fn build_j_tilde(n: usize) -> StructureMatrix {
    let n2 = n * n;
    let mut m = StructureMatrix::with_cols(4 * n2, 2 * n2);
    for b in 0..2 {
        for j in 0..n {
            for i in 0..n {
                let col = b * n2 + j * n + i;
                for beta in 0..2 {
                    let g = JT_BLOCK[beta][b];
                    let row = beta * 2 * n2 + j * 2 * n + g * n + i;
                    m.push(row, col, JT_SIGN[beta][b]);
                }
            }
        }
    }
    m
}

/// `Q = diag(K_S, -K_A, K_A, -K_A)` (4n² × (2n²-n)): Hermitian packing of
/// `vec(X_r^R)`.
pub fn build_q_sel(n: usize) -> StructureMatrix {
    let ks = build_k_s(n);
    let ka = build_k_a(n);
    StructureMatrix::block_diag(&[(&ks, 1), (&ka, -1), (&ka, 1), (&ka, -1)])
}

/// `R = diag(K_S, K_A, K_A, K_A)` (4n² × (2n²-n)): packed parameters to
/// component vecs.
pub fn build_r_sel(n: usize) -> StructureMatrix {
    let ks = build_k_s(n);
    let ka = build_k_a(n);
    StructureMatrix::block_diag(&[(&ks, 1), (&ka, 1), (&ka, 1), (&ka, 1)])
}

/// `Q̃ = diag(K_S, -K_A)` (2n² × n²).
pub fn build_q_tilde(n: usize) -> StructureMatrix {
    let ks = build_k_s(n);
    let ka = build_k_a(n);
    StructureMatrix::block_diag(&[(&ks, 1), (&ka, -1)])
}

/// `R̃ = diag(K_S, K_A)` (2n² × n²).
pub fn build_r_tilde(n: usize) -> StructureMatrix {
    let ks = build_k_s(n);
    let ka = build_k_a(n);
    StructureMatrix::block_diag(&[(&ks, 1), (&ka, 1)])
}

/// Number of free real parameters of an n×n Hermitian RBQ matrix.
pub fn hermitian_param_len(n: usize) -> usize {
    2 * n * n - n
}

/// `[vec_s(X0); vec_a(X1); vec_a(X2); vec_a(X3)]` for Hermitian `X`.
pub fn pack_hermitian(x: &RbqMatrix, tol: f64) -> Result<DVector<f64>> {
    let s = vec_s(x.component(0), tol)?;
    let a1 = vec_a(x.component(1), tol)?;
    let a2 = vec_a(x.component(2), tol)?;
    let a3 = vec_a(x.component(3), tol)?;
    let mut out = Vec::with_capacity(hermitian_param_len(x.nrows()));
    out.extend_from_slice(s.data.as_slice());
    out.extend_from_slice(a1.data.as_slice());
    out.extend_from_slice(a2.data.as_slice());
    out.extend_from_slice(a3.data.as_slice());
    Ok(DVector::from_vec(out))
}

/// Inverse of `pack_hermitian`: rebuild the Hermitian matrix from packed
/// parameters (exactly `R · packed` component-wise).
pub fn hermitian_from_packed(n: usize, packed: &DVector<f64>) -> RbqMatrix {
    assert_eq!(packed.len(), hermitian_param_len(n));
    let sl = sym_len(n);
    let al = asym_len(n);
    let sym = PackedSymVec {
        n,
        data: packed.rows(0, sl).into(),
    };
    let mut comps = vec![unvec_s(&sym)];
    for t in 0..3 {
        let asym = PackedAsymVec {
            n,
            data: packed.rows(sl + t * al, al).into(),
        };
        comps.push(unvec_a(&asym));
    }
    let mut it = comps.into_iter();
    RbqMatrix::from_components(
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    )
    .expect("components share dimensions by construction")
}
