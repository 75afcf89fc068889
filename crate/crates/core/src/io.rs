//! JSON file formats shared across the library and CLI.
//!
//! Matrix files are `{"rows", "cols", "x0".."x3"}` with row-major planes;
//! absent planes mean zero, so plain real or complex matrices stay compact.
//! Eigenpair files are `{"n", "lambdas", "phi_re", "phi_im"}` with the
//! vectors stored row-major as an n×k block.

use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::matrix::RbqMatrix;
use crate::pdiep::{EigenpairData, PdiepReport};
use crate::rr::{Method, SolveReport};

#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x1: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x2: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x3: Option<Vec<f64>>,
}

fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

fn plane_or_none(m: &DMatrix<f64>) -> Option<Vec<f64>> {
    if m.iter().all(|&x| x == 0.0) {
        None
    } else {
        Some(row_major(m))
    }
}

impl MatrixJson {
    pub fn from_matrix(m: &RbqMatrix) -> Self {
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            x0: plane_or_none(m.component(0)),
            x1: plane_or_none(m.component(1)),
            x2: plane_or_none(m.component(2)),
            x3: plane_or_none(m.component(3)),
        }
    }

    pub fn from_cmatrix(m: &CMatrix) -> Self {
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            x0: plane_or_none(&m.re),
            x1: plane_or_none(&m.im),
            x2: None,
            x3: None,
        }
    }

    pub fn into_matrix(self) -> Result<RbqMatrix> {
        let (rows, cols) = (self.rows, self.cols);
        let plane = |data: Option<Vec<f64>>, name: &'static str| -> Result<DMatrix<f64>> {
            match data {
                None => Ok(DMatrix::zeros(rows, cols)),
                Some(v) if v.len() == rows * cols => Ok(DMatrix::from_row_slice(rows, cols, &v)),
                Some(v) => Err(Error::Precondition(format!(
                    "plane {name} has {} entries, expected {} ({rows}x{cols})",
                    v.len(),
                    rows * cols
                ))),
            }
        };
        RbqMatrix::from_components(
            plane(self.x0, "x0")?,
            plane(self.x1, "x1")?,
            plane(self.x2, "x2")?,
            plane(self.x3, "x3")?,
        )
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        detail: e.to_string(),
    })
}

pub fn load_matrix(path: &Path) -> Result<RbqMatrix> {
    let text = read_file(path)?;
    parse_json::<MatrixJson>(path, &text)?.into_matrix()
}

pub fn save_matrix(path: &Path, m: &RbqMatrix) -> Result<()> {
    let json = serde_json::to_string_pretty(&MatrixJson::from_matrix(m)).expect("serializable");
    write_file(path, &json)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EigenpairJson {
    pub n: usize,
    pub lambdas: Vec<f64>,
    /// n×k block, row-major.
    pub phi_re: Vec<f64>,
    pub phi_im: Vec<f64>,
}

pub fn load_eigenpairs(path: &Path) -> Result<EigenpairData> {
    let text = read_file(path)?;
    let raw: EigenpairJson = parse_json(path, &text)?;
    let (n, k) = (raw.n, raw.lambdas.len());
    if raw.phi_re.len() != n * k || raw.phi_im.len() != n * k {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            detail: format!(
                "phi planes must hold {} entries ({n}x{k}), got {} re / {} im",
                n * k,
                raw.phi_re.len(),
                raw.phi_im.len()
            ),
        });
    }
    let phi = CMatrix::new(
        DMatrix::from_row_slice(n, k, &raw.phi_re),
        DMatrix::from_row_slice(n, k, &raw.phi_im),
    );
    EigenpairData::new(n, DVector::from_vec(raw.lambdas), phi)
}

pub fn save_eigenpairs(path: &Path, data: &EigenpairData) -> Result<()> {
    let raw = EigenpairJson {
        n: data.n(),
        lambdas: data.lambdas().as_slice().to_vec(),
        phi_re: row_major(&data.phi().re),
        phi_im: row_major(&data.phi().im),
    };
    write_file(
        path,
        &serde_json::to_string_pretty(&raw).expect("serializable"),
    )
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolveReportJson {
    pub solution: MatrixJson,
    pub residual: f64,
    pub consistent: bool,
    pub unique: bool,
    pub rank: usize,
    pub elapsed_ms: f64,
    pub method: Method,
}

impl SolveReportJson {
    pub fn from_report(rep: &SolveReport) -> Self {
        SolveReportJson {
            solution: MatrixJson::from_matrix(&rep.solution),
            residual: rep.residual,
            consistent: rep.consistent,
            unique: rep.unique,
            rank: rep.rank,
            elapsed_ms: rep.elapsed.as_secs_f64() * 1e3,
            method: rep.method,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PdiepReportJson {
    pub matrix: MatrixJson,
    pub residuals: Vec<f64>,
    pub solvable: bool,
    pub rank: usize,
}

impl PdiepReportJson {
    pub fn from_report(rep: &PdiepReport) -> Self {
        PdiepReportJson {
            matrix: MatrixJson::from_cmatrix(&rep.matrix),
            residuals: rep.residuals.clone(),
            solvable: rep.solvable,
            rank: rep.rank,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{rand_rbq, seeded_rng};

    #[test]
    fn matrix_round_trip_and_zero_plane_omission() {
        let dir = tempfile::tempdir().unwrap();
        let mut rng = seeded_rng(91);
        let m = rand_rbq(3, 2, &mut rng);
        let path = dir.path().join("m.json");
        save_matrix(&path, &m).unwrap();
        assert_eq!(load_matrix(&path).unwrap(), m);

        let real = RbqMatrix::from_real(nalgebra::dmatrix![1.0, 2.0; 3.0, 4.0]);
        let path2 = dir.path().join("real.json");
        save_matrix(&path2, &real).unwrap();
        let text = std::fs::read_to_string(&path2).unwrap();
        assert!(!text.contains("x1"), "zero planes must be omitted");
        assert_eq!(load_matrix(&path2).unwrap(), real);
    }

    #[test]
    fn row_major_layout_in_files() {
        let dir = tempfile::tempdir().unwrap();
        let m = RbqMatrix::from_real(nalgebra::dmatrix![1.0, 2.0; 3.0, 4.0]);
        let path = dir.path().join("rm.json");
        save_matrix(&path, &m).unwrap();
        let raw: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let x0: Vec<f64> = raw["x0"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect();
        assert_eq!(x0, vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn parse_error_carries_location() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, "{\"rows\": 2,\n  \"cols\": oops}").unwrap();
        let err = load_matrix(&path).unwrap_err().to_string();
        assert!(err.contains("line"), "expected line context, got: {err}");
        assert!(err.contains("bad.json"));
    }

    #[test]
    fn missing_file_names_path() {
        let err = load_matrix(Path::new("/nonexistent/x.json"))
            .unwrap_err()
            .to_string();
        assert!(err.contains("/nonexistent/x.json"));
    }

    #[test]
    fn eigenpair_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut phi = CMatrix::zeros(3, 2);
        phi.set(0, 0, 1.0, 0.5);
        phi.set(2, 1, -0.25, 2.0);
        let data = EigenpairData::new(3, nalgebra::dvector![1.0, -2.0], phi).unwrap();
        let path = dir.path().join("eig.json");
        save_eigenpairs(&path, &data).unwrap();
        let back = load_eigenpairs(&path).unwrap();
        assert_eq!(back.lambdas(), data.lambdas());
        assert_eq!(back.phi(), data.phi());
    }
}
