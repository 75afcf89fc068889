//! Benchmark harness: error-vs-dimension curves, the RR-vs-CR accuracy and
//! timing comparison, and the bundled reconstruction goldens.
//!
//! Instance generation is deterministic: the master seed feeds a ChaCha8
//! generator (counter-based, splittable) and each dimension index `k` runs
//! on its own stream, so records depend only on `(seed, config)`. Timing is
//! wall clock over the solve call (assembly included, I/O excluded), with
//! the median taken over `repeats` runs.

use std::path::Path;
use std::time::Duration;

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::cr;
use crate::error::{Error, Result};
use crate::io;
use crate::matrix::RbqMatrix;
use crate::pdiep;
use crate::rr::{self, Method, RbmeProblem, SolveOptions};

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub k_range: Vec<usize>,
    pub seed: u64,
    /// Timing runs per record; the reported time is their median.
    pub repeats: usize,
    pub methods: Vec<Method>,
    /// Optional solver tolerance overrides applied to every solve.
    pub tols: SolveOptions,
}

impl BenchConfig {
    pub fn new(k_range: Vec<usize>, seed: u64) -> Result<Self> {
        let cfg = BenchConfig {
            k_range,
            seed,
            repeats: 1,
            methods: vec![Method::Rr, Method::Cr],
            tols: SolveOptions::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_repeats(mut self, repeats: usize) -> Result<Self> {
        self.repeats = repeats;
        self.validate()?;
        Ok(self)
    }

    pub fn with_methods(mut self, methods: Vec<Method>) -> Self {
        self.methods = methods;
        self
    }

    pub fn with_tols(mut self, tols: SolveOptions) -> Self {
        self.tols = tols;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.k_range.is_empty() {
            return Err(Error::Precondition("k_range must be nonempty".to_string()));
        }
        if self.repeats < 1 {
            return Err(Error::Precondition("repeats must be >= 1".to_string()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub k: usize,
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub method: Method,
    /// `log10 ‖X̃ - X‖_F` against the planted solution.
    pub log10_error: f64,
    /// Median wall-clock milliseconds of the solve call.
    pub elapsed_ms: f64,
    pub residual: f64,
}

pub const CSV_HEADER: &str = "k,m,n,s,method,log10_error,elapsed_ms,residual";

impl BenchRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.k,
            self.m,
            self.n,
            self.s,
            self.method,
            self.log10_error,
            self.elapsed_ms,
            self.residual
        )
    }

    pub fn from_csv_row(row: &str) -> Result<Self> {
        let fields: Vec<&str> = row.trim().split(',').collect();
        if fields.len() != 8 {
            return Err(Error::Precondition(format!(
                "csv row has {} fields, expected 8: {row:?}",
                fields.len()
            )));
        }
        let int = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::Precondition(format!("bad integer field {s:?}")))
        };
        let float = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::Precondition(format!("bad float field {s:?}")))
        };
        let method = match fields[4] {
            "RR" => Method::Rr,
            "CR" => Method::Cr,
            other => {
                return Err(Error::Precondition(format!("unknown method {other:?}")));
            }
        };
        Ok(BenchRecord {
            k: int(fields[0])?,
            m: int(fields[1])?,
            n: int(fields[2])?,
            s: int(fields[3])?,
            method,
            log10_error: float(fields[5])?,
            elapsed_ms: float(fields[6])?,
            residual: float(fields[7])?,
        })
    }
}

pub fn write_csv<W: std::io::Write>(records: &[BenchRecord], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{}", r.to_csv_row())?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ProtocolFailure {
    pub k: usize,
    pub method: Method,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct ProtocolOutput {
    pub records: Vec<BenchRecord>,
    /// Per-k solver failures; they do not abort the run.
    pub failures: Vec<ProtocolFailure>,
}

fn stream_rng(seed: u64, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    rng
}

fn uniform(rows: usize, cols: usize, scale: f64, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| scale * rng.random::<f64>())
}

fn normal(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

fn rbq_uniform(rows: usize, cols: usize, scales: [f64; 4], rng: &mut ChaCha8Rng) -> RbqMatrix {
    RbqMatrix::from_components(
        uniform(rows, cols, scales[0], rng),
        uniform(rows, cols, scales[1], rng),
        uniform(rows, cols, scales[2], rng),
        uniform(rows, cols, scales[3], rng),
    )
    .expect("equal plane dimensions")
}

/// Accuracy-protocol instance at index k: `m = n = 2k`, `s = k`, scaled
/// uniform operators, and a planted Hermitian solution built from
/// symmetrized uniform draws (the i-part shares the x0 draw, the j/k parts
/// are 5- and 2-scaled). Returns `(problem, planted solution)`.
pub fn generate_accuracy_problem(k: usize, rng: &mut ChaCha8Rng) -> (RbmeProblem, RbqMatrix) {
    let (m, n, s) = (2 * k, 2 * k, k);
    let a = rbq_uniform(m, n, [10.0, 1.0, 1.0, 1.0], rng);
    let b = rbq_uniform(n, s, [1.0, 1.0, 1.0, 1.0], rng);
    let c = rbq_uniform(m, n, [1.0, 10.0, 4.0, 1.0], rng);
    let d = rbq_uniform(n, s, [1.0, 2.0, 1.0, 1.0], rng);

    let s0 = uniform(n, n, 1.0, rng);
    let s1 = s0.clone();
    let s2 = uniform(n, n, 5.0, rng);
    let s3 = uniform(n, n, 2.0, rng);
    let x = RbqMatrix::from_components(
        &s0 + s0.transpose(),
        &s1 - s1.transpose(),
        &s2 - s2.transpose(),
        &s3 - s3.transpose(),
    )
    .expect("equal plane dimensions");

    let e = a.mat_mul(&x).unwrap().mat_mul(&b).unwrap();
    let f = c.mat_mul(&x).unwrap().mat_mul(&d).unwrap();
    (RbmeProblem::new(a, b, c, d, e, f).unwrap(), x)
}

/// Comparison-protocol instance at index k: `n = 2k`, `m = n + 16`,
/// `s = n + 6`, sparse structured operators (identity blocks on single
/// imaginary planes, an all-ones j-plane), and a planted Hermitian solution
/// with a Toeplitz real part and a `[0 I; -I 0]` i-part.
pub fn generate_compare_problem(k: usize, rng: &mut ChaCha8Rng) -> (RbmeProblem, RbqMatrix) {
    let n = 2 * k;
    let m = n + 16;
    let s = n + 6;

    let mut eye_pad = DMatrix::zeros(m, n);
    eye_pad
        .view_mut((0, 0), (n, n))
        .copy_from(&DMatrix::identity(n, n));

    let mut a = RbqMatrix::zeros(m, n);
    *a.component_mut(1) = eye_pad.clone();

    let mut neg_eye_wide = DMatrix::zeros(n, s);
    neg_eye_wide
        .view_mut((0, 0), (n, n))
        .copy_from(&(DMatrix::identity(n, n) * -1.0));
    let mut b = RbqMatrix::zeros(n, s);
    *b.component_mut(3) = neg_eye_wide;

    let mut c = RbqMatrix::zeros(m, n);
    *c.component_mut(2) = eye_pad;

    let mut d = RbqMatrix::zeros(n, s);
    *d.component_mut(2) = DMatrix::from_element(n, s, 1.0);

    let toeplitz = DMatrix::from_fn(n, n, |i, j| (i.abs_diff(j) + 1) as f64);
    let h = n / 2;
    let mut iblock = DMatrix::zeros(n, n);
    iblock
        .view_mut((0, h), (h, h))
        .copy_from(&DMatrix::identity(h, h));
    iblock
        .view_mut((h, 0), (h, h))
        .copy_from(&(DMatrix::identity(h, h) * -1.0));
    let s2 = normal(n, n, rng);
    let s3 = normal(n, n, rng);
    let x =
        RbqMatrix::from_components(toeplitz, iblock, &s2 - s2.transpose(), &s3 - s3.transpose())
            .expect("equal plane dimensions");

    let e = a.mat_mul(&x).unwrap().mat_mul(&b).unwrap();
    let f = c.mat_mul(&x).unwrap().mat_mul(&d).unwrap();
    (RbmeProblem::new(a, b, c, d, e, f).unwrap(), x)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

fn duration_ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn solve_with_method(
    p: &RbmeProblem,
    method: Method,
    opts: &SolveOptions,
) -> Result<rr::SolveReport> {
    match method {
        Method::Rr => rr::solve_min_norm_with(p, opts),
        Method::Cr => cr::cr_solve_hermitian_with(p, None, opts),
    }
}

fn timed_record(
    p: &RbmeProblem,
    x_true: &RbqMatrix,
    k: usize,
    method: Method,
    cfg: &BenchConfig,
) -> Result<BenchRecord> {
    let repeats = cfg.repeats;
    let mut times = Vec::with_capacity(repeats);
    let mut last = None;
    for _ in 0..repeats {
        let rep = solve_with_method(p, method, &cfg.tols)?;
        times.push(duration_ms(rep.elapsed));
        last = Some(rep);
    }
    let rep = last.expect("repeats >= 1");
    let (m, n, s) = p.dims();
    Ok(BenchRecord {
        k,
        m,
        n,
        s,
        method,
        log10_error: rep.solution.sub(x_true)?.frobenius().log10(),
        elapsed_ms: median(times),
        residual: rep.residual,
    })
}

/// Error-vs-dimension protocol: RR solves of consistent scaled-uniform
/// instances, `m = n = 2k`, `s = k` over the configured k range.
pub fn run_protocol_accuracy(cfg: &BenchConfig) -> Result<ProtocolOutput> {
    cfg.validate()?;
    let mut out = ProtocolOutput::default();
    for &k in &cfg.k_range {
        let mut rng = stream_rng(cfg.seed, k);
        let (p, x_true) = generate_accuracy_problem(k, &mut rng);
        match timed_record(&p, &x_true, k, Method::Rr, cfg) {
            Ok(rec) => out.records.push(rec),
            Err(e) => out.failures.push(ProtocolFailure {
                k,
                method: Method::Rr,
                message: e.to_string(),
            }),
        }
    }
    Ok(out)
}

/// RR-vs-CR comparison on the structured instances: per k, one instance
/// solved by each configured method, recording error and median time.
pub fn run_protocol_compare(cfg: &BenchConfig) -> Result<ProtocolOutput> {
    cfg.validate()?;
    let mut out = ProtocolOutput::default();
    for &k in &cfg.k_range {
        let mut rng = stream_rng(cfg.seed, k);
        let (p, x_true) = generate_compare_problem(k, &mut rng);
        for &method in &cfg.methods {
            match timed_record(&p, &x_true, k, method, cfg) {
                Ok(rec) => out.records.push(rec),
                Err(e) => out.failures.push(ProtocolFailure {
                    k,
                    method,
                    message: e.to_string(),
                }),
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct GoldenCase {
    pub name: String,
    pub residuals: Vec<f64>,
    pub solvable: bool,
}

/// Reconstructs the bundled eigenpair goldens (one three-pair set and the
/// three partial-information cases) from `dir` and reports the per-pair
/// residuals. A missing file is an I/O error naming its path.
pub fn run_pdiep_goldens(dir: &Path) -> Result<Vec<GoldenCase>> {
    let files = [
        "eigenpairs_recon3.json",
        "eigenpairs_case1.json",
        "eigenpairs_case2.json",
        "eigenpairs_case3.json",
    ];
    let mut cases = Vec::new();
    for name in files {
        let path = dir.join(name);
        let data = io::load_eigenpairs(&path)?;
        let rep = pdiep::reconstruct(&data, None)?;
        cases.push(GoldenCase {
            name: name.to_string(),
            residuals: rep.residuals,
            solvable: rep.solvable,
        });
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accuracy_records_hit_error_floor_at_small_k() {
        let cfg = BenchConfig::new(vec![1, 2], 7).unwrap();
        let out = run_protocol_accuracy(&cfg).unwrap();
        assert!(out.failures.is_empty());
        assert_eq!(out.records.len(), 2);
        for rec in &out.records {
            assert_eq!((rec.m, rec.n, rec.s), (2 * rec.k, 2 * rec.k, rec.k));
            assert!(rec.log10_error <= -9.0, "log10 error {}", rec.log10_error);
        }
    }

    #[test]
    fn identity_override_recovers_exactly() {
        // A = B = C = D = I degenerates the protocol to direct recovery
        let mut rng = stream_rng(3, 1);
        let (_, x) = generate_accuracy_problem(1, &mut rng);
        let id = RbqMatrix::identity(2);
        let p = RbmeProblem::new(
            id.clone(),
            id.clone(),
            id.clone(),
            id.clone(),
            x.clone(),
            x.clone(),
        )
        .unwrap();
        let rep = rr::solve_min_norm(&p).unwrap();
        let err = rep.solution.sub(&x).unwrap().frobenius();
        assert!(err.log10() <= -12.0);
    }

    #[test]
    fn same_seed_is_bitwise_deterministic() {
        let cfg = BenchConfig::new(vec![1, 3], 99).unwrap();
        let a = run_protocol_accuracy(&cfg).unwrap();
        let b = run_protocol_accuracy(&cfg).unwrap();
        assert_eq!(a.records.len(), b.records.len());
        for (x, y) in a.records.iter().zip(&b.records) {
            assert_eq!(x.log10_error.to_bits(), y.log10_error.to_bits());
            assert_eq!(x.residual.to_bits(), y.residual.to_bits());
            assert_eq!(
                (x.k, x.m, x.n, x.s, x.method),
                (y.k, y.m, y.n, y.s, y.method)
            );
        }
    }

    #[test]
    fn compare_protocol_dimensions_and_agreement() {
        let cfg = BenchConfig::new(vec![1], 5).unwrap();
        let out = run_protocol_compare(&cfg).unwrap();
        assert_eq!(out.records.len(), 2);
        for rec in &out.records {
            assert_eq!(
                (rec.m, rec.n, rec.s),
                (2 * rec.k + 16, 2 * rec.k, 2 * rec.k + 6)
            );
            assert!(rec.log10_error <= -9.0);
        }
    }

    #[test]
    fn repeats_change_timing_not_errors() {
        let cfg1 = BenchConfig::new(vec![1], 11).unwrap();
        let cfg5 = BenchConfig::new(vec![1], 11)
            .unwrap()
            .with_repeats(5)
            .unwrap();
        let a = run_protocol_compare(&cfg1).unwrap();
        let b = run_protocol_compare(&cfg5).unwrap();
        for (x, y) in a.records.iter().zip(&b.records) {
            assert_eq!(x.log10_error.to_bits(), y.log10_error.to_bits());
        }
    }

    #[test]
    fn csv_round_trip() {
        let cfg = BenchConfig::new(vec![1], 2).unwrap();
        let out = run_protocol_accuracy(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&out.records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        for (line, rec) in lines.zip(&out.records) {
            assert_eq!(&BenchRecord::from_csv_row(line).unwrap(), rec);
        }
    }

    #[test]
    fn config_validation() {
        assert!(BenchConfig::new(vec![], 0).is_err());
        assert!(BenchConfig::new(vec![1], 0)
            .unwrap()
            .with_repeats(0)
            .is_err());
    }
}
