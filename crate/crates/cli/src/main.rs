//! `rbqme` — solve reduced-biquaternion matrix equations from JSON files,
//! check solvability, reconstruct Hermitian matrices from eigenpairs, and
//! run the error/timing benchmark protocols.
//!
//! Exit codes: 0 success, 1 solver failure, 2 bad input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rbqme::bench::{self, BenchConfig, CSV_HEADER};
use rbqme::error::Error;
use rbqme::io::{self, PdiepReportJson, SolveReportJson};
use rbqme::rr::{self, Method, RbmeProblem, SolveOptions};
use rbqme::structure::hermitian_param_len;
use rbqme::{cr, pdiep};

#[derive(Parser)]
#[command(
    name = "rbqme",
    version,
    about = "Hermitian solvers for (AXB, CXD) = (E, F) over reduced biquaternions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the least-squares Hermitian solution.
    Solve(SolveArgs),
    /// Report consistency, uniqueness and design rank without solving.
    Check(ProblemFiles),
    /// Reconstruct a complex Hermitian matrix from prescribed eigenpairs.
    Pdiep(PdiepArgs),
    /// Run a benchmark protocol and emit CSV records.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ProblemFiles {
    /// Matrix file for A (m×n).
    #[arg(long)]
    a: PathBuf,
    /// Matrix file for B (n×s).
    #[arg(long)]
    b: PathBuf,
    /// Matrix file for C (m×n).
    #[arg(long)]
    c: PathBuf,
    /// Matrix file for D (n×s).
    #[arg(long)]
    d: PathBuf,
    /// Matrix file for E (m×s).
    #[arg(long)]
    e: PathBuf,
    /// Matrix file for F (m×s).
    #[arg(long)]
    f: PathBuf,
}

impl ProblemFiles {
    fn load(&self) -> Result<RbmeProblem, Error> {
        RbmeProblem::new(
            io::load_matrix(&self.a)?,
            io::load_matrix(&self.b)?,
            io::load_matrix(&self.c)?,
            io::load_matrix(&self.d)?,
            io::load_matrix(&self.e)?,
            io::load_matrix(&self.f)?,
        )
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Rr,
    Cr,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Rr => Method::Rr,
            MethodArg::Cr => Method::Cr,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    files: ProblemFiles,
    /// Solution method.
    #[arg(long, value_enum, default_value = "rr")]
    method: MethodArg,
    /// JSON array selecting a least-squares family member (length 2n²-n);
    /// omitted means the minimum-norm member.
    #[arg(long, conflicts_with = "y_seed")]
    y_file: Option<PathBuf>,
    /// Seed for a random family-member vector y.
    #[arg(long)]
    y_seed: Option<u64>,
    /// Relative consistency tolerance (default 1e-8).
    #[arg(long)]
    tol: Option<f64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PdiepArgs {
    /// Eigenpair JSON file ({"n", "lambdas", "phi_re", "phi_im"}).
    #[arg(long)]
    input: PathBuf,
    /// JSON array selecting a reconstruction family member (length n²).
    #[arg(long, conflicts_with = "y_seed")]
    y_file: Option<PathBuf>,
    /// Seed for a random family-member vector y.
    #[arg(long)]
    y_seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ProtocolArg {
    /// Error vs dimension for the RR method (m = n = 2k, s = k).
    Accuracy,
    /// RR vs CR errors and timings on structured instances.
    Compare,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    protocol: ProtocolArg,
    /// Inclusive range "lo..hi" (or a single k). Defaults: 1..6 for
    /// accuracy, 1..8 for compare.
    #[arg(long)]
    k_range: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Timing runs per record; the reported time is their median.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Restrict the compare protocol to these methods.
    #[arg(long, value_enum, value_delimiter = ',')]
    methods: Option<Vec<MethodArg>>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn parse_k_range(text: &str) -> Result<Vec<usize>, Error> {
    let bad = |detail: &str| Error::Precondition(format!("bad --k-range {text:?}: {detail}"));
    if let Some((lo, hi)) = text.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: usize = lo.parse().map_err(|_| bad("start is not an integer"))?;
        let hi: usize = hi.parse().map_err(|_| bad("end is not an integer"))?;
        if lo == 0 || hi < lo {
            return Err(bad("need 1 <= lo <= hi"));
        }
        Ok((lo..=hi).collect())
    } else {
        let k: usize = text.parse().map_err(|_| bad("not an integer"))?;
        if k == 0 {
            return Err(bad("k must be positive"));
        }
        Ok(vec![k])
    }
}

fn load_y(path: &Path, expected: usize) -> Result<DVector<f64>, Error> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let values: Vec<f64> = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        detail: e.to_string(),
    })?;
    if values.len() != expected {
        return Err(Error::Precondition(format!(
            "y vector in {} has length {}, expected {expected}",
            path.display(),
            values.len()
        )));
    }
    Ok(DVector::from_vec(values))
}

fn random_y(seed: u64, len: usize) -> DVector<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DVector::from_fn(len, |_, _| rng.random_range(-1.0..1.0))
}

fn emit(out: &Option<PathBuf>, json: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, json).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<(), Error> {
    let problem = args.files.load()?;
    let (_, n, _) = problem.dims();
    let y = match (&args.y_file, args.y_seed) {
        (Some(path), _) => Some(load_y(path, hermitian_param_len(n))?),
        (None, Some(seed)) => Some(random_y(seed, hermitian_param_len(n))),
        (None, None) => None,
    };
    let mut opts = SolveOptions::default();
    if let Some(tol) = args.tol {
        opts.consistency_tol = tol;
    }
    let report = match Method::from(args.method) {
        Method::Rr => match &y {
            Some(y) => rr::solve_family_with(&problem, y, &opts)?,
            None => rr::solve_min_norm_with(&problem, &opts)?,
        },
        Method::Cr => cr::cr_solve_hermitian_with(&problem, y.as_ref(), &opts)?,
    };
    let json =
        serde_json::to_string_pretty(&SolveReportJson::from_report(&report)).expect("serializable");
    emit(&args.out, &json)
}

fn cmd_check(files: &ProblemFiles) -> Result<(), Error> {
    let problem = files.load()?;
    let (_, n, _) = problem.dims();
    let ds = rr::assemble_design(&problem)?;
    let consistent = rr::check_consistency(&problem)?;
    let unique = rr::check_uniqueness(&problem)?;
    let rank = rbqme::linalg::numerical_rank(&ds.coeff, None)?;
    let json = serde_json::json!({
        "consistent": consistent,
        "unique": unique,
        "rank": rank,
        "free_parameters": hermitian_param_len(n),
        "design_rows": ds.coeff.nrows(),
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&json).expect("serializable")
    );
    Ok(())
}

fn cmd_pdiep(args: &PdiepArgs) -> Result<(), Error> {
    let data = io::load_eigenpairs(&args.input)?;
    let n = data.n();
    let y = match (&args.y_file, args.y_seed) {
        (Some(path), _) => Some(load_y(path, n * n)?),
        (None, Some(seed)) => Some(random_y(seed, n * n)),
        (None, None) => None,
    };
    let report = pdiep::reconstruct(&data, y.as_ref())?;
    let json =
        serde_json::to_string_pretty(&PdiepReportJson::from_report(&report)).expect("serializable");
    emit(&args.out, &json)
}

fn cmd_bench(args: &BenchArgs) -> Result<(), Error> {
    let default_range: Vec<usize> = match args.protocol {
        ProtocolArg::Accuracy => (1..=6).collect(),
        ProtocolArg::Compare => (1..=8).collect(),
    };
    let k_range = match &args.k_range {
        Some(text) => parse_k_range(text)?,
        None => default_range,
    };
    let mut cfg = BenchConfig::new(k_range, args.seed)?.with_repeats(args.repeats)?;
    if let Some(methods) = &args.methods {
        cfg = cfg.with_methods(methods.iter().map(|&m| Method::from(m)).collect());
    }
    let out = match args.protocol {
        ProtocolArg::Accuracy => bench::run_protocol_accuracy(&cfg)?,
        ProtocolArg::Compare => bench::run_protocol_compare(&cfg)?,
    };
    for failure in &out.failures {
        eprintln!(
            "warning: k={} {} failed: {}",
            failure.k, failure.method, failure.message
        );
    }
    for rec in &out.records {
        eprintln!(
            "k={:<3} {} log10_error={:+.3} elapsed={:.3} ms residual={:.3e}",
            rec.k, rec.method, rec.log10_error, rec.elapsed_ms, rec.residual
        );
    }
    match &args.csv {
        Some(path) => {
            let file = fs::File::create(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            let mut w = std::io::BufWriter::new(file);
            bench::write_csv(&out.records, &mut w).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            w.flush().map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
        }
        None => {
            let mut buf = Vec::new();
            bench::write_csv(&out.records, &mut buf).expect("in-memory write");
            print!("{}", String::from_utf8(buf).expect("utf8"));
        }
    }
    let _ = CSV_HEADER; // schema pinned in bench::write_csv
    Ok(())
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Numerical { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Check(files) => cmd_check(files),
        Command::Pdiep(args) => cmd_pdiep(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
