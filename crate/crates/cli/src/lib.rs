//! The `minkowski` command line: argument parsing, input loading, run
//! manifests and exit codes. The numerics live in the `minkowski` library.
//!
//! Exit codes: `0` success, `1` I/O failure, `2` numerical failure (no
//! convergence, or a reported check FAILs), `3` invalid input.

pub mod manifest;

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use minkowski::solver::{InitMode, SolverConfig};
use minkowski::Error;

pub use commands::{load_boundary, load_lamination, parse_point, parse_psi};

pub const EXIT_IO: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Thread-count variable. The solver is single-threaded; the value is
/// validated and recorded in the manifest.
pub const THREADS_ENV: &str = "MINKOWSKI_THREADS";

#[derive(Debug, Parser)]
#[command(name = "minkowski", version, about = "Convex surfaces in 2+1 Minkowski space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the prescribed-curvature problem and run the post-solve checks.
    Solve(SolveArgs),
    /// Solve a family of constant curvatures and check the leaves are ordered.
    Foliate(FoliateArgs),
    /// Evaluate a parabolic barrier surface and export it.
    Barrier(BarrierArgs),
    /// Lamination utilities.
    #[command(subcommand)]
    Lamination(LaminationCommand),
    /// Infinitesimal earthquake field on the circle, against the domain trace.
    Earthquake(EarthquakeArgs),
    /// Summarise the run manifests of an output directory.
    Report(ReportArgs),
}

/// Solver settings: a `key = value` file, overridden by flags.
#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Radius of the computational sub-disc.
    #[arg(long = "R", value_name = "R")]
    pub radius: Option<f64>,
    /// Grid nodes per axis.
    #[arg(long)]
    pub n: Option<usize>,
    /// Directions of the monotone fallback stencil (4, 8 or 16).
    #[arg(long)]
    pub directions: Option<usize>,
    #[arg(long)]
    pub newton_tol: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub damping: Option<f64>,
    /// `radial-subsolution` or `envelope-minus-CT`.
    #[arg(long)]
    pub init_mode: Option<String>,
}

impl SolverArgs {
    pub fn resolve(&self) -> Result<SolverConfig, Error> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text =
                    std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                SolverConfig::parse(&text)?
            }
            None => SolverConfig::default(),
        };
        if let Some(v) = self.radius {
            cfg.radius = v;
        }
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = self.directions {
            cfg.directions = v;
        }
        if let Some(v) = self.newton_tol {
            cfg.newton_tol = v;
        }
        if let Some(v) = self.max_iters {
            cfg.max_iters = v;
        }
        if let Some(v) = self.damping {
            cfg.damping = v;
        }
        if let Some(v) = &self.init_mode {
            cfg.init = v.parse::<InitMode>()?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Where the boundary data at infinity comes from.
#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// `zero`, or a `theta,phi` CSV file.
    #[arg(long, conflicts_with = "lamination")]
    pub boundary: Option<String>,
    /// A `.lam` file; the data is the trace of its domain of dependence.
    #[arg(long)]
    pub lamination: Option<PathBuf>,
    /// Base point `z1,z2` (Klein disc) for the lamination's domain.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub x0: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RingMode {
    /// `h − √(1−|z|²)/√a`: exact for affine data and constant curvature.
    Lower,
    /// `h − √(1−|z|²)/(2√a)`, the middle of the envelope bracket.
    Midpoint,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub data: DataArgs,
    /// `const:V` or `bump:A:B` (`A + (B−A)(1−|z|²)`).
    #[arg(long, default_value = "const:1")]
    pub psi: String,
    #[arg(long, value_enum, default_value = "lower")]
    pub ring: RingMode,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FoliateArgs {
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub data: DataArgs,
    /// Comma-separated negative curvatures, e.g. `-4,-1,-0.25`.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
    pub ks: Vec<f64>,
    #[arg(long, value_enum, default_value = "lower")]
    pub ring: RingMode,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Obj,
    Csv,
    All,
}

#[derive(Debug, Args)]
pub struct BarrierArgs {
    #[arg(long = "K", allow_hyphen_values = true, default_value = "-1")]
    pub k: f64,
    #[arg(long = "C", allow_hyphen_values = true, default_value = "1")]
    pub c: f64,
    /// Override the normalising constant.
    #[arg(long = "D", allow_hyphen_values = true)]
    pub d: Option<f64>,
    /// Angle of the fixed null direction.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub theta0: f64,
    #[arg(long, value_enum, default_value = "all")]
    pub emit: Emit,
    /// Samples per side of the mesh and of the disc grid.
    #[arg(long, default_value = "41")]
    pub samples: usize,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum LaminationCommand {
    /// Report crossing leaves.
    Check { file: PathBuf },
    /// Write a random disjoint lamination.
    Random {
        #[arg(long, default_value = "0")]
        seed: u64,
        #[arg(long, default_value = "10")]
        max_leaves: usize,
        /// Output file; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certified lower bound for the Thurston norm.
    Norm {
        file: PathBuf,
        #[arg(long, default_value = "2000")]
        trials: usize,
        #[arg(long, default_value = "0")]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct EarthquakeArgs {
    #[arg(long)]
    pub lamination: PathBuf,
    #[arg(long, default_value = "64")]
    pub angles: usize,
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub x0: String,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(default_value = ".")]
    pub dir: PathBuf,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. } | Error::Divergent(_) | Error::SingularPivot(_) => EXIT_NUMERICAL,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_INPUT,
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { 0 };
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match commands::dispatch(cli.command, echo) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
