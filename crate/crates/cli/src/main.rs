//! `jetgeo`: command-line front end.
//!
//! Exit codes: 0 success or positive verdict, 1 negative verdict, 2 bad
//! input, 3 evaluation failure during `geodesic`.

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "jetgeo", version, about = "Totally geodesic submanifolds of a torsion-free connection")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed of the sample generator.
    #[arg(long, global = true, env = "JETGEO_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Number of random samples [default: 200; selftest keeps per-criterion counts].
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Tolerance [default: 1e-10; 1e-8 for symmetry-check; selftest keeps per-criterion bounds].
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the main output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Param,
    Unparam,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the projective invariants and the Grassmannian families.
    Invariants {
        spec: PathBuf,
        /// Split used for the Grassmannian families [default: the spec's n].
        #[arg(long)]
        n: Option<usize>,
        /// Compare the projective invariants with those of another spec.
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Decide n-Grassmannian equivalence of two connections.
    Equivalent {
        spec1: PathBuf,
        spec2: PathBuf,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Residuals of the totally geodesic equations at given jets.
    Residual {
        spec: PathBuf,
        jets: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Connection on the parameter space [default: flat].
        #[arg(long)]
        theta: Option<PathBuf>,
    },
    /// Integrate a parametrized geodesic with fixed-step RK4.
    Geodesic {
        spec: PathBuf,
        /// Initial point, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        /// Initial velocity, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        velocity: String,
        #[arg(long, allow_hyphen_values = true)]
        h: f64,
        #[arg(long)]
        steps: usize,
        /// Initial parameter value.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long)]
        theta: Option<PathBuf>,
    },
    /// Check that the covering maps the parametrized equation onto the unparametrized one.
    CoverCheck {
        spec: PathBuf,
        #[arg(long)]
        theta: Option<PathBuf>,
        /// Section jets to test instead of random ones.
        #[arg(long)]
        jets: Option<PathBuf>,
    },
    /// Test a candidate symmetry.
    SymmetryCheck {
        spec: PathBuf,
        /// Point map of E, components separated by ';'.
        #[arg(long, group = "candidate", allow_hyphen_values = true)]
        point_map: Option<String>,
        /// Vector field on E, components separated by ';'.
        #[arg(long, group = "candidate", allow_hyphen_values = true)]
        point_field: Option<String>,
        /// JSON file describing a map of first-order jets.
        #[arg(long, group = "candidate")]
        jet_map: Option<PathBuf>,
        /// Matrix of an affine change of parameters, rows separated by ';'.
        #[arg(long, group = "candidate", allow_hyphen_values = true)]
        affine: Option<String>,
        /// Translation of the affine change of parameters [default: 0].
        #[arg(long, requires = "affine", allow_hyphen_values = true)]
        shift: Option<String>,
        #[arg(long)]
        theta: Option<PathBuf>,
    },
    /// Run the acceptance suite.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Invariants { spec, n, compare } => commands::invariants(&cli.global, &spec, n, compare.as_deref()),
        Command::Equivalent { spec1, spec2, n } => commands::equivalent(&cli.global, &spec1, &spec2, n),
        Command::Residual { spec, jets, mode, theta } => commands::residual(&cli.global, &spec, &jets, mode, theta.as_deref()),
        Command::Geodesic { spec, start, velocity, h, steps, x0, theta } => {
            commands::geodesic(&cli.global, &spec, &start, &velocity, h, steps, x0, theta.as_deref())
        }
        Command::CoverCheck { spec, theta, jets } => commands::cover_check(&cli.global, &spec, theta.as_deref(), jets.as_deref()),
        Command::SymmetryCheck { spec, point_map, point_field, jet_map, affine, shift, theta } => {
            let candidate = match (point_map, point_field, jet_map, affine) {
                (Some(f), _, _, _) => commands::Candidate::PointMap(f),
                (_, Some(f), _, _) => commands::Candidate::PointField(f),
                (_, _, Some(p), _) => commands::Candidate::JetMap(p),
                (_, _, _, Some(a)) => commands::Candidate::Affine(a, shift),
                _ => {
                    eprintln!("error: give one of --point-map, --point-field, --jet-map, --affine");
                    return ExitCode::from(2);
                }
            };
            commands::symmetry_check(&cli.global, &spec, candidate, theta.as_deref())
        }
        Command::Selftest => commands::selftest(&cli.global),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
