//! `holoext`: command-line surface for the extension laboratory.
//!
//! Exit codes: 0 success, 2 rejected input, 3 internal-consistency
//! failure, 64 usage errors.

mod commands;
mod selftest;
mod svg;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "holoext", version, about = "Numerical laboratory for norm-preserving extension experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pick interpolation: minimal norms and PSD traces.
    Pick {
        #[command(subcommand)]
        cmd: PickCmd,
    },
    /// Finite operator models: norms, von Neumann and defect reports.
    Model {
        #[command(subcommand)]
        cmd: ModelCmd,
    },
    /// Extremal maps for a datum.
    Extremal {
        #[command(subcommand)]
        cmd: ExtremalCmd,
    },
    /// Domain boundary tests.
    Domain {
        #[command(subcommand)]
        cmd: DomainCmd,
    },
    /// Variety experiments: geodesy, certificates, retracts.
    Variety {
        #[command(subcommand)]
        cmd: VarietyCmd,
    },
    /// Runs the condensed invariant suite.
    Selftest,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report format: full JSON or the tabular CSV slice of a sweep.
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum PickCmd {
    /// Solve a Pick problem file: minimal sup-norm with bisection trace.
    Solve {
        #[arg(long)]
        input: PathBuf,
        /// Overrides the file's bisection tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Comma-separated target scales; reports t* per scale.
        #[arg(long)]
        sweep_scales: Option<String>,
        /// Write an SVG plot of a sweep here.
        #[arg(long)]
        plot: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum ModelCmd {
    /// Build the model tuple and check the von Neumann bounds for a
    /// polynomial, with the defect witness.
    Check {
        #[arg(long)]
        input: PathBuf,
        /// Seed for the ambient boundary sample when sups are not given.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum ExtremalCmd {
    /// Multistart Caratheodory search for a datum file.
    Cara {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        #[arg(long, default_value_t = 4000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Closed-form Kobayashi extremal for a ball datum file.
    Koba {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum DomainCmd {
    /// Strong-linear-convexity sweep over sampled boundary points.
    Slc {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Tangent directions sampled per boundary point.
        #[arg(long, default_value_t = 32)]
        tangent_samples: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Clone)]
struct SpecArgs {
    /// Variety spec name: parabola | ball-slice | sym-r | sym-d | sym-rd.
    #[arg(long)]
    spec: Option<String>,
    /// Slice dimension k (ball-slice).
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Ambient dimension (ball-slice).
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Branch parameter as `re,im` (sym-d, sym-rd).
    #[arg(long)]
    beta: Option<String>,
    /// Experiment JSON file; overrides the spec flags.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum VarietyCmd {
    /// Totally-geodesic test of a sampled variety in the ball.
    Geodesic {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Extension-failure certificate search on a sampled variety.
    Certificate {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 4)]
        degree: u32,
        #[arg(long, default_value_t = 4000)]
        budget: usize,
        /// Datum as sample indices `i,j`.
        #[arg(long)]
        datum: Option<String>,
        /// Run degrees 1..=N and report margin per degree.
        #[arg(long)]
        sweep_max_degree: Option<u32>,
        /// Run over N sampled pairs and emit the pair table.
        #[arg(long)]
        pairs: Option<usize>,
        /// Write an SVG plot of a degree sweep here.
        #[arg(long)]
        plot: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Verify the retract laws for a polynomial self-map file.
    Retract {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(64)
                }
            };
        }
    };

    if let Ok(threads) = std::env::var("HOLOEXT_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }

    let result = match cli.command {
        Command::Pick { cmd } => match cmd {
            PickCmd::Solve {
                input,
                tol,
                sweep_scales,
                plot,
                out,
            } => commands::pick_solve(&input, tol, sweep_scales.as_deref(), plot.as_deref(), &out),
        },
        Command::Model { cmd } => match cmd {
            ModelCmd::Check { input, seed, out } => commands::model_check(&input, seed, &out),
        },
        Command::Extremal { cmd } => match cmd {
            ExtremalCmd::Cara {
                input,
                degree,
                budget,
                seed,
                out,
            } => commands::extremal_cara(&input, degree, budget, seed, &out),
            ExtremalCmd::Koba { input, out } => commands::extremal_koba(&input, &out),
        },
        Command::Domain { cmd } => match cmd {
            DomainCmd::Slc {
                input,
                count,
                seed,
                tol,
                tangent_samples,
                out,
            } => commands::domain_slc(&input, count, seed, tol, tangent_samples, &out),
        },
        Command::Variety { cmd } => match cmd {
            VarietyCmd::Geodesic { spec, pairs, tol, out } => {
                commands::variety_geodesic(&spec, pairs, tol, &out)
            }
            VarietyCmd::Certificate {
                spec,
                degree,
                budget,
                datum,
                sweep_max_degree,
                pairs,
                plot,
                out,
            } => commands::variety_certificate(
                &spec,
                degree,
                budget,
                datum.as_deref(),
                sweep_max_degree,
                pairs,
                plot.as_deref(),
                &out,
            ),
            VarietyCmd::Retract { input, out } => commands::variety_retract(&input, &out),
        },
        Command::Selftest => selftest::run(),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("holoext: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
