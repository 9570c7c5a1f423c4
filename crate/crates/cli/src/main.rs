mod commands;
mod schemes;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "geomsub",
    version,
    about = "Subdivision and multiscale transforms for manifold-valued sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
pub struct SchemeArgs {
    /// Mask file (JSON).
    #[arg(long, conflicts_with = "scheme")]
    pub mask: Option<String>,
    /// chaikin | midpoint | fourpoint:<omega> | lane-riesenfeld:<k>
    #[arg(long)]
    pub scheme: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Refine a sequence.
    Subdivide {
        #[arg(long)]
        input: String,
        #[command(flatten)]
        scheme: SchemeArgs,
        /// linear | frechet | logexp | logexp-floor | logexp-edge | projection | geodesic
        #[arg(long)]
        variant: Option<String>,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        #[arg(long)]
        output: Option<String>,
        /// Attach the dyadic parameter of each output point.
        #[arg(long)]
        emit_params: bool,
    },
    /// Contractivity analysis of a mask; prints a JSON report.
    Analyze {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value_t = geomsub::analysis::DEFAULT_MAX_POWER)]
        max_power: usize,
    },
    /// Build a detail pyramid. `--scheme haar` or an interpolatory mask.
    Decompose {
        #[arg(long)]
        input: String,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        variant: Option<String>,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long)]
        output: Option<String>,
        /// Leave out stored base points; they are recomputed on load.
        #[arg(long)]
        compact: bool,
    },
    /// Rebuild a sequence from a pyramid.
    Reconstruct {
        #[arg(long)]
        input: String,
        #[arg(long)]
        output: Option<String>,
        /// Print the largest distance to this sequence.
        #[arg(long)]
        reference: Option<String>,
    },
    /// Zero small details of a pyramid.
    Compress {
        #[arg(long)]
        input: String,
        #[arg(long, conflicts_with = "keep_top", required_unless_present = "keep_top")]
        threshold: Option<f64>,
        /// Fraction of the largest details to keep.
        #[arg(long)]
        keep_top: Option<f64>,
        /// Per-level factor applied to the threshold.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long)]
        output: Option<String>,
    },
    /// Estimate Hölder regularity from detail decay.
    Regularity {
        #[arg(long)]
        input: String,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        variant: Option<String>,
        #[arg(long, default_value_t = 8)]
        levels: usize,
    },
    /// Measure how perturbations of a pyramid propagate to the reconstruction.
    Stability {
        #[arg(long)]
        input: String,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        variant: Option<String>,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.5)]
        mu: f64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(geomsub::Error),
}

impl From<geomsub::Error> for CliError {
    fn from(e: geomsub::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

pub fn read_text(path: &str) -> Result<String, CliError> {
    if path == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Input(format!("stdin: {e}")))
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
    }
}

/// A reader closing the pipe early is not an error.
pub fn stdout(text: &str) -> Result<(), CliError> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Input(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

/// Writes to `path`, or stdout when absent or `-`.
pub fn write_text(path: Option<&str>, text: &str) -> Result<(), CliError> {
    match path {
        None | Some("-") => stdout(text),
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Input(format!("{p}: {e}"))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Subdivide {
            input,
            scheme,
            variant,
            rounds,
            output,
            emit_params,
        } => commands::subdivide(
            &input,
            &scheme,
            variant.as_deref(),
            rounds,
            output.as_deref(),
            emit_params,
        ),
        Command::Analyze { scheme, max_power } => commands::analyze(&scheme, max_power),
        Command::Decompose {
            input,
            scheme,
            variant,
            levels,
            output,
            compact,
        } => commands::decompose(&input, &scheme, variant.as_deref(), levels, output.as_deref(), compact),
        Command::Reconstruct {
            input,
            output,
            reference,
        } => commands::reconstruct(&input, output.as_deref(), reference.as_deref()),
        Command::Compress {
            input,
            threshold,
            keep_top,
            scale,
            output,
        } => commands::compress(&input, threshold, keep_top, scale, output.as_deref()),
        Command::Regularity {
            input,
            scheme,
            variant,
            levels,
        } => commands::regularity(&input, &scheme, variant.as_deref(), levels),
        Command::Stability {
            input,
            scheme,
            variant,
            levels,
            epsilon,
            mu,
            trials,
            seed,
        } => {
            let cfg = geomsub::multiscale::StabilityConfig {
                levels,
                epsilon,
                mu,
                trials,
                seed,
            };
            commands::stability(&input, &scheme, variant.as_deref(), &cfg)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    std::panic::set_hook(Box::new(|info| {
        eprintln!("internal error: {info}");
        std::process::exit(4);
    }));
    geomsub::tolerance::init_from_env();

    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
