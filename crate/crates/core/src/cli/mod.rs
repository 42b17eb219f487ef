//! Command-line front end. Every command prints one JSON [`RunReport`]
//! (or CSV where noted) on stdout; failures print a JSON error object on
//! stderr and exit with 2 (usage/parse), 3 (model invariant) or 4
//! (numerical failure).

mod commands;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use report::{CliError, ErrorKind, RunReport};

#[derive(Debug, Parser)]
#[command(name = "relobs", version, about = "Galilean-invariant observables, center-of-mass reduction and few-body spectra")]
pub struct Cli {
    /// Add wall-clock timing to the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariance verdicts under translations, rotations and boosts.
    Classify(ClassifyArgs),
    /// Rewrite an operator in frame-map coordinates and project out the center of mass.
    Reduce(ReduceArgs),
    /// Rotational invariants built from the internal vectors of a frame map.
    Invariants(InvariantsArgs),
    /// Normal modes of a harmonic chain.
    Modes(ModesArgs),
    /// Lowest eigenvalues of a grid model.
    Spectrum(SpectrumArgs),
    /// Finite-size scaling of the center-of-mass ladder.
    Scaling(ScalingArgs),
    /// Born-Oppenheimer levels against the exact internal spectrum.
    Bo(BoArgs),
    /// Broadened Lehmann spectral function.
    SpectralFunction(SpectralFunctionArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long)]
    pub expr: String,
    /// Skip the rotation test.
    #[arg(long)]
    pub no_rotations: bool,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long)]
    pub system: PathBuf,
    /// `jacobi` or a frame-map JSON file.
    #[arg(long, default_value = "jacobi")]
    pub map: String,
    #[arg(long)]
    pub expr: String,
    /// Total momentum of the projected sector, one rational per axis.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sector_momentum: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct InvariantsArgs {
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long, default_value = "jacobi")]
    pub map: String,
    #[arg(long, default_value_t = 2)]
    pub degree: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct ModesArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpectrumVariant {
    Full,
    Reduced,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_enum, default_value = "reduced")]
    pub variant: SpectrumVariant,
    /// Total-momentum index for the full variant.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub sector: isize,
    /// Defaults to the model's solver count.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "10,20,40")]
    pub lengths: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct BoArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    pub mass_ratios: Vec<f64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SpectralFunctionArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value = "reduced")]
    pub variant: String,
    #[arg(long, default_value = "rel-position")]
    pub probe: String,
    /// Gaussian width; defaults to 1% of the pole span.
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub omega_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// States per sector; defaults to the model's solver count.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Parses `args` (program name first), runs the command and writes its
/// output. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = write!(out, "{e}");
                return if e.kind() == K::DisplayHelpOnMissingArgumentOrSubcommand { 2 } else { 0 };
            }
            let failure = CliError::new(ErrorKind::Usage, e.to_string().trim_end());
            let _ = writeln!(err, "{}", failure.to_json());
            return failure.exit_code();
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match commands::execute(&cli, echo) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(failure) => {
            let _ = writeln!(err, "{}", failure.to_json());
            failure.exit_code()
        }
    }
}
