use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use macrolens::catalog::{Family, FamilyParams};
use macrolens::error::{Error, Result};
use macrolens::figures::{run_figure, FigureOptions};
use macrolens::fock::{Sign, Truncation};
use macrolens::sweep::{compute, sweep, ComputeRequest, DetectorChoice, SweepSpec};
use macrolens::table::{OutputFormat, ResultTable};

#[derive(Parser)]
#[command(
    name = "macrolens",
    version,
    about = "Objective and subjective macroscopicity of optical superposition states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Css,
    Psv,
    Dfs,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetectorArg {
    Homodyne,
    Pnrd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Subcommand)]
enum Command {
    /// Write the data table behind a figure (1-8 or an alias such as fig-css).
    Figure {
        id: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Points along each parameter axis.
        #[arg(long, default_value_t = 61)]
        points: usize,
    },
    /// Evaluate a single state under a single detector.
    #[command(group(ArgGroup::new("param").required(true).args(["alpha", "r"])))]
    Compute {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        r: Option<f64>,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, value_enum)]
        detector: DetectorArg,
        /// Homodyne phase in radians; defaults to the state's recommended phase.
        #[arg(long, allow_negative_numbers = true)]
        angle: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        sigma: f64,
        /// Which superposition the sizes refer to.
        #[arg(long, value_enum, default_value = "minus")]
        sign: SignArg,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run a sweep described by a key = value config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
}

fn emit(table: &ResultTable, out: Option<&PathBuf>, format: OutputFormat) -> Result<()> {
    match out {
        Some(path) => table.write(path, format),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(table.render(format).as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let truncation = Truncation::from_env()?;
    match cli.command {
        Command::Figure {
            id,
            out,
            format,
            points,
        } => {
            let options = FigureOptions {
                points,
                truncation,
                ..FigureOptions::default()
            };
            emit(&run_figure(&id, &options)?, out.as_ref(), format.into())
        }
        Command::Compute {
            family,
            alpha,
            r,
            m,
            detector,
            angle,
            sigma,
            sign,
            format,
        } => {
            let family = match family {
                FamilyArg::Css => Family::Css,
                FamilyArg::Psv => Family::Psv,
                FamilyArg::Dfs => Family::Dfs,
            };
            let value = match (family, alpha, r) {
                (Family::Psv, None, Some(r)) => r,
                (Family::Css | Family::Dfs, Some(a), None) => a,
                _ => {
                    let want = if family == Family::Psv {
                        "--r"
                    } else {
                        "--alpha"
                    };
                    return Err(Error::InvalidArgument(format!("{family} takes {want}")));
                }
            };
            let detector = match detector {
                DetectorArg::Homodyne => DetectorChoice::Homodyne,
                DetectorArg::Pnrd => DetectorChoice::Pnrd,
            };
            let mut req = ComputeRequest::new(FamilyParams::new(family, value, m), detector, sigma);
            req.angle = angle;
            req.truncation = truncation;
            req.sign = match sign {
                SignArg::Plus => Sign::Plus,
                SignArg::Minus => Sign::Minus,
            };
            emit(&compute(&req)?, None, format.into())
        }
        Command::Sweep { config } => {
            let mut spec = SweepSpec::from_file(&config)?;
            spec.truncation = truncation;
            let table = sweep(&spec)?;
            emit(&table, spec.output.as_ref(), spec.format)
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "error: kind={} message={}",
                e.kind(),
                e.to_string().replace('\n', " ")
            );
            ExitCode::FAILURE
        }
    }
}
