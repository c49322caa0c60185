//! Command-line configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hodirac::grid::Grid1D;
use hodirac::oscillator::HeatKernelVariant;
use hodirac::verify::Suite;

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "hodirac",
    version,
    about = "Heat and wave propagators for the harmonic oscillator and d/dX"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Log progress and guard warnings to stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Propagate data by the oscillator heat flow.
    HeatHo(Propagate),
    /// Oscillator wave flow with zero initial value and the data as velocity.
    WaveHo(Propagate),
    /// Heat flow of d/dX: translation by t.
    HeatDirac(Propagate),
    /// Wave flow of d/dX with zero initial value and the data as velocity.
    WaveDirac(Propagate),
    /// Dump the oscillator heat kernel on a grid.
    Kernel(KernelArgs),
    /// Dump the Grushin heat kernel on a grid.
    GrushinHeat(GrushinArgs),
    /// Run the verification suite and write its report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Kernel,
    Spectral,
    Intertwine,
    Oracle,
}

/// `min,max,n`.
pub fn parse_grid(text: &str) -> std::result::Result<Grid1D, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(format!("expected min,max,n, got {text:?}"));
    };
    let lo: f64 = lo.parse().map_err(|_| format!("bad grid minimum {lo:?}"))?;
    let hi: f64 = hi.parse().map_err(|_| format!("bad grid maximum {hi:?}"))?;
    let n: usize = n.parse().map_err(|_| format!("bad grid size {n:?}"))?;
    Grid1D::new(lo, hi, n).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct Propagate {
    /// Oscillator coupling, used by the oscillator flows.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long)]
    pub t: f64,
    /// Grid of the built-in Gaussian data; ignored with --input.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, default_value = "-10,10,512")]
    pub grid: Grid1D,
    /// mehler, paper_literal or paper_corrected. Picks the kernel of the
    /// kernel route; for wave-ho, paper_literal selects the printed
    /// frequency-side form.
    #[arg(long, default_value = "mehler")]
    pub variant: HeatKernelVariant,
    #[arg(long, value_enum, default_value_t = Route::Kernel)]
    pub route: Route,
    /// CSV with columns x,re[,im]. Without it the data is exp(-x^2).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    #[arg(long, default_value = "mehler")]
    pub variant: HeatKernelVariant,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub t: f64,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Grid1D,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GrushinArgs {
    #[arg(long)]
    pub t: f64,
    /// Both x and x' range over this grid.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Grid1D,
    /// y - y'; the kernel depends on y only through it.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub dy: f64,
    /// Simpson nodes in the dual variable (odd, at least 129).
    #[arg(long, default_value_t = 513)]
    pub nodes: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// all, kernels, intertwining, dirac, special, wave or grushin.
    #[arg(long, default_value = "all")]
    pub suite: Suite,
    /// Report CSV; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "--{name} must be positive, got {v}"
        )))
    }
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "--{name} must be non-negative, got {v}"
        )))
    }
}

impl Command {
    /// Checks the field constraints clap cannot express.
    pub fn validate(&self) -> Result<()> {
        match self {
            Command::HeatHo(p) | Command::WaveHo(p) => {
                positive("a", p.a)?;
                non_negative("t", p.t)
            }
            Command::HeatDirac(p) | Command::WaveDirac(p) => non_negative("t", p.t),
            Command::Kernel(k) => {
                positive("a", k.a)?;
                positive("t", k.t)
            }
            Command::GrushinHeat(g) => {
                positive("t", g.t)?;
                if !g.dy.is_finite() {
                    return Err(CliError::Config(format!(
                        "--dy must be finite, got {}",
                        g.dy
                    )));
                }
                Ok(())
            }
            Command::Verify(_) => Ok(()),
        }
    }
}
