//! Subcommand execution.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use hodirac::dirac::{heat_dirac, spectral_wave_oracle_dirac, wave_dirac};
use hodirac::grid::{Grid1D, SampledFunction};
use hodirac::grushin::{fit_a_max, grushin_heat_kernel, GrushinPoint};
use hodirac::hermite::{expand, heat_oracle, wave_oracle, DEFAULT_MODES};
use hodirac::oscillator::{
    heat_ho_kernel_route, heat_ho_spectral_route, heat_kernel, heat_via_intertwining, wave_ho,
    HeatKernelVariant, OscillatorParams, WaveForm,
};
use hodirac::par;
use hodirac::verify::run_suite;

use crate::config::{Command, GrushinArgs, KernelArgs, Propagate, Route, VerifyArgs};
use crate::error::{CliError, Result};
use crate::io::{read_function_csv, write_function_csv, write_kernel_csv, write_report};

/// Exit status of a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status for bad configuration, unreadable input or a refused computation.
pub const EXIT_ERROR: i32 = 1;
/// Exit status of `verify` when some check fails.
pub const EXIT_CHECK_FAILED: i32 = 2;

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn initial_data(p: &Propagate) -> Result<SampledFunction> {
    match &p.input {
        Some(path) => read_function_csv(path),
        None => Ok(SampledFunction::from_real_fn(p.grid, |x| (-x * x).exp())?),
    }
}

fn propagate(command: &Command, p: &Propagate) -> Result<SampledFunction> {
    let u0 = initial_data(p)?;
    let out = match command {
        Command::HeatHo(_) => {
            let params = OscillatorParams::new(p.a, p.t)?;
            match p.route {
                Route::Kernel => heat_ho_kernel_route(&u0, params, p.variant)?,
                Route::Spectral => heat_ho_spectral_route(&u0, params)?,
                Route::Intertwine => heat_via_intertwining(&u0, params)?,
                Route::Oracle => heat_oracle(&expand(&u0, p.a, DEFAULT_MODES)?, p.t)?,
            }
        }
        Command::WaveHo(_) => {
            let params = OscillatorParams::new(p.a, p.t)?;
            match (p.route, p.variant) {
                (Route::Oracle, _) => wave_oracle(&expand(&u0, p.a, DEFAULT_MODES)?, p.t)?,
                (_, HeatKernelVariant::PaperLiteral) => {
                    wave_ho(&u0, params, WaveForm::PaperLiteral)?
                }
                _ => wave_ho(&u0, params, WaveForm::Corrected)?,
            }
        }
        Command::HeatDirac(_) => heat_dirac(&u0, p.t)?,
        Command::WaveDirac(_) => match p.route {
            Route::Oracle => spectral_wave_oracle_dirac(&u0, p.t)?,
            _ => wave_dirac(&u0, p.t)?,
        },
        _ => unreachable!("only propagation commands carry Propagate"),
    };
    Ok(out)
}

/// `K(x_i, x_j)` over `grid²`, row-major.
fn table(
    grid: &Grid1D,
    entry: impl Fn(f64, f64) -> hodirac::error::Result<f64> + Sync,
) -> Result<Vec<f64>> {
    let n = grid.len();
    let values = par::map_indices(n * n, |k| entry(grid.point(k / n), grid.point(k % n)));
    Ok(values
        .into_iter()
        .collect::<hodirac::error::Result<Vec<_>>>()?)
}

fn kernel(k: &KernelArgs) -> Result<()> {
    let params = OscillatorParams::new(k.a, k.t)?;
    let values = table(&k.grid, |x, xp| heat_kernel(k.variant, params, x, xp))?;
    write_kernel_csv(&k.grid, &values, sink(k.output.as_deref())?)
}

fn grushin(g: &GrushinArgs) -> Result<()> {
    let values = table(&g.grid, |x, xp| {
        let p = GrushinPoint::new(g.t, x, g.dy, xp, 0.0)?;
        grushin_heat_kernel(p, fit_a_max(&p)?, g.nodes)
    })?;
    write_kernel_csv(&g.grid, &values, sink(g.output.as_deref())?)
}

fn verify(v: &VerifyArgs) -> Result<i32> {
    let reports = run_suite(v.suite);
    let failed = reports.iter().filter(|r| r.failed()).count();
    write_report(&reports, sink(v.output.as_deref())?).map_err(|e| CliError::Io(e.to_string()))?;
    log::info!(
        "verify --suite {}: {} checks, {failed} failing",
        v.suite,
        reports.len()
    );
    Ok(if failed > 0 {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    })
}

/// Runs one subcommand and returns its exit status. Errors map to
/// [`EXIT_ERROR`] in the binary.
pub fn run(command: &Command) -> Result<i32> {
    command.validate()?;
    match command {
        Command::HeatHo(p) | Command::WaveHo(p) | Command::HeatDirac(p) | Command::WaveDirac(p) => {
            let out = propagate(command, p)?;
            write_function_csv(&out, sink(p.output.as_deref())?)?;
        }
        Command::Kernel(k) => kernel(k)?,
        Command::GrushinHeat(g) => grushin(g)?,
        Command::Verify(v) => return verify(v),
    }
    Ok(EXIT_OK)
}
