//! CSV formats: sampled functions (`x,re,im`), kernel dumps (`x,xp,value`)
//! and verification reports.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use hodirac::grid::{Grid1D, SampledFunction};
use hodirac::report::{VerificationReport, REPORT_HEADER};

use crate::error::{CliError, Result};

/// Relative tolerance on the spacing of input abscissae.
pub const SPACING_TOLERANCE: f64 = 1e-9;

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Reads `x,re,im` (the `im` column is optional) on a uniform grid.
pub fn read_function_csv(path: &Path) -> Result<SampledFunction> {
    parse_function_csv(open(path)?, &path.display().to_string())
}

/// As [`read_function_csv`], from any reader; `source` names it in errors.
pub fn parse_function_csv(input: impl Read, source: &str) -> Result<SampledFunction> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| CliError::Format(format!("{source}: {e}")))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let (Some(ix), Some(ire)) = (column("x"), column("re")) else {
        return Err(CliError::Format(format!(
            "{source}: header must name columns x and re (optionally im), found {:?}",
            headers.iter().collect::<Vec<_>>()
        )));
    };
    let iim = column("im");
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for (k, record) in reader.records().enumerate() {
        // header is line 1
        let line = k + 2;
        let record = record.map_err(|e| CliError::Format(format!("{source}: line {line}: {e}")))?;
        let field = |i: usize| -> Result<f64> {
            let text = record.get(i).unwrap_or("");
            text.parse::<f64>().map_err(|_| {
                CliError::Format(format!("{source}: line {line}: cannot parse {text:?}"))
            })
        };
        xs.push(field(ix)?);
        let im = match iim {
            Some(i) if !record.get(i).unwrap_or("").is_empty() => field(i)?,
            _ => 0.0,
        };
        values.push(Complex64::new(field(ire)?, im));
    }
    if xs.len() < 2 {
        return Err(CliError::Format(format!(
            "{source}: need at least two samples"
        )));
    }
    let h = xs[1] - xs[0];
    if h.is_nan() || h <= 0.0 {
        return Err(CliError::NonUniform {
            file: source.into(),
            line: 3,
        });
    }
    for (k, pair) in xs.windows(2).enumerate() {
        if ((pair[1] - pair[0]) - h).abs() > SPACING_TOLERANCE * h {
            return Err(CliError::NonUniform {
                file: source.into(),
                line: k + 3,
            });
        }
    }
    Ok(SampledFunction::new(fit_grid(&xs)?, values)?)
}

/// Grid whose points reproduce `xs`, bit for bit when some spacing near
/// the mean one allows it. Points are `x_min + j·h` with
/// `h = (x_max − x_min)/n`, so we first look for `h`, then for an `x_max`
/// that yields it exactly.
fn fit_grid(xs: &[f64]) -> Result<Grid1D> {
    let n = xs.len();
    let x0 = xs[0];
    let mean = (xs[n - 1] - x0) / (n - 1) as f64;
    let reproduces = |h: f64| xs.iter().enumerate().all(|(j, &x)| x0 + j as f64 * h == x);
    let mut up = mean;
    let mut down = mean;
    for _ in 0..64 {
        for h in [up, down] {
            if reproduces(h) {
                if let Some(g) = grid_with_spacing(x0, h, n)? {
                    return Ok(g);
                }
            }
        }
        up = up.next_up();
        down = down.next_down();
    }
    Ok(Grid1D::new(x0, x0 + mean * n as f64, n)?)
}

/// Bisects for `x_max` with `(x_max − x_min)/n == h` exactly.
fn grid_with_spacing(x_min: f64, h: f64, n: usize) -> Result<Option<Grid1D>> {
    let spacing = |x_max: f64| (x_max - x_min) / n as f64;
    let span = h * n as f64;
    let (mut lo, mut hi) = (x_min + span * (1.0 - 1e-9), x_min + span * (1.0 + 1e-9));
    if spacing(lo) > h || spacing(hi) < h {
        return Ok(None);
    }
    loop {
        for end in [lo, hi] {
            if spacing(end) == h {
                return Ok(Some(Grid1D::new(x_min, end, n)?));
            }
        }
        let mid = lo + (hi - lo) / 2.0;
        if mid == lo || mid == hi {
            return Ok(None);
        }
        if spacing(mid) < h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// 17 significant digits, enough to read back the same double.
fn exact(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_function_csv(f: &SampledFunction, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "re", "im"]).map_err(CliError::from)?;
    let grid = f.grid();
    for (j, v) in f.values().iter().enumerate() {
        w.write_record([exact(grid.point(j)), exact(v.re), exact(v.im)])
            .map_err(CliError::from)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// `x,xp,value` rows, `x` varying slowest.
pub fn write_kernel_csv(grid: &Grid1D, values: &[f64], out: impl Write) -> Result<()> {
    let n = grid.len();
    if values.len() != n * n {
        return Err(CliError::Config(format!(
            "kernel table has {} entries for a {n}-point grid",
            values.len()
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "xp", "value"])
        .map_err(CliError::from)?;
    for i in 0..n {
        for j in 0..n {
            w.write_record([
                exact(grid.point(i)),
                exact(grid.point(j)),
                exact(values[i * n + j]),
            ])
            .map_err(CliError::from)?;
        }
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// Report header followed by one line per check.
pub fn write_report(reports: &[VerificationReport], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "{REPORT_HEADER}")?;
    for r in reports {
        writeln!(out, "{}", r.to_csv_line())?;
    }
    out.flush()
}
