//! Centered finite-difference residuals of the four evolution equations.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::SampledFunction;

/// Which evolution equation a residual is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorTag {
    /// `u_t = u_xx - a^2 x^2 u`
    HeatHo,
    /// `U_t = U_X`
    HeatDirac,
    /// `V_tt = V_X`
    WaveDirac,
    /// `v_tt = v_xx - a^2 x^2 v`
    WaveHo,
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorTag::HeatHo => "heat_ho",
            OperatorTag::HeatDirac => "heat_dirac",
            OperatorTag::WaveDirac => "wave_dirac",
            OperatorTag::WaveHo => "wave_ho",
        })
    }
}

impl FromStr for OperatorTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heat_ho" => Ok(OperatorTag::HeatHo),
            "heat_dirac" => Ok(OperatorTag::HeatDirac),
            "wave_dirac" => Ok(OperatorTag::WaveDirac),
            "wave_ho" => Ok(OperatorTag::WaveHo),
            other => Err(Error::Domain(format!("unknown operator tag {other:?}"))),
        }
    }
}

/// A solution sampled at arbitrary times on a fixed grid.
pub trait TimeField {
    fn at(&self, t: f64) -> Result<SampledFunction>;
}

impl<F> TimeField for F
where
    F: Fn(f64) -> Result<SampledFunction>,
{
    fn at(&self, t: f64) -> Result<SampledFunction> {
        self(t)
    }
}

/// Pointwise residual of `tag` at time `t`, from slices at `t - dt`, `t`,
/// `t + dt`.
///
/// Second-order centered stencils in both `x` and `t`. Only interior points
/// carry a residual; the two boundary samples are set to zero.
pub fn fd_residual(
    field: &impl TimeField,
    tag: OperatorTag,
    t: f64,
    dt: f64,
    a: f64,
) -> Result<SampledFunction> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Domain(format!(
            "time step must be positive, got {dt}"
        )));
    }
    let before = field.at(t - dt)?;
    let now = field.at(t)?;
    let after = field.at(t + dt)?;
    let grid = *now.grid();
    if grid.len() < 16 {
        return Err(Error::InvalidGrid(format!(
            "residual stencils need at least 16 points, got {}",
            grid.len()
        )));
    }
    for slice in [&before, &after] {
        if !slice.grid().same_as(&grid) {
            return Err(Error::GridMismatch("time slices on different grids".into()));
        }
    }
    let h = grid.spacing();
    let (p, u, q) = (before.values(), now.values(), after.values());
    let n = grid.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for j in 1..n - 1 {
        let x = grid.point(j);
        let d1 = (u[j + 1] - u[j - 1]) / (2.0 * h);
        let d2 = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (h * h);
        let dt1 = (q[j] - p[j]) / (2.0 * dt);
        let dt2 = (q[j] - 2.0 * u[j] + p[j]) / (dt * dt);
        let oscillator = d2 - a * a * x * x * u[j];
        out[j] = match tag {
            OperatorTag::HeatHo => dt1 - oscillator,
            OperatorTag::HeatDirac => dt1 - d1,
            OperatorTag::WaveDirac => dt2 - d1,
            OperatorTag::WaveHo => dt2 - oscillator,
        };
    }
    SampledFunction::new(grid, out)
}

/// Least-squares slope of `log(error)` against `log(step)`.
pub fn convergence_order(steps: &[f64], errors: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = steps
        .iter()
        .zip(errors)
        .map(|(&h, &e)| (h.ln(), e.ln()))
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn constant_field_has_zero_heat_dirac_residual() {
        let g = make_grid(-4.0, 4.0, 64).unwrap();
        let field = |_t: f64| SampledFunction::from_real_fn(g, |_| 3.0);
        let r = fd_residual(&field, OperatorTag::HeatDirac, 0.5, 0.1, 1.0).unwrap();
        assert_eq!(r.sup_norm(), 0.0);
    }

    #[test]
    fn transport_residual_is_second_order() {
        // U(t, X) = U0(t + X) with a smooth bump
        let bump = |x: f64| (-(x - 0.5) * (x - 0.5)).exp() * (1.0 + 0.3 * x.sin());
        let mut steps = Vec::new();
        let mut errs = Vec::new();
        for n in [100usize, 200, 400, 800] {
            let g = make_grid(-8.0, 8.0, n).unwrap();
            let h = g.spacing();
            let field = move |t: f64| SampledFunction::from_real_fn(g, move |x| bump(t + x));
            let r = fd_residual(&field, OperatorTag::HeatDirac, 0.3, 0.5 * h, 0.0).unwrap();
            steps.push(h);
            errs.push(r.sup_norm());
        }
        let order = convergence_order(&steps, &errs);
        assert!(order > 1.9 && order < 2.1, "order {order}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = make_grid(-1.0, 1.0, 8).unwrap();
        let field = |_t: f64| Ok(SampledFunction::zeros(g));
        assert!(matches!(
            fd_residual(&field, OperatorTag::WaveHo, 0.0, 0.1, 1.0),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            fd_residual(&field, OperatorTag::WaveHo, 0.0, 0.0, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn tag_round_trip() {
        for tag in ["heat_ho", "heat_dirac", "wave_dirac", "wave_ho"] {
            assert_eq!(tag.parse::<OperatorTag>().unwrap().to_string(), tag);
        }
    }
}
