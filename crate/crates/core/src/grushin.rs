//! Heat kernel of the Grushin operator `∂²_x + x² ∂²_y`.
//!
//! A partial Fourier transform in `y` turns the operator into the
//! oscillator `∂²_x - a² x²` with `a` the dual variable, so
//! `K = (1/2π) ∫ e^{i(y-y')a} H_{|a|}(t, x, x') da`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oscillator::{heat_kernel, HeatKernelVariant, OscillatorParams};
use crate::par;
use crate::quadrature::simpson_closed;

/// Smallest node count accepted for the `a` quadrature.
pub const MIN_NODES: usize = 129;

/// Integrand at `±a_max` must be below this fraction of its peak.
pub const DECAY_GUARD: f64 = 1e-12;

/// Relative change allowed when the node count is doubled.
pub const REFINEMENT_TOLERANCE: f64 = 1e-8;

/// Imaginary part tolerated in the result before it is reported as an error.
pub const IMAGINARY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrushinPoint {
    pub x: f64,
    pub y: f64,
    pub xp: f64,
    pub yp: f64,
    pub t: f64,
}

impl GrushinPoint {
    pub fn new(t: f64, x: f64, y: f64, xp: f64, yp: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!(
                "Grushin time must be positive, got {t}"
            )));
        }
        if ![x, y, xp, yp].iter().all(|v| v.is_finite()) {
            return Err(Error::Domain("Grushin coordinates must be finite".into()));
        }
        Ok(Self { x, y, xp, yp, t })
    }

    /// The point with `(x, y)` and `(x', y')` exchanged.
    pub fn swapped(self) -> Self {
        Self {
            x: self.xp,
            y: self.yp,
            xp: self.x,
            yp: self.y,
            t: self.t,
        }
    }

    /// Both `y` coordinates moved by `dy`.
    pub fn shifted(self, dy: f64) -> Self {
        Self {
            y: self.y + dy,
            yp: self.yp + dy,
            ..self
        }
    }
}

/// `H_{|a|}(t, x, x')`, continued to `a = 0` by the free heat kernel.
pub fn oscillator_factor(a: f64, t: f64, x: f64, xp: f64) -> Result<f64> {
    if a == 0.0 {
        let d = x - xp;
        return Ok((-d * d / (4.0 * t)).exp() / (4.0 * PI * t).sqrt());
    }
    heat_kernel(
        HeatKernelVariant::Mehler,
        OscillatorParams::new(a.abs(), t)?,
        x,
        xp,
    )
}

/// `(1/2π) e^{i(y-y')a} H_{|a|}` on `m` nodes spanning `[-a_max, a_max]`.
fn integrand(p: &GrushinPoint, a_max: f64, m: usize) -> Result<Vec<Complex64>> {
    let h = 2.0 * a_max / (m - 1) as f64;
    let dy = p.y - p.yp;
    par::map_indices(m, |j| -> Result<Complex64> {
        // symmetric node placement keeps a = 0 exact for odd m
        let a = if 2 * j + 1 == m {
            0.0
        } else {
            (j as f64 - 0.5 * (m - 1) as f64) * h
        };
        let h_a = oscillator_factor(a, p.t, p.x, p.xp)?;
        Ok(Complex64::from_polar(h_a / (2.0 * PI), dy * a))
    })
    .into_iter()
    .collect()
}

/// One Simpson pass with `m` nodes, without the refinement check. The
/// imaginary part is kept so callers can inspect it.
pub fn grushin_quadrature(p: &GrushinPoint, a_max: f64, m: usize) -> Result<Complex64> {
    if m < 3 {
        return Err(Error::Domain(format!("need at least 3 nodes, got {m}")));
    }
    let values = integrand(p, a_max, m)?;
    let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let ends = values[0].norm().max(values[m - 1].norm());
    if ends > DECAY_GUARD * peak {
        return Err(Error::Decay(format!(
            "integrand at a = ±{a_max} is {:.3e} of its peak; raise a_max",
            ends / peak
        )));
    }
    simpson_closed(&values, 2.0 * a_max / (m - 1) as f64)
}

/// Grushin heat kernel by Simpson quadrature over `a ∈ [-a_max, a_max]`
/// with `n_a` nodes (odd, at least [`MIN_NODES`]). The value is checked
/// against a run with the node spacing halved.
pub fn grushin_heat_kernel(p: GrushinPoint, a_max: f64, n_a: usize) -> Result<f64> {
    if !(a_max > 0.0) || !a_max.is_finite() {
        return Err(Error::Domain(format!(
            "a_max must be positive, got {a_max}"
        )));
    }
    if n_a < MIN_NODES || n_a.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "need an odd node count of at least {MIN_NODES}, got {n_a}"
        )));
    }
    let coarse = grushin_quadrature(&p, a_max, n_a)?;
    let fine = grushin_quadrature(&p, a_max, 2 * n_a - 1)?;
    let change = (fine - coarse).norm() / fine.norm();
    if !(change <= REFINEMENT_TOLERANCE) {
        return Err(Error::NoConvergence(format!(
            "doubling the a nodes moved the kernel by {change:.3e} (n_a = {n_a})"
        )));
    }
    if fine.im.abs() > IMAGINARY_TOLERANCE * fine.norm().max(1.0) {
        return Err(Error::NoConvergence(format!(
            "imaginary part {:.3e} left after integration",
            fine.im
        )));
    }
    Ok(fine.re)
}

/// Smallest `a_max = 2^k` (at most `2^12`) meeting [`DECAY_GUARD`] at `p`.
pub fn fit_a_max(p: &GrushinPoint) -> Result<f64> {
    let peak =
        oscillator_factor(0.0, p.t, p.x, p.xp)?.max(oscillator_factor(1e-3, p.t, p.x, p.xp)?);
    let mut a_max: f64 = 1.0;
    while a_max <= 4096.0 {
        // |integrand| = H_{|a|}/2π, decreasing for large a
        if oscillator_factor(a_max, p.t, p.x, p.xp)? <= DECAY_GUARD * peak {
            return Ok(a_max);
        }
        a_max *= 2.0;
    }
    Err(Error::Decay(format!(
        "H_a at (t, x, x') = ({}, {}, {}) does not fall below {DECAY_GUARD:.0e} of its peak by a = 4096",
        p.t, p.x, p.xp
    )))
}
