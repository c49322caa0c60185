//! Continuous Fourier transform with the symmetric `1/sqrt(2π)` normalization,
//!
//! ```text
//! (F f)(ξ)    = (2π)^{-1/2} ∫ e^{-ixξ} f(x) dx
//! (F^-1 g)(x) = (2π)^{-1/2} ∫ e^{ iξx} g(ξ) dξ
//! ```
//!
//! realized by an FFT with explicit amplitude and `e^{-iξ x_min}` phase
//! factors. The frequency grid is centered (`ξ = 0` is sample `n/2`) and
//! reciprocal to the spatial grid: `Δξ = 2π / (n h)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, SampledFunction};
use crate::par;

/// Relative edge magnitude above which inputs count as not decayed.
pub const DECAY_THRESHOLD: f64 = 1e-10;

/// Samples of a transform on the frequency grid reciprocal to `x_grid`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    xi_grid: Grid1D,
    x_grid: Grid1D,
    values: Vec<Complex64>,
}

impl SpectralFunction {
    pub fn new(x_grid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        let xi_grid = reciprocal_grid(&x_grid)?;
        if values.len() != xi_grid.len() {
            return Err(Error::LengthMismatch {
                expected: xi_grid.len(),
                got: values.len(),
            });
        }
        if let Some(j) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFinite(j));
        }
        Ok(Self {
            xi_grid,
            x_grid,
            values,
        })
    }

    /// Samples `g(ξ_k)` of a closed-form spectrum.
    pub fn from_fn(x_grid: Grid1D, g: impl Fn(f64) -> Complex64) -> Result<Self> {
        let n = x_grid.len();
        let dxi = reciprocal_spacing(&x_grid);
        let values = (0..n).map(|k| g(xi_index(k, n, dxi))).collect();
        Self::new(x_grid, values)
    }

    pub fn xi_grid(&self) -> &Grid1D {
        &self.xi_grid
    }

    pub fn x_grid(&self) -> &Grid1D {
        &self.x_grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Frequency of sample `k`; exactly zero at `k = n/2`.
    pub fn xi(&self, k: usize) -> f64 {
        xi_index(k, self.values.len(), self.xi_grid.spacing())
    }

    pub fn xis(&self) -> Vec<f64> {
        (0..self.values.len()).map(|k| self.xi(k)).collect()
    }

    /// Discrete L2 norm over the frequency grid.
    pub fn norm_l2(&self) -> f64 {
        (self.xi_grid.spacing() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Pointwise product with a multiplier `m(ξ)`.
    pub fn multiply(&self, m: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| v * m(self.xi(k)))
            .collect();
        Self::new(self.x_grid, values)
    }

    /// Largest `|v|` in the outer `fraction` of the band, relative to the peak.
    pub fn edge_ratio(&self, fraction: f64) -> f64 {
        let peak = self.sup_norm();
        if peak == 0.0 {
            return 0.0;
        }
        let nyquist = PI / self.x_grid.spacing();
        let cut = (1.0 - fraction) * nyquist;
        self.values
            .iter()
            .enumerate()
            .filter(|(k, _)| self.xi(*k).abs() >= cut)
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
            / peak
    }
}

fn xi_index(k: usize, n: usize, dxi: f64) -> f64 {
    (k as f64 - (n / 2) as f64) * dxi
}

fn reciprocal_spacing(x_grid: &Grid1D) -> f64 {
    2.0 * PI / (x_grid.len() as f64 * x_grid.spacing())
}

/// Centered frequency grid `[-π/h, π/h)` with spacing `2π/(n h)`.
/// Requires an even sample count.
pub fn reciprocal_grid(x_grid: &Grid1D) -> Result<Grid1D> {
    if !x_grid.len().is_multiple_of(2) {
        return Err(Error::InvalidGrid(format!(
            "Fourier grids need an even sample count, got {}",
            x_grid.len()
        )));
    }
    let nyquist = PI / x_grid.spacing();
    Grid1D::new(-nyquist, nyquist, x_grid.len())
}

fn alternate(j: usize) -> f64 {
    if j.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Forward transform of `f`. Logs a warning when `f` has not decayed to
/// [`DECAY_THRESHOLD`] of its peak at the grid ends.
pub fn forward_ft(f: &SampledFunction) -> Result<SpectralFunction> {
    let grid = *f.grid();
    let xi_grid = reciprocal_grid(&grid)?;
    let edge = f.edge_ratio(2);
    if edge > DECAY_THRESHOLD {
        log::warn!("forward_ft: input edge magnitude {edge:.3e} of peak; transform will alias");
    }
    let n = grid.len();
    let mut buf: Vec<Complex64> = f
        .values()
        .iter()
        .enumerate()
        .map(|(j, &v)| v * alternate(j))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let amp = grid.spacing() / (2.0 * PI).sqrt();
    let dxi = xi_grid.spacing();
    let x0 = grid.x_min();
    let values = buf
        .into_iter()
        .enumerate()
        .map(|(k, v)| v * unit_phase(-xi_index(k, n, dxi), x0) * amp)
        .collect();
    SpectralFunction::new(grid, values)
}

/// Inverse of [`forward_ft`] back onto the spectrum's spatial grid.
pub fn inverse_ft(spectrum: &SpectralFunction) -> Result<SampledFunction> {
    let grid = spectrum.x_grid;
    let n = grid.len();
    let x0 = grid.x_min();
    let mut buf: Vec<Complex64> = spectrum
        .values
        .iter()
        .enumerate()
        .map(|(k, &v)| v * unit_phase(spectrum.xi(k), x0))
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let amp = spectrum.xi_grid.spacing() / (2.0 * PI).sqrt();
    let values = buf
        .into_iter()
        .enumerate()
        .map(|(j, v)| v * (amp * alternate(j)))
        .collect();
    SampledFunction::new(grid, values)
}

/// Transform of the samples of `f` evaluated at arbitrary frequencies,
/// `h/sqrt(2π) Σ_j e^{-i x_j ξ} f_j`.
///
/// This is the infinitely zero-padded FFT, i.e. the band-limited
/// interpolant of [`forward_ft`]'s output. Phases are formed in double-double
/// before reduction and the sum is compensated, so the absolute error stays
/// near rounding level even where the transform is tiny.
pub fn evaluate_ft(f: &SampledFunction, xis: &[f64]) -> Vec<Complex64> {
    let grid = *f.grid();
    let amp = grid.spacing() / (2.0 * PI).sqrt();
    let range = active_range(&[f]);
    par::map_indices(xis.len(), |k| {
        let mut acc = CompensatedSum::default();
        for_each_phase(&grid, range.clone(), xis[k], |j, c, s| {
            acc.add(f.values()[j] * Complex64::new(c, -s))
        });
        acc.value() * amp
    })
}

/// `[F f(ξ), F f(-ξ)]` for every `ξ` in `xis` and every function in
/// `funcs` (all on one grid), sharing the phase evaluations.
pub fn evaluate_ft_pm(funcs: &[&SampledFunction], xis: &[f64]) -> Result<Vec<Vec<[Complex64; 2]>>> {
    let Some(first) = funcs.first() else {
        return Ok(Vec::new());
    };
    let grid = *first.grid();
    if let Some(bad) = funcs.iter().find(|f| !f.grid().same_as(&grid)) {
        return Err(Error::GridMismatch(format!(
            "{:?} vs {:?}",
            bad.grid(),
            grid
        )));
    }
    let amp = grid.spacing() / (2.0 * PI).sqrt();
    let range = active_range(funcs);
    let per_xi = par::map_indices(xis.len(), |k| {
        let mut acc = vec![[CompensatedSum::default(); 2]; funcs.len()];
        for_each_phase(&grid, range.clone(), xis[k], |j, c, s| {
            for (f, pair) in funcs.iter().zip(acc.iter_mut()) {
                let v = f.values()[j];
                pair[0].add(v * Complex64::new(c, -s));
                pair[1].add(v * Complex64::new(c, s));
            }
        });
        acc.into_iter()
            .map(|[p, m]| [p.value() * amp, m.value() * amp])
            .collect::<Vec<_>>()
    });
    Ok((0..funcs.len())
        .map(|i| per_xi.iter().map(|row| row[i]).collect())
        .collect())
}

/// Samples below this fraction of the peak are dropped from direct sums;
/// their contribution is far under rounding level.
const NEGLIGIBLE: f64 = 1e-22;

/// Smallest index range holding every sample of `funcs` above
/// [`NEGLIGIBLE`] times that function's peak.
fn active_range(funcs: &[&SampledFunction]) -> std::ops::Range<usize> {
    let mut lo = usize::MAX;
    let mut hi = 0;
    for f in funcs {
        let cut = NEGLIGIBLE * f.sup_norm();
        if let Some(first) = f.values().iter().position(|v| v.norm() > cut) {
            let last = f
                .values()
                .iter()
                .rposition(|v| v.norm() > cut)
                .unwrap_or(first);
            lo = lo.min(first);
            hi = hi.max(last + 1);
        }
    }
    if lo >= hi {
        0..0
    } else {
        lo..hi
    }
}

/// Calls `visit(j, cos θ_j, sin θ_j)` with `θ_j = ξ x_j` for `j` in
/// `range`, each phase formed exactly as a double-double and then reduced.
fn for_each_phase(
    grid: &Grid1D,
    range: std::ops::Range<usize>,
    xi: f64,
    mut visit: impl FnMut(usize, f64, f64),
) {
    let (sh, sl) = two_prod(xi, grid.spacing());
    let (ah, al) = two_prod(xi, grid.x_min());
    for j in range {
        let jf = j as f64;
        let (ph, pl) = two_prod(jf, sh);
        let (th, tl) = two_sum(ah, ph);
        let (s, c) = reduce_phase(th, tl + pl + jf * sl + al).sin_cos();
        visit(j, c, s);
    }
}

/// Complex sum with a running compensation term per component.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    re: f64,
    re_err: f64,
    im: f64,
    im_err: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: Complex64) {
        let (r, e) = two_sum(self.re, v.re);
        self.re = r;
        self.re_err += e;
        let (i, e) = two_sum(self.im, v.im);
        self.im = i;
        self.im_err += e;
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_err, self.im + self.im_err)
    }
}

/// Inverse transform of `spectrum` at arbitrary points,
/// `Δξ/sqrt(2π) Σ_k e^{i ξ_k x} F_k`, summed directly with compensation.
///
/// Slower than [`inverse_ft`] (quadratic in the grid size) but its
/// rounding error is a few units of the last place of the largest terms
/// rather than growing with the FFT depth. Used where the result is later
/// multiplied by a large factor.
pub fn evaluate_inverse_ft(spectrum: &SpectralFunction, xs: &[f64]) -> Vec<Complex64> {
    let dxi = spectrum.xi_grid.spacing();
    let amp = dxi / (2.0 * PI).sqrt();
    let half = (spectrum.values.len() / 2) as f64;
    let values = &spectrum.values;
    par::map_indices(xs.len(), |j| {
        let x = xs[j];
        let (sh, sl) = two_prod(x, dxi);
        let mut acc = CompensatedSum::default();
        for (k, &v) in values.iter().enumerate() {
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            let kf = k as f64 - half;
            let (ph, pl) = two_prod(kf, sh);
            let (s, c) = reduce_phase(ph, pl + kf * sl).sin_cos();
            acc.add(v * Complex64::new(c, s));
        }
        acc.value() * amp
    })
}

/// `e^{i a b}` with the product formed exactly before reduction.
fn unit_phase(a: f64, b: f64) -> Complex64 {
    let (hi, lo) = two_prod(a, b);
    let (s, c) = reduce_phase(hi, lo).sin_cos();
    Complex64::new(c, s)
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `hi + lo` reduced modulo 2π into roughly `[-π, π]`, keeping the
/// absolute accuracy of the unreduced double-double phase.
fn reduce_phase(hi: f64, lo: f64) -> f64 {
    const TWO_PI_HI: f64 = std::f64::consts::TAU;
    const TWO_PI_LO: f64 = 2.4492935982947064e-16;
    let k = (hi / TWO_PI_HI).round();
    (-k).mul_add(TWO_PI_HI, hi) + ((-k).mul_add(TWO_PI_LO, lo))
}

/// Values `F(scale · ξ_k)` on the same frequency grid, by band-limited
/// interpolation. `scale` must lie in `(0, 1]`.
pub fn spectral_resample(spectrum: &SpectralFunction, scale: f64) -> Result<SpectralFunction> {
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(Error::Domain(format!(
            "resampling scale must be in (0, 1], got {scale}"
        )));
    }
    if scale == 1.0 {
        return Ok(spectrum.clone());
    }
    let edge = spectrum.edge_ratio(0.1);
    if edge > DECAY_THRESHOLD {
        log::warn!(
            "spectral_resample: band edge magnitude {edge:.3e} of peak; interpolation degrades"
        );
    }
    let f = inverse_ft(spectrum)?;
    let targets: Vec<f64> = spectrum.xis().iter().map(|&xi| scale * xi).collect();
    SpectralFunction::new(spectrum.x_grid, evaluate_ft(&f, &targets))
}

/// `d^order f / dx^order` by Fourier multiplication with `(iξ)^order`.
/// The Nyquist mode is dropped for odd orders.
pub fn spectral_derivative(f: &SampledFunction, order: u32) -> Result<SampledFunction> {
    let spectrum = forward_ft(f)?;
    let n = f.len();
    let values = spectrum
        .values
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            if k == 0 && order % 2 == 1 {
                Complex64::new(0.0, 0.0)
            } else {
                v * Complex64::new(0.0, spectrum.xi(k)).powu(order)
            }
        })
        .collect::<Vec<_>>();
    debug_assert_eq!(values.len(), n);
    inverse_ft(&SpectralFunction::new(spectrum.x_grid, values)?)
}

/// Spectral derivative of samples on a periodic grid of spacing `h`
/// (used on frequency-side data, where the roles of x and ξ swap).
pub fn periodic_derivative(values: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let w = 2.0 * PI / (n as f64 * h);
    for (k, v) in buf.iter_mut().enumerate() {
        let m = if k < n / 2 {
            k as f64
        } else if k == n / 2 {
            0.0
        } else {
            k as f64 - n as f64
        };
        *v *= Complex64::new(0.0, m * w / n as f64);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    fn gaussian(g: Grid1D, s: f64) -> SampledFunction {
        SampledFunction::from_real_fn(g, |x| (-s * x * x).exp()).unwrap()
    }

    #[test]
    fn unit_gaussian_is_fixed_point() {
        let g = make_grid(-20.0, 20.0, 512).unwrap();
        let spec = forward_ft(&gaussian(g, 0.5)).unwrap();
        for (k, v) in spec.values().iter().enumerate() {
            let xi = spec.xi(k);
            assert!((v - Complex64::new((-xi * xi / 2.0).exp(), 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn gaussian_value_at_zero() {
        let g = make_grid(-15.0, 17.0, 256).unwrap();
        let spec = forward_ft(&gaussian(g, 1.0)).unwrap();
        let mid = spec.values()[128];
        assert_eq!(spec.xi(128), 0.0);
        assert!((mid.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-7);
        assert!((mid.re - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(mid.im.abs() < 1e-14);
    }

    #[test]
    fn odd_grid_rejected() {
        let g = make_grid(-1.0, 1.0, 9).unwrap();
        assert!(forward_ft(&SampledFunction::zeros(g)).is_err());
    }

    #[test]
    fn resample_rejects_scale_above_one() {
        let g = make_grid(-10.0, 10.0, 64).unwrap();
        let spec = forward_ft(&gaussian(g, 1.0)).unwrap();
        assert!(spectral_resample(&spec, 1.5).is_err());
        assert!(spectral_resample(&spec, 0.0).is_err());
        assert_eq!(spectral_resample(&spec, 1.0).unwrap(), spec);
    }

    #[test]
    fn resample_gaussian_half_scale() {
        // F = e^{-ξ²}, scale 1/2 → e^{-ξ²/4}
        let g = make_grid(-20.0, 20.0, 512).unwrap();
        let spec =
            SpectralFunction::from_fn(g, |xi| Complex64::new((-xi * xi).exp(), 0.0)).unwrap();
        let out = spectral_resample(&spec, 0.5).unwrap();
        let err = out
            .values()
            .iter()
            .enumerate()
            .map(|(k, v)| (v - (-out.xi(k).powi(2) / 4.0).exp()).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "err {err:.3e}");
    }

    #[test]
    fn near_nyquist_spectrum_flags_edge() {
        let g = make_grid(-10.0, 10.0, 128).unwrap();
        let nyq = PI / g.spacing();
        let spec = SpectralFunction::from_fn(g, |xi| {
            Complex64::new((-(xi.abs() - 0.95 * nyq).powi(2)).exp(), 0.0)
        })
        .unwrap();
        assert!(spec.edge_ratio(0.1) > DECAY_THRESHOLD);
        let clean =
            SpectralFunction::from_fn(g, |xi| Complex64::new((-xi * xi).exp(), 0.0)).unwrap();
        assert!(clean.edge_ratio(0.1) < DECAY_THRESHOLD);
    }

    #[test]
    fn second_derivative_of_gaussian() {
        let g = make_grid(-12.0, 12.0, 256).unwrap();
        let d2 = spectral_derivative(&gaussian(g, 1.0), 2).unwrap();
        for (j, v) in d2.values().iter().enumerate() {
            let x = g.point(j);
            let want = (4.0 * x * x - 2.0) * (-x * x).exp();
            assert!((v.re - want).abs() < 1e-12);
        }
    }
}
