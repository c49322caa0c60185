//! The map `T` carrying the harmonic oscillator `L^a = ∂² - a² x²` onto the
//! transport generator `D = ∂/∂X`:
//!
//! ```text
//! (Tφ)(X) = √|ξ| e^{ξ²/4a} F[e^{-a x²/2} φ](ξ),   |ξ| = e^{-2aX}
//! ```
//!
//! The substitution is two-to-one in `ξ`, so `Tφ` is carried as a pair of
//! functions of `X`, one per sign of `ξ` ([`BranchPair`]).
//!
//! `e^{ξ²/4a}` amplifies rounding noise in the damped spectrum without
//! bound, so the transport grid must end (on the large-`ξ` side) where the
//! input's damped spectrum is still resolved. [`IntertwineParams::fitted`]
//! picks that end from a relative spectral floor.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{
    evaluate_ft_pm, evaluate_inverse_ft, forward_ft, spectral_derivative, SpectralFunction,
};
use crate::grid::{Grid1D, SampledFunction};
use crate::quadrature::interpolate;
use crate::report::VerificationReport;

/// Spectral floor for transport grids used in the residual check.
pub const RESIDUAL_FLOOR: f64 = 1e-7;
/// Spectral floor for transport grids used in propagation pipelines.
pub const TRANSPORT_FLOOR: f64 = 1e-12;
/// Floor for a bare `T^{-1} T` round trip: keep the whole band (up to the
/// weight overflow cap), since rounding noise cancels between the two.
pub const FULL_BAND: f64 = 0.0;
pub const DEFAULT_TRANSPORT_POINTS: usize = 4096;
/// Largest damped-spectrum magnitude allowed in the outer tenth of the band.
pub const TAIL_LIMIT: f64 = 1e-10;
/// Pass threshold of [`intertwine_residual`].
pub const RESIDUAL_TOLERANCE: f64 = 1e-5;
/// Damped data below this fraction of its peak is treated as rounding
/// noise by [`undamp`].
pub const UNDAMP_FLOOR: f64 = 2e-16;
pub const UNDAMP_RUN: usize = 8;
/// The fitted transport grid reaches down to `|ξ| = SMALL_XI · ξ_support`.
const SMALL_XI: f64 = 1e-10;
const STENCIL: usize = 8;
/// Cap on `ξ²/4a` so the weight stays finite.
const MAX_WEIGHT_EXPONENT: f64 = 600.0;

/// Coupling `a`, the spatial grid of `φ`, and the transport grid in `X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntertwineParams {
    a: f64,
    x_grid: Grid1D,
    transport_grid: Grid1D,
    undamp_floor: f64,
}

impl IntertwineParams {
    pub fn new(a: f64, x_grid: Grid1D, transport_grid: Grid1D) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Domain(format!(
                "oscillator coupling must be positive, got {a}"
            )));
        }
        if !x_grid.len().is_multiple_of(2) {
            return Err(Error::InvalidGrid(
                "spatial grid needs an even sample count".into(),
            ));
        }
        let xi_top = (-2.0 * a * transport_grid.x_min()).exp();
        let nyquist = std::f64::consts::PI / x_grid.spacing();
        if xi_top > nyquist {
            return Err(Error::InvalidGrid(format!(
                "transport grid starts at X = {} (|ξ| = {xi_top:.3e}), beyond the Nyquist frequency {nyquist:.3e}",
                transport_grid.x_min()
            )));
        }
        if xi_top * xi_top / (4.0 * a) > MAX_WEIGHT_EXPONENT {
            return Err(Error::Overflow(format!(
                "weight e^(ξ²/4a) overflows at |ξ| = {xi_top:.3e}"
            )));
        }
        Ok(Self {
            a,
            x_grid,
            transport_grid,
            undamp_floor: UNDAMP_FLOOR,
        })
    }

    /// Transport grid whose large-`|ξ|` end sits where the damped spectrum
    /// of `phi` falls to `floor` of its peak, spanning ten decades of `|ξ|`.
    pub fn fitted(
        a: f64,
        x_grid: Grid1D,
        phi: &SampledFunction,
        points: usize,
        floor: f64,
    ) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Domain(format!(
                "oscillator coupling must be positive, got {a}"
            )));
        }
        let spectrum = forward_ft(&damp(phi, a)?)?;
        let peak = spectrum.sup_norm();
        let nyquist = std::f64::consts::PI / x_grid.spacing();
        let mut support = spectrum
            .values()
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() >= floor * peak)
            .map(|(k, _)| spectrum.xi(k).abs())
            .fold(0.0, f64::max);
        if peak == 0.0 || support == 0.0 {
            support = spectrum.xi_grid().spacing();
        }
        let cap = 0.999 * (4.0 * a * MAX_WEIGHT_EXPONENT).sqrt();
        support = support.min(0.999 * nyquist).min(cap);
        let x_lo = -support.ln() / (2.0 * a);
        let x_hi = x_lo - SMALL_XI.ln() / (2.0 * a);
        Self::new(a, x_grid, Grid1D::new(x_lo, x_hi, points)?)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn x_grid(&self) -> &Grid1D {
        &self.x_grid
    }

    pub fn transport_grid(&self) -> &Grid1D {
        &self.transport_grid
    }

    pub fn undamp_floor(&self) -> f64 {
        self.undamp_floor
    }

    /// Relative level below which [`apply_t_inverse`] treats damped data
    /// as noise. Pipelines whose branch data carries more than rounding
    /// error should raise it.
    pub fn with_undamp_floor(mut self, floor: f64) -> Result<Self> {
        if !(floor > 0.0 && floor < 1.0) {
            return Err(Error::Domain(format!(
                "undamp floor must lie in (0, 1), got {floor}"
            )));
        }
        self.undamp_floor = floor;
        Ok(self)
    }

    /// Same parameters with a different transport grid.
    pub fn with_transport_grid(&self, transport_grid: Grid1D) -> Result<Self> {
        Ok(Self {
            undamp_floor: self.undamp_floor,
            ..Self::new(self.a, self.x_grid, transport_grid)?
        })
    }
}

/// `Tφ` on each sign of `ξ`. Both halves live on the same transport grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchPair {
    /// `ξ > 0`
    pub plus: SampledFunction,
    /// `ξ < 0`
    pub minus: SampledFunction,
}

impl BranchPair {
    pub fn new(plus: SampledFunction, minus: SampledFunction) -> Result<Self> {
        if !plus.grid().same_as(minus.grid()) {
            return Err(Error::GridMismatch(
                "branches must share a transport grid".into(),
            ));
        }
        Ok(Self { plus, minus })
    }

    pub fn grid(&self) -> &Grid1D {
        self.plus.grid()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::new(self.plus.add(&other.plus)?, self.minus.add(&other.minus)?)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            plus: self.plus.scale(c),
            minus: self.minus.scale(c),
        }
    }

    /// Apply `f` to each branch.
    pub fn map_branches(
        &self,
        f: impl Fn(&SampledFunction) -> Result<SampledFunction>,
    ) -> Result<Self> {
        Self::new(f(&self.plus)?, f(&self.minus)?)
    }

    /// Larger of the two per-branch relative L2 distances.
    pub fn rel_l2_error(&self, reference: &Self) -> Result<f64> {
        Ok(self
            .plus
            .rel_l2_error(&reference.plus)?
            .max(self.minus.rel_l2_error(&reference.minus)?))
    }
}

/// `√|ξ| e^{ξ²/4a}`.
pub fn weight(xi: f64, a: f64) -> Result<f64> {
    if xi == 0.0 || !xi.is_finite() {
        return Err(Error::Domain(format!("weight is singular at ξ = {xi}")));
    }
    if !(a > 0.0) {
        return Err(Error::Domain(format!(
            "oscillator coupling must be positive, got {a}"
        )));
    }
    Ok((xi * xi / (4.0 * a) + 0.5 * xi.abs().ln()).exp())
}

/// `e^{-a x²/2} φ`.
pub fn damp(phi: &SampledFunction, a: f64) -> Result<SampledFunction> {
    phi.map(|x, v| v * (-0.5 * a * x * x).exp())
}

/// `e^{a x²/2} w`.
///
/// Rounding noise in `w` would be amplified by up to `e^{a x²/2}`, so
/// moving outward from the peak the result is cut to zero at the first
/// run of [`UNDAMP_RUN`] samples below `floor` times the peak. Isolated
/// small samples (sign changes) are kept.
pub fn undamp(w: &SampledFunction, a: f64, floor: f64) -> Result<SampledFunction> {
    let mags: Vec<f64> = w.values().iter().map(|v| v.norm()).collect();
    let n = mags.len();
    let peak_at = (0..n).fold(0, |best, j| if mags[j] > mags[best] { j } else { best });
    let cut = floor * mags[peak_at];
    let mut hi = n;
    let mut run = 0;
    for (j, &m) in mags.iter().enumerate().skip(peak_at) {
        run = if m < cut { run + 1 } else { 0 };
        if run == UNDAMP_RUN {
            hi = j + 1 - UNDAMP_RUN;
            break;
        }
    }
    let mut lo = 0;
    run = 0;
    for j in (0..=peak_at).rev() {
        run = if mags[j] < cut { run + 1 } else { 0 };
        if run == UNDAMP_RUN {
            lo = j + UNDAMP_RUN;
            break;
        }
    }
    let grid = *w.grid();
    let values = w
        .values()
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            if j < lo || j >= hi {
                Complex64::new(0.0, 0.0)
            } else {
                let x = grid.point(j);
                v * (0.5 * a * x * x).exp()
            }
        })
        .collect();
    SampledFunction::new(grid, values)
}

/// Magnitude of the damped spectrum in the outer tenth of the band,
/// relative to its peak. Above [`TAIL_LIMIT`] the input is not admissible.
pub fn spectral_tail(phi: &SampledFunction, a: f64) -> Result<f64> {
    Ok(forward_ft(&damp(phi, a)?)?.edge_ratio(0.1))
}

/// `L^a φ = φ'' - a² x² φ`, second derivative taken spectrally.
pub fn apply_oscillator(phi: &SampledFunction, a: f64) -> Result<SampledFunction> {
    let d2 = spectral_derivative(phi, 2)?;
    let values = phi
        .values()
        .iter()
        .zip(d2.values())
        .enumerate()
        .map(|(j, (&v, &d))| {
            let x = phi.grid().point(j);
            d - a * a * x * x * v
        })
        .collect();
    SampledFunction::new(*phi.grid(), values)
}

/// `Tφ`. Fails with [`Error::SpectralTail`] when the damped spectrum is not
/// contained in the grid's band.
pub fn apply_t(phi: &SampledFunction, p: &IntertwineParams) -> Result<BranchPair> {
    check_grid(phi, p)?;
    let tail = spectral_tail(phi, p.a)?;
    if tail > TAIL_LIMIT {
        return Err(Error::SpectralTail {
            tail,
            limit: TAIL_LIMIT,
        });
    }
    apply_t_unchecked(phi, p)
}

fn check_grid(phi: &SampledFunction, p: &IntertwineParams) -> Result<()> {
    if !phi.grid().same_as(&p.x_grid) {
        return Err(Error::GridMismatch(format!(
            "input on {:?}, parameters expect {:?}",
            phi.grid(),
            p.x_grid
        )));
    }
    Ok(())
}

fn apply_t_unchecked(phi: &SampledFunction, p: &IntertwineParams) -> Result<BranchPair> {
    Ok(apply_t_many(&[phi], p)?.remove(0))
}

/// `T` of several functions on the same grid in one pass over the phases.
fn apply_t_many(phis: &[&SampledFunction], p: &IntertwineParams) -> Result<Vec<BranchPair>> {
    let damped = phis
        .iter()
        .map(|phi| {
            check_grid(phi, p)?;
            damp(phi, p.a)
        })
        .collect::<Result<Vec<_>>>()?;
    let grid = p.transport_grid;
    let magnitudes: Vec<f64> = grid
        .points()
        .iter()
        .map(|&x| (-2.0 * p.a * x).exp())
        .collect();
    let weights = magnitudes
        .iter()
        .map(|&xi| weight(xi, p.a))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&SampledFunction> = damped.iter().collect();
    evaluate_ft_pm(&refs, &magnitudes)?
        .into_iter()
        .map(|pm| {
            let plus = pm.iter().zip(&weights).map(|(v, w)| v[0] * w).collect();
            let minus = pm.iter().zip(&weights).map(|(v, w)| v[1] * w).collect();
            BranchPair::new(
                SampledFunction::new(grid, plus)?,
                SampledFunction::new(grid, minus)?,
            )
        })
        .collect()
}

/// `T^{-1} b`, back onto `p.x_grid`.
///
/// Each frequency `ξ_k` of the spatial grid's band is mapped to
/// `X = -ln|ξ_k| / 2a` on its branch. The branch samples are divided by
/// the weight at their own nodes first and the resulting spectrum is
/// interpolated in `X`, so the steep weight never multiplies neighbouring
/// samples' rounding noise. Frequencies beyond the large-`|ξ|` end of the
/// transport grid get zero; frequencies below the small-`|ξ|` end,
/// including `ξ = 0`, take the last sample as the `ξ → 0` limit. The
/// spectrum is then inverted and undamped.
pub fn apply_t_inverse(b: &BranchPair, p: &IntertwineParams) -> Result<SampledFunction> {
    let grid = *b.grid();
    let peak = b.plus.sup_norm().max(b.minus.sup_norm());
    let last = grid.len() - 1;
    let end = b.plus.values()[last]
        .norm()
        .max(b.minus.values()[last].norm());
    if peak > 0.0 && end > 1e-3 * peak {
        return Err(Error::Decay(format!(
            "branch data at X = {:.3} is {:.3e} of its peak; it must vanish as ξ → 0",
            grid.point(last),
            end / peak
        )));
    }
    let a = p.a;
    let unweight = |f: &SampledFunction| -> Result<Vec<Complex64>> {
        f.values()
            .iter()
            .enumerate()
            .map(|(j, &v)| Ok(v / weight((-2.0 * a * grid.point(j)).exp(), a)?))
            .collect()
    };
    let plus = unweight(&b.plus)?;
    let minus = unweight(&b.minus)?;
    let x_lo = grid.x_min();
    let x_hi = grid.point(last);
    let zero_limit = 0.5 * (plus[last] + minus[last]);
    let spectrum = SpectralFunction::from_fn(p.x_grid, |xi| {
        if xi == 0.0 {
            return zero_limit;
        }
        let branch = if xi > 0.0 { &plus } else { &minus };
        let x = -xi.abs().ln() / (2.0 * a);
        if x < x_lo - 1e-12 {
            Complex64::new(0.0, 0.0)
        } else if x >= x_hi {
            branch[last]
        } else {
            interpolate(&grid, branch, x, STENCIL).unwrap_or_default()
        }
    })?;
    let damped =
        SampledFunction::new(p.x_grid, evaluate_inverse_ft(&spectrum, &p.x_grid.points()))?;
    undamp(&damped, a, p.undamp_floor)
}

/// Fourth-order centered first difference; the two samples at each end
/// are left at zero.
pub fn transport_derivative(f: &SampledFunction) -> Result<SampledFunction> {
    let h = f.grid().spacing();
    let v = f.values();
    let n = v.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for j in 2..n - 2 {
        out[j] = (v[j - 2] - 8.0 * v[j - 1] + 8.0 * v[j + 1] - v[j + 2]) / (12.0 * h);
    }
    SampledFunction::new(*f.grid(), out)
}

fn interior_rel(residual: &SampledFunction, reference: &SampledFunction) -> f64 {
    let n = residual.len();
    let num: f64 = residual.values()[2..n - 2]
        .iter()
        .map(|v| v.norm_sqr())
        .sum();
    let den: f64 = reference.values()[2..n - 2]
        .iter()
        .map(|v| v.norm_sqr())
        .sum();
    if den > 0.0 {
        (num / den).sqrt()
    } else {
        num.sqrt()
    }
}

/// Relative residual `||T(L^a φ) - D_X(Tφ)|| / ||D_X(Tφ)||`, worst branch,
/// over interior transport points. Inadmissible input yields an
/// informational report carrying the spectral tail instead.
pub fn intertwine_residual(
    phi: &SampledFunction,
    p: &IntertwineParams,
) -> Result<VerificationReport> {
    check_grid(phi, p)?;
    let tail = spectral_tail(phi, p.a)?;
    if tail > TAIL_LIMIT {
        log::warn!("intertwine_residual: damped spectral tail {tail:.3e} above {TAIL_LIMIT:.1e}");
        return Ok(VerificationReport::informational(
            "intertwining_residual",
            tail,
            TAIL_LIMIT,
            format!(
                "input not band limited after damping (tail {tail:.3e}); residual not meaningful"
            ),
        ));
    }
    let l_phi = apply_oscillator(phi, p.a)?;
    let mut both = apply_t_many(&[phi, &l_phi], p)?;
    let t_l_phi = both.pop().expect("two transforms");
    let t_phi = both.pop().expect("two transforms");
    let mut worst: f64 = 0.0;
    for (lhs, branch) in [(&t_l_phi.plus, &t_phi.plus), (&t_l_phi.minus, &t_phi.minus)] {
        let d = transport_derivative(branch)?;
        worst = worst.max(interior_rel(&lhs.sub(&d)?, &d));
    }
    Ok(VerificationReport::check(
        "intertwining_residual",
        worst,
        RESIDUAL_TOLERANCE,
        format!("a = {}, {} transport points", p.a, p.transport_grid.len()),
    ))
}
