//! Heat and wave propagation for the harmonic oscillator `L^a = ∂² - a²x²`.
//!
//! The heat kernel is available as Mehler's formula and in the
//! exponential-coordinates form, both as printed (`PaperLiteral`, which does
//! not solve the equation) and corrected (`PaperCorrected`, algebraically
//! equal to Mehler). Heat data can be propagated by kernel quadrature, by
//! the Gaussian-conjugated Fourier route, or through the intertwining map
//! and a transport step. The wave flow is realized through the
//! intertwining map and the Dirac wave kernel.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::dirac::{heat_dirac_branches, wave_dirac_branches, window_exponential_response};
use crate::error::{Error, Result};
use crate::fourier::{evaluate_ft, forward_ft, inverse_ft, spectral_resample, SpectralFunction};
use crate::grid::{Grid1D, SampledFunction};
use crate::hermite::SpectralCoefficients;
use crate::intertwining::{
    apply_t, apply_t_inverse, damp, spectral_tail, undamp, weight, BranchPair, IntertwineParams,
    DEFAULT_TRANSPORT_POINTS, TAIL_LIMIT, TRANSPORT_FLOOR,
};
use crate::par;
use crate::quadrature::{interpolate, quadrature_weights, TanhSinh};
use crate::special::erfc_paper;

/// Largest `a·t` accepted by the kernels.
pub const MAX_AT: f64 = 300.0;
/// Relative size of the kernel-route integrand at the grid ends above
/// which a warning is logged.
pub const KERNEL_DECAY_GUARD: f64 = 1e-12;
/// Undamping floor for propagated data, whose spectra carry interpolation
/// error on top of rounding.
pub const PIPELINE_UNDAMP_FLOOR: f64 = 1e-14;
/// Undamping floor for the wave pipeline. The window integral cannot see
/// branch data beyond the resolved band, so the output carries errors of
/// the order of the input spectrum at `e^{-at}` times the band edge.
pub const WAVE_UNDAMP_FLOOR: f64 = 1e-10;
/// Spectral floor fixing the resolved band of the wave pipeline.
pub const WAVE_TRANSPORT_FLOOR: f64 = 1e-15;
/// Largest input spectrum, relative to its peak, allowed inside the part of
/// the band whose window reaches past the edge.
pub const WAVE_WINDOW_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    a: f64,
    t: f64,
}

impl OscillatorParams {
    pub fn new(a: f64, t: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Domain(format!(
                "oscillator coupling must be positive, got {a}"
            )));
        }
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("time must be positive, got {t}")));
        }
        Ok(Self { a, t })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn with_t(&self, t: f64) -> Result<Self> {
        Self::new(self.a, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeatKernelVariant {
    Mehler,
    PaperLiteral,
    PaperCorrected,
}

impl HeatKernelVariant {
    pub const ALL: [Self; 3] = [Self::Mehler, Self::PaperLiteral, Self::PaperCorrected];

    pub fn name(self) -> &'static str {
        match self {
            Self::Mehler => "mehler",
            Self::PaperLiteral => "paper_literal",
            Self::PaperCorrected => "paper_corrected",
        }
    }
}

impl fmt::Display for HeatKernelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HeatKernelVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown kernel variant `{s}`")))
    }
}

/// `ln sinh(y)` for `y > 0` without overflow.
fn ln_sinh(y: f64) -> f64 {
    if y > 20.0 {
        y - std::f64::consts::LN_2 + (-2.0 * y).exp().ln_1p()
    } else {
        y.sinh().ln()
    }
}

/// Log of the kernel, so callers can recombine with other factors safely.
pub fn ln_heat_kernel(
    variant: HeatKernelVariant,
    p: OscillatorParams,
    x: f64,
    xp: f64,
) -> Result<f64> {
    let (a, t) = (p.a, p.t);
    let at = a * t;
    if at > MAX_AT {
        return Err(Error::Overflow(format!("a·t = {at} exceeds {MAX_AT}")));
    }
    let two_at = 2.0 * at;
    // e^{2at} - e^{-2at} = 2 sinh 2at
    let ln_gap = std::f64::consts::LN_2 + ln_sinh(two_at);
    Ok(match variant {
        HeatKernelVariant::Mehler => {
            // (x²+x'²) cosh 2at - 2xx' = (x-x')² + 2(x²+x'²) sinh² at
            let sh = at.sinh();
            let d = x - xp;
            let num = d * d + 2.0 * (x * x + xp * xp) * sh * sh;
            0.5 * (a / PI).ln() - 0.5 * ln_gap - 0.5 * a * num / (two_at.sinh())
        }
        HeatKernelVariant::PaperCorrected | HeatKernelVariant::PaperLiteral => {
            let q = at.exp() * x - (-at).exp() * xp;
            let quad = q * q / ln_gap.exp();
            let shift = 0.5 * a * (x * x - xp * xp);
            if variant == HeatKernelVariant::PaperCorrected {
                0.5 * (a / PI).ln() - 0.5 * ln_gap - a * quad + shift
            } else {
                (a * (2.0 / PI).sqrt()).ln() - 0.5 * ln_gap + quad + shift
            }
        }
    })
}

/// Heat kernel `H(t, x, x')` of `∂_t u = L^a u`.
pub fn heat_kernel(
    variant: HeatKernelVariant,
    p: OscillatorParams,
    x: f64,
    xp: f64,
) -> Result<f64> {
    let l = ln_heat_kernel(variant, p, x, xp)?;
    if l > 709.0 {
        return Err(Error::Overflow(format!(
            "{variant} kernel overflows at (x, x') = ({x}, {xp})"
        )));
    }
    Ok(l.exp())
}

/// `u(t, x) = ∫ H(t, x, x') u0(x') dx'` by the grid quadrature rule over
/// the input's grid, one output point per input point.
pub fn heat_ho_kernel_route(
    u0: &SampledFunction,
    p: OscillatorParams,
    variant: HeatKernelVariant,
) -> Result<SampledFunction> {
    let grid = *u0.grid();
    let xs = grid.points();
    let w = quadrature_weights(&grid);
    let values = u0.values();
    let n = grid.len();
    let rows = par::map_indices(n, |i| -> Result<(Complex64, f64)> {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut peak: f64 = 0.0;
        let mut edge: f64 = 0.0;
        for j in 0..n {
            let k = heat_kernel(variant, p, xs[i], xs[j])?;
            let term = values[j] * k;
            peak = peak.max(term.norm());
            if j == 0 || j == n - 1 {
                edge = edge.max(term.norm());
            }
            acc += term * w[j];
        }
        Ok((acc, if peak > 0.0 { edge / peak } else { 0.0 }))
    });
    let mut out = Vec::with_capacity(n);
    let mut worst: f64 = 0.0;
    for r in rows {
        let (v, e) = r?;
        out.push(v);
        worst = worst.max(e);
    }
    if worst > KERNEL_DECAY_GUARD {
        log::warn!(
            "heat_ho_kernel_route: integrand reaches {worst:.3e} of its peak at the grid ends"
        );
    }
    SampledFunction::new(grid, out)
}

/// Heat flow through the Gaussian-conjugated Fourier picture:
/// `u(t) = e^{-at} e^{ax²/2} F^{-1}[e^{-(1-e^{-4at})ξ²/4a} G(ξ e^{-2at})]`
/// with `G = F[e^{-ax²/2} u0]`.
pub fn heat_ho_spectral_route(
    u0: &SampledFunction,
    p: OscillatorParams,
) -> Result<SampledFunction> {
    let (a, t) = (p.a, p.t);
    let g = forward_ft(&damp(u0, a)?)?;
    let tail = g.edge_ratio(0.1);
    if tail > TAIL_LIMIT {
        return Err(Error::SpectralTail {
            tail,
            limit: TAIL_LIMIT,
        });
    }
    let contraction = (-2.0 * a * t).exp();
    let spread = -(-4.0 * a * t).exp_m1() / (4.0 * a);
    let decay = (-a * t).exp();
    let resampled = spectral_resample(&g, contraction)?;
    let evolved =
        resampled.multiply(|xi| Complex64::new(decay * (-spread * xi * xi).exp(), 0.0))?;
    undamp(&inverse_ft(&evolved)?, a, PIPELINE_UNDAMP_FLOOR)
}

/// Branch samples whose `|ξ|` exceeds what the spatial grid can carry are
/// dropped from the small-`X` end.
fn clip_to_band(b: &BranchPair, a: f64, x_grid: &Grid1D) -> Result<BranchPair> {
    let grid = *b.grid();
    let limit = 0.999 * (PI / x_grid.spacing()).min((2400.0 * a).sqrt());
    let first = (0..grid.len())
        .find(|&j| (-2.0 * a * grid.point(j)).exp() <= limit)
        .unwrap_or(grid.len());
    if first == 0 {
        return Ok(b.clone());
    }
    if grid.len() - first < crate::grid::MIN_POINTS {
        return Err(Error::Window(
            "transported branch data left the resolved band".into(),
        ));
    }
    let sub = Grid1D::new(grid.point(first), grid.x_max(), grid.len() - first)?;
    b.map_branches(|f| SampledFunction::new(sub, f.values()[first..].to_vec()))
}

fn pipeline_params(u0: &SampledFunction, a: f64) -> Result<IntertwineParams> {
    IntertwineParams::fitted(a, *u0.grid(), u0, DEFAULT_TRANSPORT_POINTS, TRANSPORT_FLOOR)?
        .with_undamp_floor(PIPELINE_UNDAMP_FLOOR)
}

/// `T^{-1} e^{tD} T u0`, the transport step being the exact translation
/// `U(t, X) = U0(t + X)` of the branch samples.
pub fn heat_via_intertwining(u0: &SampledFunction, p: OscillatorParams) -> Result<SampledFunction> {
    let params = pipeline_params(u0, p.a)?;
    let moved = clip_to_band(
        &heat_dirac_branches(&apply_t(u0, &params)?, p.t)?,
        p.a,
        u0.grid(),
    )?;
    apply_t_inverse(&moved, &params.with_transport_grid(*moved.grid())?)
}

/// Which form of the oscillator wave solution [`wave_ho`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveForm {
    /// The printed frequency-side formula: undamped data `e^{+ax²/2} v0`,
    /// `√ξ` on `ξ > 0` only and an overall minus sign.
    PaperLiteral,
    /// `T^{-1} ∘ W ∘ T` with the Dirac window solution `W`.
    Corrected,
}

impl WaveForm {
    pub fn name(self) -> &'static str {
        match self {
            Self::PaperLiteral => "paper_literal",
            Self::Corrected => "corrected",
        }
    }
}

impl FromStr for WaveForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper_literal" => Ok(Self::PaperLiteral),
            "corrected" => Ok(Self::Corrected),
            _ => Err(Error::Domain(format!("unknown wave form `{s}`"))),
        }
    }
}

/// Oscillator wave flow with `v(0) = 0`, `∂_t v(0) = v0`. The exact flow
/// multiplies the mode `h_n` by `sin(t√λ_n)/√λ_n`, `λ_n = (2n+1)a`; both
/// forms here inherit the window kernel of the transport picture and are
/// compared against that flow rather than assumed equal to it.
pub fn wave_ho(
    v0: &SampledFunction,
    p: OscillatorParams,
    form: WaveForm,
) -> Result<SampledFunction> {
    match form {
        WaveForm::Corrected => {
            let params = IntertwineParams::fitted(
                p.a,
                *v0.grid(),
                v0,
                DEFAULT_TRANSPORT_POINTS,
                WAVE_TRANSPORT_FLOOR,
            )?
            .with_undamp_floor(WAVE_UNDAMP_FLOOR)?;
            let b = apply_t(v0, &params)?;
            check_window_band(&b, p)?;
            apply_t_inverse(&wave_dirac_branches(&b, p.t, p.a)?, &params)
        }
        WaveForm::PaperLiteral => wave_ho_literal(v0, p),
    }
}

/// What [`wave_ho`] in corrected form computes when evaluated exactly:
/// each mode `h_n` is transported to `e^{-λ_n X}` and scaled by
/// [`window_exponential_response`].
pub fn window_wave_oracle(c: &SpectralCoefficients, t: f64) -> Result<SampledFunction> {
    let a = c.a();
    let factors = (0..=c.degree())
        .map(|n| window_exponential_response(t, crate::hermite::eigenvalue(n, a)))
        .collect::<Result<Vec<_>>>()?;
    c.synthesize(|lambda| factors[((lambda / a - 1.0) / 2.0).round() as usize])
}

/// The window at `X` reaches down to `X - t/2`, i.e. up to `ξ e^{at}`.
/// Rejects data whose spectrum is still significant where that reach
/// crosses the band edge.
fn check_window_band(b: &BranchPair, p: OscillatorParams) -> Result<()> {
    let g = *b.grid();
    let cut = g.x_min() + 0.5 * p.t;
    let mut inner = 0.0f64;
    let mut peak = 0.0f64;
    for j in 0..g.len() {
        let x = g.point(j);
        let w = weight((-2.0 * p.a * x).exp(), p.a)?;
        let m = b.plus.values()[j].norm().max(b.minus.values()[j].norm()) / w;
        peak = peak.max(m);
        if x <= cut {
            inner = inner.max(m);
        }
    }
    if peak > 0.0 && inner > WAVE_WINDOW_TOLERANCE * peak {
        return Err(Error::Window(format!(
            "at t = {} the window leaves the resolved band where the spectrum is still {:.3e} of its peak",
            p.t,
            inner / peak
        )));
    }
    Ok(())
}

/// Tanh-sinh level for the `ξ'` integral of the printed form.
const LITERAL_LEVEL: u32 = 5;
/// Samples of the fine spectral table used by the printed form.
const LITERAL_TABLE: usize = 4096;

fn wave_ho_literal(v0: &SampledFunction, p: OscillatorParams) -> Result<SampledFunction> {
    let (a, t) = (p.a, p.t);
    let grid = *v0.grid();
    let grown = v0.map(|x, v| v * (0.5 * a * x * x).exp())?;
    let edge = grown.edge_ratio(2);
    if edge > crate::fourier::DECAY_THRESHOLD {
        return Err(Error::Decay(format!(
            "e^(ax²/2)·v0 reaches {edge:.3e} of its peak at the grid ends; its transform is undefined"
        )));
    }
    let nyquist = PI / grid.spacing();
    let at = a * t;
    let table_grid = Grid1D::new(0.0, nyquist * at.exp(), LITERAL_TABLE)?;
    let mut table = evaluate_ft(&grown, &table_grid.points());
    let peak = table.iter().map(|v| v.norm()).fold(0.0, f64::max);
    // Past the resolved band the table is rounding noise, which the growing
    // factor e^{ξ'²/4a} would turn into overflow.
    let resolved = table
        .iter()
        .rposition(|v| v.norm() >= WAVE_TRANSPORT_FLOOR * peak)
        .map_or(0.0, |k| table_grid.point(k))
        .min(nyquist);
    let reach = resolved * (-at).exp();
    let inner_peak = table
        .iter()
        .enumerate()
        .filter(|&(k, _)| table_grid.point(k) >= reach)
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);
    if peak > 0.0 && inner_peak > WAVE_WINDOW_TOLERANCE * peak {
        return Err(Error::Window(format!(
            "at t = {t} the window leaves the resolved band where the spectrum is still {:.3e} of its peak",
            inner_peak / peak
        )));
    }
    for (k, v) in table.iter_mut().enumerate() {
        if table_grid.point(k) > resolved {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    let rule = TanhSinh::new(LITERAL_LEVEL);
    // Erfc(√a t / sqrt(2|σ|)) for σ = at·s
    let weights: Vec<(f64, f64)> = rule
        .nodes()
        .iter()
        .map(|n| {
            let e = erfc_paper(a.sqrt() * t / (2.0 * at * n.s).sqrt()).unwrap_or(0.0);
            (at * n.s, n.weight * at * e)
        })
        .collect();
    let inner = |xi: f64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(sigma, w) in &weights {
            for xp in [xi * sigma.exp(), xi * (-sigma).exp()] {
                if xp > resolved {
                    continue;
                }
                let f = interpolate(&table_grid, &table, xp, 8).unwrap_or_default();
                // dξ' = ξ' dσ, and e^{-ξ²/4a} of the outer factor folded in
                let growth = (xp * xp - xi * xi) / (4.0 * a);
                acc += w * growth.exp() * xp.sqrt() * f;
            }
        }
        acc
    };
    let spectrum = SpectralFunction::from_fn(grid, |xi| {
        if xi <= 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            inner(xi) / xi.sqrt()
        }
    })?;
    let scale = Complex64::new(-1.0 / (a * PI.sqrt()), 0.0);
    undamp(&inverse_ft(&spectrum)?.scale(scale), a, WAVE_UNDAMP_FLOOR)
}

/// `spectral_tail` of the data, for reports.
pub fn admissibility_tail(u0: &SampledFunction, a: f64) -> Result<f64> {
    spectral_tail(u0, a)
}
