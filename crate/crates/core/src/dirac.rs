//! Heat and wave flows for the transport generator `D = ∂/∂X`.
//!
//! The heat flow `∂_t U = ∂_X U` is a translation, `U(t, X) = U0(t + X)`.
//! The wave problem `∂²_t V = ∂_X V`, `V(0) = 0`, `∂_t V(0) = V0` is solved
//! two ways: by the explicit kernel `W(t, X, X')` integrated over the window
//! `|X - X'| < t/2`, and by the spectral multiplier `sin(t√z)/√z` at
//! `z = -iξ`, which is exact for band-limited data.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{forward_ft, inverse_ft};
use crate::grid::SampledFunction;
use crate::intertwining::BranchPair;
use crate::par;
use crate::quadrature::{interpolate, TanhSinh};
use crate::special::{erfc_paper, tricomi_u, UEvalPolicy};

/// Largest `t·sqrt(R/2)` accepted by [`spectral_wave_oracle_dirac`].
pub const GROWTH_EXPONENT_LIMIT: f64 = 25.0;
/// Largest multiplier magnitude accepted by [`spectral_wave_oracle_dirac`].
pub const GROWTH_LIMIT: f64 = 1e10;
/// Spectral samples below this fraction of the peak are dropped by the
/// oracle so that rounding noise is not amplified by the multiplier.
pub const ORACLE_BAND_FLOOR: f64 = 1e-13;
/// Default tanh-sinh level for the window integral.
pub const WINDOW_LEVEL: u32 = 6;
const STENCIL: usize = 8;

/// `U0(t + X)` by multiplying the spectrum with `e^{iξt}`.
///
/// Exact for band-limited data; content that leaves the left end wraps
/// around, which is logged when it is not negligible.
pub fn heat_dirac(u0: &SampledFunction, t: f64) -> Result<SampledFunction> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "transport time must be non-negative, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(u0.clone());
    }
    let grid = u0.grid();
    if t >= grid.length() {
        log::warn!(
            "heat_dirac: shift {t} exceeds the grid length {}",
            grid.length()
        );
    } else {
        let leaving = (0..u0.len())
            .filter(|&j| grid.point(j) < grid.x_min() + t)
            .map(|j| u0.values()[j].norm())
            .fold(0.0, f64::max);
        let peak = u0.sup_norm();
        if peak > 0.0 && leaving > 1e-10 * peak {
            log::warn!(
                "heat_dirac: {:.3e} of the peak leaves the grid and wraps around",
                leaving / peak
            );
        }
    }
    let spectrum = forward_ft(u0)?.multiply(|xi| Complex64::from_polar(1.0, xi * t))?;
    inverse_ft(&spectrum)
}

/// The translation on branch data: the samples are kept and the grid is
/// moved by `-t`, which realizes `U0(t + X)` without interpolation.
pub fn heat_dirac_branches(b: &BranchPair, t: f64) -> Result<BranchPair> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "transport time must be non-negative, got {t}"
        )));
    }
    b.map_branches(|f| SampledFunction::new(f.grid().shifted(-t)?, f.values().to_vec()))
}

fn check_kernel_args(t: f64, x: f64, xp: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("wave kernel needs t > 0, got {t}")));
    }
    let u = (x - xp).abs();
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::Domain(format!(
            "wave kernel is singular at X = X' (X = {x}, X' = {xp})"
        )));
    }
    Ok(u)
}

/// `W(t, X, X') = (2/√π)·Erfc(t / sqrt(4|X - X'|))` with
/// `Erfc(z) = ∫_z^∞ e^{-s²} ds`.
pub fn wave_kernel_dirac(t: f64, x: f64, xp: f64) -> Result<f64> {
    let u = check_kernel_args(t, x, xp)?;
    Ok(2.0 / PI.sqrt() * erfc_paper(t / (4.0 * u).sqrt())?)
}

/// The same kernel through the confluent function,
/// `t / sqrt(4π|X - X'|) · e^{-z} U(1, 3/2, z)` with `z = t²/(4|X - X'|)`.
pub fn wave_kernel_dirac_tricomi(t: f64, x: f64, xp: f64, policy: &UEvalPolicy) -> Result<f64> {
    let u = check_kernel_args(t, x, xp)?;
    let z = t * t / (4.0 * u);
    if z > 700.0 {
        // e^{-z} underflows; the erfc form is then exactly representable as 0
        return Ok(0.0);
    }
    Ok(t / (4.0 * PI * u).sqrt() * (-z).exp() * tricomi_u(1.0, 1.5, z, policy)?)
}

/// How [`wave_dirac_with`] continues the data beyond the sampled range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extension {
    /// Zero outside the grid.
    Zero,
    /// Zero below the grid; `v(X_last)·e^{-rate (X - X_last)}` above it.
    DecayAbove { rate: f64 },
}

/// Solution of the Dirac wave problem by the windowed kernel integral,
/// data continued by zero outside the grid.
pub fn wave_dirac(v0: &SampledFunction, t: f64) -> Result<SampledFunction> {
    wave_dirac_with(v0, t, Extension::Zero, WINDOW_LEVEL)
}

/// `V(t, X) = ∫_{|X - X'| < t/2} W(t, X, X') V0(X') dX'`.
///
/// With `X' = X + s t/2` the integral becomes
/// `(t/2) ∫_0^1 K(s) [V0(X + st/2) + V0(X - st/2)] ds`,
/// `K(s) = (2/√π) Erfc(sqrt(t / 2s))`, whose only irregularity is the
/// flat `e^{-t/2s}` approach to zero at `s = 0`. A tanh-sinh rule of the
/// given level handles it; `V0` is interpolated between samples.
pub fn wave_dirac_with(
    v0: &SampledFunction,
    t: f64,
    extension: Extension,
    level: u32,
) -> Result<SampledFunction> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "wave time must be non-negative, got {t}"
        )));
    }
    let grid = *v0.grid();
    if t == 0.0 {
        return Ok(SampledFunction::zeros(grid));
    }
    if t / 2.0 >= grid.length() / 2.0 {
        return Err(Error::Window(format!(
            "window half-width {} reaches half the grid length {}",
            t / 2.0,
            grid.length()
        )));
    }
    let rule = TanhSinh::new(level);
    let nodes: Vec<(f64, f64)> = rule
        .nodes()
        .iter()
        .map(|n| {
            let k = 2.0 / PI.sqrt() * erfc_paper((t / (2.0 * n.s)).sqrt()).unwrap_or(0.0);
            (0.5 * t * n.s, n.weight * k)
        })
        .filter(|&(_, w)| w > 0.0)
        .collect();
    let values = v0.values();
    let last = grid.point(grid.len() - 1);
    let sample = |x: f64| -> Complex64 {
        match interpolate(&grid, values, x, STENCIL) {
            Some(v) => v,
            None => match extension {
                Extension::DecayAbove { rate } if x > last => {
                    values[grid.len() - 1] * (-rate * (x - last)).exp()
                }
                _ => Complex64::new(0.0, 0.0),
            },
        }
    };
    let out = par::map_indices(grid.len(), |j| {
        let x = grid.point(j);
        let mut acc = Complex64::new(0.0, 0.0);
        for &(offset, w) in &nodes {
            acc += w * (sample(x + offset) + sample(x - offset));
        }
        acc * (0.5 * t)
    });
    SampledFunction::new(grid, out)
}

/// Window solution applied to both halves of a branch pair. Branch data
/// behaves like `e^{-aX}` past the large-`X` end, which is used as the
/// continuation there.
pub fn wave_dirac_branches(b: &BranchPair, t: f64, a: f64) -> Result<BranchPair> {
    let ext = Extension::DecayAbove { rate: a };
    b.map_branches(|f| wave_dirac_with(f, t, ext, WINDOW_LEVEL))
}

/// `m(t, z) = sin(t√z)/√z = Σ (-1)^n t^{2n+1} z^n / (2n+1)!`, entire in `z`.
pub fn wave_multiplier(t: f64, z: Complex64) -> Complex64 {
    if (t * t * z).norm() <= 1.0 {
        let w = -t * t * z;
        let mut term = Complex64::new(t, 0.0);
        let mut acc = term;
        for n in 1..40 {
            term *= w / ((2 * n) as f64 * (2 * n + 1) as f64);
            acc += term;
            if term.norm() <= 1e-18 * acc.norm() {
                break;
            }
        }
        acc
    } else {
        let r = z.sqrt();
        (r * t).sin() / r
    }
}

/// Spectral solution of the Dirac wave problem: since `∂_X e^{iξX} = iξ e^{iξX}`,
/// `∂²_t V̂ = iξ V̂`, so `V̂(t, ξ) = m(t, -iξ) V̂0(ξ)`.
///
/// Frequencies where `V̂0` is below [`ORACLE_BAND_FLOOR`] of its peak are
/// dropped; the retained band radius `R` must satisfy
/// `t·sqrt(R/2) ≤ 25` and the multiplier must stay below `1e10`.
pub fn spectral_wave_oracle_dirac(v0: &SampledFunction, t: f64) -> Result<SampledFunction> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "wave time must be non-negative, got {t}"
        )));
    }
    let spectrum = forward_ft(v0)?;
    let peak = spectrum.sup_norm();
    let keep: Vec<bool> = spectrum
        .values()
        .iter()
        .map(|v| v.norm() >= ORACLE_BAND_FLOOR * peak && peak > 0.0)
        .collect();
    let radius = (0..keep.len())
        .filter(|&k| keep[k])
        .map(|k| spectrum.xi(k).abs())
        .fold(0.0, f64::max);
    let exponent = t * (radius / 2.0).sqrt();
    if exponent > GROWTH_EXPONENT_LIMIT {
        return Err(Error::Growth {
            magnitude: exponent.exp(),
            limit: GROWTH_EXPONENT_LIMIT.exp(),
        });
    }
    let multipliers: Vec<Complex64> = (0..keep.len())
        .map(|k| {
            if keep[k] {
                wave_multiplier(t, Complex64::new(0.0, -spectrum.xi(k)))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let largest = multipliers.iter().map(|m| m.norm()).fold(0.0, f64::max);
    if largest > GROWTH_LIMIT {
        return Err(Error::Growth {
            magnitude: largest,
            limit: GROWTH_LIMIT,
        });
    }
    let values = spectrum
        .values()
        .iter()
        .zip(&multipliers)
        .map(|(v, m)| v * m)
        .collect();
    inverse_ft(&crate::fourier::SpectralFunction::new(*v0.grid(), values)?)
}

/// `∫_0^1 erf(sqrt(t/2s)) ds`-complement: the amount by which the window
/// solution falls short of `t·V0` for constant data, divided by `t`.
pub fn constant_data_deficit(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("deficit needs t > 0, got {t}")));
    }
    Ok(1.0 - window_exponential_response(t, 0.0)? / t)
}

/// What the window solution does to `e^{-λX}`: it returns `r e^{-λX}` with
/// `r = t ∫₀¹ K(s) cosh(λst/2) ds`. The exact flow would give
/// `sin(t√λ)/√λ` for the transported oscillator modes.
pub fn window_exponential_response(t: f64, lambda: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "need finite t ≥ 0 and λ, got t = {t}, λ = {lambda}"
        )));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let rule = TanhSinh::new(8);
    let mut sum = 0.0;
    for n in rule.nodes() {
        let k = 2.0 / PI.sqrt() * erfc_paper((t / (2.0 * n.s)).sqrt())?;
        sum += n.weight * k * (0.5 * lambda * n.s * t).cosh();
    }
    Ok(t * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, Grid1D};

    fn gaussian(g: Grid1D) -> SampledFunction {
        SampledFunction::from_real_fn(g, |x| (-x * x).exp()).unwrap()
    }

    #[test]
    fn heat_shift_examples() {
        let g = make_grid(-20.0, 20.0, 512).unwrap();
        let u = heat_dirac(&gaussian(g), 1.0).unwrap();
        let j0 = g.len() / 2;
        assert_eq!(g.point(j0), 0.0);
        assert!((u.values()[j0].re - (-1f64).exp()).abs() < 1e-12);
        let want = SampledFunction::from_real_fn(g, |x| (-(x + 1.0) * (x + 1.0)).exp()).unwrap();
        assert!(u.rel_l2_error(&want).unwrap() < 1e-12);
    }

    #[test]
    fn heat_group_law() {
        let g = make_grid(-20.0, 20.0, 512).unwrap();
        let u0 = gaussian(g);
        let two = heat_dirac(&heat_dirac(&u0, 0.7).unwrap(), 1.1).unwrap();
        let one = heat_dirac(&u0, 1.8).unwrap();
        assert!(two.rel_l2_error(&one).unwrap() < 1e-12);
        assert!(heat_dirac(&u0, -1.0).is_err());
    }

    #[test]
    fn branch_relabel_is_exact() {
        let g = make_grid(0.0, 4.0, 64).unwrap();
        let f = SampledFunction::from_real_fn(g, |x| x * x).unwrap();
        let b = BranchPair::new(f.clone(), f).unwrap();
        let s = heat_dirac_branches(&b, 2.0).unwrap();
        // U(t, X) = U0(t + X): at X = 1 the value is 9
        let j = s
            .grid()
            .points()
            .iter()
            .position(|&x| (x - 1.0).abs() < 1e-12)
            .unwrap();
        assert!((s.plus.values()[j].re - 9.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_values() {
        assert!((wave_kernel_dirac(1e-9, 0.0, 1.0).unwrap() - 1.0).abs() < 1e-9);
        let w = wave_kernel_dirac(2.0, 0.0, 1.0).unwrap();
        assert!((w - 2.0 / PI.sqrt() * 0.139402792640331).abs() < 1e-14);
        assert!((w - 0.1572992070502851).abs() < 1e-12);
        assert!(wave_kernel_dirac(1.0, 0.5, 0.5).is_err());
        assert!(wave_kernel_dirac(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn kernel_forms_agree() {
        let policy = UEvalPolicy::default();
        for (t, u) in [(1.0, 1.0), (0.5, 2.0), (2.0, 0.25)] {
            let a = wave_kernel_dirac(t, u, 0.0).unwrap();
            let b = wave_kernel_dirac_tricomi(t, u, 0.0, &policy).unwrap();
            assert!((a - b).abs() < 1e-10, "t {t} u {u}: {a} vs {b}");
        }
    }

    #[test]
    fn window_solution_basics() {
        let g = make_grid(-10.0, 10.0, 256).unwrap();
        assert_eq!(wave_dirac(&gaussian(g), 0.0).unwrap().sup_norm(), 0.0);
        assert_eq!(
            wave_dirac(&SampledFunction::zeros(g), 0.3)
                .unwrap()
                .sup_norm(),
            0.0
        );
        assert!(matches!(
            wave_dirac(&gaussian(g), 20.0),
            Err(Error::Window(_))
        ));
    }

    #[test]
    fn constant_data_deficit_matches_quadrature() {
        // ∫_0^1 erfc(sqrt(t/2s)) ds complement, high-precision values
        for (t, want) in [(1e-2, 0.149843), (1e-3, 0.049471), (1e-4, 0.015858)] {
            let d = constant_data_deficit(t).unwrap();
            assert!((d - want).abs() < 2e-6, "t {t}: {d}");
        }
        let g = make_grid(-4.0, 4.0, 256).unwrap();
        let ones = SampledFunction::from_real_fn(g, |_| 1.0).unwrap();
        let t = 1e-2;
        let v = wave_dirac(&ones, t).unwrap();
        let mid = v.values()[128].re / t;
        assert!((mid - (1.0 - constant_data_deficit(t).unwrap())).abs() < 1e-10);
    }

    #[test]
    fn multiplier_series_and_closed_form_agree() {
        for z in [
            Complex64::new(0.3, -0.7),
            Complex64::new(0.0, -1.0),
            Complex64::new(-0.9, 0.1),
        ] {
            let t = 0.999;
            let series = wave_multiplier(t, z);
            let r = z.sqrt();
            let closed = (r * t).sin() / r;
            assert!((series - closed).norm() < 1e-14);
        }
        assert_eq!(
            wave_multiplier(0.4, Complex64::new(0.0, 0.0)),
            Complex64::new(0.4, 0.0)
        );
    }

    #[test]
    fn oracle_constant_and_growth_guard() {
        let g = make_grid(-10.0, 10.0, 256).unwrap();
        let ones = SampledFunction::from_real_fn(g, |_| 2.0).unwrap();
        let v = spectral_wave_oracle_dirac(&ones, 0.7).unwrap();
        assert!(v.values().iter().all(|z| (z.re - 1.4).abs() < 1e-12));
        let noisy =
            SampledFunction::from_real_fn(g, |x| if x.abs() < 0.5 { 1.0 } else { 0.0 }).unwrap();
        assert!(matches!(
            spectral_wave_oracle_dirac(&noisy, 10.0),
            Err(Error::Growth { .. })
        ));
    }
}
