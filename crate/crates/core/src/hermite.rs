//! Hermite eigenfunctions of `L^a = ∂² - a² x²` and the spectral heat and
//! wave propagators built from their eigenvalues `-(2n+1) a`.
//!
//! This is the ground truth the closed-form kernels are checked against.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, SampledFunction};
use crate::par;
use crate::quadrature::quadrature_weights;

pub const MAX_DEGREE: usize = 256;

/// Truncation used when callers have no reason to pick another.
pub const DEFAULT_MODES: usize = 50;

/// `(2n+1) a`, the n-th eigenvalue of `-L^a`.
pub fn eigenvalue(n: usize, a: f64) -> f64 {
    (2 * n + 1) as f64 * a
}

fn check_a(a: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!(
            "oscillator coupling must be positive, got {a}"
        )));
    }
    Ok(())
}

/// `h_0(x) .. h_{n_max}(x)` by the normalized three-term recurrence
/// `h_{k+1} = sqrt(2/(k+1)) √a x h_k - sqrt(k/(k+1)) h_{k-1}`.
pub fn hermite_table(n_max: usize, a: f64, x: f64) -> Vec<f64> {
    let y = a.sqrt() * x;
    let mut out = Vec::with_capacity(n_max + 1);
    let h0 = (a / std::f64::consts::PI).powf(0.25) * (-0.5 * y * y).exp();
    out.push(h0);
    if n_max == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * y * h0);
    for k in 1..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Normalized Hermite function `h_n(x) = (a/π)^{1/4} (2^n n!)^{-1/2} H_n(√a x) e^{-a x²/2}`.
pub fn hermite_fn(n: usize, a: f64, x: f64) -> Result<f64> {
    check_a(a)?;
    if n > MAX_DEGREE {
        return Err(Error::Domain(format!("degree {n} exceeds {MAX_DEGREE}")));
    }
    Ok(hermite_table(n, a, x)[n])
}

/// `h_n` sampled on `grid`.
pub fn hermite_sampled(n: usize, a: f64, grid: Grid1D) -> Result<SampledFunction> {
    check_a(a)?;
    if n > MAX_DEGREE {
        return Err(Error::Domain(format!("degree {n} exceeds {MAX_DEGREE}")));
    }
    SampledFunction::from_real_fn(grid, |x| hermite_table(n, a, x)[n])
}

/// Coefficients `c_0 .. c_N` of a function in the `h_n` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients {
    a: f64,
    grid: Grid1D,
    coeffs: Vec<Complex64>,
}

impl SpectralCoefficients {
    pub fn new(a: f64, grid: Grid1D, coeffs: Vec<Complex64>) -> Result<Self> {
        check_a(a)?;
        if coeffs.is_empty() || coeffs.len() > MAX_DEGREE + 1 {
            return Err(Error::Domain(format!(
                "need 1 to {} coefficients, got {}",
                MAX_DEGREE + 1,
                coeffs.len()
            )));
        }
        if coeffs
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::NonFinite(0));
        }
        Ok(Self { a, grid, coeffs })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Highest retained degree N.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `|c_N| / max |c_n|`.
    pub fn tail_ratio(&self) -> f64 {
        let peak = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            0.0
        } else {
            self.coeffs[self.degree()].norm() / peak
        }
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ m(λ_n) c_n h_n` on the stored grid.
    pub fn synthesize(&self, multiplier: impl Fn(f64) -> f64 + Sync) -> Result<SampledFunction> {
        let weights: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &c)| c * multiplier(eigenvalue(n, self.a)))
            .collect();
        let grid = self.grid;
        let degree = self.degree();
        let a = self.a;
        let values = par::map_indices(grid.len(), |j| {
            let table = hermite_table(degree, a, grid.point(j));
            table
                .iter()
                .zip(&weights)
                .map(|(&h, &w)| w * h)
                .sum::<Complex64>()
        });
        SampledFunction::new(grid, values)
    }

    /// `Σ c_n h_n`.
    pub fn reconstruct(&self) -> Result<SampledFunction> {
        self.synthesize(|_| 1.0)
    }
}

/// Projection onto `h_0 .. h_n_max` by quadrature. Logs a warning when
/// the last coefficient is above `1e-6` of the largest.
pub fn expand(f: &SampledFunction, a: f64, n_max: usize) -> Result<SpectralCoefficients> {
    check_a(a)?;
    if n_max > MAX_DEGREE {
        return Err(Error::Domain(format!(
            "degree {n_max} exceeds {MAX_DEGREE}"
        )));
    }
    let grid = *f.grid();
    let weights = quadrature_weights(&grid);
    let values = f.values();
    let rows = par::map_indices(grid.len(), |j| {
        let wf = weights[j] * values[j];
        hermite_table(n_max, a, grid.point(j))
            .into_iter()
            .map(|h| wf * h)
            .collect::<Vec<_>>()
    });
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n_max + 1];
    for row in rows {
        for (c, v) in coeffs.iter_mut().zip(row) {
            *c += v;
        }
    }
    let out = SpectralCoefficients::new(a, grid, coeffs)?;
    if out.tail_ratio() > 1e-6 {
        log::warn!(
            "expand: truncation tail |c_N|/max|c_n| = {:.3e} at N = {n_max}",
            out.tail_ratio()
        );
    }
    Ok(out)
}

/// `Σ e^{-(2n+1) a t} c_n h_n`.
pub fn heat_oracle(c: &SpectralCoefficients, t: f64) -> Result<SampledFunction> {
    c.synthesize(|lambda| (-lambda * t).exp())
}

/// `Σ sin(t √λ_n)/√λ_n · c_n h_n`: solves `v_tt = L^a v` with `v(0) = 0`,
/// `v_t(0) = Σ c_n h_n`.
pub fn wave_oracle(c: &SpectralCoefficients, t: f64) -> Result<SampledFunction> {
    c.synthesize(|lambda| {
        let w = lambda.sqrt();
        (t * w).sin() / w
    })
}

/// Time derivative of [`wave_oracle`], `Σ cos(t √λ_n) c_n h_n`.
pub fn wave_oracle_velocity(c: &SpectralCoefficients, t: f64) -> Result<SampledFunction> {
    c.synthesize(|lambda| (t * lambda.sqrt()).cos())
}

/// Reproducible test data: `Σ_{n ≤ degree} c_n h_n` with coefficients
/// drawn uniformly from the unit square, `c_n` shrunk by `2^{-n/2}`.
pub fn random_combination(
    a: f64,
    grid: Grid1D,
    degree: usize,
    seed: u64,
) -> Result<(SampledFunction, SpectralCoefficients)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<Complex64> = (0..=degree)
        .map(|n| {
            let shrink = 0.5f64.powf(n as f64 / 2.0);
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * shrink
        })
        .collect();
    let c = SpectralCoefficients::new(a, grid, coeffs)?;
    Ok((c.reconstruct()?, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::spectral_derivative;
    use crate::grid::make_grid;

    #[test]
    fn closed_forms_at_origin() {
        let h0 = hermite_fn(0, 1.0, 0.0).unwrap();
        assert!((h0 - 0.751_125_5).abs() < 1e-7);
        assert!((h0 - std::f64::consts::PI.powf(-0.25)).abs() < 1e-15);
        assert_eq!(hermite_fn(1, 1.0, 0.0).unwrap(), 0.0);
        assert!(hermite_fn(MAX_DEGREE + 1, 1.0, 0.0).is_err());
        assert!(hermite_fn(2, 0.0, 0.0).is_err());
    }

    #[test]
    fn eigen_residual() {
        for a in [0.5, 1.0, 2.0] {
            let l = 14.0 / f64::sqrt(a);
            let g = make_grid(-l, l, 512).unwrap();
            for n in 0..=10 {
                let h = hermite_sampled(n, a, g).unwrap();
                let d2 = spectral_derivative(&h, 2).unwrap();
                let lhs = d2
                    .map(|x, v| v - a * a * x * x * h.values()[g.position(x).round() as usize])
                    .unwrap();
                let res = lhs
                    .add(&h.scale(Complex64::new(eigenvalue(n, a), 0.0)))
                    .unwrap();
                let rel = res.norm_l2() / h.norm_l2();
                assert!(rel < 1e-8, "a {a} n {n}: {rel:.3e}");
            }
        }
    }

    #[test]
    fn expansion_of_a_basis_function() {
        let g = make_grid(-12.0, 12.0, 512).unwrap();
        let h3 = hermite_sampled(3, 1.0, g).unwrap();
        let c = expand(&h3, 1.0, 20).unwrap();
        for (n, v) in c.coeffs().iter().enumerate() {
            let want = if n == 3 { 1.0 } else { 0.0 };
            assert!((v - want).norm() < 1e-10, "n {n}: {v}");
        }
    }

    #[test]
    fn x_times_gaussian_is_first_mode() {
        let a = 1.5;
        let g = make_grid(-10.0, 10.0, 512).unwrap();
        let f = SampledFunction::from_real_fn(g, |x| x * (-a * x * x / 2.0).exp()).unwrap();
        let c = expand(&f, a, 12).unwrap();
        let peak = c.coeffs()[1].norm();
        assert!(peak > 0.1);
        for (n, v) in c.coeffs().iter().enumerate() {
            if n != 1 {
                assert!(v.norm() < 1e-10 * peak, "n {n}");
            }
        }
    }

    #[test]
    fn single_mode_wave() {
        let g = make_grid(-10.0, 10.0, 128).unwrap();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 5];
        coeffs[0] = Complex64::new(1.0, 0.0);
        let c = SpectralCoefficients::new(1.0, g, coeffs).unwrap();
        let t = 0.7;
        let v = wave_oracle(&c, t).unwrap();
        let heat = heat_oracle(&c, t).unwrap();
        for j in 0..g.len() {
            let h0 = hermite_fn(0, 1.0, g.point(j)).unwrap();
            assert!((v.values()[j].re - t.sin() * h0).abs() < 1e-15);
            assert!((heat.values()[j].re - (-t).exp() * h0).abs() < 1e-15);
        }
    }
}
