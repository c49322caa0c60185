//! Quadrature rules and local interpolation on uniform grids.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, SampledFunction};

/// Integral of `f` over `[x_min, x_max]`.
///
/// The half-open samples are closed with a node at `x_max` obtained by
/// quadratic extrapolation from the last three samples (exact for
/// polynomials of degree <= 2). That gives `n` intervals: composite
/// Simpson when `n` is even, the trapezoid rule when it is odd.
pub fn quadrature(f: &SampledFunction) -> Complex64 {
    let v = f.values();
    let n = v.len();
    let closing = 3.0 * v[n - 1] - 3.0 * v[n - 2] + v[n - 3];
    let h = f.grid().spacing();
    if n.is_multiple_of(2) {
        let mut odd = Complex64::new(0.0, 0.0);
        let mut even = Complex64::new(0.0, 0.0);
        for (j, &x) in v.iter().enumerate().skip(1) {
            if j % 2 == 1 {
                odd += x;
            } else {
                even += x;
            }
        }
        (v[0] + closing + 4.0 * odd + 2.0 * even) * (h / 3.0)
    } else {
        let inner: Complex64 = v[1..].iter().sum();
        (0.5 * (v[0] + closing) + inner) * h
    }
}

/// Weights `w_j` with `quadrature(f) == Σ w_j f_j` (up to rounding).
pub fn quadrature_weights(grid: &Grid1D) -> Vec<f64> {
    let n = grid.len();
    let h = grid.spacing();
    let mut w = vec![0.0; n];
    let closing;
    if n.is_multiple_of(2) {
        for (j, wj) in w.iter_mut().enumerate() {
            *wj = h / 3.0
                * if j == 0 {
                    1.0
                } else if j % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
        }
        closing = h / 3.0;
    } else {
        for (j, wj) in w.iter_mut().enumerate() {
            *wj = if j == 0 { 0.5 * h } else { h };
        }
        closing = 0.5 * h;
    }
    w[n - 1] += 3.0 * closing;
    w[n - 2] -= 3.0 * closing;
    w[n - 3] += closing;
    w
}

/// Closed composite rule on `m` equally spaced nodes including both ends.
///
/// Simpson for an even interval count; otherwise Simpson on the first
/// `m - 4` intervals plus the 3/8 rule on the last three.
pub fn simpson_closed(values: &[Complex64], h: f64) -> Result<Complex64> {
    let m = values.len();
    if m < 3 {
        return Err(Error::Domain(format!(
            "Simpson needs at least 3 nodes, got {m}"
        )));
    }
    let intervals = m - 1;
    let simpson = |v: &[Complex64]| -> Complex64 {
        let k = v.len() - 1;
        let mut acc = v[0] + v[k];
        for (j, &x) in v.iter().enumerate().take(k).skip(1) {
            acc += if j % 2 == 1 { 4.0 * x } else { 2.0 * x };
        }
        acc * (h / 3.0)
    };
    if intervals.is_multiple_of(2) {
        return Ok(simpson(values));
    }
    if m == 4 {
        return Ok(three_eighths(values, h));
    }
    let split = m - 4;
    Ok(simpson(&values[..=split]) + three_eighths(&values[split..], h))
}

fn three_eighths(v: &[Complex64], h: f64) -> Complex64 {
    (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3]) * (3.0 * h / 8.0)
}

/// Node of a [`TanhSinh`] rule on `[0, 1]`. `one_minus` is `1 - s`
/// computed without cancellation.
#[derive(Debug, Clone, Copy)]
pub struct UnitNode {
    pub s: f64,
    pub one_minus: f64,
    pub weight: f64,
}

/// Fixed-step double-exponential rule on `[0, 1]`. Handles integrable
/// endpoint singularities and boundary layers.
#[derive(Debug, Clone)]
pub struct TanhSinh {
    nodes: Vec<UnitNode>,
}

impl TanhSinh {
    const TAU_MAX: f64 = 4.0;

    /// Step `2^-level` in the transformed variable.
    pub fn new(level: u32) -> Self {
        let h = 0.5f64.powi(level as i32);
        let steps = (Self::TAU_MAX / h).ceil() as i64;
        let half_pi = std::f64::consts::FRAC_PI_2;
        let nodes = (-steps..=steps)
            .map(|k| {
                let tau = k as f64 * h;
                let u = half_pi * tau.sinh();
                let e = (-2.0 * u.abs()).exp();
                // s = 1 / (1 + exp(-2u)), and its complement
                let (s, one_minus) = if u >= 0.0 {
                    (1.0 / (1.0 + e), e / (1.0 + e))
                } else {
                    (e / (1.0 + e), 1.0 / (1.0 + e))
                };
                // ds/dtau = (pi/2) cosh(tau) / (2 cosh^2 u)
                let weight = h * half_pi * tau.cosh() * 2.0 * e / ((1.0 + e) * (1.0 + e));
                UnitNode {
                    s,
                    one_minus,
                    weight,
                }
            })
            .filter(|n| n.weight > 0.0 && n.s > 0.0 && n.one_minus > 0.0)
            .collect();
        Self { nodes }
    }

    pub fn nodes(&self) -> &[UnitNode] {
        &self.nodes
    }

    pub fn integrate(&self, g: impl Fn(&UnitNode) -> f64) -> f64 {
        self.nodes.iter().map(|n| n.weight * g(n)).sum()
    }
}

/// `∫_0^∞ f(x) dx` by the exp-sinh substitution `x = exp((π/2) sinh τ)`
/// with step halving until two levels agree to `max(abs_tol, rel_tol·|I|)`.
/// `max_nodes` caps the work.
pub fn exp_sinh(
    f: impl Fn(f64) -> f64,
    abs_tol: f64,
    rel_tol: f64,
    max_nodes: usize,
) -> Result<f64> {
    const TAU_MAX: f64 = 5.0;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let term = |tau: f64| -> f64 {
        let x = (half_pi * tau.sinh()).exp();
        let fx = f(x);
        if fx == 0.0 {
            0.0
        } else {
            fx * x * half_pi * tau.cosh()
        }
    };
    let mut h = 0.5;
    let steps = (TAU_MAX / h) as i64;
    let mut sum: f64 = (-steps..=steps).map(|k| term(k as f64 * h)).sum();
    let mut estimate = sum * h;
    let mut used = (2 * steps + 1) as usize;
    loop {
        let new_steps = (TAU_MAX / h) as i64;
        // odd nodes of the halved step
        let added: f64 = (-new_steps..new_steps)
            .map(|k| term((k as f64 + 0.5) * h))
            .sum();
        used += (2 * new_steps) as usize;
        sum += added;
        h *= 0.5;
        let refined = sum * h;
        let diff = (refined - estimate).abs();
        estimate = refined;
        let tol = abs_tol.max(rel_tol * estimate.abs());
        if diff <= tol {
            return Ok(estimate);
        }
        if used * 2 > max_nodes {
            return Err(Error::NoConvergence(format!(
                "exp-sinh stalled at change {diff:.3e} after {used} nodes (tol {tol:.1e})"
            )));
        }
    }
}

/// Lagrange interpolation of uniform samples at coordinate `x` using a
/// `stencil`-point window around `x`. Returns `None` outside the sampled
/// range `[x_0, x_{n-1}]`.
pub fn interpolate(
    grid: &Grid1D,
    values: &[Complex64],
    x: f64,
    stencil: usize,
) -> Option<Complex64> {
    let n = values.len();
    let p = grid.position(x);
    let last = (n - 1) as f64;
    if !(p >= -1e-9 && p <= last + 1e-9) {
        return None;
    }
    let p = p.clamp(0.0, last);
    let nearest = p.round();
    if (p - nearest).abs() < 1e-12 {
        return Some(values[nearest as usize]);
    }
    let m = stencil.clamp(2, n);
    let base = p.floor() as i64 - (m as i64 - 1) / 2;
    let start = base.clamp(0, (n - m) as i64) as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..m {
        let xi = (start + i) as f64;
        let mut w = 1.0;
        for k in 0..m {
            if k != i {
                let xk = (start + k) as f64;
                w *= (p - xk) / (xi - xk);
            }
        }
        acc += w * values[start + i];
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn constant_integrates_exactly() {
        let g = make_grid(0.0, 1.0, 101).unwrap();
        let f = SampledFunction::from_real_fn(g, |_| 1.0).unwrap();
        assert!((quadrature(&f).re - 1.0).abs() < 1e-14);
        let g = make_grid(0.0, 1.0, 100).unwrap();
        let f = SampledFunction::from_real_fn(g, |_| 1.0).unwrap();
        assert!((quadrature(&f).re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_integral() {
        // erf(8) = 1 to double precision, so the target is sqrt(pi)
        let g = make_grid(-8.0, 8.0, 1025).unwrap();
        let f = SampledFunction::from_real_fn(g, |x| (-x * x).exp()).unwrap();
        let q = quadrature(&f);
        assert!((q.re - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!((q.re - 1.772_453_9).abs() < 1e-7);
    }

    #[test]
    fn weights_match_rule() {
        for n in [16usize, 17] {
            let g = make_grid(-2.0, 3.0, n).unwrap();
            let f = SampledFunction::from_real_fn(g, |x| (x * 1.3).sin() + x * x).unwrap();
            let w = quadrature_weights(&g);
            let via_w: Complex64 = w.iter().zip(f.values()).map(|(&w, &v)| w * v).sum();
            assert!((via_w - quadrature(&f)).norm() < 1e-13);
        }
    }

    #[test]
    fn odd_linear_vanishes() {
        for n in [8, 9, 64, 101] {
            let g = make_grid(-1.0, 1.0, n).unwrap();
            let f = SampledFunction::from_real_fn(g, |x| x).unwrap();
            assert!(quadrature(&f).norm() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn closed_simpson_cubic_exact() {
        for m in [3usize, 4, 5, 8, 11] {
            let h = 1.0 / (m - 1) as f64;
            let v: Vec<Complex64> = (0..m)
                .map(|j| {
                    let x = j as f64 * h;
                    Complex64::new(x * x * x, 0.0)
                })
                .collect();
            assert!(
                (simpson_closed(&v, h).unwrap().re - 0.25).abs() < 1e-14,
                "m = {m}"
            );
        }
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        let rule = TanhSinh::new(5);
        // ∫_0^1 s^{-1/2} ds = 2
        let v = rule.integrate(|n| n.s.powf(-0.5));
        assert!((v - 2.0).abs() < 1e-12);
        // ∫_0^1 ln(1 - s) ds = -1 needs the complement
        let v = rule.integrate(|n| n.one_minus.ln());
        assert!((v + 1.0).abs() < 1e-12);
    }

    #[test]
    fn exp_sinh_gamma_half() {
        // ∫_0^∞ x^{-1/2} e^{-x} dx = sqrt(pi)
        let v = exp_sinh(|x| (-x).exp() / x.sqrt(), 1e-14, 0.0, 10_000).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn lagrange_reproduces_polynomials() {
        let g = make_grid(-1.0, 1.0, 32).unwrap();
        let v: Vec<Complex64> = g
            .points()
            .iter()
            .map(|&x| Complex64::new(x.powi(5) - 2.0 * x, x * x))
            .collect();
        for x in [-1.0, -0.93, 0.01, 0.5, 0.9] {
            let got = interpolate(&g, &v, x, 8).unwrap();
            let want = Complex64::new(x.powi(5) - 2.0 * x, x * x);
            assert!((got - want).norm() < 1e-13, "x = {x}");
        }
        assert!(interpolate(&g, &v, 0.99, 8).is_none());
    }
}
