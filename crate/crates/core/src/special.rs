//! Complementary error function in the unnormalized convention
//! `Erfc(z) = ∫_z^∞ e^{-t²} dt` and the Tricomi confluent hypergeometric
//! function `U(a, c, z)` for real `a > 0`, `z > 0`.
//!
//! The same `U` also goes by "Lommel" and "degenerate" confluent
//! hypergeometric function in older tables; they are one function here.
//!
//! `Erfc(z) = (√π / 2) · erfc(z)` where `erfc` is the usual normalized one.

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quadrature::exp_sinh;

/// `√π / 2`, the factor between the unnormalized and standard `erfc`.
pub const HALF_SQRT_PI: f64 = 0.886_226_925_452_758;

/// `∫_z^∞ e^{-t²} dt` for finite `z >= 0`.
pub fn erfc_paper(z: f64) -> Result<f64> {
    if !z.is_finite() || z < 0.0 {
        return Err(Error::Domain(format!("Erfc needs finite z >= 0, got {z}")));
    }
    if z <= 1.0 {
        // Erfc(z) = √π/2 - Σ (-1)^n z^{2n+1} / (n! (2n+1))
        let z2 = z * z;
        let mut power = z;
        let mut sum = 0.0;
        for n in 0..60 {
            let term = power / (2 * n + 1) as f64;
            sum += term;
            if term.abs() < 1e-18 {
                break;
            }
            power *= -z2 / (n + 1) as f64;
        }
        return Ok(HALF_SQRT_PI - sum);
    }
    // e^{-z²}/2 · 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))), modified Lentz
    let tiny = 1e-300;
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    for k in 1..5000 {
        let a = k as f64 / 2.0;
        d = z + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = z + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    Ok((-z * z).exp() / (2.0 * f))
}

/// Controls for [`tricomi_u`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UEvalPolicy {
    /// Upper bound on integrand evaluations.
    pub quadrature_points: usize,
    /// Above this `z` the large-argument asymptotic series is used.
    pub series_cutoff: f64,
    pub target_abs_error: f64,
}

impl Default for UEvalPolicy {
    fn default() -> Self {
        Self {
            quadrature_points: 8192,
            series_cutoff: 40.0,
            target_abs_error: 1e-14,
        }
    }
}

impl UEvalPolicy {
    pub fn new(
        quadrature_points: usize,
        series_cutoff: f64,
        target_abs_error: f64,
    ) -> Result<Self> {
        if !(1e-14..=1e-6).contains(&target_abs_error) {
            return Err(Error::Domain(format!(
                "target_abs_error must lie in [1e-14, 1e-6], got {target_abs_error}"
            )));
        }
        if quadrature_points < 64 || !(series_cutoff > 0.0) {
            return Err(Error::Domain(
                "need at least 64 quadrature points and a positive series cutoff".into(),
            ));
        }
        Ok(Self {
            quadrature_points,
            series_cutoff,
            target_abs_error,
        })
    }
}

fn check_args(a: f64, c: f64, z: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() || !c.is_finite() {
        return Err(Error::Domain(format!(
            "U(a, c, z) is implemented for finite a > 0, got a = {a}, c = {c}"
        )));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!(
            "U(a, c, z) needs finite z > 0, got {z}; use tricomi_u_small_z near 0"
        )));
    }
    Ok(())
}

/// `U(a, c, z) = Γ(a)^{-1} ∫_0^∞ e^{-zt} t^{a-1} (1+t)^{c-a-1} dt`.
pub fn tricomi_u(a: f64, c: f64, z: f64, policy: &UEvalPolicy) -> Result<f64> {
    check_args(a, c, z)?;
    if z >= policy.series_cutoff {
        if let Some(v) = asymptotic_u(a, c, z) {
            return Ok(v);
        }
    }
    let g = gamma(a);
    let integrand = |t: f64| {
        let log = -z * t + (a - 1.0) * t.ln() + (c - a - 1.0) * t.ln_1p();
        log.exp()
    };
    let integral = exp_sinh(
        integrand,
        policy.target_abs_error * g,
        4e-16,
        policy.quadrature_points,
    )?;
    Ok(integral / g)
}

/// `U(a, c, z) ~ z^{-a} Σ_k (a)_k (a-c+1)_k / k! · (-1/z)^k`, summed up
/// to the smallest term. `None` when the terms stop shrinking before
/// reaching double precision.
fn asymptotic_u(a: f64, c: f64, z: f64) -> Option<f64> {
    let b = a - c + 1.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..200 {
        let kf = k as f64;
        let next = term * (a + kf) * (b + kf) / ((kf + 1.0) * -z);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            return Some(sum * z.powf(-a));
        }
    }
    None
}

/// `dU/dz (a, c, z) = -a U(a+1, c+1, z)`.
pub fn tricomi_u_deriv(a: f64, c: f64, z: f64, policy: &UEvalPolicy) -> Result<f64> {
    check_args(a, c, z)?;
    Ok(-a * tricomi_u(a + 1.0, c + 1.0, z, policy)?)
}

/// Leading small-`z` term `Γ(c-1)/Γ(a) · z^{1-c}`, valid for real `c > 1`,
/// `c != 2`. This is the form to use where `U` itself is singular (z → 0).
pub fn tricomi_u_small_z(a: f64, c: f64, z: f64) -> Result<f64> {
    check_args(a, c, z)?;
    if !(c > 1.0) || c == 2.0 {
        return Err(Error::Domain(format!(
            "small-z leading term needs c > 1 and c != 2, got {c}"
        )));
    }
    Ok(gamma(c - 1.0) / gamma(a) * z.powf(1.0 - c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn erfc_values() {
        assert!((erfc_paper(0.0).unwrap() - PI.sqrt() / 2.0).abs() < 2e-16);
        let v = erfc_paper(1.0).unwrap();
        assert!((v - 0.139_402_792_640_331).abs() < 1e-15, "{v:.17e}");
        assert!(erfc_paper(6.0).unwrap() <= 1e-15);
        // mpmath, 30 digits
        for (z, want) in [
            (0.5, 0.424_945_919_039_965_6),
            (1.5, 0.030_038_531_827_856_95),
            (3.0, 1.957_719_323_677_975_5e-5),
            (6.0, 1.907_137_010_327_075_4e-17),
        ] {
            let got = erfc_paper(z).unwrap();
            assert!((got - want).abs() <= 2e-15 * want, "z = {z}: {got:.17e}");
        }
        assert!(erfc_paper(-0.1).is_err());
        assert!(erfc_paper(f64::NAN).is_err());
    }

    #[test]
    fn u_reference_values() {
        let p = UEvalPolicy::default();
        // mpmath.hyperu, 30 digits
        let u = tricomi_u(1.0, 1.5, 1.0, &p).unwrap();
        assert!((u - 0.757_872_156_141_312_1).abs() < 1e-14);
        let u = tricomi_u(0.5, 0.5, 1.0, &p).unwrap();
        assert!((u - 0.757_872_156_141_312_1).abs() < 1e-14);
        let u = tricomi_u(2.0, 2.5, 1.0, &p).unwrap();
        assert!((u - 0.621_063_921_929_343_9).abs() < 1e-14);
    }

    #[test]
    fn series_and_integral_agree_at_cutoff() {
        let p = UEvalPolicy::default();
        let no_series = UEvalPolicy {
            series_cutoff: f64::INFINITY,
            ..p
        };
        for (a, c) in [(1.0, 1.5), (0.5, 0.5), (2.0, 2.5)] {
            for z in [40.0, 55.0, 80.0] {
                let s = tricomi_u(a, c, z, &p).unwrap();
                let q = tricomi_u(a, c, z, &no_series).unwrap();
                assert!(
                    (s - q).abs() <= 1e-14 * q.abs().max(1.0),
                    "{a} {c} {z}: {s} vs {q}"
                );
            }
        }
    }

    #[test]
    fn derivative_is_negative_for_positive_u() {
        let p = UEvalPolicy::default();
        assert!(tricomi_u_deriv(1.0, 1.5, 4.0, &p).unwrap() < 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        let p = UEvalPolicy::default();
        assert!(tricomi_u(0.0, 1.5, 1.0, &p).is_err());
        assert!(tricomi_u(-1.0, 1.5, 1.0, &p).is_err());
        assert!(tricomi_u(1.0, 1.5, 0.0, &p).is_err());
        assert!(tricomi_u_small_z(1.0, 0.5, 1e-3).is_err());
        assert!(UEvalPolicy::new(1000, 40.0, 1e-3).is_err());
        assert!(UEvalPolicy::new(1000, 40.0, 1e-15).is_err());
        assert!(UEvalPolicy::new(1000, 40.0, 1e-10).is_ok());
    }

    #[test]
    fn small_z_leading_term() {
        let p = UEvalPolicy::default();
        let z = 1e-6;
        let ratio = tricomi_u(1.0, 1.5, z, &p).unwrap() * z.sqrt() / PI.sqrt();
        // the O(1) remainder is -2, so the ratio is 1 - 2 sqrt(z / pi) + O(z)
        let predicted = 1.0 - 2.0 * (z / PI).sqrt();
        assert!((ratio - predicted).abs() < 1e-6, "ratio {ratio}");
        let z = 1e-5;
        let ratio = tricomi_u(1.0, 1.5, z, &p).unwrap() / (PI.sqrt() * z.powf(-0.5));
        assert!((ratio - 1.0).abs() <= 1e-2);
        let lead = tricomi_u_small_z(1.0, 1.5, z).unwrap();
        assert!((lead * z.sqrt() - PI.sqrt()).abs() < 1e-12);
    }
}
