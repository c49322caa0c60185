use num_complex::Complex64;
use proptest::prelude::*;

use hodirac::dirac::{heat_dirac, spectral_wave_oracle_dirac, wave_dirac, wave_kernel_dirac};
use hodirac::fourier::{evaluate_ft, forward_ft};
use hodirac::grid::{make_grid, Grid1D, SampledFunction};
use hodirac::grushin::{fit_a_max, grushin_heat_kernel, GrushinPoint};
use hodirac::hermite::{heat_oracle, random_combination, wave_oracle, SpectralCoefficients};
use hodirac::intertwining::{apply_t, IntertwineParams, FULL_BAND};
use hodirac::oscillator::{heat_kernel, HeatKernelVariant, OscillatorParams};
use hodirac::quadrature::quadrature;
use hodirac::special::erfc_paper;

fn grid() -> Grid1D {
    make_grid(-10.0, 10.0, 256).unwrap()
}

fn bump(g: Grid1D, c: f64, w: f64, k: f64) -> SampledFunction {
    SampledFunction::from_fn(g, |x| {
        Complex64::from_polar((-(x - c) * (x - c) / w).exp(), k * x)
    })
    .unwrap()
}

fn coeff() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadrature_is_linear(alpha in coeff(), beta in coeff(), c in -3.0..3.0f64, w in 0.3..4.0f64) {
        let g = grid();
        let f = bump(g, c, w, 1.3);
        let h = bump(g, -c, w * 0.5, -0.4);
        let lhs = quadrature(&f.scale(alpha).add(&h.scale(beta)).unwrap());
        let rhs = alpha * quadrature(&f) + beta * quadrature(&h);
        let scale = alpha.norm() * f.norm_l2() + beta.norm() * h.norm_l2();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
    }

    #[test]
    fn odd_functions_integrate_to_zero(c in 0.0..3.0f64, w in 0.2..3.0f64) {
        // the grid is one sample short of symmetric, so tails must be gone at its ends
        let g = make_grid(-20.0, 20.0, 512).unwrap();
        let f = SampledFunction::from_real_fn(g, |x| {
            (-(x - c) * (x - c) / w).exp() - (-(x + c) * (x + c) / w).exp() + x * (-x * x).exp()
        })
        .unwrap();
        prop_assert!(quadrature(&f).norm() <= 1e-12);
    }

    #[test]
    fn parseval(c in -2.0..2.0f64, w in 0.5..3.0f64, k in -4.0..4.0f64) {
        let f = bump(make_grid(-20.0, 20.0, 512).unwrap(), c, w, k);
        let spectrum = forward_ft(&f).unwrap();
        prop_assert!((f.norm_l2() - spectrum.norm_l2()).abs() <= 1e-10 * f.norm_l2());
    }

    #[test]
    fn erfc_is_positive_and_decreasing(z in 0.0..5.5f64, dz in 1e-3..1.0f64) {
        let lo = erfc_paper(z).unwrap();
        let hi = erfc_paper(z + dz).unwrap();
        prop_assert!(hi > 0.0 && hi < lo);
    }

    #[test]
    fn mehler_is_positive_and_symmetric(a in 0.2..3.0f64, t in 0.05..2.0f64, x in -4.0..4.0f64, xp in -4.0..4.0f64) {
        let p = OscillatorParams::new(a, t).unwrap();
        let k = heat_kernel(HeatKernelVariant::Mehler, p, x, xp).unwrap();
        let back = heat_kernel(HeatKernelVariant::Mehler, p, xp, x).unwrap();
        prop_assert!(k > 0.0);
        prop_assert!((k - back).abs() <= 1e-14 * k);
    }

    #[test]
    fn wave_kernel_is_monotone_and_bounded(t in 0.05..2.0f64, frac in 0.01..0.45f64, x in -3.0..3.0f64) {
        let d = frac * t;
        let k = wave_kernel_dirac(t, x, x - d).unwrap();
        prop_assert!(k > 0.0 && k <= 1.0);
        // later time, same separation: smaller
        prop_assert!(wave_kernel_dirac(t * 1.1, x, x - d).unwrap() < k);
        // same time, wider separation: larger
        prop_assert!(wave_kernel_dirac(t, x, x - d * 1.05).unwrap() > k);
    }

    #[test]
    fn heat_dirac_composes(s in 0.0..2.0f64, t in 0.0..2.0f64) {
        let f = bump(make_grid(-30.0, 30.0, 512).unwrap(), 0.0, 2.0, 0.0);
        let twice = heat_dirac(&heat_dirac(&f, s).unwrap(), t).unwrap();
        let once = heat_dirac(&f, s + t).unwrap();
        prop_assert!(twice.sub(&once).unwrap().sup_norm() <= 1e-10);
    }

    #[test]
    fn hermite_oracles_are_linear(seed in 0u64..1000, alpha in coeff(), t in 0.01..2.0f64) {
        let g = make_grid(-10.0, 10.0, 128).unwrap();
        let (_, c1) = random_combination(1.0, g, 5, seed).unwrap();
        let (_, c2) = random_combination(1.0, g, 5, seed + 1).unwrap();
        let mixed: Vec<Complex64> = c1.coeffs().iter().zip(c2.coeffs()).map(|(x, y)| alpha * x + y).collect();
        let c = SpectralCoefficients::new(1.0, g, mixed).unwrap();
        for oracle in [heat_oracle, wave_oracle] {
            let lhs = oracle(&c, t).unwrap();
            let rhs = oracle(&c1, t).unwrap().scale(alpha).add(&oracle(&c2, t).unwrap()).unwrap();
            prop_assert!(lhs.sub(&rhs).unwrap().sup_norm() <= 1e-12 * (1.0 + rhs.sup_norm()));
        }
    }

    #[test]
    fn grushin_depends_on_y_difference(dy in -5.0..5.0f64, x in -1.0..1.0f64, xp in -1.0..1.0f64) {
        let p = GrushinPoint::new(0.5, x, 0.4, xp, -0.3).unwrap();
        let a_max = fit_a_max(&p).unwrap();
        let k = grushin_heat_kernel(p, a_max, 513).unwrap();
        let moved = grushin_heat_kernel(p.shifted(dy), a_max, 513).unwrap();
        prop_assert!(k > 0.0);
        prop_assert!((k - moved).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn scaling_law(alpha in prop::sample::select(vec![2.0, 3.0, 0.5]), w in 0.5..2.0f64) {
        let g = make_grid(-40.0, 40.0, 2048).unwrap();
        let f = SampledFunction::from_real_fn(g, |x| (-x * x / w).exp()).unwrap();
        let scaled = SampledFunction::from_real_fn(g, |x| (-(alpha * x) * (alpha * x) / w).exp()).unwrap();
        let xis: Vec<f64> = (0..64).map(|k| -6.0 + 12.0 * k as f64 / 63.0).collect();
        let lhs = evaluate_ft(&scaled, &xis);
        let rhs = evaluate_ft(&f, &xis.iter().map(|xi| xi / alpha).collect::<Vec<_>>());
        for (l, r) in lhs.iter().zip(&rhs) {
            prop_assert!((l - r / alpha).norm() <= 1e-8);
        }
    }

    #[test]
    fn transform_t_is_linear(alpha in coeff(), beta in coeff(), seed in 0u64..100) {
        let a = 1.0;
        let g = make_grid(-10.0, 10.0, 512).unwrap();
        let (f, _) = random_combination(a, g, 4, seed).unwrap();
        let (h, _) = random_combination(a, g, 4, seed + 7).unwrap();
        let mix = f.scale(alpha).add(&h.scale(beta)).unwrap();
        let params = IntertwineParams::fitted(a, g, &mix, 512, FULL_BAND).unwrap();
        let lhs = apply_t(&mix, &params).unwrap();
        let rhs = apply_t(&f, &params).unwrap().scale(alpha).add(&apply_t(&h, &params).unwrap().scale(beta)).unwrap();
        let diff = lhs.plus.sub(&rhs.plus).unwrap().norm_l2() + lhs.minus.sub(&rhs.minus).unwrap().norm_l2();
        let size = lhs.plus.norm_l2() + lhs.minus.norm_l2();
        prop_assert!(diff <= 1e-12 * size);
    }

    #[test]
    fn dirac_wave_solvers_are_linear(alpha in coeff(), t in 0.01..1.0f64) {
        let g = make_grid(-20.0, 20.0, 512).unwrap();
        let f = bump(g, 1.0, 2.0, 0.0);
        let h = bump(g, -2.0, 1.0, 0.5);
        let mix = f.scale(alpha).add(&h).unwrap();
        for solve in [wave_dirac, spectral_wave_oracle_dirac] {
            let lhs = solve(&mix, t).unwrap();
            let rhs = solve(&f, t).unwrap().scale(alpha).add(&solve(&h, t).unwrap()).unwrap();
            prop_assert!(lhs.sub(&rhs).unwrap().sup_norm() <= 1e-12 * (1.0 + rhs.sup_norm()));
        }
    }
}
