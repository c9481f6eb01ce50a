//! Property tests over randomly drawn parameters.

use std::f64::consts::PI;

use backbone::arms::{exact_event_probability, max_disjoint_arms, ArmEvent, ArmQuery, Color, EventProbe};
use backbone::exponent::{root_function, solve_xi, KappaParams};
use backbone::lattice::{sample_coloring, Axial, Coloring, Region};
use backbone::lcft_constants::constants;
use backbone::mc_estimator::{batch_seed, direct_radii, fit_power_law, run_range, wilson_interval, TrialPlan};
use backbone::moment::{moment_f, moment_f_gamma, moment_f_real};
use backbone::numtheory::{classify_two_cos, divisor_product, min_poly_two_cos, IntPolynomial, TwoCosClass};
use backbone::quadrature::integrate;
use backbone::specialfn::{digamma, ln_gamma};
use num_complex::Complex64;
use proptest::prelude::*;

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn log_gamma_recurrence(re in 0.1f64..20.0, im in -20.0f64..20.0) {
        let z = Complex64::new(re, im);
        let step = ln_gamma(z + 1.0).unwrap() - ln_gamma(z).unwrap() - z.ln();
        // equal up to a multiple of 2πi on the principal branch
        let k = (step.im / (2.0 * PI)).round();
        prop_assert!(close(step, Complex64::new(0.0, 2.0 * PI * k), 1e-11), "{step}");
    }

    #[test]
    fn log_gamma_conjugate_symmetry(re in -15.0f64..25.0, im in 0.01f64..30.0) {
        let z = Complex64::new(re, im);
        let a = ln_gamma(z.conj()).unwrap();
        let b = ln_gamma(z).unwrap().conj();
        prop_assert!(close(a, b, 1e-13 * b.norm().max(1.0)));
    }

    #[test]
    fn digamma_reflection(x in 0.001f64..0.999) {
        let lhs = digamma(1.0 - x).unwrap() - digamma(x).unwrap();
        let rhs = PI / (PI * x).tan();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
    }

    #[test]
    fn kappa_parametrization(kappa in 4.0001f64..7.9999) {
        let p = KappaParams::new(kappa).unwrap();
        prop_assert!((p.kappa * p.gamma * p.gamma - 16.0).abs() < 1e-13);
        prop_assert!((p.q_big - (2.0 / p.gamma + p.gamma / 2.0)).abs() < 1e-15);
        prop_assert!(p.gamma > 2f64.sqrt() && p.gamma < 2.0);
        prop_assert!(root_function(kappa, 1.0).abs() < 1e-15);
    }

    #[test]
    fn exponent_bounds(kappa in 4.01f64..7.99) {
        let s = solve_xi(kappa).unwrap();
        prop_assert!(s.xi > 0.0 && s.xi < 1.0 - 2.0 / kappa);
        prop_assert!(s.residual.abs() < 1e-12);
        prop_assert!(s.rho > kappa / 4.0 - 1.0 && s.rho < kappa / 4.0);
    }

    #[test]
    fn moment_real_on_real_axis(kappa in 4.05f64..7.95, t in 0.001f64..3.0) {
        let p = KappaParams::new(kappa).unwrap();
        // λ from just above the pole line out to large imaginary θ
        let lambda = 2.0 / kappa - 1.0 + 1e-3 + t;
        if let Ok(m) = moment_f(&p, Complex64::new(lambda, 0.0)) {
            prop_assert!(m.value.im == 0.0 && m.value.re.is_finite());
        }
    }

    #[test]
    fn moment_forms_agree(gamma in 1.42f64..1.98, u in 0.02f64..0.98) {
        let p = KappaParams::from_gamma(gamma).unwrap();
        let alpha = gamma + (p.q_big - gamma) * u;
        let lhs = moment_f_gamma(&p, alpha).unwrap();
        let rhs = moment_f_real(&p, 2.0 * backbone::exponent::delta_alpha(alpha, &p) - 2.0).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn constant_dual_forms(gamma in 1.4152f64..1.999) {
        let c = constants(gamma).unwrap();
        prop_assert!(c.max_dual_rel_error() < 1e-10);
        prop_assert!([c.e1, c.e2, c.e3, c.e4, c.c1].iter().all(|v| v.is_finite()));
    }

    #[test]
    fn quadrature_split_at_one(a in 0.2f64..0.9, mu in 0.3f64..4.0) {
        let f = move |t: f64| t.powf(a - 1.0) / ((1.0 + t) * (mu + t));
        let whole = integrate(f, 0.0, f64::INFINITY, 1e-12).unwrap();
        let lo = integrate(f, 0.0, 1.0, 1e-12).unwrap();
        let hi = integrate(f, 1.0, f64::INFINITY, 1e-12).unwrap();
        prop_assert!(whole.err_estimate >= 0.0 && whole.value.is_finite());
        let bound = 2.0 * (whole.err_estimate + lo.err_estimate + hi.err_estimate);
        prop_assert!((whole.value - lo.value - hi.value).abs() <= bound.max(1e-14 * whole.value.abs()));
    }

    #[test]
    fn region_membership_is_exact(r_in in 0u32..12, width in 2u32..14) {
        let r_out = r_in + width;
        let reg = Region::annulus(r_in, r_out).unwrap();
        let r = 2 * r_out as i32 + 1;
        let mut expected = 0;
        for x in -r..=r {
            for y in -r..=r {
                let v = Axial::new(x, y);
                let n = v.norm_sq();
                prop_assert_eq!(n, (x * x + x * y + y * y) as i64);
                let inside = n > (r_in as i64).pow(2) && n <= (r_out as i64).pow(2);
                prop_assert_eq!(reg.contains(v), inside);
                expected += inside as usize;
            }
        }
        prop_assert_eq!(reg.len(), expected);
        for &i in reg.inner_boundary() {
            prop_assert!((i as usize) < reg.len());
        }
        for &v in reg.outer_boundary() {
            prop_assert!(!reg.contains(v));
        }
    }

    #[test]
    fn sampling_is_pure(seed in any::<u64>(), trial in any::<u64>(), p in 0.0f64..=1.0) {
        let reg = Region::ball(6).unwrap();
        let a = sample_coloring(&reg, p, seed, trial).unwrap();
        let b = sample_coloring(&reg, p, seed, trial).unwrap();
        prop_assert_eq!(a.words(), b.words());
    }

    #[test]
    fn black_sites_never_reduce_arms(seed in any::<u64>(), flips in proptest::collection::vec(0u32..400, 1..60)) {
        let reg = Region::annulus(2, 11).unwrap();
        let q = ArmQuery::crossing(&reg, Color::Black, 6).unwrap();
        let mut c: Coloring = sample_coloring(&reg, 0.4, seed, 0).unwrap();
        let mut last = max_disjoint_arms(&c, &q);
        for f in flips {
            c.set(f % reg.len() as u32, true);
            let now = max_disjoint_arms(&c, &q);
            prop_assert!(now >= last);
            last = now;
        }
    }

    #[test]
    fn split_trials_merge(seed in any::<u64>(), cut in 0u64..=300) {
        let key = batch_seed(seed, ArmEvent::Backbone, 0, 6);
        let whole = run_range(ArmEvent::Backbone, 0, 6, 0.5, key, 0, 300).unwrap();
        let a = run_range(ArmEvent::Backbone, 0, 6, 0.5, key, 0, cut).unwrap();
        let b = run_range(ArmEvent::Backbone, 0, 6, 0.5, key, cut, 300).unwrap();
        prop_assert_eq!(a.successes + b.successes, whole.successes);
        prop_assert!(whole.successes <= whole.samples);
    }

    #[test]
    fn wilson_brackets_estimate(samples in 1u64..100_000, frac in 0.0f64..=1.0) {
        let successes = (samples as f64 * frac).floor() as u64;
        let (lo, hi) = wilson_interval(successes, samples, 1.96).unwrap();
        let p = successes as f64 / samples as f64;
        prop_assert!(0.0 <= lo && lo <= p + 1e-15 && p <= hi + 1e-15 && hi <= 1.0);
    }

    #[test]
    fn fit_recovers_power_law(slope in -1.5f64..-0.01, scale in 0.05f64..1.0) {
        let pts: Vec<(f64, f64, f64)> = [8.0, 16.0, 32.0, 64.0]
            .iter()
            .map(|&n: &f64| (n, scale * (n / 8.0).powf(slope), 1e-3))
            .collect();
        let fit = fit_power_law(&pts).unwrap();
        prop_assert!((fit.slope - slope).abs() < 1e-10);
        prop_assert!(fit.slope_stderr >= 0.0);
    }

    #[test]
    fn divisor_product_is_x_n_minus_one(n in 1usize..=500) {
        prop_assert_eq!(divisor_product(n).unwrap(), IntPolynomial::x_pow_minus_one(n));
    }

    #[test]
    fn two_cos_rational_iff_degree_one(n in 1u64..=200, k in -400i64..400) {
        if num_integer::Integer::gcd(&k.unsigned_abs(), &n) == 1 {
            let deg = min_poly_two_cos(n as usize).unwrap().degree().unwrap();
            let rational = matches!(classify_two_cos(k, n).unwrap(), TwoCosClass::Integer(_));
            prop_assert_eq!(rational, deg == 1);
        }
    }

    #[test]
    fn monic_division_reconstructs(a in proptest::collection::vec(-50i64..50, 1..9), b in proptest::collection::vec(-9i64..9, 0..4)) {
        let num = IntPolynomial::from_i64(&a);
        let mut d = b.clone();
        d.push(1);
        let den = IntPolynomial::from_i64(&d);
        let (q, r) = num.div_rem_monic(&den).unwrap();
        prop_assert_eq!(&(&q * &den) + &r, num);
        prop_assert!(r.is_zero() || r.degree() < den.degree());
    }
}

#[test]
fn kappa6_reduction() {
    let xi = solve_xi(6.0).unwrap().xi;
    let rho = (12.0 * xi + 1.0).sqrt();
    assert!((3f64.sqrt() * rho / 4.0 + (2.0 * PI * rho / 3.0).sin()).abs() < 1e-12);
    assert!(rho > 2.0 && rho < 3.0);
}

#[test]
fn estimates_match_exact_probability() {
    // 20 independent seeds on an 18-site region; a 4σ miss has probability ~6e-5
    let region = Region::annulus(0, 2).unwrap();
    let (hits, total) = exact_event_probability(&EventProbe::new(&region, ArmEvent::Backbone).unwrap()).unwrap();
    let p = hits as f64 / total as f64;
    let samples = 20_000u64;
    let sigma = (p * (1.0 - p) / samples as f64).sqrt();
    let misses = (0..20u64)
        .filter(|&seed| {
            let b = TrialPlan::new(ArmEvent::Backbone, vec![(0, 2)], samples, seed).run().unwrap();
            (b[0].p_hat() - p).abs() >= 4.0 * sigma
        })
        .count();
    assert_eq!(misses, 0);
}

#[test]
fn backbone_probability_decays() {
    let b = TrialPlan::new(ArmEvent::Backbone, direct_radii(&[4, 8, 16, 32, 64]), 20_000, 31).run().unwrap();
    for w in b.windows(2) {
        let band = 3.0 * (w[0].stderr().powi(2) + w[1].stderr().powi(2)).sqrt();
        assert!(w[1].p_hat() <= w[0].p_hat() + band, "{} -> {}", w[0].p_hat(), w[1].p_hat());
    }
    assert!(b[4].p_hat() < b[0].p_hat());
}
