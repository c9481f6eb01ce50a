//! Verification suites: each identity becomes one row comparing two
//! independent evaluations against a tolerance.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::{solve_xi, KappaParams};
use crate::lcft_constants::constants;
use crate::moment::{moment_f_gamma, moment_f_real};
use crate::numtheory::{classify_two_cos, divisor_product, min_poly_two_cos, small_poly_scan, IntPolynomial, TwoCosClass};
use crate::quadrature::{
    check_cot_integral, check_digamma_integral, check_trig_integral, check_nested_integral, check_s_kernel, integrate, nested_via_single_integral,
    IdentityCheck,
};
use crate::specialfn::digamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Integrals,
    Constants,
    Identities,
    NumTheory,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Integrals, Suite::Constants, Suite::Identities, Suite::NumTheory];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Integrals => "integrals",
            Suite::Constants => "constants",
            Suite::Identities => "identities",
            Suite::NumTheory => "numtheory",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Domain(format!("unknown suite '{s}' (integrals, constants, identities, numtheory)")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub name: String,
    pub params: String,
    pub lhs: f64,
    pub rhs: f64,
    pub error: f64,
    pub tol: f64,
    pub pass: bool,
}

impl VerifyRow {
    fn new(name: &str, params: String, lhs: f64, rhs: f64, error: f64, tol: f64) -> Self {
        VerifyRow { name: name.into(), params, lhs, rhs, error, tol, pass: error.is_finite() && error < tol }
    }

    fn from_check(name: &str, params: String, c: IdentityCheck, tol: f64) -> Self {
        VerifyRow::new(name, params, c.lhs, c.rhs, c.error, tol)
    }

    /// Exact comparison: `lhs` matching cases out of `rhs`.
    fn count(name: &str, params: String, matched: usize, total: usize) -> Self {
        let miss = (total - matched) as f64;
        VerifyRow::new(name, params, matched as f64, total as f64, miss, 0.5)
    }
}

type Job = Box<dyn Fn() -> Result<VerifyRow> + Send + Sync>;

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn integral_jobs() -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    jobs.push(Box::new(|| {
        let r = integrate(|x| x, 0.0, 1.0, 1e-12)?;
        Ok(VerifyRow::new("integral_x", "[0,1]".into(), r.value, 0.5, (r.value - 0.5).abs(), 1e-12))
    }));
    jobs.push(Box::new(|| {
        let r = integrate(|x| (-x).exp(), 0.0, f64::INFINITY, 1e-12)?;
        Ok(VerifyRow::new("integral_exp", "[0,inf)".into(), r.value, 1.0, (r.value - 1.0).abs(), 1e-10))
    }));
    jobs.push(Box::new(|| {
        let r = integrate(|s| s.powf(-0.5) / (1.0 + s), 0.0, f64::INFINITY, 1e-12)?;
        Ok(VerifyRow::new("integral_beta_half", "[0,inf)".into(), r.value, PI, (r.value - PI).abs(), 1e-8))
    }));
    let pos = [0.3, 0.7, 1.0, 1.7, 2.5];
    for a in pos {
        for b in pos {
            jobs.push(Box::new(move || {
                Ok(VerifyRow::from_check("digamma_integral", format!("a={a} b={b}"), check_digamma_integral(a, b)?, 1e-8))
            }));
        }
    }
    let neg = [-0.9, -0.75, -0.5, -0.25, -0.1];
    for a in neg {
        for b in neg {
            jobs.push(Box::new(move || {
                Ok(VerifyRow::from_check("cot_integral", format!("a={a} b={b}"), check_cot_integral(a, b)?, 1e-8))
            }));
        }
    }
    for (mu, theta) in [(0.5, 0.25), (2.0, 0.5), (1.0, 0.5), (0.1, 0.8), (7.0, 0.3), (1e-3, 0.6), (50.0, 0.9)] {
        jobs.push(Box::new(move || {
            Ok(VerifyRow::from_check("s_kernel", format!("mu={mu} theta={theta}"), check_s_kernel(mu, theta)?, 1e-9))
        }));
    }
    jobs
}

fn constant_jobs() -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    let lo = 2f64.sqrt();
    for g in linspace(lo + 0.01, 1.99, 50) {
        jobs.push(Box::new(move || {
            let c = constants(g)?;
            Ok(VerifyRow::new("e4_dual_forms", format!("gamma={g:.6}"), c.e4, c.e4_simplified, rel(c.e4, c.e4_simplified), 1e-10))
        }));
        jobs.push(Box::new(move || {
            let c = constants(g)?;
            Ok(VerifyRow::new("c1_dual_forms", format!("gamma={g:.6}"), c.c1, c.c1_assembled, rel(c.c1, c.c1_assembled), 1e-10))
        }));
    }
    jobs
}

fn identity_jobs() -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for g in [1.5, 1.633, 1.8] {
        let top = 4.0 / (g * g) - 1.0;
        for theta in linspace(0.1 * top, 0.9 * top, 5) {
            jobs.push(Box::new(move || {
                Ok(VerifyRow::from_check("trig_integral", format!("gamma={g} theta={theta:.6}"), check_trig_integral(g, theta)?, 1e-7))
            }));
        }
    }
    for (g, theta) in [(1.5, 0.5), (1.633, 0.4), (1.8, 0.2)] {
        jobs.push(Box::new(move || {
            Ok(VerifyRow::from_check("nested_integral", format!("gamma={g} theta={theta}"), check_nested_integral(g, theta)?, 1e-4))
        }));
        jobs.push(Box::new(move || {
            let nested = check_nested_integral(g, theta)?.lhs;
            let reduced = nested_via_single_integral(g, theta)?;
            Ok(VerifyRow::new("nested_two_routes", format!("gamma={g} theta={theta}"), nested, reduced, rel(nested, reduced), 1e-4))
        }));
    }
    for z in [0.1, 0.25, 0.4, 0.7, 0.9] {
        jobs.push(Box::new(move || {
            let lhs = digamma(1.0 - z)? - digamma(z)?;
            let rhs = PI / (PI * z).tan();
            Ok(VerifyRow::new("digamma_reflection", format!("z={z}"), lhs, rhs, (lhs - rhs).abs(), 1e-12))
        }));
    }
    for kappa in [4.5, 5.0, 6.0, 7.0, 7.9] {
        jobs.push(Box::new(move || {
            let xi = solve_xi(kappa)?.xi;
            let f = moment_f_real(&KappaParams::new(kappa)?, -xi)?;
            Ok(VerifyRow::new("moment_at_root", format!("kappa={kappa}"), f, 1.0, (f - 1.0).abs(), 1e-9))
        }));
    }
    for (g, alpha) in [(1.5, 1.8), (1.633, 1.9), (1.8, 1.9), (1.9, 1.95)] {
        jobs.push(Box::new(move || {
            let p = KappaParams::from_gamma(g)?;
            let lhs = moment_f_gamma(&p, alpha)?;
            let lambda = 2.0 * crate::exponent::delta_alpha(alpha, &p) - 2.0;
            let rhs = moment_f_real(&p, lambda)?;
            Ok(VerifyRow::new("gamma_parametrization", format!("gamma={g} alpha={alpha}"), lhs, rhs, rel(lhs, rhs), 1e-12))
        }));
    }
    jobs
}

/// Newton step size from each 2cos(2πk/n), gcd(k, n) = 1, to a root of ψ_n.
fn two_cos_root_error(n: usize) -> Result<f64> {
    let psi = min_poly_two_cos(n)?;
    let c: Vec<f64> = psi.coeffs().iter().map(|b| b.to_f64().unwrap_or(f64::NAN)).collect();
    let deriv: Vec<f64> = c.iter().enumerate().skip(1).map(|(i, a)| i as f64 * a).collect();
    let eval = |p: &[f64], x: f64| p.iter().rev().fold(0.0, |acc, a| acc * x + a);
    let mut worst: f64 = 0.0;
    for k in 1..=n {
        if k.gcd(&n) != 1 {
            continue;
        }
        let x = 2.0 * (2.0 * PI * k as f64 / n as f64).cos();
        let d = eval(&deriv, x);
        let step = if d == 0.0 { eval(&c, x).abs() } else { (eval(&c, x) / d).abs() };
        worst = worst.max(step);
    }
    Ok(worst)
}

fn numtheory_jobs() -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for block in 0..10 {
        let (lo, hi) = (block * 50 + 1, block * 50 + 50);
        jobs.push(Box::new(move || {
            let mut ok = 0;
            for n in lo..=hi {
                if divisor_product(n)? == IntPolynomial::x_pow_minus_one(n) {
                    ok += 1;
                }
            }
            Ok(VerifyRow::count("divisor_product", format!("n={lo}..{hi}"), ok, hi - lo + 1))
        }));
    }
    for n in 1..=50usize {
        jobs.push(Box::new(move || {
            let e = two_cos_root_error(n)?;
            Ok(VerifyRow::new("two_cos_roots", format!("n={n}"), e, 0.0, e, 1e-9))
        }));
    }
    for block in 0..4u64 {
        let (lo, hi) = (block * 50 + 1, block * 50 + 50);
        jobs.push(Box::new(move || {
            let (mut ok, mut total) = (0, 0);
            for n in lo..=hi {
                let deg = min_poly_two_cos(n as usize)?.degree().unwrap_or(0);
                for k in 0..n as i64 {
                    if (k as u64).gcd(&n) != 1 {
                        continue;
                    }
                    total += 1;
                    let agrees = match classify_two_cos(k, n)? {
                        TwoCosClass::Integer(v) => deg == 1 && (2.0 * (2.0 * PI * k as f64 / n as f64).cos() - v as f64).abs() < 1e-9,
                        TwoCosClass::IrrationalAlgebraic(d) => d == deg && d > 1,
                    };
                    ok += agrees as usize;
                }
            }
            Ok(VerifyRow::count("classify_two_cos", format!("n={lo}..{hi}"), ok, total))
        }));
    }
    jobs.push(Box::new(|| {
        let found = small_poly_scan(2f64.sqrt(), 4, 30)?;
        let want = IntPolynomial::from_i64(&[-2, 0, 1]);
        let ok = found.as_ref() == Some(&want);
        Ok(VerifyRow::count("scan_sqrt2", "deg<=4 height<=30".into(), ok as usize, 1))
    }));
    jobs.push(Box::new(|| {
        let xi = solve_xi(6.0)?.xi;
        let found = small_poly_scan(xi, 4, 30)?;
        Ok(VerifyRow::count("scan_backbone_xi", "deg<=4 height<=30".into(), found.is_none() as usize, 1))
    }));
    jobs
}

fn jobs(suite: Suite) -> Vec<Job> {
    match suite {
        Suite::Integrals => integral_jobs(),
        Suite::Constants => constant_jobs(),
        Suite::Identities => identity_jobs(),
        Suite::NumTheory => numtheory_jobs(),
    }
}

/// Every row of a suite, in a fixed order. `tol` replaces each row's own
/// tolerance when given.
pub fn run_suite(suite: Suite, tol: Option<f64>) -> Result<Vec<VerifyRow>> {
    let mut rows = jobs(suite).par_iter().map(|job| job()).collect::<Result<Vec<_>>>()?;
    if let Some(t) = tol {
        for r in &mut rows {
            r.tol = t;
            r.pass = r.error.is_finite() && r.error < t;
        }
    }
    Ok(rows)
}
