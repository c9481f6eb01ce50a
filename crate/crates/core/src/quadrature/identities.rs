//! Integral identities behind the boundary three-point constant, each checked
//! by quadrature against its closed form.
//!
//! All integrals over (0, ∞) are taken in logarithmic variables, where the
//! removable singularity at 1 becomes one at 0 and is evaluated through
//! `expm1`-based forms that carry no cancellation. Far from the origin the
//! integrands switch to a logarithmic form that cannot overflow.

use std::f64::consts::PI;

use serde::Serialize;

use super::{integrate, QuadResult};
use crate::error::{domain, Result};
use crate::lcft_constants::constants;
use crate::specialfn::digamma;

const SQRT2: f64 = std::f64::consts::SQRT_2;

const INNER_TOL: f64 = 1e-11;
const OUTER_TOL: f64 = 1e-9;
const DEFAULT_TOL: f64 = 1e-12;

/// Upper cut-off in ln s for the outer integral of the nested check.
const OUTER_CUTOFF: f64 = 600.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// Absolute difference, or relative for [`check_nested_integral`].
    pub error: f64,
    /// Summed quadrature error estimate behind `lhs`.
    pub quad_err: f64,
    pub evaluations: usize,
}

impl IdentityCheck {
    fn absolute(lhs: f64, rhs: f64, parts: &[QuadResult]) -> Self {
        IdentityCheck {
            lhs,
            rhs,
            error: (lhs - rhs).abs(),
            quad_err: parts.iter().map(|p| p.err_estimate).sum(),
            evaluations: parts.iter().map(|p| p.evaluations).sum(),
        }
    }
}

/// e^x − 1 − x without cancellation near 0.
pub(crate) fn em2(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let mut term = x * x / 2.0;
        let mut sum = term;
        for k in 3..12 {
            term *= x / k as f64;
            sum += term;
        }
        sum
    } else {
        x.exp_m1() - x
    }
}

/// ln|e^x − 1|, finite for every x ≠ 0.
fn ln_abs_expm1(x: f64) -> f64 {
    if x > 0.0 {
        x + (-(-x).exp()).ln_1p()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// ln(e^a + e^b).
fn ln_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// ∫₁^∞ (t^{−a} − t^{−b})/(t − 1) dt = ψ(b) − ψ(a).
pub fn check_digamma_integral(a: f64, b: f64) -> Result<IdentityCheck> {
    if !(a > 0.0 && b > 0.0) {
        return domain(format!("digamma integral needs a, b > 0, got ({a}, {b})"));
    }
    // t = e^z; the z → 0 limit is b − a
    let f = |z: f64| {
        if z == 0.0 {
            b - a
        } else {
            ((-a * z).exp_m1() - (-b * z).exp_m1()) / -(-z).exp_m1()
        }
    };
    let q = integrate(f, 0.0, f64::INFINITY, DEFAULT_TOL)?;
    let rhs = digamma(b)? - digamma(a)?;
    Ok(IdentityCheck::absolute(q.value, rhs, &[q]))
}

/// ∫₀^∞ (t^a − t^b)/(t − 1) dt = π(cot πb − cot πa) for a, b ∈ (−1, 0).
pub fn check_cot_integral(a: f64, b: f64) -> Result<IdentityCheck> {
    if !(a > -1.0 && a < 0.0 && b > -1.0 && b < 0.0) {
        return domain(format!("cotangent integral needs a, b in (-1, 0), got ({a}, {b})"));
    }
    let f = |z: f64| {
        if z == 0.0 {
            a - b
        } else if z.abs() < 1.0 {
            ((a * z).exp_m1() - (b * z).exp_m1()) * z.exp() / z.exp_m1()
        } else if z > 0.0 {
            ((a * z).exp() - (b * z).exp()) / -(-z).exp_m1()
        } else {
            (((a + 1.0) * z).exp() - ((b + 1.0) * z).exp()) / z.exp_m1()
        }
    };
    // split at t = 1
    let lo = integrate(f, f64::NEG_INFINITY, 0.0, DEFAULT_TOL)?;
    let hi = integrate(f, 0.0, f64::INFINITY, DEFAULT_TOL)?;
    let rhs = PI * (1.0 / (PI * b).tan() - 1.0 / (PI * a).tan());
    Ok(IdentityCheck::absolute(lo.value + hi.value, rhs, &[lo, hi]))
}

fn check_theta_window(gamma: f64, theta: f64) -> Result<f64> {
    if !(gamma > SQRT2 && gamma < 2.0) {
        return domain(format!("gamma = {gamma} outside (sqrt 2, 2)"));
    }
    let c = 4.0 / (gamma * gamma);
    if !(theta > 0.0 && theta < c - 1.0) {
        return domain(format!("theta = {theta} outside (0, {}); the integral diverges there", c - 1.0));
    }
    Ok(c)
}

/// Sum of `w·e^{p z}` over terms with Σw = Σwp = 0, divided by (e^{cz} − 1)², times e^z.
fn balanced_ratio(terms: &[(f64, f64)], c: f64, z: f64) -> f64 {
    if z == 0.0 {
        let second: f64 = terms.iter().map(|(w, p)| w * p * p).sum();
        return second / (2.0 * c * c);
    }
    if z.abs() < 1.0 {
        let num: f64 = terms.iter().map(|(w, p)| w * em2(p * z)).sum();
        let den = (c * z).exp_m1();
        return num * z.exp() / (den * den);
    }
    let l = 2.0 * ln_abs_expm1(c * z);
    terms.iter().map(|(w, p)| w * ((p + 1.0) * z - l).exp()).sum()
}

fn trig_integral_terms(c: f64, theta: f64) -> [(f64, f64); 5] {
    [(1.0, c + theta), (-1.0, c + theta - 1.0), (1.0, c), (-2.0, 1.0), (1.0, 1.0 - c)]
}

fn trig_integral_lhs(theta: f64, c: f64) -> Result<(QuadResult, QuadResult)> {
    let terms = trig_integral_terms(c, theta);
    let f = |z: f64| balanced_ratio(&terms, c, z);
    Ok((
        integrate(f, f64::NEG_INFINITY, 0.0, DEFAULT_TOL)?,
        integrate(f, 0.0, f64::INFINITY, DEFAULT_TOL)?,
    ))
}

fn trig_integral_rhs(gamma: f64, theta: f64) -> f64 {
    let g2 = gamma * gamma;
    gamma.powi(4) * PI * (theta * (PI * g2 / 2.0).sin() - (PI * g2 * theta / 2.0).sin())
        / (32.0
            * (PI * g2 / 4.0).cos()
            * (PI * g2 * theta / 4.0).sin()
            * (PI * g2 * (theta + 1.0) / 4.0).sin())
}

/// ∫₀^∞ (μ^c(μ−1)(μ^{θ−1}−1)/(μ^c−1)² + μ^{1−c}) dμ against its trigonometric
/// closed form, with c = 4/γ².
pub fn check_trig_integral(gamma: f64, theta: f64) -> Result<IdentityCheck> {
    let c = check_theta_window(gamma, theta)?;
    let (lo, hi) = trig_integral_lhs(theta, c)?;
    Ok(IdentityCheck::absolute(lo.value + hi.value, trig_integral_rhs(gamma, theta), &[lo, hi]))
}

/// ∫₀^∞ s^{θ−1}/((μ+s)(1+s)) ds = −π/sin(πθ) · (μ^{θ−1} − 1)/(μ − 1).
pub fn check_s_kernel(mu: f64, theta: f64) -> Result<IdentityCheck> {
    if !(mu > 0.0 && mu.is_finite()) {
        return domain(format!("s-kernel needs mu > 0, got {mu}"));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return domain(format!("s-kernel needs theta in (0, 1), got {theta}"));
    }
    let ln_mu = mu.ln();
    // s = e^y
    let f = |y: f64| (theta * y - ln_add_exp(ln_mu, y) - ln_add_exp(0.0, y)).exp();
    let lo = integrate(f, f64::NEG_INFINITY, 0.0, DEFAULT_TOL)?;
    let hi = integrate(f, 0.0, f64::INFINITY, DEFAULT_TOL)?;
    let scale = -PI / (PI * theta).sin();
    let rhs = if (mu - 1.0).abs() < 1e-8 {
        (theta - 1.0) * scale
    } else {
        scale * ((theta - 1.0) * ln_mu).exp_m1() / (mu - 1.0)
    };
    Ok(IdentityCheck::absolute(lo.value + hi.value, rhs, &[lo, hi]))
}

/// Inner μ-integral of the nested check at s = e^y, in z = ln μ.
fn nested_inner(c: f64, y: f64) -> Result<QuadResult> {
    let s = y.exp();
    // μ^c(μ−1)² − μ^{1−c}(μ+s)(μ^c−1)², expanded; both Σw and Σwp vanish
    let terms = [
        (-(2.0 + s), c + 1.0),
        (1.0, c),
        (2.0, 2.0),
        (-1.0, 2.0 - c),
        (2.0 * s, 1.0),
        (-s, 1.0 - c),
    ];
    let f = |z: f64| {
        if z.abs() < 1.0 {
            // 1/(μ+s) folded in after the balanced sum
            let ln_den = ln_add_exp(z, y);
            return balanced_ratio(&terms, c, z) * (-ln_den).exp();
        }
        let l = 2.0 * ln_abs_expm1(c * z) + ln_add_exp(z, y);
        terms
            .iter()
            .map(|&(w, p)| w.signum() * (w.abs().ln() + (p + 1.0) * z - l).exp())
            .sum()
    };
    // for large s the integrand peaks near μ = s
    let peak = y.max(0.0);
    let parts = [
        integrate(f, f64::NEG_INFINITY, 0.0, INNER_TOL)?,
        integrate(f, 0.0, peak, INNER_TOL)?,
        integrate(f, peak, f64::INFINITY, INNER_TOL)?,
    ];
    Ok(QuadResult {
        value: parts.iter().map(|p| p.value).sum(),
        err_estimate: parts.iter().map(|p| p.err_estimate).sum(),
        evaluations: parts.iter().map(|p| p.evaluations).sum(),
    })
}

/// Nested double integral for the boundary three-point constant at β = 4/γ − γ,
/// compared with its closed form. `error` is relative.
pub fn check_nested_integral(gamma: f64, theta: f64) -> Result<IdentityCheck> {
    let c = check_theta_window(gamma, theta)?;
    let e4 = constants(gamma)?.e4;
    let inner_evals = std::cell::Cell::new(0usize);
    // worst relative error of any inner integral
    let inner_err = std::cell::Cell::new(0.0f64);
    let failure = std::cell::RefCell::new(None);
    let outer = |y: f64| match nested_inner(c, y) {
        Ok(q) => {
            inner_evals.set(inner_evals.get() + q.evaluations);
            inner_err.set(inner_err.get().max(q.err_estimate / q.value.abs()));
            let weight = (theta * y - ln_add_exp(0.0, y)).exp();
            q.value * weight
        }
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let lo = integrate(outer, f64::NEG_INFINITY, 0.0, OUTER_TOL);
    let hi = integrate(outer, 0.0, OUTER_CUTOFF, OUTER_TOL);
    // the outer integrand decays like e^{−(c−1−θ) y}; add the geometric tail
    let tail = outer(OUTER_CUTOFF) / (c - 1.0 - theta);
    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }
    let (lo, hi) = (lo?, hi?);
    let lhs = e4 * (lo.value + hi.value + tail);

    let rhs = -e4 * PI / (PI * theta).sin() * trig_integral_rhs(gamma, theta);
    Ok(IdentityCheck {
        lhs,
        rhs,
        error: (lhs - rhs).abs() / rhs.abs(),
        quad_err: e4.abs() * (lo.err_estimate + hi.err_estimate) + lhs.abs() * inner_err.get(),
        evaluations: lo.evaluations + hi.evaluations + inner_evals.get(),
    })
}

/// Second route to the nested integral: the s-integral done in closed form
/// reduces it to −E4·π/sin(πθ) times the single integral of [`check_trig_integral`].
pub fn nested_via_single_integral(gamma: f64, theta: f64) -> Result<f64> {
    let c = check_theta_window(gamma, theta)?;
    let e4 = constants(gamma)?.e4;
    let (lo, hi) = trig_integral_lhs(theta, c)?;
    Ok(-e4 * PI / (PI * theta).sin() * (lo.value + hi.value))
}
