//! Moment formula for the conformal radius under the bubble measure.
//!
//! With `θ² = (κ/4−1)² − κλ/2` and `b = 4π/κ`,
//!
//! ```text
//! F(λ) = 1 + 2Γ(4(1−θ)/κ)Γ(4(1+θ)/κ) / (κ cos b Γ(8/κ−1) sin(bθ)) · (sin 2bθ − θ sin 2b)
//! ```
//!
//! `F` depends on θ² only. Two removable singularities are handled in closed
//! form: θ → 0, where `sin(bθ)` vanishes, and θ → 1, where the pole of
//! `Γ(4(1−θ)/κ)` meets the zero of `sin 2bθ − θ sin 2b`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exponent::{roots, solve_kappa0, ExponentSolution, KappaParams};
use crate::specialfn::{gamma, gamma_complex};

const SMALL_THETA: f64 = 1e-4;
const NEAR_ONE: f64 = 0.25;
const IMAG_TOL: f64 = 1e-9;
/// Distance kept from the pole line Re λ = 2/κ − 1.
pub const POLE_MARGIN: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentValue {
    pub lambda: Complex64,
    pub theta_sq: Complex64,
    pub value: Complex64,
}

/// `(sin 2bθ − θ sin 2b)/sin bθ` to second order in θ.
fn small_theta_ratio<T>(b: f64, theta_sq: T) -> T
where
    T: std::ops::Mul<f64, Output = T> + std::ops::Add<f64, Output = T>,
{
    let s = (2.0 * b).sin();
    let c0 = 2.0 * b - s;
    let c2 = c0 * b * b / 6.0 - 4.0 * b * b * b / 3.0;
    (theta_sq * c2 + c0) * (1.0 / b)
}

/// `Γ(4(1−θ)/κ)·(sin 2bθ − θ sin 2b)` for θ near 1, with ε = 1 − θ.
fn gamma_times_numerator_near_one(kappa: f64, b: f64, eps: Complex64) -> Result<Complex64> {
    let (s2, c2) = (2.0 * b).sin_cos();
    let quotient = if eps == Complex64::new(0.0, 0.0) {
        Complex64::new(s2 - 2.0 * b * c2, 0.0)
    } else {
        let half = (eps * b).sin();
        -c2 * (eps * (2.0 * b)).sin() / eps - 2.0 * s2 * half * half / eps + s2
    };
    let u = eps * (4.0 / kappa);
    Ok(gamma_complex(u + 1.0)? * quotient * (kappa / 4.0))
}

/// Evaluates F(λ). For real λ the imaginary residue is checked and dropped.
pub fn moment_f(params: &KappaParams, lambda: Complex64) -> Result<MomentValue> {
    let k = params.kappa;
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return domain(format!("non-finite lambda {lambda}"));
    }
    if lambda.re <= 2.0 / k - 1.0 + POLE_MARGIN {
        return domain(format!(
            "Re lambda = {} is on or beyond the pole line 2/kappa - 1 = {}",
            lambda.re,
            2.0 / k - 1.0
        ));
    }
    let b = 4.0 * PI / k;
    let theta_sq = Complex64::new((k / 4.0 - 1.0).powi(2), 0.0) - lambda * (k / 2.0);
    let theta = theta_sq.sqrt();
    let one = Complex64::new(1.0, 0.0);

    let core = if theta.norm() < SMALL_THETA {
        gamma_complex((one - theta) * (4.0 / k))? * small_theta_ratio(b, theta_sq)
    } else {
        let den = (theta * b).sin();
        let eps = one - theta;
        let num = if eps.norm() < NEAR_ONE {
            gamma_times_numerator_near_one(k, b, eps)?
        } else {
            gamma_complex(eps * (4.0 / k))? * ((theta * (2.0 * b)).sin() - theta * (2.0 * b).sin())
        };
        num / den
    };
    let pre = gamma_complex((one + theta) * (4.0 / k))? * 2.0 / (k * b.cos() * gamma(8.0 / k - 1.0)?);
    let mut value = one + pre * core;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Numerical(format!("moment formula overflowed at lambda {lambda}")));
    }
    if lambda.im == 0.0 {
        if value.im.abs() > IMAG_TOL * value.re.abs().max(1.0) {
            return Err(Error::Numerical(format!(
                "imaginary residue {} at real lambda {}",
                value.im, lambda.re
            )));
        }
        value.im = 0.0;
    }
    Ok(MomentValue {
        lambda,
        theta_sq,
        value,
    })
}

pub fn moment_f_real(params: &KappaParams, lambda: f64) -> Result<f64> {
    moment_f(params, Complex64::new(lambda, 0.0)).map(|m| m.value.re)
}

/// The same formula written with γ and an insertion weight α ∈ (γ, Q),
/// via θ = (2/γ)(Q − α).
pub fn moment_f_gamma(params: &KappaParams, alpha: f64) -> Result<f64> {
    let g = params.gamma;
    let q = params.q_big;
    if !(alpha > g && alpha < q) {
        return domain(format!("alpha must lie in ({g}, {q}), got {alpha}"));
    }
    let g2 = g * g;
    let theta = 2.0 / g * (q - alpha);
    let b = PI * g2 / 4.0;
    let ratio = if theta.abs() < SMALL_THETA {
        small_theta_ratio(b, theta * theta)
    } else {
        ((2.0 * b * theta).sin() - theta * (2.0 * b).sin()) / (b * theta).sin()
    };
    let pre = g2 * gamma(g2 * (1.0 - theta) / 4.0)? * gamma(g2 * (theta + 1.0) / 4.0)?
        / (8.0 * b.cos() * gamma(g2 / 2.0 - 1.0)?);
    Ok(1.0 + pre * ratio)
}

const XI_SCAN_POINTS: usize = 1000;

/// Solves F(−x) = 1 on (0, 1 − 2/κ).
///
/// After the pole of `Γ(4(1−θ)/κ)` cancels, x = 1 − κ/8 is not a root of
/// F(−x) − 1 except at κ0, so the scan sees a single sign change at ξ(κ).
/// A root that coincides with 1 − κ/8 is reported with the degenerate flag.
pub fn xi_from_moment(params: &KappaParams) -> Result<ExponentSolution> {
    let k = params.kappa;
    let upper = params.xi_upper();
    let f = |x: f64| moment_f_real(params, -x).map_or(f64::NAN, |v| v - 1.0);
    let lo = upper * 1e-9;
    let hi = upper - 1e-7;
    let step = (hi - lo) / XI_SCAN_POINTS as f64;
    let brackets = roots::scan_sign_changes(f, lo, hi, step);
    if brackets.iter().any(|&(a, b)| !f(a).is_finite() || !f(b).is_finite()) {
        return Err(Error::Numerical(format!("moment formula failed on the scan grid for kappa {k}")));
    }
    let near_kappa0 = (k - solve_kappa0()).abs() < 1e-7;
    let degenerate = |bracket| ExponentSolution {
        kappa: k,
        xi: params.trivial_xi(),
        rho: 1.0,
        residual: f(params.trivial_xi()),
        bracket,
        degenerate: true,
    };
    let (a, b) = match brackets.as_slice() {
        [] if near_kappa0 => return Ok(degenerate((params.trivial_xi(), params.trivial_xi()))),
        [] => {
            return Err(Error::RootNotFound(format!("F(-x) = 1 has no root for kappa {k}")));
        }
        [one] => *one,
        many => {
            return Err(Error::Numerical(format!(
                "{} sign changes of F(-x) - 1 for kappa {k}; expected one",
                many.len()
            )))
        }
    };
    let x = roots::bisect(f, a, b, 1e-15);
    let rho = params.rho_of_xi(x);
    if near_kappa0 || (rho - 1.0).abs() < 1e-6 {
        return Ok(degenerate((a, b)));
    }
    Ok(ExponentSolution {
        kappa: k,
        xi: x,
        rho,
        residual: f(x),
        bracket: (a, b),
        degenerate: false,
    })
}
