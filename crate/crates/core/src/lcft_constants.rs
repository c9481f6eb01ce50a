//! Boundary Liouville structure constants and the disk constants built from them.
//!
//! Everything is assembled as a signed logarithm and exponentiated once at the
//! end; the powers of 2π range over several decades as γ approaches √2.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::specialfn::ln_gamma_signed;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// The three boundary insertions for which Ḡ(α, β) is known in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BetaCase {
    Zero,
    Gamma,
    /// β = 4/γ − γ.
    Beta0,
}

/// A real number stored as `sign · exp(ln)`.
#[derive(Debug, Clone, Copy)]
struct SignedLog {
    ln: f64,
    sign: f64,
}

impl SignedLog {
    fn of(x: f64) -> Self {
        SignedLog { ln: x.abs().ln(), sign: x.signum() }
    }

    fn gamma(x: f64) -> Result<Self> {
        let (ln, sign) = ln_gamma_signed(x)?;
        Ok(SignedLog { ln, sign })
    }

    /// Real power of a positive quantity.
    fn powf(self, p: f64) -> Self {
        debug_assert!(self.sign > 0.0);
        SignedLog { ln: self.ln * p, sign: 1.0 }
    }

    fn value(self) -> f64 {
        self.sign * self.ln.exp()
    }
}

impl std::ops::Mul for SignedLog {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        SignedLog { ln: self.ln + o.ln, sign: self.sign * o.sign }
    }
}

impl std::ops::Div for SignedLog {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        SignedLog { ln: self.ln - o.ln, sign: self.sign * o.sign }
    }
}

fn q_of(gamma: f64) -> f64 {
    2.0 / gamma + gamma / 2.0
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > SQRT2 && gamma < 2.0) {
        return domain(format!("gamma = {gamma} outside (sqrt 2, 2)"));
    }
    Ok(())
}

fn ln_gbar(gamma: f64, alpha: f64, case: BetaCase) -> Result<SignedLog> {
    if !(gamma > 0.0 && gamma < 2.0) {
        return domain(format!("gamma = {gamma} outside (0, 2)"));
    }
    let q = q_of(gamma);
    if !(alpha > gamma / 2.0 && alpha < q) {
        return domain(format!("alpha = {alpha} outside (gamma/2, Q) = ({}, {q})", gamma / 2.0));
    }
    let g2 = gamma * gamma;
    let base = SignedLog::of(2.0 * PI) / SignedLog::gamma(1.0 - g2 / 4.0)?
        * SignedLog { ln: -gamma * alpha / 2.0 * 2f64.ln(), sign: 1.0 };
    let zero = base.powf(2.0 * (q - alpha) / gamma) * SignedLog::gamma(gamma * alpha / 2.0 - g2 / 4.0)?;
    match case {
        BetaCase::Zero => Ok(zero),
        BetaCase::Gamma => Ok(zero / SignedLog::of(PI)),
        BetaCase::Beta0 => {
            let c = 4.0 / g2;
            let pre = SignedLog { ln: (3.0 - g2 / 2.0 - c) * 2f64.ln() - (c - 1.0) * PI.ln(), sign: 1.0 }
                * SignedLog::gamma(1.0 - g2 / 4.0)?.powf(c - 1.0)
                * SignedLog::gamma(g2 / 2.0 - 1.0)?
                / SignedLog::gamma(2.0 - c)?
                / SignedLog::gamma(g2 / 4.0)?;
            let ratio = SignedLog::gamma(2.0 * alpha / gamma - c)?
                * SignedLog::gamma(gamma * alpha / 2.0 + 1.0 - g2 / 2.0)?
                / SignedLog::gamma(2.0 * alpha / gamma - 1.0)?
                / SignedLog::gamma(gamma * alpha / 2.0 - 1.0)?;
            Ok(pre * ratio * zero)
        }
    }
}

/// Normalised boundary structure constant Ḡ(α, β) for the three supported β.
pub fn gbar(gamma: f64, alpha: f64, case: BetaCase) -> Result<f64> {
    ln_gbar(gamma, alpha, case).map(SignedLog::value)
}

/// Disk constants at a fixed γ, each of E4 and C1 in two independent forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantBundle {
    pub gamma: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    /// E1·E3²·γ / (2 Γ(4/γ²−2) Γ(4/γ²+1)).
    pub e4: f64,
    /// Closed form of E4 with the Gamma factors reduced to sin²(4π/γ²).
    pub e4_simplified: f64,
    /// Trigonometric closed form.
    pub c1: f64,
    /// C1 assembled from E2, E3 and Ḡ(γ, 4/γ−γ).
    pub c1_assembled: f64,
}

impl ConstantBundle {
    pub fn gbar_alpha0(&self, alpha: f64) -> Result<f64> {
        gbar(self.gamma, alpha, BetaCase::Zero)
    }

    pub fn gbar_alpha_gamma(&self, alpha: f64) -> Result<f64> {
        gbar(self.gamma, alpha, BetaCase::Gamma)
    }

    pub fn gbar_alpha_beta0(&self, alpha: f64) -> Result<f64> {
        gbar(self.gamma, alpha, BetaCase::Beta0)
    }

    /// Largest relative disagreement between the paired expressions.
    pub fn max_dual_rel_error(&self) -> f64 {
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
        rel(self.e4, self.e4_simplified).max(rel(self.c1, self.c1_assembled))
    }
}

pub fn constants(gamma: f64) -> Result<ConstantBundle> {
    check_gamma(gamma)?;
    let g2 = gamma * gamma;
    let c = 4.0 / g2;
    let q = q_of(gamma);
    let two_pi = SignedLog::of(2.0 * PI);
    let gam_m = SignedLog::gamma(1.0 - g2 / 4.0)?;

    let e1 = two_pi.powf(c - 1.0) / SignedLog::of(1.0 - g2 / 4.0) / gam_m.powf(c);
    let e2 = SignedLog::gamma(g2 / 4.0)? / SignedLog::of(4.0 * PI * (q - gamma).powi(2))
        * (two_pi / gam_m).powf(c - 1.0);
    let e3 = two_pi.powf(1.0 - c) * gam_m.powf(c) / SignedLog::gamma(2.0 - c)?;
    let e4 = e1 * e3 * e3 * SignedLog::of(gamma)
        / SignedLog::of(2.0)
        / SignedLog::gamma(c - 2.0)?
        / SignedLog::gamma(c + 1.0)?;

    let sin_c = (PI * c).sin();
    let e4_simplified = SignedLog::of(-4.0 * gamma.powi(3) * (g2 - 2.0) * sin_c * sin_c / (g2 - 4.0).powi(2))
        * two_pi.powf(-1.0 - c)
        * gam_m.powf(c);

    let c1 = PI * 2f64.powf(1.0 - g2 / 2.0) * (g2 - 4.0).powi(2) * (PI * g2 / 4.0).sin()
        / (gamma.powi(3) * (-PI * c).sin());
    let c1_assembled = SignedLog { ln: (1.0 - g2 / 2.0) * 2f64.ln(), sign: 1.0 }
        * SignedLog::gamma(c - 1.0)?
        * ln_gbar(gamma, gamma, BetaCase::Beta0)?
        / (e2 * e3 * SignedLog::of(gamma));

    let bundle = ConstantBundle {
        gamma,
        e1: e1.value(),
        e2: e2.value(),
        e3: e3.value(),
        e4: e4.value(),
        e4_simplified: e4_simplified.value(),
        c1,
        c1_assembled: c1_assembled.value(),
    };
    let all = [bundle.e1, bundle.e2, bundle.e3, bundle.e4, bundle.e4_simplified, bundle.c1, bundle.c1_assembled];
    if all.iter().any(|v| !v.is_finite()) {
        return Err(crate::Error::Numerical(format!("non-finite constant at gamma = {gamma}")));
    }
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gbar_gamma_is_zero_over_pi() {
        let z = gbar(1.6, 1.8, BetaCase::Zero).unwrap();
        let g = gbar(1.6, 1.8, BetaCase::Gamma).unwrap();
        assert!(rel(g / z, 1.0 / PI) < 1e-14);
    }

    #[test]
    fn gbar_zero_at_q_is_one() {
        let gamma = 1.7;
        let q = q_of(gamma);
        let v = gbar(gamma, q - 1e-12, BetaCase::Zero).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn gbar_reference_values() {
        // 30-digit evaluation of the closed forms
        let z = gbar(1.7, 1.9, BetaCase::Zero).unwrap();
        assert!(rel(z, 1.003_744_156_589_128_0) < 1e-13);
        let b = gbar(1.7, 1.9, BetaCase::Beta0).unwrap();
        assert!(rel(b, 0.964_327_483_505_103_5) < 1e-13);
    }

    #[test]
    fn gbar_domain() {
        assert!(gbar(1.7, 0.85, BetaCase::Zero).is_err());
        assert!(gbar(1.7, q_of(1.7), BetaCase::Zero).is_err());
        assert!(gbar(1.7, 0.86, BetaCase::Zero).is_ok());
    }

    #[test]
    fn constants_reference_values() {
        let cases = [
            (1.5, [2.723_611_341_129_853_2, 0.892_597_513_439_538_7, 0.204_360_316_606_076_5, -0.009_679_429_150_405_122, 3.988_686_341_637_637]),
            (1.633, [1.714_976_987_101_333_7, 0.990_177_330_626_248, 0.986_974_673_414_425_4, -0.289_460_565_336_007_5, 0.881_523_274_219_232_1]),
            (1.9, [1.001_143_091_750_025, 7.683_104_959_915_318, 9.528_215_032_317_967, -8.352_789_792_907_632, 0.036_115_516_319_319_9]),
        ];
        for (g, want) in cases {
            let b = constants(g).unwrap();
            let got = [b.e1, b.e2, b.e3, b.e4, b.c1];
            for (x, w) in got.iter().zip(want) {
                assert!(rel(*x, w) < 1e-12, "gamma {g}: {x} vs {w}");
            }
            assert!(rel(b.e4_simplified, want[3]) < 1e-12);
            assert!(rel(b.c1_assembled, want[4]) < 1e-12);
        }
    }

    #[test]
    fn dual_forms_agree_on_grid() {
        let (lo, hi) = (SQRT2 + 1e-3, 2.0 - 1e-3);
        for i in 0..50 {
            let g = lo + (hi - lo) * i as f64 / 49.0;
            let b = constants(g).unwrap();
            assert!(b.max_dual_rel_error() < 1e-10, "gamma {g}: {}", b.max_dual_rel_error());
            assert!(b.e4 < 0.0);
        }
    }

    #[test]
    fn constants_domain() {
        assert!(constants(SQRT2).is_err());
        assert!(constants(2.0).is_err());
        assert!(constants(1.2).is_err());
    }
}
