//! Gamma-family special functions.
//!
//! `ln_gamma` is the principal branch of log Γ on the complex plane, computed
//! from an 11-term Lanczos sum for `Re z >= 0.5` and by upward recurrence
//! below that. The recurrence keeps the imaginary part continuous, so the
//! result is the branch that is real on the positive axis and analytic off the
//! non-positive reals.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const POLE_TOL: f64 = 1e-12;

const LANCZOS_R: f64 = 10.900511;

const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

/// ln(2·sqrt(e/π))
const LN_TWO_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_2;

fn pole_check(re: f64, im: f64) -> Result<()> {
    if re <= 0.5 {
        let n = re.round();
        if n <= 0.0 && (re - n).hypot(im) < POLE_TOL {
            return Err(Error::Pole(format!("gamma pole at {n}")));
        }
    }
    Ok(())
}

fn lanczos_sum(z: Complex64) -> Complex64 {
    LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(Complex64::new(LANCZOS_DK[0], 0.0), |s, (k, &d)| {
            s + d / (z + (k as f64 - 1.0))
        })
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    (z - 0.5) * z.ln() - z
        + 0.5 * (2.0 * PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

fn ln_gamma_right(z: Complex64) -> Complex64 {
    let base = z - 0.5;
    let mut out = lanczos_sum(z).ln() + LN_TWO_SQRT_E_OVER_PI + base * ((base + LANCZOS_R).ln() - 1.0);
    if z.norm() > 4.0 {
        // The Lanczos log can land on a neighbouring sheet; Stirling pins it.
        let k = ((stirling(z).im - out.im) / (2.0 * PI)).round();
        out.im += 2.0 * PI * k;
    }
    out
}

/// Principal-branch log Γ(z).
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("ln_gamma of non-finite {z}")));
    }
    pole_check(z.re, z.im)?;
    if z.re >= 0.5 {
        return Ok(ln_gamma_right(z));
    }
    let shift = (0.5 - z.re).ceil() as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..shift {
        acc += (z + k as f64).ln();
    }
    Ok(ln_gamma_right(z + shift as f64) - acc)
}

pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    ln_gamma(z).map(|l| l.exp())
}

/// Returns `(ln|Γ(x)|, sign Γ(x))` for real `x`.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma of non-finite {x}")));
    }
    pole_check(x, 0.0)?;
    let right = |x: f64| {
        let s = LANCZOS_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(LANCZOS_DK[0], |s, (k, &d)| s + d / (x + k as f64 - 1.0));
        s.ln() + LN_TWO_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + LANCZOS_R).ln() - 1.0)
    };
    if x >= 0.5 {
        return Ok((right(x), 1.0));
    }
    let shift = (0.5 - x).ceil() as usize;
    let mut acc = 0.0;
    let mut sign = 1.0;
    for k in 0..shift {
        let t = x + k as f64;
        acc += t.abs().ln();
        if t < 0.0 {
            sign = -sign;
        }
    }
    Ok((right(x + shift as f64) - acc, sign))
}

pub fn gamma(x: f64) -> Result<f64> {
    let (l, s) = ln_gamma_signed(x)?;
    Ok(s * l.exp())
}

/// Digamma ψ(x) for real x.
pub fn digamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("digamma of non-finite {x}")));
    }
    pole_check(x, 0.0)?;
    if x <= 0.0 {
        let r = x - x.round();
        return Ok(digamma(1.0 - x)? - PI / (PI * r).tan());
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 8.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    Ok(acc + x.ln() - 0.5 / x - series)
}
