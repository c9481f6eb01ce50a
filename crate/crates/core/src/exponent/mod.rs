//! Exact backbone exponent from the transcendental root equation.
//!
//! For κ ∈ (4,8) put `a = 8π/κ`. The exponent is `ξ = (ρ² − (1−κ/4)²)·2/κ`
//! where ρ is the root of `g(ρ) = sin(a)·ρ − sin(aρ)` on `(κ/4−1, κ/4)` other
//! than the ever-present root ρ = 1. At κ = κ0 (`tan a = a`) the two roots merge.

pub mod roots;

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Scan spacing in ρ used to isolate the non-trivial root.
pub const SCAN_STEP: f64 = 1e-4;
/// Final bracket width of the bisection.
pub const BISECT_TOL: f64 = 1e-14;

const KAPPA0_TOL: f64 = 1e-7;
const MERGED_ROOT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaParams {
    pub kappa: f64,
    pub gamma: f64,
    pub q_big: f64,
}

impl KappaParams {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 4.0 && kappa < 8.0) {
            return domain(format!("kappa must lie in (4,8), got {kappa}"));
        }
        let gamma = 4.0 / kappa.sqrt();
        Ok(Self {
            kappa,
            gamma,
            q_big: 2.0 / gamma + gamma / 2.0,
        })
    }

    pub fn from_gamma(gamma: f64) -> Result<Self> {
        if !(gamma > std::f64::consts::SQRT_2 && gamma < 2.0) {
            return domain(format!("gamma must lie in (sqrt 2, 2), got {gamma}"));
        }
        Ok(Self {
            kappa: 16.0 / (gamma * gamma),
            gamma,
            q_big: 2.0 / gamma + gamma / 2.0,
        })
    }

    /// 8π/κ
    pub fn angle(&self) -> f64 {
        8.0 * PI / self.kappa
    }

    /// The value of ξ contributed by the trivial root ρ = 1.
    pub fn trivial_xi(&self) -> f64 {
        1.0 - self.kappa / 8.0
    }

    /// Upper end 1 − 2/κ of the exponent range.
    pub fn xi_upper(&self) -> f64 {
        1.0 - 2.0 / self.kappa
    }

    pub fn rho_of_xi(&self, xi: f64) -> f64 {
        let k = self.kappa;
        (k * xi / 2.0 + (1.0 - k / 4.0).powi(2)).sqrt()
    }

    pub fn xi_of_rho(&self, rho: f64) -> f64 {
        let k = self.kappa;
        (rho * rho - (1.0 - k / 4.0).powi(2)) * 2.0 / k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentSolution {
    pub kappa: f64,
    pub xi: f64,
    pub rho: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
    /// Set when the non-trivial root has merged with ρ = 1.
    pub degenerate: bool,
}

/// `g(ρ) = sin(a)ρ − sin(aρ)`.
pub fn root_function(kappa: f64, rho: f64) -> f64 {
    let a = 8.0 * PI / kappa;
    a.sin() * rho - (a * rho).sin()
}

/// `g(ρ)/(ρ−1)`, evaluated without cancellation near ρ = 1.
pub fn reduced_root_function(kappa: f64, rho: f64) -> f64 {
    let a = 8.0 * PI / kappa;
    let d = rho - 1.0;
    if d == 0.0 {
        return a.sin() - a * a.cos();
    }
    let half = (0.5 * a * d).sin();
    a.sin() * (1.0 + 2.0 * half * half / d) - a.cos() * (a * d).sin() / d
}

pub fn kappa_from_q(q: f64) -> Result<f64> {
    if !(q > 0.0 && q <= 4.0) {
        return domain(format!("cluster weight q must lie in (0,4], got {q}"));
    }
    Ok(4.0 * PI / (PI - (q.sqrt() / 2.0).acos()))
}

/// The unique κ0 ∈ (4,8) with tan(8π/κ0) = 8π/κ0.
pub fn solve_kappa0() -> f64 {
    static KAPPA0: OnceLock<f64> = OnceLock::new();
    *KAPPA0.get_or_init(|| {
        // u = 8π/κ lies in (π, 3π/2) where sin u − u cos u decreases through zero.
        let f = |u: f64| u.sin() - u * u.cos();
        let u = roots::bisect(f, PI, 1.5 * PI, 1e-16);
        8.0 * PI / u
    })
}

pub fn solve_xi(kappa: f64) -> Result<ExponentSolution> {
    let params = KappaParams::new(kappa)?;
    if 8.0 - kappa < 1e-9 {
        return domain(format!("kappa {kappa} too close to 8"));
    }
    let degenerate = |bracket| ExponentSolution {
        kappa,
        xi: params.trivial_xi(),
        rho: 1.0,
        residual: root_function(kappa, 1.0),
        bracket,
        degenerate: true,
    };
    if (kappa - solve_kappa0()).abs() < KAPPA0_TOL {
        return Ok(degenerate((1.0, 1.0)));
    }

    let lo = kappa / 4.0 - 1.0;
    let hi = (kappa / 2.0 - 1.0 + (1.0 - kappa / 4.0).powi(2)).sqrt();
    let h = |rho: f64| reduced_root_function(kappa, rho);
    let brackets = roots::scan_sign_changes(h, lo, hi, SCAN_STEP);
    let (a, b) = match brackets.as_slice() {
        [] => {
            return Err(Error::RootNotFound(format!(
                "no non-trivial root of the exponent equation for kappa {kappa}"
            )))
        }
        [one] => *one,
        many => {
            return Err(Error::Numerical(format!(
                "{} non-trivial sign changes for kappa {kappa}; expected one",
                many.len()
            )))
        }
    };
    let rho = roots::bisect(h, a, b, BISECT_TOL);
    if (rho - 1.0).abs() < MERGED_ROOT_TOL {
        return Ok(degenerate((a, b)));
    }
    Ok(ExponentSolution {
        kappa,
        xi: params.xi_of_rho(rho),
        rho,
        residual: root_function(kappa, rho),
        bracket: (a, b),
        degenerate: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableRow {
    pub q: f64,
    pub kappa: f64,
    pub xi: f64,
}

/// κ used in place of the endpoint κ = 4.
pub const KAPPA_NEAR_FOUR: f64 = 4.0 + 1e-8;

/// Exponent for the cluster weights q ∈ {1, 2, 3, 2+√3, 4}.
pub fn exponent_table() -> Vec<TableRow> {
    [1.0, 2.0, 3.0, 2.0 + 3f64.sqrt(), 4.0]
        .into_iter()
        .map(|q| {
            let kappa = if q == 4.0 {
                KAPPA_NEAR_FOUR
            } else {
                kappa_from_q(q).expect("q in range")
            };
            let xi = solve_xi(kappa).expect("table kappa is solvable").xi;
            TableRow { q, kappa, xi }
        })
        .collect()
}

/// Δα = (α/2)(Q − α/2).
pub fn delta_alpha(alpha: f64, params: &KappaParams) -> f64 {
    alpha / 2.0 * (params.q_big - alpha / 2.0)
}
