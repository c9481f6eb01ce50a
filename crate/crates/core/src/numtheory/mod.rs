//! Totients, cyclotomic polynomials, minimal polynomials of 2cos(2πk/n), and
//! a brute-force search for small integer polynomials vanishing at a real.

mod poly;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

pub use poly::IntPolynomial;

use crate::error::{domain, Error, Result};

pub const MAX_TOTIENT_ARG: u64 = 1_000_000;
pub const MAX_CYCLOTOMIC_ORDER: usize = 2000;
pub const MAX_SCAN_DEGREE: usize = 6;
pub const MAX_SCAN_HEIGHT: i64 = 50;

/// Relative acceptance threshold of [`small_poly_scan`].
pub const SCAN_REL_TOL: f64 = 1e-11;

/// Euler's totient by trial division.
pub fn totient(n: u64) -> Result<u64> {
    if n == 0 {
        return domain("totient of 0");
    }
    if n > MAX_TOTIENT_ARG {
        return Err(Error::Capacity(format!("totient argument {n} above {MAX_TOTIENT_ARG}")));
    }
    let mut m = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    Ok(phi)
}

fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Φ_d for every divisor d of n, keyed by d.
pub fn cyclotomic_family(n: usize) -> Result<BTreeMap<usize, IntPolynomial>> {
    if n == 0 {
        return domain("cyclotomic order 0");
    }
    if n > MAX_CYCLOTOMIC_ORDER {
        return Err(Error::Capacity(format!("cyclotomic order {n} above {MAX_CYCLOTOMIC_ORDER}")));
    }
    let mut out: BTreeMap<usize, IntPolynomial> = BTreeMap::new();
    for d in divisors(n) {
        let mut p = IntPolynomial::x_pow_minus_one(d);
        for e in divisors(d) {
            if e < d {
                p = p.div_exact_monic(&out[&e])?;
            }
        }
        out.insert(d, p);
    }
    Ok(out)
}

/// Φ_n as x^n − 1 divided exactly by Φ_d for each proper divisor d.
pub fn cyclotomic(n: usize) -> Result<IntPolynomial> {
    let mut fam = cyclotomic_family(n)?;
    Ok(fam.remove(&n).expect("n divides itself"))
}

/// Minimal polynomial of 2cos(2π/n).
///
/// For n ≥ 3 the palindromic Φ_n is rewritten as x^{φ(n)/2}·ψ(x + 1/x) using
/// x^j + x^{−j} = D_j(x + 1/x), D_0 = 2, D_1 = y, D_j = y·D_{j−1} − D_{j−2}.
pub fn min_poly_two_cos(n: usize) -> Result<IntPolynomial> {
    match n {
        0 => domain("order 0"),
        1 => Ok(IntPolynomial::from_i64(&[-2, 1])),
        2 => Ok(IntPolynomial::from_i64(&[2, 1])),
        _ => {
            let phi = cyclotomic(n)?;
            let c = phi.coeffs();
            let half = (c.len() - 1) / 2;
            let y = IntPolynomial::from_i64(&[0, 1]);
            let mut d_prev = IntPolynomial::from_i64(&[2]);
            let mut d_cur = y.clone();
            let mut psi = IntPolynomial::new(vec![c[half].clone()]);
            for j in 1..=half {
                if j > 1 {
                    let next = &(&y * &d_cur) - &d_prev;
                    d_prev = std::mem::replace(&mut d_cur, next);
                }
                let scaled = &IntPolynomial::new(vec![c[half + j].clone()]) * &d_cur;
                psi = &psi + &scaled;
            }
            Ok(psi)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TwoCosClass {
    /// 2cos(2πk/n) is this integer.
    Integer(i64),
    /// Irrational, algebraic of the given degree.
    IrrationalAlgebraic(usize),
}

/// Classifies 2cos(2πk/n) for coprime k and n from φ(n) alone.
pub fn classify_two_cos(k: i64, n: u64) -> Result<TwoCosClass> {
    if n == 0 {
        return domain("order 0");
    }
    if k.unsigned_abs().gcd(&n) != 1 {
        return domain(format!("gcd({k}, {n}) != 1"));
    }
    let phi = totient(n)?;
    if phi <= 2 {
        // n ∈ {1, 2, 3, 4, 6}
        let v = 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos();
        Ok(TwoCosClass::Integer(v.round() as i64))
    } else {
        Ok(TwoCosClass::IrrationalAlgebraic((phi / 2) as usize))
    }
}

/// Candidate ordering: smaller height first, then lexicographic from the top.
fn candidate_key(c: &[i64]) -> (i64, Vec<i64>) {
    (c.iter().map(|v| v.abs()).max().unwrap_or(0), c.iter().rev().copied().collect())
}

fn better(a: Option<Vec<i64>>, b: Option<Vec<i64>>) -> Option<Vec<i64>> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if candidate_key(&b) < candidate_key(&a) { b } else { a }),
        (a, b) => a.or(b),
    }
}

struct ScanStratum<'a> {
    powers: &'a [f64],
    height: i64,
    degree: usize,
}

impl ScanStratum<'_> {
    /// Walks the middle coefficients a_{degree−1}, …, a_1; a_0 is the rounding.
    fn walk(&self, coeffs: &mut Vec<i64>, idx: usize, sum: f64, scale: f64, best: &mut Option<Vec<i64>>) {
        if idx == 0 {
            let a0 = -sum.round();
            if a0.abs() > self.height as f64 {
                return;
            }
            let resid = (sum + a0).abs();
            if resid < SCAN_REL_TOL * (scale + a0.abs()) {
                coeffs[0] = a0 as i64;
                let cand = coeffs.clone();
                *best = better(best.take(), Some(cand));
            }
            return;
        }
        for a in -self.height..=self.height {
            coeffs[idx] = a;
            let t = a as f64 * self.powers[idx];
            self.walk(coeffs, idx - 1, sum + t, scale + t.abs(), best);
        }
        coeffs[idx] = 0;
    }

    fn search(&self, lead: i64) -> Option<Vec<i64>> {
        let mut coeffs = vec![0i64; self.degree + 1];
        coeffs[self.degree] = lead;
        let t = lead as f64 * self.powers[self.degree];
        let mut best = None;
        self.walk(&mut coeffs, self.degree - 1, t, t.abs(), &mut best);
        best
    }
}

/// Exhaustive search for a nonzero integer polynomial of degree ≤ `max_degree`
/// and height ≤ `max_height` with |p(x)| < 1e-11·Σ|aᵢ||x|ⁱ.
///
/// Returns the hit of least degree, then least height. The leading coefficient
/// is taken positive and a₀ is fixed by rounding, so the work is about
/// H·(2H+1)^{d−1} evaluations for degree d; degree 6 at height 50 is hours.
pub fn small_poly_scan(x: f64, max_degree: usize, max_height: i64) -> Result<Option<IntPolynomial>> {
    if !x.is_finite() {
        return domain(format!("scan point {x} is not finite"));
    }
    if !(1..=MAX_SCAN_DEGREE).contains(&max_degree) {
        return domain(format!("max_degree {max_degree} outside 1..={MAX_SCAN_DEGREE}"));
    }
    if !(1..=MAX_SCAN_HEIGHT).contains(&max_height) {
        return domain(format!("max_height {max_height} outside 1..={MAX_SCAN_HEIGHT}"));
    }
    let powers: Vec<f64> = (0..=max_degree as i32).map(|i| x.powi(i)).collect();
    for degree in 1..=max_degree {
        let stratum = ScanStratum { powers: &powers, height: max_height, degree };
        let hit = (1..=max_height)
            .into_par_iter()
            .map(|lead| stratum.search(lead))
            .reduce(|| None, better);
        if let Some(c) = hit {
            return Ok(Some(IntPolynomial::from_i64(&c)));
        }
    }
    Ok(None)
}

/// ∏_{d|n} Φ_d, which should equal x^n − 1.
pub fn divisor_product(n: usize) -> Result<IntPolynomial> {
    let fam = cyclotomic_family(n)?;
    Ok(fam.values().fold(IntPolynomial::one(), |acc, p| &acc * p))
}

/// Largest absolute coefficient of Φ_n as an f64 (coefficients are exact).
pub fn cyclotomic_height(n: usize) -> Result<f64> {
    let h: BigInt = cyclotomic(n)?.height();
    Ok(h.to_f64().unwrap_or(f64::INFINITY))
}
