use serde::Serialize;

use super::ArmTrialBatch;
use crate::error::{Error, Result};

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, samples: u64, z: f64) -> Result<(f64, f64)> {
    if samples == 0 || successes > samples {
        return Err(Error::Domain(format!("need 0 <= successes <= samples >= 1, got {successes}/{samples}")));
    }
    if !(z.is_finite() && z >= 0.0) {
        return Err(Error::Domain(format!("z = {z}")));
    }
    let n = samples as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == samples { 1.0 } else { (center + half).min(1.0) };
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub points_used: usize,
    /// χ²/(points − 2) of the weighted residuals; 0 for unit weights.
    pub reduced_chi2: f64,
}

/// Weighted least squares of ln p against ln n.
///
/// Points are (n, p̂, stderr of p̂). Weights are p̂²/stderr² (the delta method
/// on ln p̂); if any stderr is zero every point gets unit weight. With
/// stderr-derived weights the slope error is inflated by √χ²_red when the
/// scatter exceeds the stated errors.
pub fn fit_power_law(points: &[(f64, f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!("{} points, need at least 3", points.len())));
    }
    for &(n, p, se) in points {
        if !(n > 0.0 && p > 0.0 && n.is_finite() && p.is_finite() && se >= 0.0) {
            return Err(Error::Domain(format!("bad point (n={n}, p={p}, stderr={se})")));
        }
    }
    let n0 = points[0].0;
    if points.iter().all(|&(n, _, _)| n == n0) {
        return Err(Error::DegenerateFit("all radii equal".into()));
    }
    let weighted = points.iter().all(|&(_, _, se)| se > 0.0);
    let w: Vec<f64> = points.iter().map(|&(_, p, se)| if weighted { (p / se).powi(2) } else { 1.0 }).collect();
    let xs: Vec<f64> = points.iter().map(|&(n, _, _)| n.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, p, _)| p.ln()).collect();

    let sw: f64 = w.iter().sum();
    let xbar = w.iter().zip(&xs).map(|(w, x)| w * x).sum::<f64>() / sw;
    let ybar = w.iter().zip(&ys).map(|(w, y)| w * y).sum::<f64>() / sw;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..points.len() {
        let dx = xs[i] - xbar;
        sxx += w[i] * dx * dx;
        sxy += w[i] * dx * (ys[i] - ybar);
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let dof = (points.len() - 2) as f64;
    let rss: f64 = (0..points.len()).map(|i| w[i] * (ys[i] - intercept - slope * xs[i]).powi(2)).sum();
    let (slope_stderr, reduced_chi2) = if weighted {
        let chi2 = rss / dof;
        ((1.0 / sxx).sqrt() * chi2.sqrt().max(1.0), chi2)
    } else {
        ((rss / dof / sxx).sqrt(), 0.0)
    };
    Ok(FitResult { slope, intercept, slope_stderr, points_used: points.len(), reduced_chi2 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiMultReport {
    pub radii: (u32, u32, u32),
    pub p12: f64,
    pub p23: f64,
    pub p13: f64,
    /// p13 / (p12·p23).
    pub c1_hat: f64,
    /// Three binomial standard errors, relative, combined in quadrature.
    pub slack: f64,
    /// p13 ≤ p12·p23·(1 + slack).
    pub upper_holds: bool,
}

/// Compares the crossing estimate of (r1, r3) with the product of the
/// estimates for (r1, r2) and (r2, r3).
pub fn quasi_mult_check(b12: &ArmTrialBatch, b23: &ArmTrialBatch, b13: &ArmTrialBatch) -> Result<QuasiMultReport> {
    let (r1, r2, r3) = (b12.r_in, b12.r_out, b23.r_out);
    if b23.r_in != r2 || b13.r_in != r1 || b13.r_out != r3 {
        return Err(Error::Domain("batches do not chain as (r1,r2), (r2,r3), (r1,r3)".into()));
    }
    if b12.event != b23.event || b12.event != b13.event {
        return Err(Error::Domain("batches measure different events".into()));
    }
    if r2 < 2 * r1 || r3 < 2 * r2 {
        return Err(Error::Domain(format!("need r2 >= 2 r1 and r3 >= 2 r2, got ({r1}, {r2}, {r3})")));
    }
    for b in [b12, b23, b13] {
        if b.successes == 0 {
            return Err(Error::InsufficientData(format!("no successes on ({}, {})", b.r_in, b.r_out)));
        }
    }
    let rel2 = |b: &ArmTrialBatch| (b.stderr() / b.p_hat()).powi(2);
    let slack = 3.0 * (rel2(b12) + rel2(b23) + rel2(b13)).sqrt();
    let product = b12.p_hat() * b23.p_hat();
    let p13 = b13.p_hat();
    Ok(QuasiMultReport {
        radii: (r1, r2, r3),
        p12: b12.p_hat(),
        p23: b23.p_hat(),
        p13,
        c1_hat: p13 / product,
        slack,
        upper_holds: p13 <= product * (1.0 + slack),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arms::ArmEvent;

    #[test]
    fn wilson_reference() {
        // closed form evaluated separately
        let (lo, hi) = wilson_interval(50, 100, 1.96).unwrap();
        assert!((lo - 0.403831).abs() < 1e-5 && (hi - 0.596169).abs() < 1e-5);
        assert_eq!(wilson_interval(0, 40, 1.96).unwrap().0, 0.0);
        assert_eq!(wilson_interval(40, 40, 1.96).unwrap().1, 1.0);
        assert!(wilson_interval(5, 4, 1.96).is_err());
        assert!(wilson_interval(0, 0, 1.96).is_err());
    }

    #[test]
    fn exact_power_laws() {
        let pts: Vec<_> = [8.0, 16.0, 32.0, 64.0].iter().map(|&n: &f64| (n, n.powf(-0.4), 0.01)).collect();
        let f = fit_power_law(&pts).unwrap();
        assert!((f.slope + 0.4).abs() < 1e-12);
        let pts: Vec<_> = [8.0, 16.0, 32.0].iter().map(|&n: &f64| (n, 3.0 * n.powf(-5.0 / 48.0), 0.0)).collect();
        let f = fit_power_law(&pts).unwrap();
        assert!((f.slope + 5.0 / 48.0).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(f.slope_stderr < 1e-12);
    }

    #[test]
    fn fit_errors() {
        assert!(matches!(fit_power_law(&[(8.0, 0.5, 0.1); 3]), Err(Error::DegenerateFit(_))));
        assert!(matches!(fit_power_law(&[(8.0, 0.5, 0.1), (9.0, 0.4, 0.1)]), Err(Error::InsufficientData(_))));
        assert!(fit_power_law(&[(8.0, 0.5, 0.1), (9.0, 0.0, 0.1), (10.0, 0.3, 0.1)]).is_err());
    }

    fn batch(r_in: u32, r_out: u32, successes: u64, samples: u64) -> ArmTrialBatch {
        ArmTrialBatch {
            event: ArmEvent::Backbone,
            r_in,
            r_out,
            samples,
            successes,
            seed: 0,
            trial_range: (0, samples),
            p: 0.5,
        }
    }

    #[test]
    fn quasi_mult_cases() {
        let all = quasi_mult_check(&batch(8, 16, 10, 10), &batch(16, 64, 10, 10), &batch(8, 64, 10, 10)).unwrap();
        assert_eq!(all.c1_hat, 1.0);
        assert!(all.upper_holds);
        let r = quasi_mult_check(&batch(8, 16, 5000, 10000), &batch(16, 64, 2000, 10000), &batch(8, 64, 800, 10000)).unwrap();
        assert!((r.c1_hat - 0.8).abs() < 1e-12 && r.upper_holds);
        let r = quasi_mult_check(&batch(8, 16, 5000, 10000), &batch(16, 64, 2000, 10000), &batch(8, 64, 1500, 10000)).unwrap();
        assert!(!r.upper_holds);
        assert!(matches!(
            quasi_mult_check(&batch(8, 16, 0, 10), &batch(16, 64, 1, 10), &batch(8, 64, 1, 10)),
            Err(Error::InsufficientData(_))
        ));
        assert!(quasi_mult_check(&batch(8, 12, 1, 10), &batch(12, 64, 1, 10), &batch(8, 64, 1, 10)).is_err());
    }
}
