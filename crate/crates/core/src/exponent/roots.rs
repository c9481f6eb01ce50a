//! Scan-and-bisect root isolation shared by the exponent solvers.

/// Brackets `[a, b]` where `f` changes sign on a uniform grid of spacing `step`.
///
/// A grid value that is exactly zero is returned as a degenerate bracket `(x, x)`.
pub fn scan_sign_changes<F>(f: F, lo: f64, hi: f64, step: f64) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    assert!(hi > lo && step > 0.0);
    let n = ((hi - lo) / step).ceil() as usize;
    let mut out = Vec::new();
    let mut prev_x = lo;
    let mut prev_f = f(lo);
    if prev_f == 0.0 {
        out.push((lo, lo));
    }
    for i in 1..=n {
        let x = if i == n { hi } else { lo + i as f64 * step };
        let fx = f(x);
        if fx == 0.0 {
            out.push((x, x));
        } else if prev_f != 0.0 && prev_f.signum() != fx.signum() {
            out.push((prev_x, x));
        }
        prev_x = x;
        prev_f = fx;
    }
    out
}

/// Bisection on a sign-changing bracket until its width drops below `tol`.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
