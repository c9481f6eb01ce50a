//! The moment formula F(λ): its zero at λ = 0, the root F(−ξ) = 1, and the
//! γ/α form of the same function.

use backbone::exponent::{delta_alpha, solve_xi, KappaParams};
use backbone::moment::{moment_f, moment_f_gamma, moment_f_real, xi_from_moment};
use num_complex::Complex64;

fn main() -> backbone::Result<()> {
    let p = KappaParams::new(6.0)?;
    let xi = solve_xi(p.kappa)?.xi;

    println!("kappa = {}, gamma = {:.12}, Q = {:.12}", p.kappa, p.gamma, p.q_big);
    println!("F(0)      = {:+.3e}", moment_f_real(&p, 0.0)?);
    println!("F(-xi)    = {:.15}", moment_f_real(&p, -xi)?);
    println!("xi from F = {:.15}  (solver: {xi:.15})", xi_from_moment(&p)?.xi);

    // θ² < 0 once λ > 2(κ/4−1)²/κ, and F stays real
    for lam in [-0.3, -0.1, 0.2, 0.5, 0.65] {
        let m = moment_f(&p, Complex64::new(lam, 0.0))?;
        println!("F({lam:+.2}) = {:.12}   theta^2 = {:+.6}", m.value.re, m.theta_sq.re);
    }

    let m = moment_f(&p, Complex64::new(-0.2, 0.1))?;
    println!("F(-0.2+0.1i) = {:.10} {:+.10}i", m.value.re, m.value.im);

    println!("\nalpha form against lambda = 2Δα − 2");
    for alpha in [1.7, 1.8, 1.9, 2.0] {
        let lhs = moment_f_gamma(&p, alpha)?;
        let rhs = moment_f_real(&p, 2.0 * delta_alpha(alpha, &p) - 2.0)?;
        println!("alpha = {alpha:.2}: {lhs:.15} {rhs:.15} diff {:.1e}", (lhs - rhs).abs());
    }
    Ok(())
}
