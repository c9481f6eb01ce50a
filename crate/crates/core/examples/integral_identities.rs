//! Quadrature checks of the integral identities behind the moment formula.

use backbone::quadrature::{
    check_cot_integral, check_digamma_integral, check_nested_integral, check_s_kernel, check_trig_integral,
    integrate, nested_via_single_integral,
};

fn main() -> backbone::Result<()> {
    let q = integrate(|x: f64| (-x * x).exp(), f64::NEG_INFINITY, f64::INFINITY, 1e-12)?;
    println!("∫ exp(-x²) = {:.15} (sqrt(pi) = {:.15}), {} evaluations", q.value, std::f64::consts::PI.sqrt(), q.evaluations);

    let show = |name: &str, c: backbone::quadrature::IdentityCheck| {
        println!("{name:<28} lhs {:>+.12e} rhs {:>+.12e} err {:.1e}", c.lhs, c.rhs, c.error);
    };
    show("digamma (0.3, 0.8)", check_digamma_integral(0.3, 0.8)?);
    show("cot (-0.8, -0.3)", check_cot_integral(-0.8, -0.3)?);
    show("s-kernel (mu 2.5, th 0.3)", check_s_kernel(2.5, 0.3)?);
    for (g, theta) in [(1.5, 0.5), (1.633, 0.4), (1.8, 0.2)] {
        show(&format!("trig integral ({g}, {theta})"), check_trig_integral(g, theta)?);
    }

    // the nested integral is slow-ish; two routes to the same number
    let (g, theta) = (1.633, 0.4);
    let nested = check_nested_integral(g, theta)?;
    show("nested (1.633, 0.4)", nested);
    println!("{:<28} {:+.12e}", "  via single integral", nested_via_single_integral(g, theta)?);
    println!("  {} integrand evaluations", nested.evaluations);
    Ok(())
}
