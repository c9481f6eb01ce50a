//! Solve for the backbone-type exponent at a few values of κ.
//!
//! ```text
//! cargo run --release --example exact_exponent -- 6 5.5 7.2
//! ```

use backbone::exponent::{solve_kappa0, solve_xi, KappaParams};

fn main() -> backbone::Result<()> {
    let mut kappas: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if kappas.is_empty() {
        kappas = vec![4.5, 5.0, 6.0, 7.0, 7.9];
    }

    println!("{:>8} {:>18} {:>18} {:>12}", "kappa", "xi", "rho", "trivial");
    for k in kappas {
        let s = solve_xi(k)?;
        let p = KappaParams::new(k)?;
        let flag = if s.degenerate { "  (degenerate)" } else { "" };
        println!("{:>8.4} {:>18.14} {:>18.14} {:>12.6}{flag}", k, s.xi, s.rho, p.trivial_xi());
    }

    // where the non-trivial root meets 1 - κ/8
    let k0 = solve_kappa0();
    let s = solve_xi(k0)?;
    println!("\nkappa0 = {k0:.15}, xi = {:.15}, degenerate = {}", s.xi, s.degenerate);
    Ok(())
}
