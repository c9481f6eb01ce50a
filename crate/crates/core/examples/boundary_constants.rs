//! Boundary Liouville constants E1..E4 and C1, each of E4 and C1 computed two
//! independent ways.

use backbone::lcft_constants::constants;

fn main() -> backbone::Result<()> {
    println!(
        "{:>6} {:>14} {:>14} {:>14} {:>14} {:>14} {:>10}",
        "gamma", "E1", "E2", "E3", "E4", "C1", "dual err"
    );
    for i in 0..9 {
        let g = 1.45 + 0.06 * i as f64;
        let c = constants(g)?;
        println!(
            "{g:>6.3} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>10.1e}",
            c.e1, c.e2, c.e3, c.e4, c.c1, c.max_dual_rel_error()
        );
    }

    let c = constants(8f64.sqrt() / 3f64.sqrt())?;
    let alpha = 1.9;
    println!("\ngamma = sqrt(8/3), alpha = {alpha}");
    println!("  Gbar(alpha, 0)          = {:.12e}", c.gbar_alpha0(alpha)?);
    println!("  Gbar(alpha, gamma)      = {:.12e}", c.gbar_alpha_gamma(alpha)?);
    println!("  Gbar(alpha, 4/g - g)    = {:.12e}", c.gbar_alpha_beta0(alpha)?);
    Ok(())
}
