//! ξ across the FK cluster weights q ∈ [1, 4], with κ from q = 2 + 2cos(8π/κ).

use backbone::exponent::{exponent_table, kappa_from_q, solve_xi};

fn main() -> backbone::Result<()> {
    println!("{:>10} {:>12} {:>16}", "q", "kappa", "xi");
    for row in exponent_table() {
        println!("{:>10.6} {:>12.8} {:>16.12}", row.q, row.kappa, row.xi);
    }

    println!("\nfiner sweep");
    for i in 0..=12 {
        let q = 1.0 + 0.25 * i as f64;
        if q >= 4.0 {
            break;
        }
        let k = kappa_from_q(q)?;
        println!("{q:>10.2} {k:>12.8} {:>16.12}", solve_xi(k)?.xi);
    }
    Ok(())
}
