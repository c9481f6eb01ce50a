//! Cyclotomic polynomials, minimal polynomials of 2cos(2π/n), and which
//! 2cos(2πk/n) are rational.

use backbone::numtheory::{
    classify_two_cos, cyclotomic, cyclotomic_height, divisor_product, min_poly_two_cos, totient, IntPolynomial,
    TwoCosClass,
};

fn main() -> backbone::Result<()> {
    for n in 1..=12 {
        println!("Phi_{n:<2} = {}   (degree {})", cyclotomic(n)?, totient(n as u64)?);
    }
    for n in [105, 385] {
        println!("height of Phi_{n} = {}", cyclotomic_height(n)?);
    }
    let n = 60;
    assert_eq!(divisor_product(n)?, IntPolynomial::x_pow_minus_one(n));
    println!("prod over d | {n} of Phi_d = x^{n} - 1");

    println!();
    for n in [5, 7, 8, 9, 12] {
        println!("psi_{n:<2} = {}", min_poly_two_cos(n)?);
    }

    println!();
    for (k, n) in [(1, 6), (1, 4), (1, 3), (2, 5), (3, 7), (5, 12)] {
        let text = match classify_two_cos(k, n)? {
            TwoCosClass::Integer(v) => format!("the integer {v}"),
            TwoCosClass::IrrationalAlgebraic(d) => format!("irrational, degree {d}"),
        };
        println!("2cos(2pi*{k}/{n}) is {text}");
    }
    Ok(())
}
