//! Search for a small integer polynomial vanishing at a given number.

use backbone::exponent::solve_xi;
use backbone::numtheory::small_poly_scan;

fn main() -> backbone::Result<()> {
    let (degree, height) = (4, 30);
    let xi6 = solve_xi(6.0)?.xi;
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let candidates = [
        ("sqrt 2", 2f64.sqrt()),
        ("golden ratio", golden),
        ("2cos(2pi/7)", 2.0 * (2.0 * std::f64::consts::PI / 7.0).cos()),
        ("cbrt 3", 3f64.cbrt()),
        ("pi", std::f64::consts::PI),
        ("xi(6)", xi6),
    ];
    for (name, x) in candidates {
        let t = std::time::Instant::now();
        let found = small_poly_scan(x, degree, height)?;
        let text = found.map_or("none".to_string(), |p| p.to_string());
        println!("{name:<14} {x:.15}  {text:<24} {:.2} s", t.elapsed().as_secs_f64());
    }
    Ok(())
}
