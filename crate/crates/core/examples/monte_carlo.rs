//! Arm probabilities at p = 1/2 and a power-law fit of their decay.
//!
//! ```text
//! cargo run --release --example monte_carlo -- 20000
//! ```

use backbone::arms::ArmEvent;
use backbone::mc_estimator::{direct_radii, estimate_exponent, write_csv, BatchRow, TrialPlan, DEFAULT_Z};

fn main() -> backbone::Result<()> {
    let samples: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5_000);
    let radii = direct_radii(&[8, 16, 32, 64, 128]);
    let targets = [(ArmEvent::OneArm, 5.0 / 48.0), (ArmEvent::Backbone, 0.35667), (ArmEvent::Bww, 2.0 / 3.0)];

    let mut all = Vec::new();
    for (event, _) in targets {
        let t = std::time::Instant::now();
        let batches = TrialPlan::new(event, radii.clone(), samples, 1).run()?;
        eprintln!("{event}: {:.1} s", t.elapsed().as_secs_f64());
        all.extend(batches);
    }
    write_csv(std::io::stdout(), &all, DEFAULT_Z)?;

    let rows: Vec<BatchRow> = all.iter().map(|b| BatchRow::from_batch(b, DEFAULT_Z)).collect();
    println!();
    for report in estimate_exponent(&rows)? {
        let fit = report.direct.expect("five radii");
        let target = targets.iter().find(|(e, _)| *e == report.event).unwrap().1;
        println!(
            "{:<9} xi = {:.4} ± {:.4}  (scaling limit {target:.4}, chi2/dof {:.2})",
            report.event.name(), -fit.slope, fit.slope_stderr, fit.reduced_chi2
        );
    }
    Ok(())
}
