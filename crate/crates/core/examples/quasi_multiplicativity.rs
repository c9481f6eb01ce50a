//! π(r1, r3) against π(r1, r2)·π(r2, r3) for backbone crossings.

use backbone::arms::ArmEvent;
use backbone::mc_estimator::{quasi_mult_check, TrialPlan};

fn main() -> backbone::Result<()> {
    let samples: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let seed = 5;

    for (r1, r2, r3) in [(4, 8, 32), (8, 16, 64), (8, 32, 128)] {
        let outer = TrialPlan::new(ArmEvent::Backbone, vec![(r1, r2), (r1, r3)], samples, seed).run()?;
        let middle = TrialPlan::new(ArmEvent::Backbone, vec![(r2, r3)], samples, seed).run()?;
        let rep = quasi_mult_check(&outer[0], &middle[0], &outer[1])?;
        println!(
            "({r1:>2},{r2:>3},{r3:>3})  p12 {:.4}  p23 {:.4}  p13 {:.4}  c1 {:.3}  slack {:.3}  upper {}",
            rep.p12, rep.p23, rep.p13, rep.c1_hat, rep.slack, rep.upper_holds
        );
    }
    Ok(())
}
