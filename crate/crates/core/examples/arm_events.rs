//! Arm events on one sampled colouring, and exact probabilities on a small
//! annulus by enumerating every colouring.

use backbone::arms::{
    exact_event_probability, has_backbone_event, has_bww_event, has_one_arm, max_disjoint_arms, ArmEvent, ArmQuery,
    Color, EventProbe,
};
use backbone::lattice::{sample_coloring, Region};

fn main() -> backbone::Result<()> {
    let region = Region::annulus(4, 24)?;
    println!("annulus (4, 24]: {} sites, {} on the outer rim", region.len(), region.outer_rim().len());

    for trial in 0..8 {
        let c = sample_coloring(&region, 0.5, 17, trial)?;
        let black = ArmQuery::crossing(&region, Color::Black, 6)?;
        let white = black.clone().with_color(Color::White);
        println!(
            "trial {trial}: black arms {} white arms {}  one-arm {:5}  backbone {:5}  bww {:5}",
            max_disjoint_arms(&c, &black),
            max_disjoint_arms(&c, &white),
            has_one_arm(&c, &black),
            has_backbone_event(&region, &c)?,
            has_bww_event(&region, &c)?,
        );
    }

    let small = Region::annulus(0, 2)?;
    println!("\nexact, annulus (0, 2] with {} sites:", small.len());
    for event in [ArmEvent::OneArm, ArmEvent::Backbone, ArmEvent::Bww] {
        let region = event.region_for(0, 2)?;
        let (hits, total) = exact_event_probability(&EventProbe::new(&region, event)?)?;
        println!("  {:<9} {hits:>7} / {total}  = {:.6}", event.name(), hits as f64 / total as f64);
    }
    Ok(())
}
