//! Arm detectors against exhaustive enumeration on small regions.

mod common;

use backbone::arms::{exact_event_probability, ArmDetector, ArmEvent, ArmQuery, Color, EventProbe};
use backbone::lattice::{enumerate_colorings, Coloring, Region};
use common::{connected, minimal_paths, packing, strip};

fn check_flow_against_paths(q_black: &ArmQuery) -> usize {
    let reg = q_black.region;
    let q_white = q_black.clone().with_color(Color::White);
    let mut det = ArmDetector::new(reg.len());
    let mut configs = 0;
    for c in enumerate_colorings(reg).unwrap() {
        for q in [q_black, &q_white] {
            let paths = minimal_paths(q, &c);
            let expect = packing(&paths, q, q.required_count);
            assert_eq!(det.max_disjoint_arms(q, &mut &c), expect, "mask {:#x}", c.provenance.1);
            assert_eq!(det.has_one_arm(q, &mut &c), !paths.is_empty(), "mask {:#x}", c.provenance.1);
        }
        configs += 1;
    }
    configs
}

#[test]
fn flow_matches_path_search_on_annulus() {
    let reg = Region::annulus(0, 2).unwrap();
    assert_eq!(reg.len(), 18);
    let q = ArmQuery::crossing(&reg, Color::Black, 6).unwrap();
    assert_eq!(check_flow_against_paths(&q), 1 << 18);
}

#[test]
fn flow_matches_path_search_on_strip() {
    let (reg, left, right) = strip(6, 3);
    let q = ArmQuery::new(&reg, left, right, Color::Black, 6).unwrap();
    assert_eq!(check_flow_against_paths(&q), 1 << 18);
}

#[test]
fn flow_matches_path_search_with_forbidden_site() {
    let reg = Region::ball(1).unwrap();
    let q = ArmQuery::crossing(&reg, Color::Black, 6).unwrap();
    assert!(q.forbidden.is_some());
    assert_eq!(check_flow_against_paths(&q), 1 << 7);
}

#[test]
fn menger_duality() {
    // fewer than two disjoint arms iff at most one site (the defect) needs to
    // be removed, on top of the opposite colour, to separate source from target
    let reg = Region::annulus(0, 2).unwrap();
    let (sreg, left, right) = strip(6, 3);
    let strip_q = ArmQuery::new(&sreg, left, right, Color::Black, 2).unwrap();
    for q in [ArmQuery::crossing(&reg, Color::Black, 2).unwrap(), strip_q] {
        let mut det = ArmDetector::new(q.region.len());
        for c in enumerate_colorings(q.region).unwrap() {
            let two = det.max_disjoint_arms(&q, &mut &c) >= 2;
            let cut = !connected(&q, &c, None) || (0..q.region.len() as u32).any(|d| !connected(&q, &c, Some(d)));
            assert_eq!(two, !cut, "mask {:#x}", c.provenance.1);
        }
    }
}

#[test]
fn event_counts_match_independent_enumeration() {
    // counts from a separate brute-force script over the 2^18 colourings
    let reg = Region::annulus(0, 2).unwrap();
    let total = 1u64 << 18;
    let bb = exact_event_probability(&EventProbe::new(&reg, ArmEvent::Backbone).unwrap()).unwrap();
    assert_eq!(bb, (212_191, total));
    let bww = exact_event_probability(&EventProbe::new(&reg, ArmEvent::Bww).unwrap()).unwrap();
    assert_eq!(bww, (203_208, total));
    let one = exact_event_probability(&EventProbe::new(&reg, ArmEvent::OneArm).unwrap()).unwrap();
    assert_eq!(one, (253_135, total));

    // the origin's colour does not matter: Ball(2) doubles the annulus count
    let ball = Region::ball(2).unwrap();
    assert_eq!(ball.len(), 19);
    let bb_ball = exact_event_probability(&EventProbe::new(&ball, ArmEvent::Backbone).unwrap()).unwrap();
    assert_eq!(bb_ball, (2 * 212_191, 2 * total));
}

#[test]
fn ball_one_ring_examples() {
    let ball = Region::ball(1).unwrap();
    // from the origin: origin black and one of six neighbours black
    let one = exact_event_probability(&EventProbe::new(&ball, ArmEvent::OneArm).unwrap()).unwrap();
    assert_eq!(one, (63, 128));
    // from the ring to the ring: any black neighbour, origin free
    let ring = ArmQuery::crossing(&ball, Color::Black, 1).unwrap();
    assert_eq!(exact_event_probability(&EventProbe::Arms(ring)).unwrap(), (126, 128));
}

#[test]
fn monotone_in_black_sites() {
    let reg = Region::annulus(2, 7).unwrap();
    let q = ArmQuery::crossing(&reg, Color::Black, 6).unwrap();
    let mut det = ArmDetector::new(reg.len());
    for chain in 0..20u64 {
        let mut c = Coloring::uniform(reg.len(), false);
        let mut order: Vec<u32> = (0..reg.len() as u32).collect();
        // deterministic shuffle from the lattice stream
        order.sort_by_key(|&i| backbone::lattice::rng::stream_word(chain, i as u64));
        let mut last = 0;
        for (step, &i) in order.iter().enumerate() {
            c.set(i, true);
            if step % 7 == 0 {
                let now = det.max_disjoint_arms(&q, &mut &c);
                assert!(now >= last);
                last = now;
            }
        }
        assert_eq!(det.max_disjoint_arms(&q, &mut &c), 6);
    }
}
