//! Arm events: monochromatic paths crossing a region from a source set to a
//! target set.

mod flow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{enumerate_colorings, Axial, ColorSource, Coloring, Region, RegionKind, MAX_ENUMERATION_SITES};

pub use flow::ArmDetector;

/// Most disjoint arms a query may ask for; a site has six neighbours.
pub const MAX_ARMS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn is_black(self) -> bool {
        self == Color::Black
    }
}

/// Paths of one colour from `sources` to `targets` inside a region.
#[derive(Debug, Clone)]
pub struct ArmQuery<'r> {
    pub region: &'r Region,
    pub sources: Vec<u32>,
    pub targets: Vec<u32>,
    pub color: Color,
    pub required_count: usize,
    /// A site no arm may use, whatever its colour.
    pub forbidden: Option<u32>,
    target_flag: Vec<bool>,
}

impl<'r> ArmQuery<'r> {
    pub fn new(region: &'r Region, sources: Vec<u32>, targets: Vec<u32>, color: Color, required_count: usize) -> Result<Self> {
        if !(1..=MAX_ARMS).contains(&required_count) {
            return Err(Error::Domain(format!("required arm count {required_count} outside 1..={MAX_ARMS}")));
        }
        let n = region.len() as u32;
        if sources.is_empty() || targets.is_empty() {
            return Err(Error::Domain("empty source or target set".into()));
        }
        if let Some(&bad) = sources.iter().chain(&targets).find(|&&s| s >= n) {
            return Err(Error::Domain(format!("site {bad} not in region of {n} sites")));
        }
        let mut target_flag = vec![false; region.len()];
        for &t in &targets {
            target_flag[t as usize] = true;
        }
        Ok(ArmQuery { region, sources, targets, color, required_count, forbidden: None, target_flag })
    }

    pub fn forbid(mut self, site: Axial) -> Self {
        self.forbidden = self.region.index_of(site);
        self
    }

    /// Arms across an annulus, from the sites next to the hole to the outer rim.
    /// On a ball the arms start from the origin's neighbours and the origin
    /// itself is excluded.
    pub fn crossing(region: &'r Region, color: Color, required_count: usize) -> Result<Self> {
        let (sources, forbid_origin) = match region.kind() {
            RegionKind::Annulus(r, r2) => {
                if r2 < r + 2 {
                    return Err(Error::Domain(format!("crossing events need r_out >= r_in + 2, got ({r}, {r2})")));
                }
                (region.hole_adjacent(), false)
            }
            RegionKind::Ball(n) => {
                if n < 1 {
                    return Err(Error::Domain("crossing a ball needs radius >= 1".into()));
                }
                let ring = Axial::ORIGIN.neighbors().iter().filter_map(|&v| region.index_of(v)).collect();
                (ring, true)
            }
            RegionKind::Custom => return Err(Error::Domain("crossing events need a ball or annulus".into())),
        };
        let q = ArmQuery::new(region, sources, region.outer_rim(), color, required_count)?;
        Ok(if forbid_origin { q.forbid(Axial::ORIGIN) } else { q })
    }

    /// A single arm from the origin to the rim of a ball.
    pub fn from_origin(region: &'r Region, color: Color) -> Result<Self> {
        let RegionKind::Ball(n) = region.kind() else {
            return Err(Error::Domain("one-arm from the origin needs a ball".into()));
        };
        let o = region.index_of(Axial::ORIGIN).expect("ball contains the origin");
        let targets = if n == 0 { vec![o] } else { region.outer_rim() };
        ArmQuery::new(region, vec![o], targets, color, 1)
    }

    pub fn with_count(mut self, required_count: usize) -> Result<Self> {
        if !(1..=MAX_ARMS).contains(&required_count) {
            return Err(Error::Domain(format!("required arm count {required_count} outside 1..={MAX_ARMS}")));
        }
        self.required_count = required_count;
        Ok(self)
    }

    pub fn with_color(mut self, color: Color) -> Self {
        self.color = color;
        self
    }

    #[inline]
    pub fn is_target(&self, site: u32) -> bool {
        self.target_flag[site as usize]
    }
}

/// Whether some arm of the query colour exists (the count is ignored).
pub fn has_one_arm(coloring: &Coloring, q: &ArmQuery) -> bool {
    ArmDetector::new(q.region.len()).has_one_arm(q, &mut &*coloring)
}

/// Disjoint arms found, at most `q.required_count`.
pub fn max_disjoint_arms(coloring: &Coloring, q: &ArmQuery) -> usize {
    ArmDetector::new(q.region.len()).max_disjoint_arms(q, &mut &*coloring)
}

/// Two disjoint black arms from distinct origin neighbours to the rim of a
/// ball or an annulus with inner radius 0.
pub fn has_backbone_event(region: &Region, coloring: &Coloring) -> Result<bool> {
    let probe = EventProbe::new(region, ArmEvent::Backbone)?;
    Ok(probe.occurs(&mut ArmDetector::new(region.len()), &mut &*coloring))
}

/// One black arm and two disjoint white arms across an annulus.
pub fn has_bww_event(region: &Region, coloring: &Coloring) -> Result<bool> {
    let probe = EventProbe::new(region, ArmEvent::Bww)?;
    Ok(probe.occurs(&mut ArmDetector::new(region.len()), &mut &*coloring))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArmEvent {
    OneArm,
    Backbone,
    Bww,
}

impl ArmEvent {
    pub fn name(self) -> &'static str {
        match self {
            ArmEvent::OneArm => "one-arm",
            ArmEvent::Backbone => "backbone",
            ArmEvent::Bww => "bww",
        }
    }

    /// The region an event on radii (r_in, r_out) lives on. One-arm from the
    /// origin uses a ball so the origin's colour counts; the others use an
    /// annulus, so with r_in = 0 the origin is simply absent.
    pub fn region_for(self, r_in: u32, r_out: u32) -> Result<Region> {
        match (self, r_in) {
            (ArmEvent::OneArm, 0) => Region::ball(r_out),
            _ => Region::annulus(r_in, r_out),
        }
    }
}

impl std::str::FromStr for ArmEvent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "one-arm" | "onearm" | "one_arm" | "1" => Ok(ArmEvent::OneArm),
            "backbone" | "bb" => Ok(ArmEvent::Backbone),
            "bww" => Ok(ArmEvent::Bww),
            _ => Err(Error::Domain(format!("unknown event '{s}'"))),
        }
    }
}

impl std::fmt::Display for ArmEvent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// An event prepared for repeated evaluation on one region.
#[derive(Debug, Clone)]
pub enum EventProbe<'r> {
    /// At least `required_count` disjoint arms.
    Arms(ArmQuery<'r>),
    /// A black arm plus two disjoint white arms.
    Bww { black: ArmQuery<'r>, white: ArmQuery<'r> },
}

impl<'r> EventProbe<'r> {
    pub fn new(region: &'r Region, event: ArmEvent) -> Result<Self> {
        Ok(match event {
            ArmEvent::OneArm => match region.kind() {
                RegionKind::Ball(_) => EventProbe::Arms(ArmQuery::from_origin(region, Color::Black)?),
                _ => EventProbe::Arms(ArmQuery::crossing(region, Color::Black, 1)?),
            },
            ArmEvent::Backbone => EventProbe::Arms(ArmQuery::crossing(region, Color::Black, 2)?),
            ArmEvent::Bww => EventProbe::Bww {
                black: ArmQuery::crossing(region, Color::Black, 1)?,
                white: ArmQuery::crossing(region, Color::White, 2)?,
            },
        })
    }

    pub fn region(&self) -> &'r Region {
        match self {
            EventProbe::Arms(q) => q.region,
            EventProbe::Bww { black, .. } => black.region,
        }
    }

    pub fn occurs<C: ColorSource>(&self, det: &mut ArmDetector, colors: &mut C) -> bool {
        match self {
            EventProbe::Arms(q) if q.required_count == 1 => det.has_one_arm(q, colors),
            EventProbe::Arms(q) => det.max_disjoint_arms(q, colors) >= q.required_count,
            EventProbe::Bww { black, white } => {
                det.has_one_arm(black, colors) && det.max_disjoint_arms(white, colors) >= 2
            }
        }
    }
}

/// Number of the 2^k colourings at p = 1/2 on which the event occurs, with 2^k.
pub fn exact_event_probability(probe: &EventProbe) -> Result<(u64, u64)> {
    let region = probe.region();
    if region.len() > MAX_ENUMERATION_SITES {
        return Err(Error::Capacity(format!(
            "{} sites exceed the enumeration limit {MAX_ENUMERATION_SITES}",
            region.len()
        )));
    }
    let mut det = ArmDetector::new(region.len());
    let mut count = 0u64;
    for c in enumerate_colorings(region)? {
        if probe.occurs(&mut det, &mut &c) {
            count += 1;
        }
    }
    Ok((count, 1u64 << region.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(region: &Region, black: bool) -> Coloring {
        Coloring::uniform(region.len(), black)
    }

    #[test]
    fn trivial_colorings() {
        let reg = Region::annulus(2, 6).unwrap();
        let q = ArmQuery::crossing(&reg, Color::Black, 2).unwrap();
        assert!(has_one_arm(&all(&reg, true), &q));
        assert!(!has_one_arm(&all(&reg, false), &q));
        assert_eq!(max_disjoint_arms(&all(&reg, true), &q), 2);
        assert_eq!(max_disjoint_arms(&all(&reg, true), &q.clone().with_count(6).unwrap()), 6);
        assert!(!has_bww_event(&reg, &all(&reg, false)).unwrap());
        assert!(!has_bww_event(&reg, &all(&reg, true)).unwrap());
    }

    #[test]
    fn white_ring_blocks() {
        let reg = Region::annulus(1, 7).unwrap();
        let c = Coloring::from_fn(reg.len(), |i| !(13..=19).contains(&reg.site(i).norm_sq()));
        let q = ArmQuery::crossing(&reg, Color::Black, 6).unwrap();
        assert_eq!(max_disjoint_arms(&c, &q), 0);
    }

    #[test]
    fn half_planes_give_bww() {
        let reg = Region::annulus(2, 8).unwrap();
        let c = Coloring::from_fn(reg.len(), |i| reg.site(i).to_cartesian().0 > 0.0);
        assert!(has_bww_event(&reg, &c).unwrap());
        // black on the right only: a single white region holds two arms, black one
        let q = ArmQuery::crossing(&reg, Color::White, 6).unwrap();
        assert!(max_disjoint_arms(&c, &q) >= 2);
    }

    #[test]
    fn backbone_needs_two_black_neighbors() {
        let reg = Region::ball(4).unwrap();
        assert!(has_backbone_event(&reg, &all(&reg, true)).unwrap());
        let lone = Axial::new(1, 0);
        let c = Coloring::from_fn(reg.len(), |i| {
            let v = reg.site(i);
            v.norm_sq() > 1 || v == lone
        });
        assert!(!has_backbone_event(&reg, &c).unwrap());
        // the origin's own colour is irrelevant
        let mut c = all(&reg, true);
        c.set(reg.index_of(Axial::ORIGIN).unwrap(), false);
        assert!(has_backbone_event(&reg, &c).unwrap());
    }

    #[test]
    fn strip_cut() {
        // two rows of four; whitening two sites leaves a single-site bottleneck
        let coords: Vec<Axial> = (0..4).flat_map(|x| (0..2).map(move |y| Axial::new(x, y))).collect();
        let reg = Region::custom(&coords).unwrap();
        let idx = |x, y| reg.index_of(Axial::new(x, y)).unwrap();
        let q = ArmQuery::new(&reg, vec![idx(0, 0), idx(0, 1)], vec![idx(3, 0), idx(3, 1)], Color::Black, 6).unwrap();
        assert_eq!(max_disjoint_arms(&all(&reg, true), &q), 2);
        let mut c = all(&reg, true);
        c.set(idx(1, 0), false);
        c.set(idx(2, 1), false);
        // only the diagonal (1,1)->(2,0) survives as a cut of size 1
        assert_eq!(max_disjoint_arms(&c, &q), 1);
    }

    #[test]
    fn exact_small_cases() {
        let one = Region::custom(&[Axial::ORIGIN]).unwrap();
        let q = ArmQuery::new(&one, vec![0], vec![0], Color::Black, 1).unwrap();
        assert_eq!(exact_event_probability(&EventProbe::Arms(q.clone())).unwrap(), (1, 2));
        let two = q.with_count(2).unwrap();
        assert_eq!(exact_event_probability(&EventProbe::Arms(two)).unwrap(), (0, 2));
        let big = Region::ball(3).unwrap();
        assert!(matches!(
            exact_event_probability(&EventProbe::new(&big, ArmEvent::Backbone).unwrap()),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn thin_annulus_rejected() {
        let reg = Region::annulus(3, 4).unwrap();
        assert!(ArmQuery::crossing(&reg, Color::Black, 1).is_err());
        assert!(ArmQuery::new(&reg, vec![], vec![0], Color::Black, 1).is_err());
        assert!(ArmQuery::new(&reg, vec![0], vec![0], Color::Black, 7).is_err());
    }
}
