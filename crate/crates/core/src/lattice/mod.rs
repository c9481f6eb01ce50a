//! Triangular lattice in axial coordinates: the vertex (x, y) sits at
//! x + y·e^{iπ/3}, so its squared distance from the origin is x² + xy + y².
//!
//! Regions are balls and annuli cut out by integer norm tests, plus arbitrary
//! finite site sets for small exact computations. Sites are numbered densely
//! row by row and each carries a precomputed neighbour table.

mod coloring;
pub mod rng;

use serde::Serialize;

use crate::error::{Error, Result};

pub use coloring::{enumerate_colorings, MAX_ENUMERATION_SITES, sample_coloring, ColorSource, Coloring, LazyColoring};

/// Largest outer radius a region may have.
pub const MAX_RADIUS: u32 = 4096;

/// Neighbour-table entry for a neighbour outside the region.
pub const NO_SITE: u32 = u32::MAX;

/// Offsets of the six neighbours, in counter-clockwise order.
pub const OFFSETS: [(i32, i32); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Axial {
    pub x: i32,
    pub y: i32,
}

impl Axial {
    pub const ORIGIN: Axial = Axial { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> Self {
        Axial { x, y }
    }

    /// Squared Euclidean norm, exact.
    pub fn norm_sq(self) -> i64 {
        let (x, y) = (self.x as i64, self.y as i64);
        x * x + x * y + y * y
    }

    pub fn neighbors(self) -> [Axial; 6] {
        OFFSETS.map(|(dx, dy)| Axial::new(self.x + dx, self.y + dy))
    }

    /// Cartesian position, for plotting only.
    pub fn to_cartesian(self) -> (f64, f64) {
        (self.x as f64 + 0.5 * self.y as f64, self.y as f64 * 3f64.sqrt() / 2.0)
    }
}

pub fn neighbors(v: Axial) -> [Axial; 6] {
    v.neighbors()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionKind {
    /// Sites with norm ≤ r².
    Ball(u32),
    /// Sites with r_in² < norm ≤ r_out².
    Annulus(u32, u32),
    /// An explicit site list.
    Custom,
}

#[derive(Debug, Clone)]
struct Row {
    y: i32,
    x_lo: i32,
    len: u32,
    /// Offset of this row's first slot in `slot_site`.
    base: usize,
}

/// A finite set of lattice sites with dense indices and neighbour table.
#[derive(Debug, Clone)]
pub struct Region {
    kind: RegionKind,
    sites: Vec<Axial>,
    rows: Vec<Row>,
    y_min: i32,
    slot_site: Vec<u32>,
    neighbor_table: Vec<[u32; 6]>,
    inner_boundary: Vec<u32>,
    outer_boundary: Vec<Axial>,
}

fn isqrt(v: i64) -> i64 {
    if v <= 0 {
        return 0;
    }
    let mut r = (v as f64).sqrt() as i64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// Range of x with x² + xy + y² ≤ r2 in row y, if any.
fn ball_row(y: i32, r2: i64) -> Option<(i32, i32)> {
    let y = y as i64;
    let disc = 4 * r2 - 3 * y * y;
    if disc < 0 {
        return None;
    }
    let s = isqrt(disc);
    let norm = |x: i64| x * x + x * y + y * y;
    let mut lo = (-y - s).div_euclid(2);
    let mut hi = (-y + s).div_euclid(2) + 1;
    while norm(lo) > r2 {
        lo += 1;
    }
    while lo > i64::MIN && norm(lo - 1) <= r2 {
        lo -= 1;
    }
    while norm(hi) > r2 {
        hi -= 1;
    }
    while norm(hi + 1) <= r2 {
        hi += 1;
    }
    (lo <= hi).then_some((lo as i32, hi as i32))
}

impl Region {
    pub fn ball(r: u32) -> Result<Region> {
        Self::norm_region(RegionKind::Ball(r), None, r)
    }

    pub fn annulus(r_in: u32, r_out: u32) -> Result<Region> {
        if r_in >= r_out {
            return Err(Error::Domain(format!("annulus needs r_in < r_out, got ({r_in}, {r_out})")));
        }
        Self::norm_region(RegionKind::Annulus(r_in, r_out), Some(r_in), r_out)
    }

    pub fn build(kind: RegionKind) -> Result<Region> {
        match kind {
            RegionKind::Ball(r) => Self::ball(r),
            RegionKind::Annulus(a, b) => Self::annulus(a, b),
            RegionKind::Custom => Err(Error::Domain("custom regions need a site list".into())),
        }
    }

    fn norm_region(kind: RegionKind, r_in: Option<u32>, r_out: u32) -> Result<Region> {
        if r_out > MAX_RADIUS {
            return Err(Error::Capacity(format!("radius {r_out} above {MAX_RADIUS}")));
        }
        let r2 = (r_out as i64).pow(2);
        let hole2 = r_in.map(|r| (r as i64).pow(2));
        let y_max = isqrt(4 * r2 / 3) as i32;
        let mut rows = Vec::new();
        let mut sites = Vec::new();
        let mut slot_site = Vec::new();
        for y in -y_max..=y_max {
            let Some((x_lo, x_hi)) = ball_row(y, r2) else { continue };
            rows.push(Row { y, x_lo, len: (x_hi - x_lo + 1) as u32, base: slot_site.len() });
            for x in x_lo..=x_hi {
                let v = Axial::new(x, y);
                if hole2.is_some_and(|h| v.norm_sq() <= h) {
                    slot_site.push(NO_SITE);
                } else {
                    slot_site.push(sites.len() as u32);
                    sites.push(v);
                }
            }
        }
        Ok(Self::finish(kind, sites, rows, slot_site))
    }

    /// Region made of the given sites; duplicates are dropped.
    pub fn custom(coords: &[Axial]) -> Result<Region> {
        let mut sorted: Vec<Axial> = coords.to_vec();
        sorted.sort_by_key(|v| (v.y, v.x));
        sorted.dedup();
        if sorted.is_empty() {
            return Err(Error::Domain("empty custom region".into()));
        }
        let mut rows = Vec::new();
        let mut slot_site = Vec::new();
        let mut sites = Vec::new();
        let mut i = 0;
        while i < sorted.len() {
            let y = sorted[i].y;
            let j = i + sorted[i..].iter().take_while(|v| v.y == y).count();
            let x_lo = sorted[i].x;
            let x_hi = sorted[j - 1].x;
            let base = slot_site.len();
            slot_site.resize(base + (x_hi - x_lo + 1) as usize, NO_SITE);
            for v in &sorted[i..j] {
                slot_site[base + (v.x - x_lo) as usize] = sites.len() as u32;
                sites.push(*v);
            }
            rows.push(Row { y, x_lo, len: (x_hi - x_lo + 1) as u32, base });
            i = j;
        }
        Ok(Self::finish(RegionKind::Custom, sites, rows, slot_site))
    }

    fn finish(kind: RegionKind, sites: Vec<Axial>, rows: Vec<Row>, slot_site: Vec<u32>) -> Region {
        let y_min = rows.first().map_or(0, |r| r.y);
        let mut region = Region {
            kind,
            sites,
            rows,
            y_min,
            slot_site,
            neighbor_table: Vec::new(),
            inner_boundary: Vec::new(),
            outer_boundary: Vec::new(),
        };
        let table: Vec<[u32; 6]> = region
            .sites
            .iter()
            .map(|v| v.neighbors().map(|u| region.index_of(u).unwrap_or(NO_SITE)))
            .collect();
        let mut outer = Vec::new();
        let mut inner = Vec::new();
        for (i, (v, nb)) in region.sites.iter().zip(&table).enumerate() {
            let mut on_edge = false;
            for (k, &n) in nb.iter().enumerate() {
                if n == NO_SITE {
                    on_edge = true;
                    let (dx, dy) = OFFSETS[k];
                    outer.push(Axial::new(v.x + dx, v.y + dy));
                }
            }
            if on_edge {
                inner.push(i as u32);
            }
        }
        outer.sort_by_key(|v| (v.y, v.x));
        outer.dedup();
        region.neighbor_table = table;
        region.inner_boundary = inner;
        region.outer_boundary = outer;
        region
    }

    pub fn kind(&self) -> RegionKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[Axial] {
        &self.sites
    }

    pub fn site(&self, i: u32) -> Axial {
        self.sites[i as usize]
    }

    pub fn index_of(&self, v: Axial) -> Option<u32> {
        let r = usize::try_from(v.y.checked_sub(self.y_min)?).ok()?;
        match self.rows.get(r) {
            Some(row) if row.y == v.y => self.slot_in(row, v.x),
            _ => {
                // custom regions may skip rows
                let pos = self.rows.binary_search_by_key(&v.y, |r| r.y).ok()?;
                self.slot_in(&self.rows[pos], v.x)
            }
        }
    }

    fn slot_in(&self, row: &Row, x: i32) -> Option<u32> {
        let off = x.checked_sub(row.x_lo)?;
        if off < 0 || off as u32 >= row.len {
            return None;
        }
        let s = self.slot_site[row.base + off as usize];
        (s != NO_SITE).then_some(s)
    }

    pub fn contains(&self, v: Axial) -> bool {
        self.index_of(v).is_some()
    }

    /// Neighbour indices of site `i`, [`NO_SITE`] where outside the region.
    pub fn neighbor_ids(&self, i: u32) -> &[u32; 6] {
        &self.neighbor_table[i as usize]
    }

    /// Sites with a neighbour outside the region.
    pub fn inner_boundary(&self) -> &[u32] {
        &self.inner_boundary
    }

    /// Vertices outside the region adjacent to it.
    pub fn outer_boundary(&self) -> &[Axial] {
        &self.outer_boundary
    }

    /// Inner and outer radius for norm regions.
    fn radii(&self) -> Option<(Option<u32>, u32)> {
        match self.kind {
            RegionKind::Ball(r) => Some((None, r)),
            RegionKind::Annulus(a, b) => Some((Some(a), b)),
            RegionKind::Custom => None,
        }
    }

    /// Sites next to the removed inner ball of an annulus; empty otherwise.
    pub fn hole_adjacent(&self) -> Vec<u32> {
        let Some((Some(r_in), _)) = self.radii() else { return Vec::new() };
        let h = (r_in as i64).pow(2);
        self.inner_boundary
            .iter()
            .copied()
            .filter(|&i| self.site(i).neighbors().iter().any(|u| u.norm_sq() <= h))
            .collect()
    }

    /// Sites with a neighbour beyond the outer radius.
    pub fn outer_rim(&self) -> Vec<u32> {
        let Some((_, r_out)) = self.radii() else { return Vec::new() };
        let r2 = (r_out as i64).pow(2);
        self.inner_boundary
            .iter()
            .copied()
            .filter(|&i| self.site(i).neighbors().iter().any(|u| u.norm_sq() > r2))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_count(r_in: Option<i64>, r_out: i64) -> usize {
        let mut n = 0;
        for x in -2 * r_out..=2 * r_out {
            for y in -2 * r_out..=2 * r_out {
                let q = Axial::new(x as i32, y as i32).norm_sq();
                if q <= r_out * r_out && r_in.is_none_or(|a| q > a * a) {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn neighbour_offsets() {
        let nb = neighbors(Axial::ORIGIN);
        for v in nb {
            assert_eq!(v.norm_sq(), 1);
            assert!(v.neighbors().contains(&Axial::ORIGIN));
        }
        let mut sorted = nb.to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 6);
    }

    #[test]
    fn site_counts_match_brute_force() {
        assert_eq!(Region::ball(0).unwrap().len(), 1);
        assert_eq!(Region::ball(1).unwrap().len(), 7);
        for r in [2, 3, 7, 20] {
            assert_eq!(Region::ball(r).unwrap().len(), brute_count(None, r as i64), "ball {r}");
        }
        for (a, b) in [(0, 2), (1, 2), (3, 9), (5, 6)] {
            assert_eq!(Region::annulus(a, b).unwrap().len(), brute_count(Some(a as i64), b as i64));
        }
    }

    #[test]
    fn index_round_trip() {
        let reg = Region::annulus(3, 10).unwrap();
        for (i, v) in reg.sites().iter().enumerate() {
            assert_eq!(reg.index_of(*v), Some(i as u32));
        }
        assert_eq!(reg.index_of(Axial::ORIGIN), None);
        assert_eq!(reg.index_of(Axial::new(11, 0)), None);
    }

    #[test]
    fn neighbour_table_symmetric() {
        let reg = Region::annulus(2, 8).unwrap();
        for i in 0..reg.len() as u32 {
            for &j in reg.neighbor_ids(i) {
                if j != NO_SITE {
                    assert!(reg.neighbor_ids(j).contains(&i));
                }
            }
        }
    }

    #[test]
    fn boundaries() {
        let reg = Region::annulus(2, 6).unwrap();
        for &i in reg.inner_boundary() {
            assert!((i as usize) < reg.len());
        }
        for v in reg.outer_boundary() {
            assert!(!reg.contains(*v));
        }
        let b1 = Region::ball(1).unwrap();
        assert_eq!(b1.inner_boundary().len(), 6);
        assert_eq!(b1.outer_boundary().len(), 12);
        assert_eq!(b1.outer_rim().len(), 6);
        let a = Region::annulus(0, 2).unwrap();
        assert_eq!(a.len(), 18);
        assert_eq!(a.hole_adjacent().len(), 6);
        assert_eq!(a.outer_rim().len(), 12);
    }

    #[test]
    fn capacity_and_domain() {
        assert!(matches!(Region::ball(4097), Err(Error::Capacity(_))));
        assert!(Region::annulus(3, 3).is_err());
    }

    #[test]
    fn custom_region() {
        let coords = [Axial::new(0, 0), Axial::new(2, 0), Axial::new(0, 3), Axial::new(2, 0)];
        let reg = Region::custom(&coords).unwrap();
        assert_eq!(reg.len(), 3);
        assert!(reg.contains(Axial::new(0, 3)));
        assert!(!reg.contains(Axial::new(1, 0)));
        assert!(!reg.contains(Axial::new(0, 1)));
    }
}
