use crate::error::{Error, Result};

use super::rng::{trial_key, Threshold};
use super::Region;

/// Largest region [`enumerate_colorings`] accepts.
pub const MAX_ENUMERATION_SITES: usize = 25;

/// Read access to site colours, dense or generated on demand.
pub trait ColorSource {
    fn is_black(&mut self, site: u32) -> bool;
}

/// Packed black/white flags over a region's sites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    bits: Vec<u64>,
    len: usize,
    /// (seed, trial) that generated it; enumeration uses (0, configuration index).
    pub provenance: (u64, u64),
}

impl Coloring {
    pub fn uniform(len: usize, black: bool) -> Self {
        let fill = if black { u64::MAX } else { 0 };
        let mut c = Coloring { bits: vec![fill; len.div_ceil(64)], len, provenance: (0, 0) };
        c.clear_tail();
        c
    }

    pub fn from_fn(len: usize, mut black: impl FnMut(u32) -> bool) -> Self {
        let mut c = Coloring::uniform(len, false);
        for i in 0..len as u32 {
            if black(i) {
                c.set(i, true);
            }
        }
        c
    }

    fn clear_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.bits.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: u32) -> bool {
        (self.bits[(i >> 6) as usize] >> (i & 63)) & 1 == 1
    }

    pub fn set(&mut self, i: u32, black: bool) {
        let w = &mut self.bits[(i >> 6) as usize];
        if black {
            *w |= 1 << (i & 63);
        } else {
            *w &= !(1 << (i & 63));
        }
    }

    pub fn count_black(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }
}

impl ColorSource for Coloring {
    #[inline]
    fn is_black(&mut self, site: u32) -> bool {
        self.get(site)
    }
}

impl ColorSource for &Coloring {
    #[inline]
    fn is_black(&mut self, site: u32) -> bool {
        self.get(site)
    }
}

/// Each site black independently with probability `p`, determined by
/// (seed, trial, site index) alone.
pub fn sample_coloring(region: &Region, p: f64, seed: u64, trial: u64) -> Result<Coloring> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    let key = trial_key(seed, trial);
    let th = Threshold::new(p);
    let mut c = Coloring::from_fn(region.len(), |i| th.black(key, i));
    c.provenance = (seed, trial);
    Ok(c)
}

/// The colouring of [`sample_coloring`], generated only where read.
///
/// Detectors touch a small fraction of a large region per trial, so words are
/// produced on first use and cached under an epoch stamp; starting a new trial
/// is O(1).
#[derive(Debug, Clone)]
pub struct LazyColoring {
    threshold: Threshold,
    key: u64,
    words: Vec<u64>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl LazyColoring {
    pub fn new(len: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
        }
        let threshold = Threshold::new(p);
        let n_words = match threshold {
            Threshold::Half => len.div_ceil(64),
            Threshold::Below(_) => len,
        };
        Ok(LazyColoring { threshold, key: 0, words: vec![0; n_words], stamp: vec![0; n_words], epoch: 0 })
    }

    pub fn begin_trial(&mut self, seed: u64, trial: u64) {
        self.key = trial_key(seed, trial);
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
    }
}

impl ColorSource for LazyColoring {
    #[inline]
    fn is_black(&mut self, site: u32) -> bool {
        match self.threshold {
            Threshold::Half => {
                let w = (site >> 6) as usize;
                if self.stamp[w] != self.epoch {
                    self.stamp[w] = self.epoch;
                    self.words[w] = super::rng::stream_word(self.key, w as u64);
                }
                (self.words[w] >> (site & 63)) & 1 == 1
            }
            Threshold::Below(_) => self.threshold.black(self.key, site),
        }
    }
}

/// Every black/white configuration of a region, indexed by the bit pattern.
pub fn enumerate_colorings(region: &Region) -> Result<impl Iterator<Item = Coloring>> {
    let k = region.len();
    if k > MAX_ENUMERATION_SITES {
        return Err(Error::Capacity(format!("{k} sites exceed the enumeration limit {MAX_ENUMERATION_SITES}")));
    }
    Ok((0..1u64 << k).map(move |mask| {
        let mut c = Coloring::uniform(k, false);
        if k > 0 {
            c.bits[0] = mask;
        }
        c.provenance = (0, mask);
        c
    }))
}

#[cfg(test)]
mod tests {
    use super::super::{Axial, Region};
    use super::*;

    #[test]
    fn extremes() {
        let reg = Region::ball(5).unwrap();
        assert_eq!(sample_coloring(&reg, 1.0, 1, 2).unwrap().count_black(), reg.len());
        assert_eq!(sample_coloring(&reg, 0.0, 1, 2).unwrap().count_black(), 0);
        assert!(sample_coloring(&reg, 1.5, 1, 2).is_err());
    }

    #[test]
    fn replay_is_identical() {
        let reg = Region::annulus(2, 30).unwrap();
        let a = sample_coloring(&reg, 0.5, 42, 17).unwrap();
        let b = sample_coloring(&reg, 0.5, 42, 17).unwrap();
        assert_eq!(a.words(), b.words());
        assert_ne!(a.words(), sample_coloring(&reg, 0.5, 42, 18).unwrap().words());
    }

    #[test]
    fn lazy_matches_dense() {
        let reg = Region::ball(12).unwrap();
        for p in [0.5, 0.3] {
            let mut lazy = LazyColoring::new(reg.len(), p).unwrap();
            for trial in [0, 5, 6] {
                lazy.begin_trial(9, trial);
                let dense = sample_coloring(&reg, p, 9, trial).unwrap();
                // read out of order to exercise the cache
                for i in (0..reg.len() as u32).rev() {
                    assert_eq!(lazy.is_black(i), dense.get(i));
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        let one = Region::custom(&[Axial::ORIGIN]).unwrap();
        assert_eq!(enumerate_colorings(&one).unwrap().count(), 2);
        let three = Region::custom(&[Axial::new(0, 0), Axial::new(1, 0), Axial::new(2, 0)]).unwrap();
        let all: Vec<_> = enumerate_colorings(&three).unwrap().collect();
        assert_eq!(all.len(), 8);
        let mut seen: Vec<_> = all.iter().map(|c| c.words()[0]).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 8);
        assert_eq!(enumerate_colorings(&Region::ball(1).unwrap()).unwrap().count(), 128);
        assert!(enumerate_colorings(&Region::ball(3).unwrap()).is_err());
    }
}
