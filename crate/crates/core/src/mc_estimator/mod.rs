//! Monte Carlo arm probabilities and exponent estimates.

mod report;
mod stats;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arms::{ArmDetector, ArmEvent, EventProbe};
use crate::error::{Error, Result};
use crate::lattice::rng::mix64;
use crate::lattice::LazyColoring;

pub use report::{estimate_exponent, read_csv, write_csv, AnnulusFit, BatchRow, ExponentReport};
pub use stats::{fit_power_law, quasi_mult_check, wilson_interval, FitResult, QuasiMultReport};

pub const DEFAULT_RADII: [u32; 6] = [8, 16, 32, 64, 128, 256];
pub const DEFAULT_SAMPLES: u64 = 200_000;
/// Inner radius of the annulus estimator.
pub const DEFAULT_INNER_RADIUS: u32 = 4;
pub const DEFAULT_Z: f64 = 1.96;

/// Trials handed to a worker at a time.
const CHUNK: u64 = 64;

/// Success count of one event on one pair of radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmTrialBatch {
    pub event: ArmEvent,
    pub r_in: u32,
    pub r_out: u32,
    pub samples: u64,
    pub successes: u64,
    /// Key of the batch's trial streams, already mixed with event and radii.
    pub seed: u64,
    pub trial_range: (u64, u64),
    pub p: f64,
}

impl ArmTrialBatch {
    pub fn p_hat(&self) -> f64 {
        self.successes as f64 / self.samples as f64
    }

    /// Binomial standard error of `p_hat`.
    pub fn stderr(&self) -> f64 {
        let p = self.p_hat();
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }

    pub fn wilson(&self, z: f64) -> (f64, f64) {
        wilson_interval(self.successes, self.samples, z).expect("batch counts are consistent")
    }

    /// Joins two batches of the same stream over adjacent trial ranges.
    pub fn merge(&self, other: &ArmTrialBatch) -> Result<ArmTrialBatch> {
        let same = self.event == other.event
            && (self.r_in, self.r_out) == (other.r_in, other.r_out)
            && self.seed == other.seed
            && self.p == other.p;
        if !same || self.trial_range.1 != other.trial_range.0 {
            return Err(Error::Domain("batches are not adjacent pieces of one stream".into()));
        }
        Ok(ArmTrialBatch {
            samples: self.samples + other.samples,
            successes: self.successes + other.successes,
            trial_range: (self.trial_range.0, other.trial_range.1),
            ..self.clone()
        })
    }
}

/// Stream key for one (event, radii) pair under a user seed.
pub fn batch_seed(seed: u64, event: ArmEvent, r_in: u32, r_out: u32) -> u64 {
    let tag = ((event as u64) << 56) ^ ((r_in as u64) << 28) ^ r_out as u64;
    mix64(seed ^ mix64(tag.wrapping_add(0x632B_E59B_D9B4_E019)))
}

/// (0, n) for each n: arms from the origin's neighbourhood.
pub fn direct_radii(ns: &[u32]) -> Vec<(u32, u32)> {
    ns.iter().map(|&n| (0, n)).collect()
}

/// (r_in, R) for each outer radius R that leaves room for a crossing.
pub fn annulus_radii(r_in: u32, outer: &[u32]) -> Vec<(u32, u32)> {
    outer.iter().filter(|&&r| r >= r_in + 2).map(|&r| (r_in, r)).collect()
}

/// A simulation request; `workers = 0` uses every available core.
#[derive(Debug, Clone)]
pub struct TrialPlan {
    pub event: ArmEvent,
    pub radii: Vec<(u32, u32)>,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub p: f64,
}

impl TrialPlan {
    pub fn new(event: ArmEvent, radii: Vec<(u32, u32)>, samples: u64, seed: u64) -> Self {
        TrialPlan { event, radii, samples, seed, workers: 0, p: 0.5 }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Domain("samples must be at least 1".into()));
        }
        if self.radii.is_empty() {
            return Err(Error::Domain("no radii given".into()));
        }
        if self.radii.windows(2).any(|w| w[1].1 <= w[0].1) {
            return Err(Error::Domain("outer radii must be strictly increasing".into()));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Domain(format!("probability {} outside [0, 1]", self.p)));
        }
        Ok(())
    }

    pub fn run(&self) -> Result<Vec<ArmTrialBatch>> {
        self.validate()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::Capacity(format!("thread pool: {e}")))?;
        self.radii
            .iter()
            .map(|&(r_in, r_out)| {
                let seed = batch_seed(self.seed, self.event, r_in, r_out);
                pool.install(|| run_range(self.event, r_in, r_out, self.p, seed, 0, self.samples))
            })
            .collect()
    }
}

/// Runs `samples` trials per radius pair at p = 1/2.
pub fn run_trials(
    event: ArmEvent,
    radii: &[(u32, u32)],
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<ArmTrialBatch>> {
    TrialPlan::new(event, radii.to_vec(), samples, seed).workers(workers).run()
}

/// Trials `lo..hi` of the stream keyed by `seed` (see [`batch_seed`]), on the
/// current rayon pool.
pub fn run_range(event: ArmEvent, r_in: u32, r_out: u32, p: f64, seed: u64, lo: u64, hi: u64) -> Result<ArmTrialBatch> {
    let region = event.region_for(r_in, r_out)?;
    let probe = EventProbe::new(&region, event)?;
    LazyColoring::new(region.len(), p)?; // rejects p outside [0, 1] before the workers start
    let n_chunks = (hi - lo).div_ceil(CHUNK);
    let successes: u64 = (0..n_chunks)
        .into_par_iter()
        .map_init(
            || (ArmDetector::new(region.len()), LazyColoring::new(region.len(), p).expect("p checked")),
            |(det, colors), c| {
                let start = lo + c * CHUNK;
                let end = (start + CHUNK).min(hi);
                let mut hits = 0u64;
                for trial in start..end {
                    colors.begin_trial(seed, trial);
                    hits += probe.occurs(det, colors) as u64;
                }
                hits
            },
        )
        .sum();
    Ok(ArmTrialBatch { event, r_in, r_out, samples: hi - lo, successes, seed, trial_range: (lo, hi), p })
}
