use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::stats::{fit_power_law, FitResult};
use super::ArmTrialBatch;
use crate::arms::ArmEvent;
use crate::error::{Error, Result};

/// One CSV line: counts plus the estimate and its Wilson interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchRow {
    pub event: ArmEvent,
    pub r_in: u32,
    pub r_out: u32,
    pub samples: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub lo: f64,
    pub hi: f64,
}

impl BatchRow {
    pub fn from_batch(b: &ArmTrialBatch, z: f64) -> Self {
        let (lo, hi) = b.wilson(z);
        BatchRow {
            event: b.event,
            r_in: b.r_in,
            r_out: b.r_out,
            samples: b.samples,
            successes: b.successes,
            p_hat: b.p_hat(),
            lo,
            hi,
        }
    }

    pub fn stderr(&self) -> f64 {
        let p = self.successes as f64 / self.samples as f64;
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(format!("csv: {e}"))
}

pub fn write_csv<W: Write>(out: W, batches: &[ArmTrialBatch], z: f64) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for b in batches {
        w.serialize(BatchRow::from_batch(b, z)).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BatchRow>> {
    let rows: Vec<BatchRow> = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input)
        .deserialize().collect::<std::result::Result<_, _>>().map_err(csv_err)?;
    for r in &rows {
        if r.samples == 0 || r.successes > r.samples {
            return Err(Error::Domain(format!("row ({}, {}) has {}/{} successes", r.r_in, r.r_out, r.successes, r.samples)));
        }
    }
    Ok(rows)
}

/// Fit of ln p̂(r_in, R) against ln R at one inner radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnulusFit {
    pub r_in: u32,
    pub fit: FitResult,
    pub xi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentReport {
    pub event: ArmEvent,
    /// Fit of ln p̂(0, n) against ln n.
    pub direct: Option<FitResult>,
    /// Minus the direct slope.
    pub direct_xi: Option<f64>,
    pub annulus: Vec<AnnulusFit>,
    /// Inverse-variance mean of the annulus exponents, with its error.
    pub annulus_xi: Option<(f64, f64)>,
}

fn points<'a>(rows: impl Iterator<Item = &'a &'a BatchRow>) -> Vec<(f64, f64, f64)> {
    rows.filter(|r| r.successes > 0)
        .map(|r| (r.r_out as f64, r.successes as f64 / r.samples as f64, r.stderr()))
        .collect()
}

/// Exponent estimates per event. Rows with r_in = 0 feed the direct fit; rows
/// sharing a positive inner radius are fitted against their outer radius when
/// there are at least three. Rows without successes are skipped.
pub fn estimate_exponent(rows: &[BatchRow]) -> Result<Vec<ExponentReport>> {
    let mut by_event: BTreeMap<&'static str, (ArmEvent, Vec<&BatchRow>)> = BTreeMap::new();
    for r in rows {
        by_event.entry(r.event.name()).or_insert((r.event, Vec::new())).1.push(r);
    }
    let mut out = Vec::new();
    for (_, (event, rows)) in by_event {
        let direct_pts = points(rows.iter().filter(|r| r.r_in == 0));
        let direct = if direct_pts.len() >= 3 { Some(fit_power_law(&direct_pts)?) } else { None };

        let mut inner: Vec<u32> = rows.iter().map(|r| r.r_in).filter(|&r| r > 0).collect();
        inner.sort_unstable();
        inner.dedup();
        let mut annulus = Vec::new();
        for r_in in inner {
            let pts = points(rows.iter().filter(|r| r.r_in == r_in));
            if pts.len() >= 3 {
                let fit = fit_power_law(&pts)?;
                annulus.push(AnnulusFit { r_in, fit, xi: -fit.slope });
            }
        }
        let annulus_xi = if annulus.is_empty() {
            None
        } else if annulus.iter().all(|a| a.fit.slope_stderr > 0.0) {
            let w: f64 = annulus.iter().map(|a| a.fit.slope_stderr.powi(-2)).sum();
            let mean = annulus.iter().map(|a| a.xi * a.fit.slope_stderr.powi(-2)).sum::<f64>() / w;
            Some((mean, w.sqrt().recip()))
        } else {
            Some((annulus.iter().map(|a| a.xi).sum::<f64>() / annulus.len() as f64, 0.0))
        };

        if direct.is_none() && annulus.is_empty() {
            return Err(Error::InsufficientData(format!("{event}: need three radii sharing an inner radius")));
        }
        out.push(ExponentReport { event, direct_xi: direct.map(|f| -f.slope), direct, annulus, annulus_xi });
    }
    if out.is_empty() {
        return Err(Error::InsufficientData("no rows".into()));
    }
    Ok(out)
}
