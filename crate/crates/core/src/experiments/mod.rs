//! Parameter sweeps over mode order, mode width and phasematching width.
//!
//! Sweep points are independent, so they run in parallel; results always come
//! back in the canonical order (phasematching width, then order, then σ).

pub mod io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dfg::DfgScheme;
use crate::modes::HgTarget;
use crate::pipeline::{run_pipeline, PhasematchingModel, PipelineConfig, PipelineError, Preset, Stage};

/// Default phasematching widths, nm on the pump axis.
pub const DEFAULT_PM_FWHMS: [f64; 5] = [0.2, 0.5, 1.0, 2.0, 4.3];

/// Default mode orders of the bandwidth sweep.
pub const DEFAULT_ORDERS: [u32; 5] = [0, 1, 2, 3, 4];

/// One sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapRecord {
    pub preset: Preset,
    pub order: u32,
    pub sigma_nm: f64,
    /// Phasematching width on the pump axis; `None` outside phasematching sweeps.
    pub pm_fwhm_nm: Option<f64>,
    pub overlap: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("invalid sigma range: {0}")]
    InvalidRange(String),
    #[error("invalid phasematching widths: {0}")]
    InvalidPhasematching(String),
    #[error("the phasematching sweep needs the phasematching stage enabled with a kernel model")]
    PhasematchingDisabled,
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

/// Inclusive σ range `start, start + step, …` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for SigmaRange {
    fn default() -> Self {
        Self {
            start: 0.25,
            stop: 10.0,
            step: 0.25,
        }
    }
}

impl SigmaRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, SweepError> {
        let r = Self { start, stop, step };
        r.values()?;
        Ok(r)
    }

    /// The σ values, each computed as `start + k·step` so no error accumulates.
    pub fn values(&self) -> Result<Vec<f64>, SweepError> {
        sigma_grid(self.start, self.stop, self.step)
    }
}

/// `start + k·step` for every k with the value not past `stop` (up to a
/// relative slack of 1e-9 steps).
pub fn sigma_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, SweepError> {
    let bad = |m: String| Err(SweepError::InvalidRange(m));
    if !(start.is_finite() && start > 0.0) {
        return bad(format!("start must be positive, got {start}"));
    }
    if !(step.is_finite() && step > 0.0) {
        return bad(format!("step must be positive, got {step}"));
    }
    if !(stop.is_finite() && stop >= start) {
        return bad(format!("stop must be >= start, got {stop} < {start}"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

/// A sweep point that could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepFailure {
    pub order: u32,
    pub sigma_nm: f64,
    pub pm_fwhm_nm: Option<f64>,
    pub stage: Option<Stage>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepOutcome {
    pub records: Vec<OverlapRecord>,
    pub failures: Vec<SweepFailure>,
}

#[derive(Debug, Clone, Copy)]
struct Point {
    order: u32,
    sigma: f64,
    pm: Option<f64>,
}

fn evaluate(points: &[Point], scheme: &DfgScheme, config: &PipelineConfig) -> SweepOutcome {
    let results: Vec<_> = points
        .par_iter()
        .map(|p| {
            let mut cfg = *config;
            if let (Some(fwhm), PhasematchingModel::Kernel(spec)) = (p.pm, &mut cfg.phasematching) {
                spec.fwhm_nm = fwhm;
            }
            let run = HgTarget::new(p.order, scheme.pump_center_nm, p.sigma)
                .map_err(|e| (None, e.to_string()))
                .and_then(|t| {
                    run_pipeline(&t, scheme, &cfg).map_err(|e| (e.stage(), e.to_string()))
                });
            (p, run.map(|r| r.overlap))
        })
        .collect();

    let mut out = SweepOutcome::default();
    for (p, r) in results {
        match r {
            Ok(overlap) => out.records.push(OverlapRecord {
                preset: config.preset,
                order: p.order,
                sigma_nm: p.sigma,
                pm_fwhm_nm: p.pm,
                overlap,
            }),
            Err((stage, message)) => {
                log::warn!(
                    "skipping order {} sigma {} nm{}: {message}",
                    p.order,
                    p.sigma,
                    p.pm.map(|w| format!(" pm {w} nm")).unwrap_or_default()
                );
                out.failures.push(SweepFailure {
                    order: p.order,
                    sigma_nm: p.sigma,
                    pm_fwhm_nm: p.pm,
                    stage,
                    message,
                });
            }
        }
    }
    out
}

/// Overlap for every (order, σ). Orders are evaluated in the given order.
pub fn sweep_bandwidth(
    orders: &[u32],
    range: SigmaRange,
    scheme: &DfgScheme,
    config: &PipelineConfig,
) -> Result<SweepOutcome, SweepError> {
    config.validate().map_err(PipelineError::from)?;
    let sigmas = range.values()?;
    let points: Vec<Point> = orders
        .iter()
        .flat_map(|&order| sigmas.iter().map(move |&sigma| Point { order, sigma, pm: None }))
        .collect();
    Ok(evaluate(&points, scheme, config))
}

/// Overlap for every (phasematching width, σ) at one order. The config must
/// model phasematching as its own stage; its kernel shape is kept and only
/// the width is swept.
pub fn sweep_phasematching(
    order: u32,
    pm_fwhms: &[f64],
    range: SigmaRange,
    scheme: &DfgScheme,
    config: &PipelineConfig,
) -> Result<SweepOutcome, SweepError> {
    config.validate().map_err(PipelineError::from)?;
    if config.phasematching_spec().is_none() {
        return Err(SweepError::PhasematchingDisabled);
    }
    if let Some(w) = pm_fwhms.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(SweepError::InvalidPhasematching(format!(
            "widths must be finite and >= 0, got {w}"
        )));
    }
    let sigmas = range.values()?;
    let points: Vec<Point> = pm_fwhms
        .iter()
        .flat_map(|&pm| {
            sigmas.iter().map(move |&sigma| Point {
                order,
                sigma,
                pm: Some(pm),
            })
        })
        .collect();
    Ok(evaluate(&points, scheme, config))
}

/// Closed σ interval, nm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaInterval {
    pub start: f64,
    pub stop: f64,
}

impl SigmaInterval {
    pub fn contains(&self, other: &SigmaInterval) -> bool {
        self.start <= other.start && other.stop <= self.stop
    }
}

/// Where one curve stays at or above a threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityRange {
    pub order: u32,
    pub pm_fwhm_nm: Option<f64>,
    /// Maximal runs of consecutive samples at or above the threshold.
    pub intervals: Vec<SigmaInterval>,
}

impl FidelityRange {
    /// The widest interval, if any.
    pub fn widest(&self) -> Option<SigmaInterval> {
        self.intervals
            .iter()
            .copied()
            .max_by(|a, b| (a.stop - a.start).total_cmp(&(b.stop - b.start)))
    }
}

/// Groups records into curves by (phasematching width, order), in order of
/// first appearance, and finds the maximal runs with `overlap >= threshold`.
/// Records within a curve are expected in increasing σ.
pub fn find_fidelity_range(records: &[OverlapRecord], threshold: f64) -> Vec<FidelityRange> {
    let mut curves: Vec<(u32, Option<f64>, Vec<&OverlapRecord>)> = Vec::new();
    for r in records {
        let key = (r.order, r.pm_fwhm_nm.map(f64::to_bits));
        match curves
            .iter_mut()
            .find(|(o, pm, _)| (*o, pm.map(f64::to_bits)) == key)
        {
            Some((_, _, v)) => v.push(r),
            None => curves.push((r.order, r.pm_fwhm_nm, vec![r])),
        }
    }
    curves
        .into_iter()
        .map(|(order, pm_fwhm_nm, pts)| {
            debug_assert!(pts.windows(2).all(|w| w[0].sigma_nm < w[1].sigma_nm));
            let mut intervals = Vec::new();
            let mut open: Option<SigmaInterval> = None;
            for p in pts {
                if p.overlap >= threshold {
                    open = Some(match open {
                        Some(iv) => SigmaInterval { stop: p.sigma_nm, ..iv },
                        None => SigmaInterval {
                            start: p.sigma_nm,
                            stop: p.sigma_nm,
                        },
                    });
                } else if let Some(iv) = open.take() {
                    intervals.push(iv);
                }
            }
            intervals.extend(open);
            FidelityRange {
                order,
                pm_fwhm_nm,
                intervals,
            }
        })
        .collect()
}
