//! The imperfection model: a programmed Hermite-Gauss pump spectrum is pushed
//! through the shaping, conversion and detection stages and compared with
//! the ideal converted target.
//!
//! Stages, in order:
//!
//! 1. target spectrum on the pump axis
//! 2. multiply by the pump-availability envelope
//! 3. hard shaper window
//! 4. shaper resolution blur (pump axis)
//! 5. map to the output axis
//! 6. phasematching blur (only when modeled as its own stage)
//! 7. input-laser linewidth blur
//! 8. two-line input laser: weighted sum with a shifted copy
//! 9. spectrometer resolution blur
//! 10. overlap against stages 1 + 5 alone

mod config;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::{
    ConfigError, GridPolicy, ModelConfig, PhasematchingModel, PipelineConfig, Preset,
    StageToggles, SCHEMA_VERSION,
};

use crate::dfg::{map_pump_to_output, phasematching_kernel, pump_envelope, DfgError, DfgScheme};
use crate::modes::{hg_spectrum, overlap, HgTarget, ModeError};
use crate::spectral::{
    convolve, ghz_to_nm, multiply, nm_to_ghz, shift, window, GaussianKernel, SpectralError,
    SpectralGrid, Spectrum,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Grids,
    Target,
    Envelope,
    Window,
    ShaperResolution,
    Mapping,
    Phasematching,
    DyeLinewidth,
    DualMode,
    Spectrometer,
    Overlap,
}

impl Stage {
    /// Position in the stage list; grid setup runs before everything as 0.
    pub fn index(&self) -> u8 {
        match self {
            Stage::Grids => 0,
            Stage::Target => 1,
            Stage::Envelope => 2,
            Stage::Window => 3,
            Stage::ShaperResolution => 4,
            Stage::Mapping => 5,
            Stage::Phasematching => 6,
            Stage::DyeLinewidth => 7,
            Stage::DualMode => 8,
            Stage::Spectrometer => 9,
            Stage::Overlap => 10,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Stage::Grids => "grid setup",
            Stage::Target => "target",
            Stage::Envelope => "pump envelope",
            Stage::Window => "shaper window",
            Stage::ShaperResolution => "shaper resolution",
            Stage::Mapping => "pump-to-output mapping",
            Stage::Phasematching => "phasematching",
            Stage::DyeLinewidth => "input linewidth",
            Stage::DualMode => "dual-mode input",
            Stage::Spectrometer => "spectrometer resolution",
            Stage::Overlap => "overlap",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.index(), self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StageError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Mode(#[from] ModeError),
    #[error(transparent)]
    Dfg(#[from] DfgError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: StageError,
    },
}

impl PipelineError {
    /// The failing stage, if the failure happened while running.
    pub fn stage(&self) -> Option<Stage> {
        match self {
            PipelineError::Stage { stage, .. } => Some(*stage),
            PipelineError::Config(_) => None,
        }
    }
}

fn at<E: Into<StageError>>(stage: Stage) -> impl FnOnce(E) -> PipelineError {
    move |e| PipelineError::Stage {
        stage,
        source: e.into(),
    }
}

/// The stages that act on the output axis after mapping, in their default
/// order. They commute up to round-off; the order is exposed so that can be
/// checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputStage {
    Phasematching,
    DyeLinewidth,
    DualMode,
    Spectrometer,
}

pub const DEFAULT_OUTPUT_ORDER: [OutputStage; 4] = [
    OutputStage::Phasematching,
    OutputStage::DyeLinewidth,
    OutputStage::DualMode,
    OutputStage::Spectrometer,
];

#[derive(Debug, Clone, PartialEq)]
pub struct ModelResult {
    /// Target on the pump axis (stage 1).
    pub pump_target: Spectrum,
    /// Pump spectrum after envelope, window and shaper resolution (stages 2-4).
    pub pump_shaped: Spectrum,
    /// Ideal target carried to the output axis (stages 1 + 5).
    pub programmed: Spectrum,
    /// Output spectrum after every enabled stage.
    pub modeled: Spectrum,
    pub overlap: f64,
}

/// Line separation of the two-mode input laser, moved from the input axis
/// to the output axis. A fixed frequency offset of the input line reappears
/// one-to-one as a frequency offset of the output.
pub fn dual_mode_separation_on_output(separation_nm: f64, scheme: &DfgScheme) -> Result<f64, DfgError> {
    let output = scheme.output_center()?;
    Ok(ghz_to_nm(
        nm_to_ghz(separation_nm, scheme.input_wavelength_nm),
        output,
    ))
}

/// Kernel widths, nm, of every blur stage that is switched on. Zero means
/// the stage is off.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StageWidths {
    pub shaper_resolution: f64,
    pub phasematching: f64,
    pub dye_linewidth: f64,
    pub dual_mode_shift: f64,
    pub spectrometer: f64,
}

impl StageWidths {
    pub fn new(scheme: &DfgScheme, config: &PipelineConfig) -> Result<Self, DfgError> {
        let out = scheme.output_center()?;
        let s = &config.stages;
        let on = |enabled: bool, v: f64| if enabled { v } else { 0.0 };
        let pm = match config.phasematching_spec() {
            Some(spec) => spec.on_output_axis(scheme)?.fwhm_nm,
            None => 0.0,
        };
        Ok(Self {
            shaper_resolution: on(
                s.shaper_resolution,
                ghz_to_nm(config.shaper_resolution_ghz, scheme.pump_center_nm),
            ),
            phasematching: pm,
            dye_linewidth: on(s.dye_linewidth, ghz_to_nm(config.dye_linewidth_ghz, out)),
            dual_mode_shift: on(
                s.dual_mode,
                dual_mode_separation_on_output(config.dual_mode_separation_nm, scheme)?,
            ),
            spectrometer: on(
                s.spectrometer,
                ghz_to_nm(config.spectrometer_resolution_ghz, out),
            ),
        })
    }

    fn output_margin(&self) -> f64 {
        5.0 * self.phasematching.max(self.dye_linewidth).max(self.spectrometer) + self.dual_mode_shift
    }
}

/// Pump and output grids for one target: the configured sampling, widened
/// so the mode, its blur margin and its image all fit.
pub fn pipeline_grids(
    target: &HgTarget,
    scheme: &DfgScheme,
    config: &PipelineConfig,
) -> Result<(SpectralGrid, SpectralGrid), PipelineError> {
    let policy = &config.grid;
    let widths = StageWidths::new(scheme, config).map_err(at(Stage::Grids))?;
    let pump_half = policy
        .pump_min_half_span_nm
        .max(target.required_half_span() + 5.0 * widths.shaper_resolution);
    let pump = SpectralGrid::covering(target.center_wavelength(), pump_half, policy.pump_spacing_nm)
        .map_err(at(Stage::Grids))?;

    let unmappable = |l: f64| at(Stage::Grids)(DfgError::UnmappablePump(l));
    let center = scheme
        .output_wavelength(target.center_wavelength())
        .ok_or_else(|| unmappable(target.center_wavelength()))?;
    // Shorter pump wavelengths land on longer output wavelengths.
    let img_high = scheme
        .output_wavelength(pump.start())
        .ok_or_else(|| unmappable(pump.start()))?;
    let img_low = scheme
        .output_wavelength(pump.end())
        .ok_or_else(|| unmappable(pump.end()))?;
    let out_half = policy
        .output_min_half_span_nm
        .max((center - img_low).max(img_high - center) + widths.output_margin());
    let output = SpectralGrid::covering(center, out_half, policy.output_spacing_nm)
        .map_err(at(Stage::Grids))?;
    Ok((pump, output))
}

fn blur(spectrum: &Spectrum, fwhm: f64) -> Result<Spectrum, SpectralError> {
    if fwhm < spectrum.grid().spacing() {
        return Ok(spectrum.clone());
    }
    convolve(spectrum, &GaussianKernel::new(fwhm)?)
}

/// Runs every enabled stage for one target. The amplitude convention of
/// the configuration overrides the one carried by `target`.
pub fn run_pipeline(
    target: &HgTarget,
    scheme: &DfgScheme,
    config: &PipelineConfig,
) -> Result<ModelResult, PipelineError> {
    run_pipeline_with_output_order(target, scheme, config, &DEFAULT_OUTPUT_ORDER)
}

/// [`run_pipeline`] with the post-mapping stages applied in `order`.
/// Stages missing from `order` are skipped.
pub fn run_pipeline_with_output_order(
    target: &HgTarget,
    scheme: &DfgScheme,
    config: &PipelineConfig,
    order: &[OutputStage],
) -> Result<ModelResult, PipelineError> {
    config.validate()?;
    scheme
        .validate()
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let toggles = &config.stages;
    let widths = StageWidths::new(scheme, config).map_err(at(Stage::Grids))?;
    let target = target.with_convention(config.convention);
    let (pump_grid, out_grid) = pipeline_grids(&target, scheme, config)?;

    let pump_target = hg_spectrum(&target, &pump_grid).map_err(at(Stage::Target))?;

    let mut shaped = pump_target.clone();
    if toggles.envelope {
        let env = pump_envelope(scheme.pump_center_nm, config.envelope_fwhm_nm, &pump_grid)
            .map_err(at(Stage::Envelope))?;
        shaped = multiply(&shaped, &env).map_err(at(Stage::Envelope))?;
    }
    if toggles.window {
        let [low, high] = config.shaper_window_nm;
        shaped = window(&shaped, low, high).map_err(at(Stage::Window))?;
    }
    if toggles.shaper_resolution {
        shaped = blur(&shaped, widths.shaper_resolution).map_err(at(Stage::ShaperResolution))?;
    }

    let programmed =
        map_pump_to_output(&pump_target, scheme, &out_grid).map_err(at(Stage::Mapping))?;
    let mut modeled = map_pump_to_output(&shaped, scheme, &out_grid).map_err(at(Stage::Mapping))?;

    for stage in order {
        modeled = match stage {
            OutputStage::Phasematching => match config.phasematching_spec() {
                Some(spec) => {
                    let spec = spec.on_output_axis(scheme).map_err(at(Stage::Phasematching))?;
                    match phasematching_kernel(&spec, out_grid.spacing())
                        .map_err(at(Stage::Phasematching))?
                    {
                        Some(k) => convolve(&modeled, &k).map_err(at(Stage::Phasematching))?,
                        None => modeled,
                    }
                }
                None => modeled,
            },
            OutputStage::DyeLinewidth if toggles.dye_linewidth => {
                blur(&modeled, widths.dye_linewidth).map_err(at(Stage::DyeLinewidth))?
            }
            OutputStage::DualMode if toggles.dual_mode => {
                let [wa, wb] = config.dual_mode_ratio;
                let moved = shift(&modeled, widths.dual_mode_shift);
                modeled
                    .weighted_sum(wa, &moved, wb)
                    .map_err(at(Stage::DualMode))?
            }
            OutputStage::Spectrometer if toggles.spectrometer => {
                blur(&modeled, widths.spectrometer).map_err(at(Stage::Spectrometer))?
            }
            _ => modeled,
        };
    }

    let overlap = overlap(&programmed, &modeled).map_err(at(Stage::Overlap))?;
    Ok(ModelResult {
        pump_target,
        pump_shaped: shaped,
        programmed,
        modeled,
        overlap,
    })
}

/// Convenience for callers that only hold a [`ModelConfig`].
pub fn run_model(target: &HgTarget, config: &ModelConfig) -> Result<ModelResult, PipelineError> {
    run_pipeline(target, &config.scheme, &config.pipeline)
}
