//! Model configuration, its presets and the on-disk configuration file.
//!
//! The file is TOML (JSON is accepted too) with a `schema_version` at the top
//! level, a `[scheme]` table with the converter wavelengths and a
//! `[pipeline]` table with the imperfection parameters:
//!
//! ```toml
//! schema_version = 1
//!
//! [scheme]
//! input_wavelength_nm = 557.0
//! pump_center_nm = 1550.0
//!
//! [pipeline]
//! preset = "current-experiment"
//! envelope_fwhm_nm = 10.0
//! shaper_window_nm = [1530.0, 1565.0]
//!
//! [pipeline.phasematching]
//! model = "kernel"          # or "folded-into-envelope"
//! fwhm_nm = 0.2
//! shape = "gaussian"        # or "sinc-squared"
//!
//! [pipeline.stages]
//! dual_mode = false
//! ```
//!
//! Any field may be omitted. Missing values come from the preset named in the
//! file (or passed by the caller), so a file only needs to state what differs
//! from that preset.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::dfg::{DfgScheme, PhasematchingSpec};
use crate::modes::AmplitudeConvention;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("could not parse configuration: {0}")]
    Parse(String),
    #[error("unsupported schema_version {found} (this build reads version {SCHEMA_VERSION})")]
    UnsupportedSchema { found: u64 },
    #[error("unknown preset {0:?} (expected current-experiment, pulsed-outlook or ideal)")]
    UnknownPreset(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// The laboratory setup: pump envelope, shaper range and resolution, dye
    /// laser linewidth and mode beating, spectrometer resolution.
    #[default]
    CurrentExperiment,
    /// A pulsed-input device limited by the phasematching acceptance.
    PulsedOutlook,
    /// No imperfections.
    Ideal,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::CurrentExperiment, Preset::PulsedOutlook, Preset::Ideal];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::CurrentExperiment => "current-experiment",
            Preset::PulsedOutlook => "pulsed-outlook",
            Preset::Ideal => "ideal",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| ConfigError::UnknownPreset(s.to_string()))
    }
}

/// How phasematching enters the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum PhasematchingModel {
    /// Already part of the pump-axis envelope.
    FoldedIntoEnvelope,
    /// A separate blur on the output axis.
    Kernel(PhasematchingSpec),
}

/// Per-stage switches. A disabled stage is skipped entirely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StageToggles {
    pub envelope: bool,
    pub window: bool,
    pub shaper_resolution: bool,
    pub phasematching: bool,
    pub dye_linewidth: bool,
    pub dual_mode: bool,
    pub spectrometer: bool,
}

impl StageToggles {
    pub const NONE: StageToggles = StageToggles {
        envelope: false,
        window: false,
        shaper_resolution: false,
        phasematching: false,
        dye_linewidth: false,
        dual_mode: false,
        spectrometer: false,
    };
}

impl Default for StageToggles {
    fn default() -> Self {
        PipelineConfig::preset(Preset::CurrentExperiment).stages
    }
}

/// Sampling of the pump and output axes. The pipeline widens either grid as
/// needed to hold the mode and its blurred image; these are the minimums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridPolicy {
    pub pump_spacing_nm: f64,
    pub pump_min_half_span_nm: f64,
    pub output_spacing_nm: f64,
    pub output_min_half_span_nm: f64,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self {
            pump_spacing_nm: 0.0025,
            pump_min_half_span_nm: 50.0,
            output_spacing_nm: 0.00125,
            output_min_half_span_nm: 10.0,
        }
    }
}

impl GridPolicy {
    /// Same spans, `factor` times denser sampling on both axes.
    pub fn refined(&self, factor: f64) -> Self {
        Self {
            pump_spacing_nm: self.pump_spacing_nm / factor,
            output_spacing_nm: self.output_spacing_nm / factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub preset: Preset,
    /// FWHM of the Gaussian pump-availability envelope, pump axis.
    pub envelope_fwhm_nm: f64,
    /// Operating range of the pulse shaper, pump axis.
    pub shaper_window_nm: [f64; 2],
    pub shaper_resolution_ghz: f64,
    pub spectrometer_resolution_ghz: f64,
    pub dye_linewidth_ghz: f64,
    /// Spacing of the two input-laser lines, on the input axis.
    pub dual_mode_separation_nm: f64,
    /// Weights of the unshifted and shifted line.
    pub dual_mode_ratio: [f64; 2],
    pub phasematching: PhasematchingModel,
    pub stages: StageToggles,
    /// Convention used when sweeps build their targets.
    pub convention: AmplitudeConvention,
    pub grid: GridPolicy,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self::preset(Preset::CurrentExperiment)
    }
}

impl PipelineConfig {
    pub fn preset(preset: Preset) -> Self {
        let base = Self {
            preset,
            envelope_fwhm_nm: 10.0,
            shaper_window_nm: [1530.0, 1565.0],
            shaper_resolution_ghz: 10.0,
            spectrometer_resolution_ghz: 20.0,
            dye_linewidth_ghz: 5.0,
            dual_mode_separation_nm: 0.1,
            dual_mode_ratio: [0.5, 0.5],
            phasematching: PhasematchingModel::FoldedIntoEnvelope,
            stages: StageToggles::NONE,
            convention: AmplitudeConvention::default(),
            grid: GridPolicy::default(),
        };
        match preset {
            Preset::CurrentExperiment => Self {
                stages: StageToggles {
                    envelope: true,
                    window: true,
                    shaper_resolution: true,
                    phasematching: false,
                    dye_linewidth: true,
                    dual_mode: true,
                    spectrometer: true,
                },
                ..base
            },
            Preset::PulsedOutlook => Self {
                // Flat pump and flat shaper response; the shaper still only
                // covers the C-band. Input bandwidth is taken equal to the
                // phasematching bandwidth, so one kernel covers both.
                phasematching: PhasematchingModel::Kernel(PhasematchingSpec::gaussian(0.2)),
                stages: StageToggles {
                    window: true,
                    phasematching: true,
                    ..StageToggles::NONE
                },
                ..base
            },
            Preset::Ideal => base,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |msg: String| Err(ConfigError::Invalid(msg));
        let nonneg = |name: &str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(ConfigError::Invalid(format!("{name} must be finite and >= 0, got {v}")))
            }
        };
        let [low, high] = self.shaper_window_nm;
        if !(low.is_finite() && high.is_finite() && low < high) {
            return invalid(format!("shaper window needs low < high, got [{low}, {high}]"));
        }
        nonneg("envelope_fwhm_nm", self.envelope_fwhm_nm)?;
        nonneg("shaper_resolution_ghz", self.shaper_resolution_ghz)?;
        nonneg("spectrometer_resolution_ghz", self.spectrometer_resolution_ghz)?;
        nonneg("dye_linewidth_ghz", self.dye_linewidth_ghz)?;
        nonneg("dual_mode_separation_nm", self.dual_mode_separation_nm)?;
        if self.stages.envelope && self.envelope_fwhm_nm <= 0.0 {
            return invalid("envelope stage needs envelope_fwhm_nm > 0".into());
        }
        let [wa, wb] = self.dual_mode_ratio;
        nonneg("dual_mode_ratio[0]", wa)?;
        nonneg("dual_mode_ratio[1]", wb)?;
        if ((wa + wb) - 1.0).abs() > 1e-12 {
            return invalid(format!("dual_mode_ratio weights must sum to 1, got {wa} + {wb}"));
        }
        match self.phasematching {
            PhasematchingModel::Kernel(spec) => nonneg("phasematching.fwhm_nm", spec.fwhm_nm)?,
            PhasematchingModel::FoldedIntoEnvelope if self.stages.phasematching => {
                return invalid(
                    "phasematching stage is enabled but the phasematching model is \
                     folded-into-envelope; give a kernel fwhm_nm"
                        .into(),
                );
            }
            PhasematchingModel::FoldedIntoEnvelope => {}
        }
        let g = &self.grid;
        for (name, v) in [
            ("grid.pump_spacing_nm", g.pump_spacing_nm),
            ("grid.pump_min_half_span_nm", g.pump_min_half_span_nm),
            ("grid.output_spacing_nm", g.output_spacing_nm),
            ("grid.output_min_half_span_nm", g.output_min_half_span_nm),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return invalid(format!("{name} must be positive, got {v}"));
            }
        }
        Ok(())
    }

    /// Phasematching acceptance, when it is modeled as its own stage.
    pub fn phasematching_spec(&self) -> Option<PhasematchingSpec> {
        match self.phasematching {
            PhasematchingModel::Kernel(spec) if self.stages.phasematching => Some(spec),
            _ => None,
        }
    }
}

/// Everything needed to reproduce a model run: converter wavelengths plus
/// pipeline parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub schema_version: u32,
    pub scheme: DfgScheme,
    pub pipeline: PipelineConfig,
}

impl ModelConfig {
    pub fn preset(preset: Preset) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            scheme: DfgScheme::default(),
            pipeline: PipelineConfig::preset(preset),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::UnsupportedSchema {
                found: u64::from(self.schema_version),
            });
        }
        self.scheme
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.pipeline.validate()
    }

    /// Builds a configuration from a partial document. The preset is taken
    /// from `preset_override`, else from `pipeline.preset` in the document,
    /// else `current-experiment`; its defaults fill everything the document
    /// leaves out.
    pub fn from_value(doc: Value, preset_override: Option<Preset>) -> Result<Self, ConfigError> {
        if !doc.is_object() {
            return Err(ConfigError::Parse("top level must be a table".into()));
        }
        match doc.get("schema_version") {
            None => {}
            Some(v) => match v.as_u64() {
                Some(n) if n == u64::from(SCHEMA_VERSION) => {}
                Some(n) => return Err(ConfigError::UnsupportedSchema { found: n }),
                None => return Err(ConfigError::Parse("schema_version must be an integer".into())),
            },
        }
        let preset = match preset_override {
            Some(p) => p,
            None => match doc.pointer("/pipeline/preset") {
                Some(Value::String(s)) => s.parse()?,
                Some(_) => return Err(ConfigError::Parse("pipeline.preset must be a string".into())),
                None => Preset::default(),
            },
        };
        let mut merged = serde_json::to_value(Self::preset(preset))
            .map_err(|e| ConfigError::Parse(e.to_string()))?;
        merge(&mut merged, doc);
        merged["pipeline"]["preset"] = Value::String(preset.name().into());
        let config: Self = serde_json::from_value(merged).map_err(|e| ConfigError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_toml_str(text: &str, preset_override: Option<Preset>) -> Result<Self, ConfigError> {
        let doc: Value = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        Self::from_value(doc, preset_override)
    }

    pub fn from_json_str(text: &str, preset_override: Option<Preset>) -> Result<Self, ConfigError> {
        let doc: Value = serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        Self::from_value(doc, preset_override)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("configuration is always representable as TOML")
    }
}

/// Recursively overlays `patch` onto `base`; tables merge, everything else
/// replaces. The phasematching table is replaced whole when its model changes
/// so fields of the old variant do not leak into the new one.
fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                let replace_whole = k == "phasematching"
                    && b.get(&k).and_then(|old| old.get("model")) != v.get("model")
                    && v.get("model").is_some();
                match b.get_mut(&k) {
                    Some(slot) if !replace_whole => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, p) => *b = p,
    }
}
