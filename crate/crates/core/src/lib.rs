//! Spectral model of a pulse shaper built on difference-frequency generation.
//!
//! A Hermite-Gauss intensity spectrum is programmed on the pump axis, passed
//! through the imperfections of the setup and transferred to the output axis
//! by energy conservation. The overlap between the ideal and the modeled
//! output spectrum measures shaping fidelity.

pub mod dfg;
pub mod experiments;
pub mod modes;
pub mod pipeline;
pub mod spectral;

pub use dfg::DfgScheme;
pub use experiments::{OverlapRecord, SigmaRange};
pub use modes::{hg_spectrum, overlap, AmplitudeConvention, HgTarget};
pub use pipeline::{run_pipeline, ModelConfig, ModelResult, PipelineConfig, PipelineError, Preset};
pub use spectral::{SpectralGrid, Spectrum};
