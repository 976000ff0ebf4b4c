//! Difference-frequency generation with a quasi-monochromatic input.
//!
//! Energy conservation `ν_out = ν_in − ν_pump` ties every pump wavelength to
//! one output wavelength, so a programmed pump spectrum is transported onto
//! the output axis point by point. Intensity per unit frequency is carried
//! over unchanged; re-expressing it per unit wavelength on each axis brings
//! in the Jacobian `λ_pump² / λ_out²`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectral::{
    GaussianKernel, LineShape, SincSquaredKernel, SpectralError, SpectralGrid, Spectrum,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DfgError {
    #[error("input wavelength {input} nm must be positive and shorter than the pump wavelength {pump} nm")]
    InvalidScheme { input: f64, pump: f64 },
    #[error("mapped pump support [{low:.4}, {high:.4}] nm is not covered by the output grid [{start:.4}, {end:.4}] nm")]
    OutputGridTooNarrow {
        low: f64,
        high: f64,
        start: f64,
        end: f64,
    },
    #[error("pump spectrum reaches {0} nm, where no output wavelength exists")]
    UnmappablePump(f64),
    #[error("envelope fwhm must be positive and finite, got {0} nm")]
    InvalidEnvelope(f64),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Wavelength configuration of the converter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DfgScheme {
    /// Narrowband input, nm.
    pub input_wavelength_nm: f64,
    /// Central pump wavelength, nm.
    pub pump_center_nm: f64,
}

impl Default for DfgScheme {
    fn default() -> Self {
        Self {
            input_wavelength_nm: 557.0,
            pump_center_nm: 1550.0,
        }
    }
}

/// Output wavelength from `1/λ_out = 1/λ_in − 1/λ_pump`.
pub fn output_center(input_nm: f64, pump_nm: f64) -> Result<f64, DfgError> {
    if !(input_nm.is_finite() && input_nm > 0.0 && pump_nm > input_nm) {
        return Err(DfgError::InvalidScheme {
            input: input_nm,
            pump: pump_nm,
        });
    }
    if pump_nm.is_infinite() {
        return Ok(input_nm);
    }
    // Same relation, rearranged to avoid differencing two reciprocals.
    Ok(input_nm * pump_nm / (pump_nm - input_nm))
}

impl DfgScheme {
    pub fn new(input_wavelength_nm: f64, pump_center_nm: f64) -> Result<Self, DfgError> {
        let scheme = Self {
            input_wavelength_nm,
            pump_center_nm,
        };
        scheme.validate()?;
        Ok(scheme)
    }

    pub fn validate(&self) -> Result<(), DfgError> {
        output_center(self.input_wavelength_nm, self.pump_center_nm).map(|_| ())
    }

    pub fn output_center(&self) -> Result<f64, DfgError> {
        output_center(self.input_wavelength_nm, self.pump_center_nm)
    }

    /// Output wavelength for a given pump wavelength, if the pump photon
    /// carries less energy than the input photon.
    pub fn output_wavelength(&self, pump_nm: f64) -> Option<f64> {
        let lin = self.input_wavelength_nm;
        (pump_nm > lin).then(|| lin * pump_nm / (pump_nm - lin))
    }

    /// Pump wavelength that produces a given output wavelength.
    pub fn pump_wavelength(&self, output_nm: f64) -> Option<f64> {
        let lin = self.input_wavelength_nm;
        (output_nm > lin).then(|| lin * output_nm / (output_nm - lin))
    }

    /// Input wavelength recovered from an output/pump pair,
    /// `1/λ_in = 1/λ_out + 1/λ_pump`.
    pub fn input_from(output_nm: f64, pump_nm: f64) -> f64 {
        output_nm * pump_nm / (output_nm + pump_nm)
    }

    /// `(λ_out / λ_pump)²` at the pump center: how much narrower, in nm, a
    /// pump-axis feature becomes on the output axis.
    pub fn compression_factor(&self) -> Result<f64, DfgError> {
        let r = self.output_center()? / self.pump_center_nm;
        Ok(r * r)
    }
}

/// Transports a pump-axis spectrum to the output axis.
///
/// Each output sample looks up its partner pump wavelength, interpolates the
/// pump spectrum linearly there, and scales by `(λ_pump / λ_out)²` so that
/// `∫ I dν` is the same on both axes. Larger pump frequency means smaller
/// output frequency, so the frequency ordering is reversed between the axes.
pub fn map_pump_to_output(
    pump: &Spectrum,
    scheme: &DfgScheme,
    out_grid: &SpectralGrid,
) -> Result<Spectrum, DfgError> {
    scheme.validate()?;
    let pg = pump.grid();
    let values = pump.intensity();

    let threshold = pump.peak() * 1e-12;
    let first = values.iter().position(|&v| v > threshold);
    let last = values.iter().rposition(|&v| v > threshold);
    if let (Some(first), Some(last)) = (first, last) {
        let lo_pump = pg.wavelength(first);
        let hi_pump = pg.wavelength(last);
        let img_a = scheme
            .output_wavelength(lo_pump)
            .ok_or(DfgError::UnmappablePump(lo_pump))?;
        let img_b = scheme
            .output_wavelength(hi_pump)
            .ok_or(DfgError::UnmappablePump(hi_pump))?;
        let (low, high) = (img_a.min(img_b), img_a.max(img_b));
        if !(out_grid.contains(low) && out_grid.contains(high)) {
            return Err(DfgError::OutputGridTooNarrow {
                low,
                high,
                start: out_grid.start(),
                end: out_grid.end(),
            });
        }
    }

    let n = values.len();
    let intensity = (0..out_grid.len())
        .map(|i| {
            let lo = out_grid.wavelength(i);
            let Some(lp) = scheme.pump_wavelength(lo) else {
                return 0.0;
            };
            let p = pg.fractional_index(lp);
            if !(p >= 0.0 && p <= (n - 1) as f64) {
                return 0.0;
            }
            let j = (p.floor() as usize).min(n - 2);
            let f = p - j as f64;
            let v = (1.0 - f) * values[j] + f * values[j + 1];
            let jac = lp / lo;
            v * jac * jac
        })
        .collect();
    Ok(Spectrum::new(*out_grid, intensity)?)
}

/// Unit-peak Gaussian intensity envelope with the given FWHM.
pub fn pump_envelope(center: f64, fwhm: f64, grid: &SpectralGrid) -> Result<Spectrum, DfgError> {
    if !(fwhm.is_finite() && fwhm > 0.0) {
        return Err(DfgError::InvalidEnvelope(fwhm));
    }
    let intensity = (0..grid.len())
        .map(|i| {
            let u = grid.offset_from(i, center) / fwhm;
            (-4.0 * LN_2 * u * u).exp()
        })
        .collect();
    Ok(Spectrum::new(*grid, intensity)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhasematchingShape {
    #[default]
    Gaussian,
    SincSquared,
}

/// Phasematching acceptance, parameterized by its FWHM on the pump axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasematchingSpec {
    pub fwhm_nm: f64,
    #[serde(default)]
    pub shape: PhasematchingShape,
}

impl PhasematchingSpec {
    pub fn gaussian(fwhm_nm: f64) -> Self {
        Self {
            fwhm_nm,
            shape: PhasematchingShape::Gaussian,
        }
    }

    /// The same acceptance expressed on the output axis: equal frequency
    /// width, rescaled by `(λ_out/λ_pump)²`.
    pub fn on_output_axis(&self, scheme: &DfgScheme) -> Result<Self, DfgError> {
        Ok(Self {
            fwhm_nm: self.fwhm_nm * scheme.compression_factor()?,
            shape: self.shape,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhasematchingKernel {
    Gaussian(GaussianKernel),
    SincSquared(SincSquaredKernel),
}

impl LineShape for PhasematchingKernel {
    fn fwhm(&self) -> f64 {
        match self {
            Self::Gaussian(k) => k.fwhm(),
            Self::SincSquared(k) => k.fwhm(),
        }
    }

    fn profile(&self, x: f64) -> f64 {
        match self {
            Self::Gaussian(k) => k.profile(x),
            Self::SincSquared(k) => k.profile(x),
        }
    }

    fn support(&self) -> f64 {
        match self {
            Self::Gaussian(k) => k.support(),
            Self::SincSquared(k) => k.support(),
        }
    }
}

/// Builds the blur kernel for a phasematching acceptance. `None` means the
/// acceptance is narrower than one grid step and acts as the identity.
pub fn phasematching_kernel(
    spec: &PhasematchingSpec,
    grid_spacing: f64,
) -> Result<Option<PhasematchingKernel>, DfgError> {
    if spec.fwhm_nm < grid_spacing {
        return Ok(None);
    }
    Ok(Some(match spec.shape {
        PhasematchingShape::Gaussian => {
            PhasematchingKernel::Gaussian(GaussianKernel::new(spec.fwhm_nm)?)
        }
        PhasematchingShape::SincSquared => {
            PhasematchingKernel::SincSquared(SincSquaredKernel::new(spec.fwhm_nm)?)
        }
    }))
}
