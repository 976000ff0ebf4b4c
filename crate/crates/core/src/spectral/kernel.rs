use serde::{Deserialize, Serialize};

use super::SpectralError;

/// Ratio between a Gaussian's FWHM and its standard deviation, `2·sqrt(2·ln 2)`.
pub const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_4;

/// A symmetric line shape used as a convolution kernel.
pub trait LineShape {
    /// Full width at half maximum, nm.
    fn fwhm(&self) -> f64;

    /// Unnormalized profile at offset `x` nm from the kernel center, peak 1.
    fn profile(&self, x: f64) -> f64;

    /// Half-width beyond which the profile is treated as zero, nm.
    fn support(&self) -> f64;

    /// Kernel sampled at `spacing` and normalized to unit sum, so that
    /// convolution preserves the discrete integral. Always odd length with
    /// the peak in the middle.
    fn taps(&self, spacing: f64) -> Vec<f64> {
        let half = (self.support() / spacing).ceil() as usize;
        let mut taps: Vec<f64> = (0..=2 * half)
            .map(|j| self.profile((j as f64 - half as f64) * spacing))
            .collect();
        let sum: f64 = taps.iter().sum();
        taps.iter_mut().for_each(|t| *t /= sum);
        taps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianKernel {
    fwhm: f64,
}

impl GaussianKernel {
    pub fn new(fwhm: f64) -> Result<Self, SpectralError> {
        if !(fwhm.is_finite() && fwhm > 0.0) {
            return Err(SpectralError::InvalidKernelWidth(fwhm));
        }
        Ok(Self { fwhm })
    }

    pub fn sigma(&self) -> f64 {
        self.fwhm / FWHM_PER_SIGMA
    }
}

impl LineShape for GaussianKernel {
    fn fwhm(&self) -> f64 {
        self.fwhm
    }

    fn profile(&self, x: f64) -> f64 {
        let u = x / self.sigma();
        (-0.5 * u * u).exp()
    }

    fn support(&self) -> f64 {
        // exp(-50) ~ 2e-22, far below anything that survives normalization.
        10.0 * self.sigma()
    }
}

/// `sinc²` line shape of an unapodized phasematching function, scaled so
/// that the main lobe has the requested FWHM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SincSquaredKernel {
    fwhm: f64,
}

/// Positive root of `(sin x / x)² = 1/2`.
pub(crate) const SINC2_HALF_MAX_X: f64 = 1.391_557_378_251_510_2;

impl SincSquaredKernel {
    pub fn new(fwhm: f64) -> Result<Self, SpectralError> {
        if !(fwhm.is_finite() && fwhm > 0.0) {
            return Err(SpectralError::InvalidKernelWidth(fwhm));
        }
        Ok(Self { fwhm })
    }

    fn scale(&self) -> f64 {
        2.0 * SINC2_HALF_MAX_X / self.fwhm
    }
}

impl LineShape for SincSquaredKernel {
    fn fwhm(&self) -> f64 {
        self.fwhm
    }

    fn profile(&self, x: f64) -> f64 {
        let u = x * self.scale();
        if u == 0.0 {
            1.0
        } else {
            let s = u.sin() / u;
            s * s
        }
    }

    fn support(&self) -> f64 {
        // Eight main-lobe widths keep the first ~7 side lobes on each side;
        // what is dropped carries well under 1 % of the area.
        8.0 * self.fwhm
    }
}
