//! Hermite-Gauss target spectra and the overlap fidelity metric.
//!
//! A target of order `n`, center `λ₀` and base width `σ` has the field
//! envelope
//!
//! ```text
//! A(λ) = H_n(x) · exp(-x²/2),   x = (λ - λ₀) / σ
//! ```
//!
//! with `H_n` the physicists' Hermite polynomial. Spectra are intensities, so
//! the default is to program `A²`; `|A|` is available as an alternative.
//! Both are peak-normalized to 1, which the overlap metric is blind to.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectral::{SpectralError, SpectralGrid, Spectrum};

/// Highest supported mode order.
pub const MAX_ORDER: u32 = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModeError {
    #[error("mode order {0} exceeds the supported maximum of {MAX_ORDER}")]
    OrderTooHigh(u32),
    #[error("mode width sigma must be positive and finite, got {0} nm")]
    InvalidSigma(f64),
    #[error("mode center must be positive and finite, got {0} nm")]
    InvalidCenter(f64),
    #[error("grid [{start:.3}, {end:.3}] nm does not cover the mode extent [{low:.3}, {high:.3}] nm")]
    GridTooNarrow {
        low: f64,
        high: f64,
        start: f64,
        end: f64,
    },
    #[error("overlap is undefined for an all-zero spectrum")]
    ZeroSpectrum,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence.
pub fn hermite(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Which quantity of the field envelope is used as the intensity target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmplitudeConvention {
    /// `A²`
    #[default]
    SquaredAmplitude,
    /// `|A|`
    AbsoluteAmplitude,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HgTarget {
    order: u32,
    center_wavelength: f64,
    sigma: f64,
    convention: AmplitudeConvention,
}

impl HgTarget {
    pub fn new(order: u32, center_wavelength: f64, sigma: f64) -> Result<Self, ModeError> {
        if order > MAX_ORDER {
            return Err(ModeError::OrderTooHigh(order));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(ModeError::InvalidSigma(sigma));
        }
        if !(center_wavelength.is_finite() && center_wavelength > 0.0) {
            return Err(ModeError::InvalidCenter(center_wavelength));
        }
        Ok(Self {
            order,
            center_wavelength,
            sigma,
            convention: AmplitudeConvention::default(),
        })
    }

    pub fn with_convention(mut self, convention: AmplitudeConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn center_wavelength(&self) -> f64 {
        self.center_wavelength
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn convention(&self) -> AmplitudeConvention {
        self.convention
    }

    /// Half-width around the center that a grid must cover:
    /// `σ·(2·sqrt(n) + 4)`, comfortably past the outermost lobe.
    pub fn required_half_span(&self) -> f64 {
        self.sigma * (2.0 * f64::from(self.order).sqrt() + 4.0)
    }

    /// Field envelope at a given offset from the center, without normalization.
    pub fn envelope_at_offset(&self, offset: f64) -> f64 {
        let x = offset / self.sigma;
        hermite(self.order, x) * (-0.5 * x * x).exp()
    }
}

/// Samples the target intensity on `grid`, peak-normalized to 1.
pub fn hg_spectrum(target: &HgTarget, grid: &SpectralGrid) -> Result<Spectrum, ModeError> {
    let reach = target.required_half_span();
    let (low, high) = (
        target.center_wavelength - reach,
        target.center_wavelength + reach,
    );
    let tol = 1e-9 * grid.spacing();
    if grid.start() > low + tol || grid.end() < high - tol {
        return Err(ModeError::GridTooNarrow {
            low,
            high,
            start: grid.start(),
            end: grid.end(),
        });
    }
    let intensity = (0..grid.len())
        .map(|i| {
            let a = target.envelope_at_offset(grid.offset_from(i, target.center_wavelength));
            match target.convention {
                AmplitudeConvention::SquaredAmplitude => a * a,
                AmplitudeConvention::AbsoluteAmplitude => a.abs(),
            }
        })
        .collect();
    Ok(Spectrum::new(*grid, intensity)?.peak_normalized())
}

/// Normalized overlap `(∫S·T)² / (∫S² · ∫T²)` with trapezoid integrals.
///
/// Lies in `[0, 1]` for nonnegative spectra and equals 1 only when the two
/// are proportional.
pub fn overlap(s: &Spectrum, t: &Spectrum) -> Result<f64, ModeError> {
    if s.grid() != t.grid() {
        return Err(SpectralError::GridMismatch.into());
    }
    if s.is_zero() || t.is_zero() {
        return Err(ModeError::ZeroSpectrum);
    }
    let (a, b) = (s.intensity(), t.intensity());
    let n = a.len();
    let trap = |f: &dyn Fn(usize) -> f64| {
        let inner: f64 = (0..n).map(f).sum();
        inner - 0.5 * (f(0) + f(n - 1))
    };
    // The grid spacing cancels between numerator and denominator.
    let st = trap(&|i| a[i] * b[i]);
    let ss = trap(&|i| a[i] * a[i]);
    let tt = trap(&|i| b[i] * b[i]);
    Ok(st * st / (ss * tt))
}
