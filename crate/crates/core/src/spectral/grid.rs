use serde::{Deserialize, Serialize};

use super::SpectralError;

/// A uniform wavelength axis, in nm.
///
/// Sample `i` sits at `center + (i - (n-1)/2) · spacing`. Positions are
/// computed from the center outwards so that offsets from the center are
/// exactly antisymmetric, which keeps even and odd mode profiles exactly
/// symmetric on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    center: f64,
    span: f64,
    num_points: usize,
}

/// Builds a grid from its center, total span and number of samples.
pub fn make_grid(center: f64, span: f64, num_points: usize) -> Result<SpectralGrid, SpectralError> {
    SpectralGrid::new(center, span, num_points)
}

impl SpectralGrid {
    pub fn new(center: f64, span: f64, num_points: usize) -> Result<Self, SpectralError> {
        if num_points < 2 {
            return Err(SpectralError::TooFewPoints(num_points));
        }
        if !(span.is_finite() && span > 0.0) {
            return Err(SpectralError::InvalidSpan(span));
        }
        if !(center.is_finite() && center - span / 2.0 > 0.0) {
            return Err(SpectralError::NonPositiveWavelength { center, span });
        }
        Ok(Self {
            center,
            span,
            num_points,
        })
    }

    /// Smallest grid with the given `spacing` whose half-span is at least
    /// `min_half_span`. The point count is always odd so `center` is a sample.
    pub fn covering(center: f64, min_half_span: f64, spacing: f64) -> Result<Self, SpectralError> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(SpectralError::InvalidSpan(spacing));
        }
        if !(min_half_span.is_finite() && min_half_span > 0.0) {
            return Err(SpectralError::InvalidSpan(2.0 * min_half_span));
        }
        // Guard against 50.000000001 / 0.01 rounding up to one extra step.
        let steps = (min_half_span / spacing - 1e-9).ceil().max(1.0) as usize;
        Self::new(center, 2.0 * steps as f64 * spacing, 2 * steps + 1)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn len(&self) -> usize {
        self.num_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.span / (self.num_points - 1) as f64
    }

    pub fn start(&self) -> f64 {
        self.wavelength(0)
    }

    pub fn end(&self) -> f64 {
        self.wavelength(self.num_points - 1)
    }

    fn mid(&self) -> f64 {
        (self.num_points - 1) as f64 / 2.0
    }

    /// Offset of sample `i` from the grid center.
    pub fn offset(&self, i: usize) -> f64 {
        (i as f64 - self.mid()) * self.spacing()
    }

    /// Offset of sample `i` from an arbitrary reference wavelength.
    pub fn offset_from(&self, i: usize, reference: f64) -> f64 {
        self.offset(i) + (self.center - reference)
    }

    pub fn wavelength(&self, i: usize) -> f64 {
        self.center + self.offset(i)
    }

    pub fn wavelengths(&self) -> Vec<f64> {
        (0..self.num_points).map(|i| self.wavelength(i)).collect()
    }

    /// Continuous sample index of `wavelength`; may fall outside `0..len`.
    pub fn fractional_index(&self, wavelength: f64) -> f64 {
        (wavelength - self.center) / self.spacing() + self.mid()
    }

    pub fn contains(&self, wavelength: f64) -> bool {
        let tol = 1e-9 * self.spacing();
        wavelength >= self.start() - tol && wavelength <= self.end() + tol
    }
}
