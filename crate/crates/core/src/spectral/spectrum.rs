use super::{SpectralError, SpectralGrid};

/// Nonnegative, finite intensity samples on a [`SpectralGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: SpectralGrid,
    intensity: Vec<f64>,
}

impl Spectrum {
    pub fn new(grid: SpectralGrid, intensity: Vec<f64>) -> Result<Self, SpectralError> {
        if intensity.len() != grid.len() {
            return Err(SpectralError::LengthMismatch {
                expected: grid.len(),
                got: intensity.len(),
            });
        }
        if let Some((index, &value)) = intensity
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(SpectralError::InvalidIntensity { index, value });
        }
        Ok(Self { grid, intensity })
    }

    /// Samples `f(λ)` at every grid wavelength.
    pub fn from_fn(grid: SpectralGrid, f: impl Fn(f64) -> f64) -> Result<Self, SpectralError> {
        let intensity = (0..grid.len()).map(|i| f(grid.wavelength(i))).collect();
        Self::new(grid, intensity)
    }

    pub fn zeros(grid: SpectralGrid) -> Self {
        Self::from_parts(grid, vec![0.0; grid.len()])
    }

    pub fn constant(grid: SpectralGrid, value: f64) -> Result<Self, SpectralError> {
        Self::new(grid, vec![value; grid.len()])
    }

    /// Internal constructor for operations that preserve the invariants by
    /// construction.
    pub(crate) fn from_parts(grid: SpectralGrid, intensity: Vec<f64>) -> Self {
        debug_assert_eq!(intensity.len(), grid.len());
        debug_assert!(intensity.iter().all(|v| v.is_finite() && *v >= 0.0));
        Self { grid, intensity }
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn intensity(&self) -> &[f64] {
        &self.intensity
    }

    pub fn into_intensity(self) -> Vec<f64> {
        self.intensity
    }

    pub fn len(&self) -> usize {
        self.intensity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intensity.is_empty()
    }

    pub fn peak(&self) -> f64 {
        self.intensity.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.intensity.iter().all(|&v| v == 0.0)
    }

    /// Multiplies every sample by `factor` (must be nonnegative).
    pub fn scaled(&self, factor: f64) -> Result<Self, SpectralError> {
        Self::new(self.grid, self.intensity.iter().map(|v| v * factor).collect())
    }

    /// Rescales to unit peak; an all-zero spectrum is returned unchanged.
    pub fn peak_normalized(mut self) -> Self {
        let peak = self.peak();
        if peak > 0.0 {
            self.intensity.iter_mut().for_each(|v| *v /= peak);
        }
        self
    }

    /// `wa·self + wb·other` for nonnegative weights.
    pub fn weighted_sum(&self, wa: f64, other: &Spectrum, wb: f64) -> Result<Self, SpectralError> {
        if self.grid != other.grid {
            return Err(SpectralError::GridMismatch);
        }
        Self::new(
            self.grid,
            self.intensity
                .iter()
                .zip(&other.intensity)
                .map(|(a, b)| wa * a + wb * b)
                .collect(),
        )
    }

    /// Intensity-weighted mean wavelength.
    pub fn centroid(&self) -> Option<f64> {
        let total = integrate(self);
        if total <= 0.0 {
            return None;
        }
        let moment = trapezoid(
            self.grid.spacing(),
            self.intensity
                .iter()
                .enumerate()
                .map(|(i, v)| v * self.grid.wavelength(i)),
        );
        Some(moment / total)
    }

    /// Full width at half maximum of the highest peak, with half-maximum
    /// crossings located by linear interpolation.
    pub fn fwhm(&self) -> Option<f64> {
        let (imax, &peak) = self
            .intensity
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))?;
        if peak <= 0.0 {
            return None;
        }
        let half = peak / 2.0;
        let v = &self.intensity;
        let left = (0..imax).rev().find(|&i| v[i] < half)?;
        let right = (imax + 1..v.len()).find(|&i| v[i] < half)?;
        let cross = |a: usize, b: usize| {
            let t = (half - v[a]) / (v[b] - v[a]);
            self.grid.wavelength(a) + t * (self.grid.wavelength(b) - self.grid.wavelength(a))
        };
        Some(cross(right - 1, right) - cross(left, left + 1))
    }
}

fn trapezoid(h: f64, values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut first = None;
    let mut last = 0.0;
    for v in values {
        first.get_or_insert(v);
        sum += v;
        last = v;
    }
    match first {
        Some(f) => h * (sum - 0.5 * (f + last)),
        None => 0.0,
    }
}

/// Trapezoid-rule integral over the grid, in intensity·nm.
pub fn integrate(spectrum: &Spectrum) -> f64 {
    trapezoid(spectrum.grid.spacing(), spectrum.intensity.iter().copied())
}

/// Pointwise product of two spectra on the same grid.
pub fn multiply(a: &Spectrum, b: &Spectrum) -> Result<Spectrum, SpectralError> {
    if a.grid != b.grid {
        return Err(SpectralError::GridMismatch);
    }
    Ok(Spectrum::from_parts(
        a.grid,
        a.intensity.iter().zip(&b.intensity).map(|(x, y)| x * y).collect(),
    ))
}

/// Hard rectangular window: samples outside `[low, high]` are zeroed, samples
/// inside are left untouched.
pub fn window(spectrum: &Spectrum, low: f64, high: f64) -> Result<Spectrum, SpectralError> {
    if !(low < high) {
        return Err(SpectralError::InvalidWindow { low, high });
    }
    let g = spectrum.grid;
    // Bounds that coincide with a sample up to rounding count as inside.
    let tol = 1e-9 * g.spacing();
    let intensity = spectrum
        .intensity
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let l = g.wavelength(i);
            if l >= low - tol && l <= high + tol {
                v
            } else {
                0.0
            }
        })
        .collect();
    Ok(Spectrum::from_parts(g, intensity))
}

/// Translates the spectrum by `delta` nm (positive moves features to longer
/// wavelengths), resampling by linear interpolation. Samples that would come
/// from outside the grid are zero.
pub fn shift(spectrum: &Spectrum, delta: f64) -> Spectrum {
    let g = spectrum.grid;
    let n = g.len();
    let mut steps = delta / g.spacing();
    if (steps - steps.round()).abs() < 1e-9 {
        steps = steps.round();
    }
    let v = &spectrum.intensity;
    let intensity = (0..n)
        .map(|i| {
            let p = i as f64 - steps;
            let j = p.floor();
            let f = p - j;
            let at = |k: f64| {
                if k >= 0.0 && k < n as f64 {
                    v[k as usize]
                } else {
                    0.0
                }
            };
            if f == 0.0 {
                at(j)
            } else {
                (1.0 - f) * at(j) + f * at(j + 1.0)
            }
        })
        .collect();
    Spectrum::from_parts(g, intensity)
}
