//! Uniform wavelength grids, intensity spectra and the handful of linear
//! operations the shaper model is built from.
//!
//! Everything here works in nanometres on a grid that is uniform in
//! wavelength. Widths quoted in frequency are converted once, at the carrier
//! of the axis they act on, with [`ghz_to_nm`].

mod convolve;
mod grid;
mod kernel;
mod spectrum;
mod units;

pub use convolve::{convolve, convolve_direct, convolve_fft, convolve_taps};
pub use grid::{make_grid, SpectralGrid};
pub use kernel::{GaussianKernel, LineShape, SincSquaredKernel, FWHM_PER_SIGMA};
pub use spectrum::{integrate, multiply, shift, window, Spectrum};
pub use units::{ghz_to_nm, nm_to_ghz, SPEED_OF_LIGHT};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("grid needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("grid span must be positive and finite, got {0} nm")]
    InvalidSpan(f64),
    #[error("grid reaches nonpositive wavelengths (center {center} nm, span {span} nm)")]
    NonPositiveWavelength { center: f64, span: f64 },
    #[error("spectrum has {got} samples but its grid has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("intensity sample {index} is {value}; spectra must be finite and nonnegative")]
    InvalidIntensity { index: usize, value: f64 },
    #[error("operands live on different grids")]
    GridMismatch,
    #[error("kernel fwhm must be positive and finite, got {0} nm")]
    InvalidKernelWidth(f64),
    #[error("kernel fwhm {fwhm} nm is wider than the grid span {span} nm")]
    KernelWiderThanGrid { fwhm: f64, span: f64 },
    #[error("window bounds must satisfy low < high, got [{low}, {high}] nm")]
    InvalidWindow { low: f64, high: f64 },
}
