use std::cell::RefCell;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::{LineShape, SpectralError, Spectrum};

/// Above this many multiply-adds the FFT path is used.
const DIRECT_WORK_LIMIT: usize = 1 << 16;

thread_local! {
    // Plans are cached per size inside the planner.
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Convolves a spectrum with an area-normalized, sampled line shape.
///
/// The output lives on the input grid; samples beyond the grid edges are
/// treated as zero. Kernels narrower than one grid step are an identity
/// operation, and kernels wider than the whole grid are rejected.
pub fn convolve<K: LineShape + ?Sized>(
    spectrum: &Spectrum,
    kernel: &K,
) -> Result<Spectrum, SpectralError> {
    let grid = *spectrum.grid();
    let fwhm = kernel.fwhm();
    if !(fwhm.is_finite() && fwhm > 0.0) {
        return Err(SpectralError::InvalidKernelWidth(fwhm));
    }
    if fwhm > grid.span() {
        return Err(SpectralError::KernelWiderThanGrid {
            fwhm,
            span: grid.span(),
        });
    }
    if fwhm < grid.spacing() {
        return Ok(spectrum.clone());
    }
    let taps = kernel.taps(grid.spacing());
    Ok(Spectrum::from_parts(grid, convolve_taps(spectrum.intensity(), &taps)))
}

/// Centered ("same"-size) convolution of `signal` with odd-length `taps`,
/// choosing the direct or FFT route by cost. Negative round-off from the FFT
/// route is clipped so nonnegative inputs stay nonnegative.
pub fn convolve_taps(signal: &[f64], taps: &[f64]) -> Vec<f64> {
    if signal.len().saturating_mul(taps.len()) <= DIRECT_WORK_LIMIT {
        convolve_direct(signal, taps)
    } else {
        let mut out = convolve_fft(signal, taps);
        out.iter_mut().for_each(|v| *v = v.max(0.0));
        out
    }
}

/// Direct O(N·M) centered convolution.
pub fn convolve_direct(signal: &[f64], taps: &[f64]) -> Vec<f64> {
    assert!(taps.len() % 2 == 1, "taps must have odd length");
    let n = signal.len() as isize;
    let half = (taps.len() / 2) as isize;
    (0..n)
        .map(|i| {
            let mut acc = 0.0;
            for (j, &t) in taps.iter().enumerate() {
                let k = i + half - j as isize;
                if (0..n).contains(&k) {
                    acc += t * signal[k as usize];
                }
            }
            acc
        })
        .collect()
}

/// FFT centered convolution; same result as [`convolve_direct`] up to
/// round-off. Zero padding to a power of two removes circular wrap-around.
pub fn convolve_fft(signal: &[f64], taps: &[f64]) -> Vec<f64> {
    assert!(taps.len() % 2 == 1, "taps must have odd length");
    let n = signal.len();
    if n == 0 {
        return Vec::new();
    }
    let full = n + taps.len() - 1;
    let size = full.next_power_of_two();

    let (forward, inverse) = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(size), p.plan_fft_inverse(size))
    });

    let pad = |v: &[f64]| {
        let mut buf = vec![Complex::new(0.0, 0.0); size];
        for (b, &x) in buf.iter_mut().zip(v) {
            b.re = x;
        }
        buf
    };
    let mut a = pad(signal);
    let mut b = pad(taps);
    forward.process(&mut a);
    forward.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    inverse.process(&mut a);

    let half = taps.len() / 2;
    let scale = 1.0 / size as f64;
    a[half..half + n].iter().map(|c| c.re * scale).collect()
}
