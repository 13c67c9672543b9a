#![allow(dead_code)]

use twophoton::interferometer::MziConfig;
use twophoton::spectra::{gaussian_spectrum, FrequencyGrid, Spectrum};
use twophoton::units::{fwhm_nm_to_omega, wavelength_to_omega};

pub fn omega_0() -> f64 {
    wavelength_to_omega(532.0)
}

pub fn omega_r() -> f64 {
    wavelength_to_omega(632.8)
}

pub fn balanced() -> MziConfig {
    MziConfig::balanced(omega_0(), omega_r())
}

/// Gaussian pair spectrum of the given width (nm) on a grid `span_fwhm` widths wide.
pub fn gaussian(fwhm_nm: f64, span_fwhm: f64, n: usize) -> (FrequencyGrid, Spectrum, f64) {
    let fwhm = fwhm_nm_to_omega(fwhm_nm, 532.0);
    let grid = FrequencyGrid::new(omega_0(), span_fwhm * fwhm, n).unwrap();
    let spec = gaussian_spectrum(&grid, fwhm).unwrap();
    (grid, spec, fwhm)
}

pub fn rms(v: impl IntoIterator<Item = f64>) -> f64 {
    let (s, n) = v.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x * x, n + 1));
    (s / n as f64).sqrt()
}

/// Relative RMS error of `recovered` against `truth` over the masked samples,
/// allowing each contiguous run its own multiple of 2π.
pub fn run_aligned_phase_error(recovered: &[f64], truth: &[f64], mask: &[bool]) -> f64 {
    use std::f64::consts::TAU;
    let (mut err, mut norm) = (0.0, 0.0);
    for (s, e) in twophoton::analysis::valid_runs(mask) {
        let mean = (s..e).map(|i| recovered[i] - truth[i]).sum::<f64>() / (e - s) as f64;
        let k = (mean / TAU).round() * TAU;
        for i in s..e {
            err += (recovered[i] - k - truth[i]).powi(2);
            norm += truth[i].powi(2);
        }
    }
    (err / norm).sqrt()
}

/// Linear interpolation of grid samples at an absolute frequency.
pub fn interpolate(grid: &twophoton::spectra::FrequencyGrid, values: &[f64], omega: f64) -> f64 {
    let x = ((omega - grid.omega_min()) / grid.step()).clamp(0.0, (grid.len() - 1) as f64);
    let k = (x.floor() as usize).min(grid.len() - 2);
    let f = x - k as f64;
    values[k] * (1.0 - f) + values[k + 1] * f
}
