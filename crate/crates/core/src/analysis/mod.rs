//! Spectra, spectral phase, GVD and fringe visibility recovered from
//! interferograms.

mod fit;
mod metrics;
mod phase;
mod spectrum;

pub use fit::{fit_balanced_fringes, fit_gvd, FringeFit, GvdFit};
pub use metrics::{fourier_peak_width, peak_metrics, PeakMetrics};
pub use phase::{remove_linear_phase, unwrap_phase, valid_runs, wrap_phase};
pub use spectrum::{
    fft_interferogram, fft_real_interferogram, recover_sample_response, write_spectrum_csv,
    FftConfig, RecoveredSpectrum, Window, VALID_THRESHOLD,
};
