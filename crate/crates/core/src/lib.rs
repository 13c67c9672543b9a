//! Simulation of phase-modulated two-photon Mach-Zehnder interferometry with
//! time-frequency entangled photon pairs, and recovery of sample spectroscopy
//! (absorption, dispersion, group-velocity dispersion) from the resulting
//! coincidence interferograms.
//!
//! Internal units: angular frequency in rad/fs, time in fs, length in mm.
//!
//! Module map:
//!
//! - [`spectra`]: frequency grids and pair power spectra `S(ω)`.
//! - [`media`]: sample transfer functions `η(ω)` (identity, slab, notch) and
//!   the minimum-phase Kramers-Kronig construction.
//! - [`interferometer`]: MZI amplitudes, pathway terms, coincidence rates and
//!   a brute-force joint-spectral-amplitude oracle.
//! - [`demodulation`]: phase-sweep time series, lock-in extraction and the
//!   analytic down-sampled signals.
//! - [`analysis`]: Fourier recovery, phase unwrapping, GVD and fringe fits.

pub mod analysis;
pub mod demodulation;
mod error;
pub(crate) mod fourier;
pub mod interferometer;
pub mod media;
pub mod spectra;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64;
