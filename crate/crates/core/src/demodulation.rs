//! Phase-sweep time series and lock-in demodulation.
//!
//! The relative arm phase is swept linearly, `Δφ(t) = 2πν₂₁t`. At each delay
//! step the coincidence rate is sampled over whole sweep periods, optionally
//! with counting noise and a slowly wandering arm phase, and the 1f/2f
//! components are recovered by multiplying with the reference
//! `e^{-im(Δφ(t) − ω_R τ)}` and averaging. The reference is derived from the
//! same arm phase the signal sees, so arm-phase drift shared by both channels
//! drops out of the demodulated signal.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::interferometer::{
    ComplexInterferogram, Harmonic, HarmonicRates, Interferogram, InterferogramKind, Interferometer,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModulationConfig {
    /// Difference frequency of the two phase sweeps, kHz.
    pub nu_21_khz: f64,
    pub samples_per_period: usize,
    /// Sweep periods recorded per delay step.
    pub periods: usize,
}

impl Default for ModulationConfig {
    fn default() -> Self {
        Self {
            nu_21_khz: 20.0,
            samples_per_period: 256,
            periods: 1,
        }
    }
}

impl ModulationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.nu_21_khz.is_finite() && self.nu_21_khz > 0.0) {
            return Err(invalid("nu_21_khz", format!("must be positive, got {}", self.nu_21_khz)));
        }
        if self.samples_per_period < 16 {
            return Err(invalid(
                "samples_per_period",
                format!("need at least 16, got {}", self.samples_per_period),
            ));
        }
        if self.periods == 0 {
            return Err(invalid("periods", "need at least one sweep period"));
        }
        Ok(())
    }

    pub fn total_samples(&self) -> usize {
        self.samples_per_period * self.periods
    }

    /// Sample times in ms.
    pub fn sample_times_ms(&self) -> Vec<f64> {
        let dt = 1.0 / (self.nu_21_khz * self.samples_per_period as f64);
        (0..self.total_samples()).map(|k| k as f64 * dt).collect()
    }

    /// Ideal sweep phase `2πν₂₁t` at each sample.
    pub fn sweep_phases(&self) -> Vec<f64> {
        self.sample_times_ms()
            .into_iter()
            .map(|t| 2.0 * PI * self.nu_21_khz * t)
            .collect()
    }
}

/// Counting noise and arm-phase drift.
///
/// `mean_counts` is the expected number of coincidences per delay step at the
/// far-delay baseline rate `R̃ = 2`. `phase_jitter_sigma` is the standard
/// deviation of the random-walk increment of `Δφ` between consecutive delay
/// steps; the drift is taken as frozen within one step's dwell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseConfig {
    pub poisson: bool,
    pub mean_counts: f64,
    pub phase_jitter_sigma: f64,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            poisson: false,
            mean_counts: 1e5,
            phase_jitter_sigma: 0.0,
            seed: 0,
        }
    }
}

impl NoiseConfig {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        if self.poisson && !(self.mean_counts.is_finite() && self.mean_counts > 0.0) {
            return Err(invalid("mean_counts", format!("must be positive, got {}", self.mean_counts)));
        }
        if !(self.phase_jitter_sigma.is_finite() && self.phase_jitter_sigma >= 0.0) {
            return Err(invalid(
                "phase_jitter_sigma",
                format!("must be non-negative, got {}", self.phase_jitter_sigma),
            ));
        }
        Ok(())
    }
}

const JITTER_STREAM: u64 = 0x6a09_e667_f3bc_c909;

fn step_rng(seed: u64, step: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (step as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Accumulated arm-phase drift at each of `n_steps` delay steps (first step 0).
pub fn jitter_offsets(n_steps: usize, sigma: f64, seed: u64) -> Vec<f64> {
    if sigma == 0.0 {
        return vec![0.0; n_steps];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ JITTER_STREAM);
    let normal = Normal::new(0.0, sigma).expect("sigma validated");
    let mut acc = 0.0;
    (0..n_steps)
        .map(|k| {
            if k > 0 {
                acc += normal.sample(&mut rng);
            }
            acc
        })
        .collect()
}

fn poisson_resample(rate: f64, scale: f64, rng: &mut ChaCha8Rng) -> f64 {
    // scale = expected counts per unit of normalized rate
    let lambda = (rate * scale).max(0.0);
    if lambda == 0.0 {
        return 0.0;
    }
    let counts: f64 = Poisson::new(lambda).expect("positive mean").sample(rng);
    counts / scale
}

/// Rate samples over whole sweep periods at one delay, with the sweep phases
/// the reference channel recorded.
#[derive(Debug, Clone, PartialEq)]
pub struct Timeseries {
    pub tau: f64,
    pub samples: Vec<f64>,
    /// Actual `Δφ(t)` at each sample, drift included.
    pub sweep_phase: Vec<f64>,
    pub samples_per_period: usize,
}

impl Timeseries {
    /// Lock-in output for harmonic `m` against the recorded reference.
    pub fn lockin(&self, m: i32, omega_r: f64) -> Result<LockinOutput> {
        demodulate(&self.samples, &self.sweep_phase, self.samples_per_period, m, omega_r, self.tau)
    }

    /// Phase-averaged (0f) signal.
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }
}

/// Samples the rate at delay `tau` over the sweep, adding the arm-phase drift
/// `phase_offset` and, if enabled, Poisson counting noise seeded from
/// `noise.seed` and `step`.
pub fn synthesize_timeseries(
    rates: &HarmonicRates,
    modulation: &ModulationConfig,
    noise: &NoiseConfig,
    step: usize,
    phase_offset: f64,
) -> Result<Timeseries> {
    modulation.validate()?;
    noise.validate()?;
    let sweep_phase: Vec<f64> = modulation
        .sweep_phases()
        .into_iter()
        .map(|p| p + phase_offset)
        .collect();
    let mut samples: Vec<f64> = sweep_phase.iter().map(|&p| rates.at_phase(p)).collect();
    if noise.poisson {
        let mut rng = step_rng(noise.seed, step);
        let scale = noise.mean_counts / 2.0 / samples.len() as f64;
        for s in &mut samples {
            *s = poisson_resample(*s, scale, &mut rng);
        }
    }
    Ok(Timeseries {
        tau: rates.tau,
        samples,
        sweep_phase,
        samples_per_period: modulation.samples_per_period,
    })
}

/// In-phase/quadrature lock-in output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LockinOutput {
    pub x: f64,
    pub y: f64,
    pub amplitude: f64,
    pub phase: f64,
}

impl LockinOutput {
    pub fn from_xy(x: f64, y: f64) -> Self {
        Self {
            x,
            y,
            amplitude: x.hypot(y),
            phase: y.atan2(x),
        }
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

fn demodulate(
    samples: &[f64],
    sweep_phase: &[f64],
    per_period: usize,
    m: i32,
    omega_r: f64,
    tau: f64,
) -> Result<LockinOutput> {
    if !(m == 1 || m == 2) {
        return Err(Error::Harmonic(m));
    }
    if samples.is_empty() || samples.len() % per_period != 0 || samples.len() != sweep_phase.len() {
        return Err(Error::PartialPeriod {
            len: samples.len(),
            per_period,
        });
    }
    let mf = m as f64;
    let (mut x, mut y) = (0.0, 0.0);
    for (&a, &p) in samples.iter().zip(sweep_phase) {
        let arg = mf * (p - omega_r * tau);
        x += a * arg.cos();
        y -= a * arg.sin();
    }
    let n = samples.len() as f64;
    Ok(LockinOutput::from_xy(x / n, y / n))
}

/// Lock-in extraction of harmonic `m` from a series sampled on the ideal sweep
/// (no drift) of `modulation`.
pub fn lockin_extract(
    series: &[f64],
    m: i32,
    tau: f64,
    omega_r: f64,
    modulation: &ModulationConfig,
) -> Result<LockinOutput> {
    let spp = modulation.samples_per_period;
    if series.is_empty() || series.len() % spp != 0 {
        return Err(Error::PartialPeriod {
            len: series.len(),
            per_period: spp,
        });
    }
    let periods = series.len() / spp;
    let phases = ModulationConfig {
        periods,
        ..*modulation
    }
    .sweep_phases();
    demodulate(series, &phases, spp, m, omega_r, tau)
}

/// `Z_1f(τ) = e^{iφ_s} ∫dω η(ω){1 + |η(2ω0−ω)|²} e^{-i(ω−ω_R)τ} S(ω)`.
pub fn downsampled_z1f(ifm: &Interferometer, tau: &[f64]) -> Result<ComplexInterferogram> {
    let omega_r = ifm.config().omega_r;
    let phase0 = Complex64::cis(ifm.config().static_phase());
    let values = tau
        .par_iter()
        .map(|&t| phase0 * ifm.one_photon_integral(t, omega_r))
        .collect();
    ComplexInterferogram::new(tau.to_vec(), values, Harmonic::Z1f)
}

/// `Z_2f(τ) = ½ e^{2iφ_s} e^{-2i(ω0−ω_R)τ} ∫dω η(ω)η(2ω0−ω) S(ω)`.
pub fn downsampled_z2f(ifm: &Interferometer, tau: &[f64]) -> Result<ComplexInterferogram> {
    let i2 = ifm.rate_2f_integrand();
    let dw = ifm.omega_0() - ifm.config().omega_r;
    let phase0 = Complex64::cis(2.0 * ifm.config().static_phase());
    let values = tau
        .iter()
        .map(|&t| 0.5 * Complex64::cis(-2.0 * dw * t) * i2 * phase0)
        .collect();
    ComplexInterferogram::new(tau.to_vec(), values, Harmonic::Z2f)
}

/// Phase-averaged signal, identical to the 0f rate.
pub fn downsampled_a0f(ifm: &Interferometer, tau: &[f64]) -> Result<Interferogram> {
    ifm.sweep_0f(tau)
}

/// The three lock-in channels of a down-sampled scan.
#[derive(Debug, Clone, PartialEq)]
pub struct DownsampledScan {
    pub a0f: Interferogram,
    pub z1f: ComplexInterferogram,
    pub z2f: ComplexInterferogram,
}

/// Simulates the phase-modulated scan step by step and demodulates it.
pub fn simulate_downsampled_scan(
    ifm: &Interferometer,
    tau: &[f64],
    modulation: &ModulationConfig,
    noise: &NoiseConfig,
) -> Result<DownsampledScan> {
    modulation.validate()?;
    noise.validate()?;
    let offsets = jitter_offsets(tau.len(), noise.phase_jitter_sigma, noise.seed);
    let omega_r = ifm.config().omega_r;
    let i2 = ifm.rate_2f_integrand();
    let steps: Vec<(f64, LockinOutput, LockinOutput)> = tau
        .par_iter()
        .enumerate()
        .map(|(k, &t)| {
            let rates = ifm.harmonics_with(t, i2);
            let ts = synthesize_timeseries(&rates, modulation, noise, k, offsets[k])?;
            Ok((ts.mean(), ts.lockin(1, omega_r)?, ts.lockin(2, omega_r)?))
        })
        .collect::<Result<_>>()?;
    Ok(DownsampledScan {
        a0f: Interferogram::new(
            tau.to_vec(),
            steps.iter().map(|s| s.0).collect(),
            InterferogramKind::Comp0f,
        )?,
        z1f: ComplexInterferogram::new(tau.to_vec(), steps.iter().map(|s| s.1.z()).collect(), Harmonic::Z1f)?,
        z2f: ComplexInterferogram::new(tau.to_vec(), steps.iter().map(|s| s.2.z()).collect(), Harmonic::Z2f)?,
    })
}

/// Fully-sampled scan (sweep off) with drift and counting noise; one sample
/// per delay step.
pub fn simulate_fully_sampled_scan(
    ifm: &Interferometer,
    tau: &[f64],
    noise: &NoiseConfig,
) -> Result<Interferogram> {
    noise.validate()?;
    let offsets = jitter_offsets(tau.len(), noise.phase_jitter_sigma, noise.seed);
    let scale = noise.mean_counts / 2.0;
    let values = tau
        .par_iter()
        .enumerate()
        .map(|(k, &t)| {
            let rate = ifm.rate_full(t, offsets[k]);
            if noise.poisson {
                poisson_resample(rate, scale, &mut step_rng(noise.seed, k))
            } else {
                rate
            }
        })
        .collect();
    Interferogram::new(tau.to_vec(), values, InterferogramKind::FullySampled)
}
