use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::phase::unwrap_phase;
use crate::error::{invalid, Error, Result};
use crate::fourier::to_frequency;
use crate::interferometer::{axis_step, ComplexInterferogram, Interferogram};

/// Fraction of the maximum magnitude below which the phase is not trusted.
pub const VALID_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    #[default]
    None,
    Hann,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FftConfig {
    pub window: Window,
    /// Zero-pad to the next power of two at least this many times the input length.
    pub zero_pad: usize,
    pub threshold: f64,
    /// Reference-laser frequency used to undo the rotating frame of
    /// demodulated signals, rad/fs.
    pub omega_r: f64,
}

impl Default for FftConfig {
    fn default() -> Self {
        Self {
            window: Window::None,
            zero_pad: 1,
            threshold: VALID_THRESHOLD,
            omega_r: crate::units::wavelength_to_omega(632.8),
        }
    }
}

impl FftConfig {
    pub fn with_omega_r(omega_r: f64) -> Self {
        Self {
            omega_r,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.zero_pad == 0 {
            return Err(invalid("zero_pad", "must be at least 1"));
        }
        if !(self.threshold >= 0.0 && self.threshold < 1.0) {
            return Err(invalid("threshold", format!("must lie in [0, 1), got {}", self.threshold)));
        }
        Ok(())
    }
}

/// Magnitude and unwrapped phase on an absolute frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredSpectrum {
    /// rad/fs, increasing.
    pub omega_axis: Vec<f64>,
    /// Normalized to a maximum of 1 (for transforms) or absolute (for ratios).
    pub magnitude: Vec<f64>,
    /// rad; unwrapped within contiguous valid runs.
    pub phase: Vec<f64>,
    pub valid_mask: Vec<bool>,
    /// Factor removed by the normalization: `|X| = peak · magnitude`.
    pub peak: f64,
    /// Delay removed before transforming, fs.
    pub group_delay_removed: f64,
}

impl RecoveredSpectrum {
    fn from_complex(omega_axis: Vec<f64>, x: Vec<Complex64>, threshold: f64, normalize: bool) -> Result<Self> {
        let abs: Vec<f64> = x.iter().map(|v| v.norm()).collect();
        let max = abs.iter().cloned().fold(0.0, f64::max);
        if !(max > 0.0) {
            return Err(Error::ZeroSignal);
        }
        let peak = if normalize { max } else { 1.0 };
        let magnitude: Vec<f64> = abs.iter().map(|a| a / peak).collect();
        let valid_mask: Vec<bool> = abs.iter().map(|&a| a > threshold * max).collect();
        let wrapped: Vec<f64> = x.iter().map(|v| v.arg()).collect();
        let phase = unwrap_phase(&wrapped, &valid_mask, Some(&magnitude));
        Ok(Self {
            omega_axis,
            magnitude,
            phase,
            valid_mask,
            peak,
            group_delay_removed: 0.0,
        })
    }

    pub fn with_group_delay(mut self, delay: f64) -> Self {
        self.group_delay_removed = delay;
        self
    }

    pub fn len(&self) -> usize {
        self.omega_axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega_axis.is_empty()
    }

    /// Complex value `peak · magnitude · e^{i·phase}`.
    pub fn complex(&self, i: usize) -> Complex64 {
        Complex64::from_polar(self.peak * self.magnitude[i], self.phase[i])
    }

    /// Bin spacing, rad/fs.
    pub fn step(&self) -> f64 {
        self.omega_axis[1] - self.omega_axis[0]
    }

    /// Index of the maximum magnitude.
    pub fn argmax(&self) -> usize {
        (0..self.len())
            .max_by(|&a, &b| self.magnitude[a].total_cmp(&self.magnitude[b]))
            .unwrap_or(0)
    }
}

fn window_weights(window: Window, n: usize) -> Vec<f64> {
    match window {
        Window::None => vec![1.0; n],
        Window::Hann => (0..n)
            .map(|k| 0.5 - 0.5 * (2.0 * PI * k as f64 / (n - 1) as f64).cos())
            .collect(),
    }
}

/// `X(ω_b) = Σ_n z(τ_n) e^{+iω_b τ_n} Δτ` on the centered baseband axis.
fn transform(tau: &[f64], values: &[Complex64], cfg: &FftConfig) -> Result<(Vec<f64>, Vec<Complex64>)> {
    cfg.validate()?;
    let dt = axis_step(tau)?;
    let n_in = values.len();
    let n = (n_in * cfg.zero_pad).next_power_of_two();
    let w = window_weights(cfg.window, n_in);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n_in {
        buf[k] = values[k] * w[k];
    }
    to_frequency(&mut buf);
    let dw = 2.0 * PI / (n as f64 * dt);
    let tau0 = tau[0];
    let half = (n / 2) as i64;
    let mut omega = Vec::with_capacity(n);
    let mut x = Vec::with_capacity(n);
    for j in -half..half {
        let bin = j.rem_euclid(n as i64) as usize;
        let wb = j as f64 * dw;
        omega.push(wb);
        x.push(buf[bin] * Complex64::cis(wb * tau0) * dt);
    }
    Ok((omega, x))
}

/// Spectrum of a demodulated signal. The baseband axis is shifted by
/// `m·ω_R`, so the result is labeled in absolute frequency.
pub fn fft_interferogram(z: &ComplexInterferogram, cfg: &FftConfig) -> Result<RecoveredSpectrum> {
    let (mut omega, x) = transform(&z.tau, &z.values, cfg)?;
    let shift = z.harmonic.order() as f64 * cfg.omega_r;
    for w in &mut omega {
        *w += shift;
    }
    RecoveredSpectrum::from_complex(omega, x, cfg.threshold, true)
}

/// Spectrum of a real interferogram, non-negative frequencies only.
pub fn fft_real_interferogram(ifg: &Interferogram, cfg: &FftConfig) -> Result<RecoveredSpectrum> {
    let values: Vec<Complex64> = ifg.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let (omega, x) = transform(&ifg.tau, &values, cfg)?;
    let start = omega.len() / 2;
    RecoveredSpectrum::from_complex(omega[start..].to_vec(), x[start..].to_vec(), cfg.threshold, true)
}

/// Pointwise ratio of a sample run to a no-sample reference with the same
/// pair spectrum. For the 1f channel this is `η(ω){1 + |η(2ω0−ω)|²}/2`, whose
/// phase is `arg η(ω)`. Only the joint valid mask carries a phase.
pub fn recover_sample_response(
    z1f: &RecoveredSpectrum,
    reference_z1f: &RecoveredSpectrum,
) -> Result<RecoveredSpectrum> {
    if z1f.len() != reference_z1f.len()
        || z1f
            .omega_axis
            .iter()
            .zip(&reference_z1f.omega_axis)
            .any(|(a, b)| (a - b).abs() > 1e-9 * a.abs().max(1.0))
    {
        return Err(Error::GridMismatch("sample and reference frequency axes differ".into()));
    }
    let mask: Vec<bool> = z1f
        .valid_mask
        .iter()
        .zip(&reference_z1f.valid_mask)
        .map(|(a, b)| *a && *b)
        .collect();
    if !mask.iter().any(|&m| m) {
        return Err(Error::NoPeak("sample and reference valid masks do not overlap".into()));
    }
    let ratio: Vec<Complex64> = (0..z1f.len())
        .map(|i| {
            if mask[i] {
                z1f.complex(i) / reference_z1f.complex(i)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let magnitude: Vec<f64> = ratio.iter().map(|r| r.norm()).collect();
    let wrapped: Vec<f64> = ratio.iter().map(|r| r.arg()).collect();
    let ref_mag = &reference_z1f.magnitude;
    let phase = unwrap_phase(&wrapped, &mask, Some(ref_mag));
    Ok(RecoveredSpectrum {
        omega_axis: z1f.omega_axis.clone(),
        magnitude,
        phase,
        valid_mask: mask,
        peak: 1.0,
        group_delay_removed: z1f.group_delay_removed - reference_z1f.group_delay_removed,
    })
}

/// Writes `omega_rad_per_fs,magnitude,phase_rad,valid`.
pub fn write_spectrum_csv<W: Write>(spec: &RecoveredSpectrum, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["omega_rad_per_fs", "magnitude", "phase_rad", "valid"])?;
    for i in 0..spec.len() {
        w.write_record([
            format!("{:.9}", spec.omega_axis[i]),
            format!("{:.9e}", spec.magnitude[i]),
            format!("{:.9}", spec.phase[i]),
            (spec.valid_mask[i] as u8).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
