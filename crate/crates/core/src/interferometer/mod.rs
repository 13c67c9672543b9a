//! Mach-Zehnder transfer amplitudes, two-photon pathway terms and the
//! coincidence rates of two photons exiting the same output port.
//!
//! Rates are reported in normalized form `R̃ = R / (2r⁴t⁴N)`, where the
//! proportionality constant `N` (detector window and efficiencies) is never
//! needed. With no sample and a 50/50 interferometer the fully-sampled rate
//! at zero delay is 8.

mod brute_force;
mod closed_form;
mod rates;

pub use brute_force::{brute_force_rate, JointSpectralAmplitude};
pub use closed_form::{closed_form_rates_gaussian, GaussianRates};
pub use rates::{pathway_terms, HarmonicRates, Interferometer, PathwayTerms, Transfer};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Beam splitters, static arm phases, pump and reference frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MziConfig {
    /// Real reflection amplitude `r` of both beam splitters.
    pub refl_r: f64,
    /// Real transmission amplitude `t` of both beam splitters.
    pub trans_t: f64,
    /// Static phase of the delay arm, rad.
    pub phi_1: f64,
    /// Static phase of the sample arm, rad.
    pub phi_2: f64,
    /// Pump angular frequency `ωp = 2ω0`, rad/fs.
    pub omega_p: f64,
    /// Reference-laser angular frequency `ω_R`, rad/fs.
    pub omega_r: f64,
}

impl MziConfig {
    /// 50/50 beam splitters, zero static phases.
    pub fn balanced(omega_0: f64, omega_r: f64) -> Self {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            refl_r: a,
            trans_t: a,
            phi_1: 0.0,
            phi_2: 0.0,
            omega_p: 2.0 * omega_0,
            omega_r,
        }
    }

    /// Beam splitters with power reflectivity `r²`.
    pub fn with_reflectivity(mut self, r_squared: f64) -> Self {
        self.refl_r = r_squared.sqrt();
        self.trans_t = (1.0 - r_squared).sqrt();
        self
    }

    pub fn omega_0(&self) -> f64 {
        0.5 * self.omega_p
    }

    /// Relative static phase `φ2 − φ1`.
    pub fn static_phase(&self) -> f64 {
        self.phi_2 - self.phi_1
    }

    pub fn validate(&self) -> Result<()> {
        let (r, t) = (self.refl_r, self.trans_t);
        if !(r > 0.0 && t > 0.0 && r.is_finite() && t.is_finite()) {
            return Err(invalid("refl_r/trans_t", "amplitudes must be positive"));
        }
        if (r * r + t * t - 1.0).abs() > 1e-12 {
            return Err(invalid(
                "refl_r/trans_t",
                format!("r² + t² = {} but lossless splitters need 1", r * r + t * t),
            ));
        }
        if !(self.omega_p.is_finite() && self.omega_p > 0.0) {
            return Err(invalid("omega_p", "must be positive"));
        }
        if !(self.omega_r.is_finite() && self.omega_r > 0.0) {
            return Err(invalid("omega_r", "must be positive"));
        }
        if !(self.phi_1.is_finite() && self.phi_2.is_finite()) {
            return Err(invalid("phi", "arm phases must be finite"));
        }
        Ok(())
    }
}

/// Uniform delay axis `start + k·step`, `k = 0..len`.
pub fn uniform_axis(start: f64, step: f64, len: usize) -> Vec<f64> {
    (0..len).map(|k| start + k as f64 * step).collect()
}

/// Uniform delay axis covering `[-half_span, half_span]` with a sample at 0.
pub fn symmetric_axis(half_span: f64, step: f64) -> Vec<f64> {
    let k = (half_span / step).floor() as i64;
    (-k..=k).map(|j| j as f64 * step).collect()
}

/// Step of a uniform axis, or an error describing the irregularity.
pub fn axis_step(tau: &[f64]) -> Result<f64> {
    if tau.len() < 2 {
        return Err(Error::NonUniformAxis(format!("{} samples", tau.len())));
    }
    let step = (tau[tau.len() - 1] - tau[0]) / (tau.len() - 1) as f64;
    if !(step > 0.0) {
        return Err(Error::NonUniformAxis("axis is not increasing".into()));
    }
    for (k, w) in tau.windows(2).enumerate() {
        if ((w[1] - w[0]) - step).abs() > 1e-6 * step {
            return Err(Error::NonUniformAxis(format!(
                "step {} at index {k} differs from mean step {step}",
                w[1] - w[0]
            )));
        }
    }
    Ok(step)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InterferogramKind {
    /// Total rate with the arm phases held fixed.
    FullySampled,
    /// Phase-averaged (0f) component.
    Comp0f,
}

/// Real-valued rate versus delay.
#[derive(Debug, Clone, PartialEq)]
pub struct Interferogram {
    pub tau: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: InterferogramKind,
}

impl Interferogram {
    pub fn new(tau: Vec<f64>, values: Vec<f64>, kind: InterferogramKind) -> Result<Self> {
        axis_step(&tau)?;
        if tau.len() != values.len() {
            return Err(invalid("values", "length differs from the delay axis"));
        }
        Ok(Self { tau, values, kind })
    }

    pub fn step(&self) -> f64 {
        axis_step(&self.tau).expect("validated at construction")
    }
}

/// Demodulated harmonic of the phase sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Harmonic {
    Z1f,
    Z2f,
}

impl Harmonic {
    pub fn order(self) -> u32 {
        match self {
            Harmonic::Z1f => 1,
            Harmonic::Z2f => 2,
        }
    }
}

/// Complex down-sampled signal `X + iY` versus delay.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexInterferogram {
    pub tau: Vec<f64>,
    pub values: Vec<Complex64>,
    pub harmonic: Harmonic,
}

impl ComplexInterferogram {
    pub fn new(tau: Vec<f64>, values: Vec<Complex64>, harmonic: Harmonic) -> Result<Self> {
        axis_step(&tau)?;
        if tau.len() != values.len() {
            return Err(invalid("values", "length differs from the delay axis"));
        }
        Ok(Self {
            tau,
            values,
            harmonic,
        })
    }

    pub fn step(&self) -> f64 {
        axis_step(&self.tau).expect("validated at construction")
    }
}
