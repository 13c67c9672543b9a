//! Sample transfer functions `η(ω)`.
//!
//! Three media are provided: the empty arm, a lossless dispersive slab and a
//! notch filter whose spectral phase follows from its transmission through
//! the minimum-phase (log-Hilbert) Kramers-Kronig construction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fourier::{edge_extend, to_frequency, to_time};
use crate::spectra::FrequencyGrid;

/// Lower bound applied to `|η|` before taking its logarithm.
pub const MAGNITUDE_FLOOR: f64 = 1e-6;

/// Padding factor of the grid on which Hilbert transforms and impulse
/// responses are evaluated.
pub const EXTENSION_FACTOR: usize = 4;

/// Complex, dimensionless sample response on a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferFunction {
    grid: FrequencyGrid,
    values: Vec<Complex64>,
}

impl TransferFunction {
    /// Wraps arbitrary samples. Rejects responses with gain above unity.
    pub fn from_values(grid: FrequencyGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.norm() <= 1.0 + 1e-12)) {
            return Err(invalid(
                "values",
                format!("|η| = {} exceeds 1; a passive medium cannot amplify", v.norm()),
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn magnitude(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn phase(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.arg()).collect()
    }

    /// `η` at an absolute frequency that must lie on the grid.
    pub fn at(&self, omega: f64) -> Result<Complex64> {
        Ok(self.values[self.grid.index_of(omega)?])
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::new(1.0, 0.0))
    }
}

/// The empty sample arm, `η ≡ 1`.
pub fn eta_identity(grid: &FrequencyGrid) -> TransferFunction {
    TransferFunction {
        grid: *grid,
        values: vec![Complex64::new(1.0, 0.0); grid.len()],
    }
}

/// Taylor coefficients of the propagation constant of a lossless slab,
/// `k(ω) ≈ α(ω−ω0) + β(ω−ω0)² + γ(ω−ω0)³`.
///
/// `β` is half the group-velocity dispersion: `GVD = k″ = 2β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabParams {
    /// Thickness `L` in mm.
    pub length_mm: f64,
    /// Inverse group velocity `α` relative to the reference arm, fs/mm.
    pub inv_group_velocity: f64,
    /// `β = k″/2` in fs²/mm.
    pub half_gvd: f64,
    /// Third-order coefficient `γ` in fs³/mm.
    pub third_order: f64,
}

/// Group-velocity dispersion of crystalline quartz (ordinary axis) near 532 nm, fs²/mm.
pub const QUARTZ_GVD_FS2_PER_MM: f64 = 75.970;

impl SlabParams {
    /// 30.8 mm of quartz with the group delay compensated (`α = 0`).
    pub fn quartz() -> Self {
        Self {
            length_mm: 30.8,
            inv_group_velocity: 0.0,
            half_gvd: 0.5 * QUARTZ_GVD_FS2_PER_MM,
            third_order: 0.0,
        }
    }

    pub fn gvd(&self) -> f64 {
        2.0 * self.half_gvd
    }

    /// Group-delay dispersion `βL` in fs².
    pub fn gdd(&self) -> f64 {
        self.half_gvd * self.length_mm
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length_mm.is_finite() && self.length_mm > 0.0) {
            return Err(invalid("length_mm", format!("must be positive, got {}", self.length_mm)));
        }
        for (name, v) in [
            ("inv_group_velocity", self.inv_group_velocity),
            ("half_gvd", self.half_gvd),
            ("third_order", self.third_order),
        ] {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        Ok(())
    }

    /// Spectral phase `k(ω)L` at detuning `x = ω − ω0`.
    pub fn phase(&self, x: f64) -> f64 {
        ((self.third_order * x + self.half_gvd) * x + self.inv_group_velocity) * x * self.length_mm
    }
}

/// Lossless slab `η(ω) = exp{i k(ω) L}`.
pub fn eta_slab(grid: &FrequencyGrid, p: &SlabParams) -> Result<TransferFunction> {
    p.validate()?;
    let values = (0..grid.len())
        .map(|i| Complex64::from_polar(1.0, p.phase(grid.detuning(i))))
        .collect();
    Ok(TransferFunction {
        grid: *grid,
        values,
    })
}

/// Notch filter transmission `|η| = 1/2 + (1/π) arctan[s((ω−ω_n)² − w²)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NotchParams {
    /// Center `ω_n`, rad/fs.
    pub omega_n: f64,
    /// Half-width `w`, rad/fs.
    pub width: f64,
    /// Steepness `s`, fs²/rad².
    pub steepness: f64,
}

impl NotchParams {
    /// ω_n = 3.527e15 rad/s, w = 5.285e13 rad/s, s = 1e-16 s²/rad², in fs units.
    pub fn measured_filter() -> Self {
        Self {
            omega_n: 3.527,
            width: 0.05285,
            steepness: 1e14,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_n.is_finite() && self.omega_n > 0.0) {
            return Err(invalid("omega_n", "must be positive"));
        }
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(invalid("width", format!("must be positive, got {}", self.width)));
        }
        if !(self.steepness.is_finite() && self.steepness > 0.0) {
            return Err(invalid("steepness", format!("must be positive, got {}", self.steepness)));
        }
        Ok(())
    }

    pub fn magnitude_at(&self, omega: f64) -> f64 {
        let x = omega - self.omega_n;
        let arg = self.steepness * (x * x - self.width * self.width);
        (0.5 + arg.atan() / std::f64::consts::PI).clamp(0.0, 1.0)
    }
}

pub fn notch_magnitude(grid: &FrequencyGrid, p: &NotchParams) -> Vec<f64> {
    (0..grid.len()).map(|i| p.magnitude_at(grid.omega(i))).collect()
}

/// Minimum-phase spectral phase for a transmission magnitude.
///
/// `ln|η|` is extended by edge repetition to [`EXTENSION_FACTOR`] times the
/// grid, transformed to the time (cepstral) domain, folded onto non-negative
/// times and transformed back; the imaginary part on the working grid is the
/// phase. The resulting `η = |η|e^{iφ}` has a causal impulse response under the
/// `e^{-iωt}` field convention.
pub fn kramers_kronig_phase(magnitude: &[f64], grid: &FrequencyGrid) -> Result<Vec<f64>> {
    if magnitude.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "{} magnitudes for a {}-point grid",
            magnitude.len(),
            grid.len()
        )));
    }
    if grid.len() < 64 {
        return Err(invalid("grid", format!("need at least 64 points, got {}", grid.len())));
    }
    if magnitude.iter().all(|&m| m <= 0.0) {
        return Err(Error::ZeroSignal);
    }
    if let Some(m) = magnitude.iter().find(|m| !m.is_finite() || **m < 0.0) {
        return Err(invalid("magnitude", format!("{m} is not a valid transmission")));
    }
    let log_mag: Vec<f64> = magnitude.iter().map(|&m| m.max(MAGNITUDE_FLOOR).ln()).collect();
    let (ext, offset) = edge_extend(&log_mag, EXTENSION_FACTOR);
    let mut cep: Vec<Complex64> = ext.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    to_time(&mut cep);
    let n = cep.len();
    for c in &mut cep[1..n / 2] {
        *c *= 2.0;
    }
    for c in &mut cep[n / 2 + 1..] {
        *c = Complex64::new(0.0, 0.0);
    }
    to_frequency(&mut cep);
    Ok(cep[offset..offset + grid.len()].iter().map(|c| c.im).collect())
}

/// Notch filter with Kramers-Kronig-consistent phase.
pub fn eta_notch(grid: &FrequencyGrid, p: &NotchParams) -> Result<TransferFunction> {
    p.validate()?;
    let mag = notch_magnitude(grid, p);
    let phase = kramers_kronig_phase(&mag, grid)?;
    let values = mag
        .iter()
        .zip(&phase)
        .map(|(&m, &ph)| Complex64::from_polar(m, ph))
        .collect();
    Ok(TransferFunction {
        grid: *grid,
        values,
    })
}

/// Minimum-phase response for an arbitrary transmission magnitude.
pub fn eta_minimum_phase(grid: &FrequencyGrid, magnitude: &[f64]) -> Result<TransferFunction> {
    let phase = kramers_kronig_phase(magnitude, grid)?;
    let values = magnitude
        .iter()
        .zip(&phase)
        .map(|(&m, &ph)| Complex64::from_polar(m, ph))
        .collect();
    TransferFunction::from_values(*grid, values)
}

/// Width of the Gaussian probe spectrum as a fraction of the grid span.
const PROBE_WIDTH: f64 = 1.0 / 12.0;
/// Probe-pulse durations before `t = 0` that still count as simultaneous.
const PROBE_GUARD: f64 = 6.0;

/// Response of `η` to a Gaussian probe pulse spanning the grid band, zero
/// padded to [`EXTENSION_FACTOR`] times the grid. Index `k < N/2` holds time
/// `k·dt`, index `k ≥ N/2` the negative time `(k − N)·dt`.
pub fn probe_response(eta: &TransferFunction) -> (Vec<Complex64>, f64) {
    let grid = eta.grid();
    let sigma = PROBE_WIDTH * grid.span();
    let n = grid.len() * EXTENSION_FACTOR;
    let offset = (n - grid.len()) / 2;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (i, v) in eta.values().iter().enumerate() {
        let x = grid.detuning(i);
        buf[offset + i] = v * (-0.5 * (x / sigma).powi(2)).exp();
    }
    to_time(&mut buf);
    let dt = 2.0 * std::f64::consts::PI / (n as f64 * grid.step());
    (buf, dt)
}

/// Fraction of the probe-response energy arriving earlier than the probe
/// itself could (more than six probe durations before `t = 0`).
pub fn anticausal_energy_fraction(eta: &TransferFunction) -> f64 {
    let (h, dt) = probe_response(eta);
    let n = h.len();
    let guard = PROBE_GUARD / (PROBE_WIDTH * eta.grid().span());
    let total: f64 = h.iter().map(|v| v.norm_sqr()).sum();
    let anti: f64 = (n / 2..n)
        .filter(|&k| (n - k) as f64 * dt > guard)
        .map(|k| h[k].norm_sqr())
        .sum();
    anti / total
}
