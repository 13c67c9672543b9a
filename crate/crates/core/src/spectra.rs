//! Frequency grids and entangled-pair power spectra.
//!
//! A [`FrequencyGrid`] is uniform and mirror-symmetric about the degenerate
//! frequency `ω0 = ωp/2`, so the conjugate frequency `2ω0 − ω` of every sample
//! is itself a sample (index `n − 1 − i`). All pair-rate integrals rely on that
//! exact index flip.

use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::units::{omega_to_wavelength, SPEED_OF_LIGHT_NM_PER_FS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    omega_0: f64,
    omega_step: f64,
    n_points: usize,
}

impl FrequencyGrid {
    /// Builds a grid of `n_points` samples spanning `span` rad/fs, centered on
    /// `omega_0`.
    ///
    /// With an even point count the two central samples straddle `omega_0` at
    /// `±step/2`; every sample `i` pairs with sample `n − 1 − i` so that
    /// `ω_i + ω_{n−1−i} = 2·omega_0`.
    pub fn new(omega_0: f64, span: f64, n_points: usize) -> Result<Self> {
        if !(omega_0.is_finite() && omega_0 > 0.0) {
            return Err(invalid("omega_0", format!("must be positive, got {omega_0}")));
        }
        if !(span.is_finite() && span > 0.0) {
            return Err(invalid("span", format!("must be positive, got {span}")));
        }
        if n_points < 2 || n_points % 2 != 0 {
            return Err(invalid(
                "n_points",
                format!("must be even and at least 2, got {n_points}"),
            ));
        }
        if span / 2.0 >= omega_0 {
            return Err(invalid("span", "grid would reach non-positive frequencies"));
        }
        Ok(Self {
            omega_0,
            omega_step: span / (n_points - 1) as f64,
            n_points,
        })
    }

    pub fn omega_0(&self) -> f64 {
        self.omega_0
    }

    pub fn step(&self) -> f64 {
        self.omega_step
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    pub fn span(&self) -> f64 {
        self.omega_step * (self.n_points - 1) as f64
    }

    pub fn omega_min(&self) -> f64 {
        self.omega(0)
    }

    pub fn omega_max(&self) -> f64 {
        self.omega(self.n_points - 1)
    }

    /// Detuning `ω_i − ω0`. Exactly antisymmetric under `i → n − 1 − i`.
    #[inline]
    pub fn detuning(&self, i: usize) -> f64 {
        (i as f64 - 0.5 * (self.n_points - 1) as f64) * self.omega_step
    }

    #[inline]
    pub fn omega(&self, i: usize) -> f64 {
        self.omega_0 + self.detuning(i)
    }

    /// Index of the conjugate frequency `2ω0 − ω_i`.
    #[inline]
    pub fn conjugate(&self, i: usize) -> usize {
        self.n_points - 1 - i
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.omega(i)).collect()
    }

    /// Grid index of `omega`, accepting rounding noise up to `1e-6` of a step.
    pub fn index_of(&self, omega: f64) -> Result<usize> {
        let pos = (omega - self.omega_min()) / self.omega_step;
        let idx = pos.round();
        if !(0.0..self.n_points as f64).contains(&idx) || (pos - idx).abs() > 1e-6 {
            return Err(Error::OffGrid { omega });
        }
        Ok(idx as usize)
    }

    /// Trapezoid-rule quadrature weight of sample `i`.
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n_points {
            0.5 * self.omega_step
        } else {
            self.omega_step
        }
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        values
            .iter()
            .enumerate()
            .map(|(i, v)| v * self.weight(i))
            .sum()
    }

    /// True when both grids describe the same samples.
    pub fn matches(&self, other: &FrequencyGrid) -> bool {
        self.n_points == other.n_points
            && (self.omega_step - other.omega_step).abs() <= 1e-12 * self.omega_step
            && (self.omega_0 - other.omega_0).abs() <= 1e-12 * self.omega_0
    }

    pub(crate) fn ensure_matches(&self, other: &FrequencyGrid) -> Result<()> {
        if self.matches(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{} points at step {} about {} vs {} points at step {} about {}",
                self.n_points,
                self.omega_step,
                self.omega_0,
                other.n_points,
                other.omega_step,
                other.omega_0
            )))
        }
    }
}

/// Convenience constructor mirroring [`FrequencyGrid::new`].
pub fn make_grid(omega_0: f64, span: f64, n_points: usize) -> Result<FrequencyGrid> {
    FrequencyGrid::new(omega_0, span, n_points)
}

/// Pair power spectrum `S(ω)` sampled on a grid, in 1/(rad/fs).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: FrequencyGrid,
    values: Vec<f64>,
}

impl Spectrum {
    /// Wraps raw non-negative samples and normalizes them to unit area.
    pub fn from_values(grid: FrequencyGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(invalid("values", format!("spectral density {v} is not a finite non-negative number")));
        }
        let mut s = Self { grid, values };
        s.normalize()?;
        Ok(s)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn integral(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    /// Rescales to unit trapezoid integral.
    pub fn normalize(&mut self) -> Result<()> {
        let area = self.integral();
        if area <= 0.0 {
            return Err(Error::ZeroSignal);
        }
        for v in &mut self.values {
            *v /= area;
        }
        Ok(())
    }

    /// Full width at half maximum (rad/fs) by linear interpolation.
    pub fn fwhm(&self) -> f64 {
        let (imax, &peak) = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty spectrum");
        let half = 0.5 * peak;
        let crossing = |range: &mut dyn Iterator<Item = usize>| -> f64 {
            let mut prev = imax;
            for i in range {
                if self.values[i] < half {
                    let (a, b) = (self.values[prev], self.values[i]);
                    let t = (a - half) / (a - b);
                    return self.grid.omega(prev) + t * (self.grid.omega(i) - self.grid.omega(prev));
                }
                prev = i;
            }
            self.grid.omega(prev)
        };
        let right = crossing(&mut (imax + 1..self.grid.len()));
        let left = crossing(&mut (0..imax).rev());
        right - left
    }
}

fn check_fwhm(grid: &FrequencyGrid, fwhm_omega: f64) -> Result<()> {
    if !(fwhm_omega.is_finite() && fwhm_omega > 0.0) {
        return Err(invalid("fwhm_omega", format!("must be positive, got {fwhm_omega}")));
    }
    if grid.span() < 4.0 * fwhm_omega {
        warn!(
            "grid span {:.4} rad/fs is below 4×FWHM ({:.4} rad/fs); the truncated spectrum will not integrate like the analytic one",
            grid.span(),
            4.0 * fwhm_omega
        );
    }
    Ok(())
}

/// Gaussian spectrum `S(ω) = (πα²)^{-1/2} exp[-(ω−ω0)²/α²]` with
/// `α = FWHM / (2√ln2)`, normalized on the grid.
pub fn gaussian_spectrum(grid: &FrequencyGrid, fwhm_omega: f64) -> Result<Spectrum> {
    super_gaussian_spectrum(grid, fwhm_omega, 1)
}

/// Gaussian `1/e` half-width α for a given FWHM.
pub fn gaussian_alpha(fwhm_omega: f64) -> f64 {
    fwhm_omega / (2.0 * 2f64.ln().sqrt())
}

/// Super-Gaussian `exp[-((ω−ω0)²/a²)^order]` whose FWHM equals `fwhm_omega`.
pub fn super_gaussian_spectrum(
    grid: &FrequencyGrid,
    fwhm_omega: f64,
    order: u32,
) -> Result<Spectrum> {
    check_fwhm(grid, fwhm_omega)?;
    if order < 1 {
        return Err(invalid("order", "must be at least 1"));
    }
    let p = order as f64;
    // ((fwhm/2)²/a²)^p = ln 2
    let a = 0.5 * fwhm_omega / 2f64.ln().powf(0.5 / p);
    let norm = if order == 1 { 1.0 / (PI * a * a).sqrt() } else { 1.0 };
    let values = (0..grid.len())
        .map(|i| {
            let x = grid.detuning(i) / a;
            norm * (-(x * x).powi(order as i32)).exp()
        })
        .collect();
    Spectrum::from_values(*grid, values)
}

/// Rows read from a `wavelength_nm,counts` file.
#[derive(Debug, Clone)]
pub struct MeasuredSpectrum {
    pub wavelength_nm: Vec<f64>,
    /// Counts per nm, negatives already clamped to zero.
    pub counts: Vec<f64>,
    /// Number of rows whose negative counts were clamped.
    pub clamped: usize,
}

#[derive(Deserialize)]
struct SpectrumRow {
    wavelength_nm: f64,
    counts: f64,
}

/// Parses a two-column CSV with header `wavelength_nm,counts`.
pub fn parse_spectrum_csv<R: Read>(reader: R) -> Result<MeasuredSpectrum> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    {
        let headers = rdr.headers()?;
        let names: Vec<&str> = headers.iter().collect();
        if names != ["wavelength_nm", "counts"] {
            return Err(Error::MalformedSpectrum(format!(
                "expected header `wavelength_nm,counts`, found `{}`",
                names.join(",")
            )));
        }
    }
    let mut out = MeasuredSpectrum {
        wavelength_nm: Vec::new(),
        counts: Vec::new(),
        clamped: 0,
    };
    for (line, row) in rdr.deserialize::<SpectrumRow>().enumerate() {
        let row = row.map_err(|e| Error::MalformedSpectrum(format!("row {}: {e}", line + 2)))?;
        if !(row.wavelength_nm.is_finite() && row.wavelength_nm > 0.0 && row.counts.is_finite()) {
            return Err(Error::MalformedSpectrum(format!(
                "row {}: non-physical values ({}, {})",
                line + 2,
                row.wavelength_nm,
                row.counts
            )));
        }
        let counts = if row.counts < 0.0 {
            warn!(
                "spectrum row {} has negative counts {} at {} nm; clamped to 0",
                line + 2,
                row.counts,
                row.wavelength_nm
            );
            out.clamped += 1;
            0.0
        } else {
            row.counts
        };
        out.wavelength_nm.push(row.wavelength_nm);
        out.counts.push(counts);
    }
    if out.counts.len() < 2 {
        return Err(Error::MalformedSpectrum(format!(
            "need at least two data rows, found {}",
            out.counts.len()
        )));
    }
    Ok(out)
}

impl MeasuredSpectrum {
    /// Converts per-nm counts to a density in angular frequency and resamples
    /// onto `grid` by linear interpolation.
    ///
    /// Counts are taken to be per unit wavelength, so the Jacobian
    /// `|dλ/dω| = λ²/(2πc)` is applied.
    pub fn resample(&self, grid: &FrequencyGrid) -> Result<Spectrum> {
        let mut samples: Vec<(f64, f64)> = self
            .wavelength_nm
            .iter()
            .zip(&self.counts)
            .map(|(&nm, &c)| {
                let omega = 2.0 * PI * SPEED_OF_LIGHT_NM_PER_FS / nm;
                (omega, c * nm * nm / (2.0 * PI * SPEED_OF_LIGHT_NM_PER_FS))
            })
            .collect();
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (lo, hi) = (samples[0].0, samples[samples.len() - 1].0);
        let tol = 1e-9 * grid.omega_0();
        if grid.omega_min() < lo - tol || grid.omega_max() > hi + tol {
            return Err(Error::SpectrumCoverage(format!(
                "grid needs {:.6}..{:.6} rad/fs ({:.3}..{:.3} nm) but the file covers {:.6}..{:.6} rad/fs ({:.3}..{:.3} nm)",
                grid.omega_min(),
                grid.omega_max(),
                omega_to_wavelength(grid.omega_max()),
                omega_to_wavelength(grid.omega_min()),
                lo,
                hi,
                omega_to_wavelength(hi),
                omega_to_wavelength(lo),
            )));
        }
        let mut values = Vec::with_capacity(grid.len());
        let mut j = 0;
        for i in 0..grid.len() {
            let w = grid.omega(i).clamp(lo, hi);
            while j + 2 < samples.len() && samples[j + 1].0 < w {
                j += 1;
            }
            let (w0, v0) = samples[j];
            let (w1, v1) = samples[j + 1];
            let t = if w1 > w0 { (w - w0) / (w1 - w0) } else { 0.0 };
            values.push((v0 + t * (v1 - v0)).max(0.0));
        }
        Spectrum::from_values(*grid, values)
    }
}

/// Loads a measured spectrum (`wavelength_nm,counts`, counts per nm) onto `grid`.
pub fn load_spectrum(path: impl AsRef<Path>, grid: &FrequencyGrid) -> Result<Spectrum> {
    let file = std::fs::File::open(path.as_ref())?;
    parse_spectrum_csv(file)?.resample(grid)
}
