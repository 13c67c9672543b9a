//! Two-dimensional joint-spectral-amplitude evaluation of the coincidence
//! rate, used as an oracle for the narrow-band-pump rates.

use num_complex::Complex64;

use super::{rates::Transfer, MziConfig};
use crate::error::{invalid, Error, Result};
use crate::media::TransferFunction;
use crate::spectra::{FrequencyGrid, Spectrum};

/// `ψ(ω, ω̃)` on `grid × grid`, row-major with `ω` as the row index.
#[derive(Debug, Clone)]
pub struct JointSpectralAmplitude {
    grid: FrequencyGrid,
    values: Vec<Complex64>,
}

impl JointSpectralAmplitude {
    pub const MAX_POINTS: usize = 512;

    pub fn from_fn(grid: &FrequencyGrid, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let n = grid.len();
        if n > Self::MAX_POINTS {
            return Err(invalid(
                "grid",
                format!("{n} points per axis exceeds the {} limit", Self::MAX_POINTS),
            ));
        }
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(grid.omega(i), grid.omega(j)));
            }
        }
        Ok(Self { grid: *grid, values })
    }

    /// `exp[-(ω+ω̃−ωp)²/σp²] · exp[-(ω−ω̃)²/σ₋²]`.
    pub fn double_gaussian(
        grid: &FrequencyGrid,
        omega_p: f64,
        sigma_p: f64,
        sigma_minus: f64,
    ) -> Result<Self> {
        if !(sigma_p > 0.0 && sigma_minus > 0.0) {
            return Err(invalid("sigma", "widths must be positive"));
        }
        Self::from_fn(grid, |w, wt| {
            let s = (w + wt - omega_p) / sigma_p;
            let d = (w - wt) / sigma_minus;
            Complex64::new((-s * s - d * d).exp(), 0.0)
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.grid.len() + j]
    }

    /// Multiplies by `e^{iθ(ω)}` on each photon.
    pub fn with_separable_phase(&self, theta: impl Fn(f64) -> f64) -> Self {
        let n = self.grid.len();
        let phases: Vec<Complex64> = (0..n).map(|i| Complex64::cis(theta(self.grid.omega(i)))).collect();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| v * phases[k / n] * phases[k % n])
            .collect();
        Self { grid: self.grid, values }
    }

    /// `ψ(ω, ω̃) + ψ(ω̃, ω)` at `(i, j)`.
    pub fn symmetrized(&self, i: usize, j: usize) -> Complex64 {
        self.get(i, j) + self.get(j, i)
    }

    /// Single-photon marginal `∫dω̃ |ψ_SYM(ω, ω̃)|²`, normalized.
    pub fn marginal_spectrum(&self) -> Result<Spectrum> {
        let n = self.grid.len();
        let values = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.symmetrized(i, j).norm_sqr() * self.grid.weight(j))
                    .sum()
            })
            .collect();
        Spectrum::from_values(self.grid, values)
    }
}

/// Normalized same-port coincidence rate from the full two-photon amplitude
/// `f_dd(ω, ω̃) = g_da(ω) g_da(ω̃) ψ_SYM(ω, ω̃)`, integrated by the 2D
/// trapezoid rule.
///
/// The normalization divides by `∬|ψ_SYM|²`, so that with no sample the
/// phase-averaged rate far from zero delay is 2.
pub fn brute_force_rate(
    psi: &JointSpectralAmplitude,
    tau: f64,
    delta_phi: f64,
    eta: &TransferFunction,
    cfg: &MziConfig,
) -> Result<f64> {
    cfg.validate()?;
    let grid = psi.grid();
    eta.grid().ensure_matches(grid)?;
    let n = grid.len();
    let (r, t) = (cfg.refl_r, cfg.trans_t);
    let g: Vec<Complex64> = (0..n)
        .map(|i| {
            Transfer::new(
                eta.values()[i],
                grid.omega(i),
                tau,
                cfg.phi_1,
                cfg.phi_2 + delta_phi,
                r,
                t,
            )
            .da
        })
        .collect();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let wi = grid.weight(i);
        for j in 0..n {
            let w = wi * grid.weight(j);
            let p = psi.symmetrized(i, j).norm_sqr() * w;
            num += (g[i] * g[j]).norm_sqr() * p;
            den += p;
        }
    }
    if den == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let rt2 = (r * t).powi(2);
    Ok(num / den / (2.0 * rt2 * rt2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::eta_identity;

    #[test]
    fn symmetric_input_doubles_amplitude() {
        let g = FrequencyGrid::new(3.5, 0.6, 64).unwrap();
        let psi = JointSpectralAmplitude::double_gaussian(&g, 7.0, 0.05, 0.2).unwrap();
        for (i, j) in [(3, 9), (20, 43), (31, 32)] {
            assert_eq!(psi.get(i, j), psi.get(j, i));
            let s = psi.symmetrized(i, j);
            assert!((s - 2.0 * psi.get(i, j)).norm() < 1e-15);
            assert!((s.norm_sqr() - 4.0 * psi.get(i, j).norm_sqr()).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let big = FrequencyGrid::new(3.5, 0.6, 1024).unwrap();
        assert!(JointSpectralAmplitude::double_gaussian(&big, 7.0, 0.05, 0.2).is_err());
        let g = FrequencyGrid::new(3.5, 0.6, 64).unwrap();
        let zero = JointSpectralAmplitude::from_fn(&g, |_, _| Complex64::new(0.0, 0.0)).unwrap();
        let cfg = MziConfig::balanced(3.5, 3.0);
        assert!(matches!(
            brute_force_rate(&zero, 0.0, 0.0, &eta_identity(&g), &cfg),
            Err(Error::ZeroSignal)
        ));
        let other = FrequencyGrid::new(3.5, 0.5, 64).unwrap();
        let psi = JointSpectralAmplitude::double_gaussian(&g, 7.0, 0.05, 0.2).unwrap();
        assert!(brute_force_rate(&psi, 0.0, 0.0, &eta_identity(&other), &cfg).is_err());
    }
}
