use num_complex::Complex64;
use rayon::prelude::*;

use super::{Interferogram, InterferogramKind, MziConfig};
use crate::error::{invalid, Result};
use crate::media::TransferFunction;
use crate::spectra::Spectrum;

/// The four forward transfer amplitudes of the interferometer at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transfer {
    pub da: Complex64,
    pub db: Complex64,
    pub ca: Complex64,
    pub cb: Complex64,
}

impl Transfer {
    pub(crate) fn new(eta: Complex64, omega: f64, tau: f64, phi_1: f64, phi_2: f64, r: f64, t: f64) -> Self {
        let sample = eta * Complex64::cis(phi_2);
        let delay = Complex64::cis(omega * tau + phi_1);
        Self {
            da: r * t * (sample + delay),
            db: -r * r * sample + t * t * delay,
            ca: t * t * sample - r * r * delay,
            cb: -r * t * (sample + delay),
        }
    }
}

/// Amplitudes of the two HOM-like and two N00N-like pathways that carry a
/// photon pair from input A to output D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathwayTerms {
    /// Pair split; the photon at `ω̃` is delayed.
    pub i_h: Complex64,
    /// Pair split; the photon at `ω` is delayed.
    pub ii_h: Complex64,
    /// Both photons through the sample arm.
    pub iii_n: Complex64,
    /// Both photons through the delay arm.
    pub iv_n: Complex64,
}

impl PathwayTerms {
    pub fn sum(&self) -> Complex64 {
        self.i_h + self.ii_h + self.iii_n + self.iv_n
    }
}

/// Pathway decomposition of `g_da(ω) g_da(ω̃)` using the static arm phases of
/// `cfg`. Both frequencies must be grid samples.
pub fn pathway_terms(
    eta: &TransferFunction,
    cfg: &MziConfig,
    omega: f64,
    omega_tilde: f64,
    tau: f64,
) -> Result<PathwayTerms> {
    let e = eta.at(omega)?;
    let et = eta.at(omega_tilde)?;
    let k = cfg.refl_r * cfg.refl_r * cfg.trans_t * cfg.trans_t;
    let split = Complex64::cis(cfg.phi_1 + cfg.phi_2);
    Ok(PathwayTerms {
        i_h: k * e * Complex64::cis(omega_tilde * tau) * split,
        ii_h: k * et * Complex64::cis(omega * tau) * split,
        iii_n: k * e * et * Complex64::cis(2.0 * cfg.phi_2),
        iv_n: k * Complex64::cis((omega + omega_tilde) * tau + 2.0 * cfg.phi_1),
    })
}

/// Transfer amplitudes at a grid frequency using the static arm phases.
pub fn mzi_transfer(
    eta: &TransferFunction,
    cfg: &MziConfig,
    omega: f64,
    tau: f64,
) -> Result<Transfer> {
    let e = eta.at(omega)?;
    Ok(Transfer::new(
        e,
        omega,
        tau,
        cfg.phi_1,
        cfg.phi_2,
        cfg.refl_r,
        cfg.trans_t,
    ))
}

/// 0f value and complex 1f/2f integrands at one delay.
///
/// The fully-sampled rate at relative sweep phase `Δφ` is
/// `r0f + 2Re[e^{iΔ} i1] + Re[e^{-i(2ω0τ − 2Δ)} i2]`, with `Δ = Δφ` plus the
/// static phase difference of the arms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicRates {
    pub tau: f64,
    pub omega_0: f64,
    pub static_phase: f64,
    pub r0f: f64,
    pub i1: Complex64,
    pub i2: Complex64,
}

impl HarmonicRates {
    pub fn rate_1f(&self, delta_phi: f64) -> f64 {
        let d = self.static_phase + delta_phi;
        2.0 * (Complex64::cis(d) * self.i1).re
    }

    pub fn rate_2f(&self, delta_phi: f64) -> f64 {
        let d = self.static_phase + delta_phi;
        (Complex64::cis(2.0 * d - 2.0 * self.omega_0 * self.tau) * self.i2).re
    }

    pub fn at_phase(&self, delta_phi: f64) -> f64 {
        self.r0f + self.rate_1f(delta_phi) + self.rate_2f(delta_phi)
    }
}

/// Sample response, pair spectrum and interferometer settings sharing one grid.
#[derive(Debug, Clone)]
pub struct Interferometer<'a> {
    eta: &'a TransferFunction,
    spectrum: &'a Spectrum,
    cfg: MziConfig,
    /// Quadrature weight times `S(ω_i)`.
    weights: Vec<f64>,
    /// Same, symmetrized under `ω ↔ 2ω0 − ω`.
    sym_weights: Vec<f64>,
}

impl<'a> Interferometer<'a> {
    pub fn new(eta: &'a TransferFunction, spectrum: &'a Spectrum, cfg: &MziConfig) -> Result<Self> {
        cfg.validate()?;
        let grid = spectrum.grid();
        eta.grid().ensure_matches(grid)?;
        if (cfg.omega_p - 2.0 * grid.omega_0()).abs() > 1e-9 * cfg.omega_p {
            return Err(invalid(
                "omega_p",
                format!(
                    "pump {} rad/fs must equal twice the grid center {} rad/fs",
                    cfg.omega_p,
                    grid.omega_0()
                ),
            ));
        }
        let weights: Vec<f64> = (0..grid.len())
            .map(|i| grid.weight(i) * spectrum.values()[i])
            .collect();
        let sym_weights = (0..grid.len())
            .map(|i| 0.5 * (weights[i] + weights[grid.conjugate(i)]))
            .collect();
        Ok(Self {
            eta,
            spectrum,
            cfg: *cfg,
            weights,
            sym_weights,
        })
    }

    pub fn config(&self) -> &MziConfig {
        &self.cfg
    }

    pub fn eta(&self) -> &TransferFunction {
        self.eta
    }

    pub fn spectrum(&self) -> &Spectrum {
        self.spectrum
    }

    pub fn omega_0(&self) -> f64 {
        self.spectrum.grid().omega_0()
    }

    pub fn transfer(&self, omega: f64, tau: f64) -> Result<Transfer> {
        mzi_transfer(self.eta, &self.cfg, omega, tau)
    }

    pub fn pathway_terms(&self, omega: f64, omega_tilde: f64, tau: f64) -> Result<PathwayTerms> {
        pathway_terms(self.eta, &self.cfg, omega, omega_tilde, tau)
    }

    /// `g_da` on every grid sample with the sample-arm phase advanced by `delta_phi`.
    fn g_da_all(&self, tau: f64, delta_phi: f64) -> Vec<Complex64> {
        let grid = self.spectrum.grid();
        let (r, t) = (self.cfg.refl_r, self.cfg.trans_t);
        let phi_2 = self.cfg.phi_2 + delta_phi;
        (0..grid.len())
            .map(|i| Transfer::new(self.eta.values()[i], grid.omega(i), tau, self.cfg.phi_1, phi_2, r, t).da)
            .collect()
    }

    /// Fully-sampled normalized rate, evaluated directly from
    /// `|g_da(ω) g_da(2ω0 − ω)|²` integrated against the spectrum.
    pub fn rate_full(&self, tau: f64, delta_phi: f64) -> f64 {
        let grid = self.spectrum.grid();
        let g = self.g_da_all(tau, delta_phi);
        let rt2 = (self.cfg.refl_r * self.cfg.trans_t).powi(2);
        let sum: f64 = (0..grid.len())
            .map(|i| (g[i] * g[grid.conjugate(i)]).norm_sqr() * self.weights[i])
            .sum();
        sum / (2.0 * rt2 * rt2)
    }

    /// Phase-averaged (0f) rate.
    pub fn rate_0f(&self, tau: f64) -> f64 {
        let grid = self.spectrum.grid();
        let eta = self.eta.values();
        (0..grid.len())
            .map(|i| {
                let j = grid.conjugate(i);
                let (e, et) = (eta[i], eta[j]);
                let (a, b) = (e.norm_sqr(), et.norm_sqr());
                let stat = 0.5 * (a + b + a * b + 1.0);
                let dw = grid.omega(j) - grid.omega(i);
                let interf = (e * et.conj() * Complex64::cis(dw * tau)).re;
                (stat + interf) * self.weights[i]
            })
            .sum()
    }

    /// `∫dω η(ω){|η(2ω0−ω)|² + 1} e^{-iωτ} S(ω)`; the 1f rate is
    /// `2Re[e^{iΔφ} ·]` of this.
    pub fn rate_1f_integrand(&self, tau: f64) -> Complex64 {
        self.one_photon_integral(tau, 0.0)
    }

    /// `∫dω η(ω) η(2ω0−ω) S(ω)`, independent of delay.
    pub fn rate_2f_integrand(&self) -> Complex64 {
        let grid = self.spectrum.grid();
        let eta = self.eta.values();
        (0..grid.len())
            .map(|i| eta[i] * eta[grid.conjugate(i)] * self.weights[i])
            .sum()
    }

    /// `∫dω η(ω){1 + |η(2ω0−ω)|²} e^{-i(ω − ω_shift)τ} S(ω)`.
    pub(crate) fn one_photon_integral(&self, tau: f64, omega_shift: f64) -> Complex64 {
        let grid = self.spectrum.grid();
        let eta = self.eta.values();
        (0..grid.len())
            .map(|i| {
                let j = grid.conjugate(i);
                let amp = eta[i] * (1.0 + eta[j].norm_sqr());
                amp * Complex64::cis(-(grid.omega(i) - omega_shift) * tau) * self.sym_weights[i]
            })
            .sum()
    }

    pub fn harmonics(&self, tau: f64) -> HarmonicRates {
        self.harmonics_with(tau, self.rate_2f_integrand())
    }

    pub(crate) fn harmonics_with(&self, tau: f64, i2: Complex64) -> HarmonicRates {
        HarmonicRates {
            tau,
            omega_0: self.omega_0(),
            static_phase: self.cfg.static_phase(),
            r0f: self.rate_0f(tau),
            i1: self.rate_1f_integrand(tau),
            i2,
        }
    }

    /// Fully-sampled scan at fixed relative phase.
    pub fn fully_sampled(&self, tau: &[f64], delta_phi: f64) -> Result<Interferogram> {
        let values = tau.par_iter().map(|&t| self.rate_full(t, delta_phi)).collect();
        Interferogram::new(tau.to_vec(), values, InterferogramKind::FullySampled)
    }

    /// 0f scan.
    pub fn sweep_0f(&self, tau: &[f64]) -> Result<Interferogram> {
        let values = tau.par_iter().map(|&t| self.rate_0f(t)).collect();
        Interferogram::new(tau.to_vec(), values, InterferogramKind::Comp0f)
    }
}
