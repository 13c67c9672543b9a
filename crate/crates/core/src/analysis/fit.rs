use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use serde::Serialize;

use super::phase::valid_runs;
use super::spectrum::RecoveredSpectrum;
use crate::error::{invalid, Error, Result};
use crate::interferometer::Interferogram;

const MIN_FIT_SAMPLES: usize = 16;

/// Quadratic spectral-phase fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GvdFit {
    /// fs²/mm.
    pub gvd: f64,
    pub gvd_uncertainty: f64,
    /// fs.
    pub group_delay_removed: f64,
    /// Weighted RMS of the phase residuals, rad.
    pub residual_rms: f64,
    /// Phase curvature `c2`, fs².
    pub curvature: f64,
    /// Expansion point of the fit, rad/fs.
    pub omega_center: f64,
    pub samples: usize,
}

/// Magnitude-weighted least squares of the unwrapped phase against
/// `c0 + c1(ω−ω_c) + c2(ω−ω_c)²` over the valid run holding the spectral
/// maximum, with `GVD = 2c2/L`. The curvature does not depend on the
/// expansion point `ω_c` (the weighted mean frequency).
pub fn fit_gvd(spec: &RecoveredSpectrum, length_mm: f64) -> Result<GvdFit> {
    if !(length_mm.is_finite() && length_mm > 0.0) {
        return Err(invalid("length_mm", format!("must be positive, got {length_mm}")));
    }
    let k = spec.argmax();
    let (s, e) = valid_runs(&spec.valid_mask)
        .into_iter()
        .find(|&(s, e)| (s..e).contains(&k))
        .ok_or_else(|| Error::Fit("spectral maximum is not in a valid region".into()))?;
    if e - s < MIN_FIT_SAMPLES {
        return Err(Error::Fit(format!(
            "{} valid samples around the peak, need at least {MIN_FIT_SAMPLES}",
            e - s
        )));
    }
    let w = &spec.magnitude[s..e];
    let om = &spec.omega_axis[s..e];
    let ph = &spec.phase[s..e];
    let wsum: f64 = w.iter().sum();
    if !(wsum > 0.0) {
        return Err(Error::Fit("weights sum to zero".into()));
    }
    let center = om.iter().zip(w).map(|(o, w)| o * w).sum::<f64>() / wsum;
    let mut ata = Matrix3::zeros();
    let mut atb = Vector3::zeros();
    for i in 0..w.len() {
        let x = om[i] - center;
        let row = Vector3::new(1.0, x, x * x);
        ata += w[i] * row * row.transpose();
        atb += w[i] * ph[i] * row;
    }
    let inv = ata
        .try_inverse()
        .ok_or_else(|| Error::Fit("degenerate normal equations".into()))?;
    let c = inv * atb;
    let chi2: f64 = (0..w.len())
        .map(|i| {
            let x = om[i] - center;
            w[i] * (ph[i] - (c[0] + c[1] * x + c[2] * x * x)).powi(2)
        })
        .sum();
    let dof = (w.len() - 3) as f64;
    let var_c2 = (chi2 / dof * inv[(2, 2)]).max(0.0);
    Ok(GvdFit {
        gvd: 2.0 * c[2] / length_mm,
        gvd_uncertainty: 2.0 * var_c2.sqrt() / length_mm,
        group_delay_removed: spec.group_delay_removed,
        residual_rms: (chi2 / wsum).sqrt(),
        curvature: c[2],
        omega_center: center,
        samples: w.len(),
    })
}

/// Least-squares fit of `a·cos⁴(ω0τ/2) + b` over the five central fringes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FringeFit {
    pub amplitude: f64,
    pub offset: f64,
    /// `a/(a + 2b)` clamped to `[0, 1]`; 1 for the ideal `8cos⁴`.
    pub visibility: f64,
    pub residual_rms: f64,
    pub samples: usize,
}

pub fn fit_balanced_fringes(full: &Interferogram, omega_0: f64) -> Result<FringeFit> {
    if !(omega_0.is_finite() && omega_0 > 0.0) {
        return Err(invalid("omega_0", "must be positive"));
    }
    let period = 2.0 * PI / omega_0;
    let step = full.step();
    if step > period / 8.0 {
        return Err(invalid(
            "tau",
            format!("step {step} fs gives fewer than 8 samples per {period} fs fringe"),
        ));
    }
    let half = 2.5 * period;
    let (lo, hi) = (full.tau[0], full.tau[full.tau.len() - 1]);
    if lo > -half + step || hi < half - step {
        return Err(invalid(
            "tau",
            format!("axis [{lo}, {hi}] fs does not cover ±{half} fs"),
        ));
    }
    let pts: Vec<(f64, f64)> = full
        .tau
        .iter()
        .zip(&full.values)
        .filter(|(t, _)| t.abs() <= half)
        .map(|(&t, &v)| ((0.5 * omega_0 * t).cos().powi(4), v))
        .collect();
    let mut ata = Matrix2::zeros();
    let mut atb = Vector2::zeros();
    for &(c, v) in &pts {
        let row = Vector2::new(c, 1.0);
        ata += row * row.transpose();
        atb += v * row;
    }
    let sol = ata
        .try_inverse()
        .ok_or_else(|| Error::Fit("degenerate fringe design".into()))?
        * atb;
    let (a, b) = (sol[0], sol[1]);
    let rss: f64 = pts.iter().map(|&(c, v)| (v - a * c - b).powi(2)).sum();
    let denom = a + 2.0 * b;
    let visibility = if denom > 0.0 { (a / denom).clamp(0.0, 1.0) } else { 0.0 };
    Ok(FringeFit {
        amplitude: a,
        offset: b,
        visibility,
        residual_rms: (rss / pts.len() as f64).sqrt(),
        samples: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::{symmetric_axis, InterferogramKind};

    fn synthetic(curv: f64, slope: f64) -> RecoveredSpectrum {
        let n = 400;
        let omega_axis: Vec<f64> = (0..n).map(|i| 3.0 + 0.004 * i as f64).collect();
        let magnitude: Vec<f64> = omega_axis.iter().map(|w| (-((w - 3.8) / 0.2).powi(2)).exp()).collect();
        let phase = omega_axis
            .iter()
            .map(|w| 0.3 + slope * (w - 3.7) + curv * (w - 3.7).powi(2))
            .collect();
        let valid_mask = magnitude.iter().map(|&m| m > 0.05).collect();
        RecoveredSpectrum { omega_axis, magnitude, phase, valid_mask, peak: 1.0, group_delay_removed: 2.0 }
    }

    #[test]
    fn exact_quadratic_is_recovered() {
        let fit = fit_gvd(&synthetic(1170.0, 12.0), 30.8).unwrap();
        assert!((fit.gvd - 2.0 * 1170.0 / 30.8).abs() < 1e-6);
        assert!(fit.gvd_uncertainty < 1e-6);
        assert!(fit.residual_rms < 1e-6);
        assert_eq!(fit.group_delay_removed, 2.0);
    }

    #[test]
    fn flat_phase_gives_zero_gvd() {
        let fit = fit_gvd(&synthetic(0.0, 0.0), 1.0).unwrap();
        assert!(fit.gvd.abs() <= fit.gvd_uncertainty + 1e-9);
    }

    #[test]
    fn too_few_samples_or_bad_length() {
        let mut s = synthetic(1.0, 0.0);
        assert!(fit_gvd(&s, 0.0).is_err());
        let k = s.argmax();
        for (i, m) in s.valid_mask.iter_mut().enumerate() {
            *m = i.abs_diff(k) < 5;
        }
        assert!(matches!(fit_gvd(&s, 1.0), Err(Error::Fit(_))));
    }

    #[test]
    fn ideal_and_flat_fringes() {
        let w0 = 3.54;
        let tau = symmetric_axis(12.0, 0.05);
        let ideal = Interferogram::new(
            tau.clone(),
            tau.iter().map(|t| 8.0 * (0.5 * w0 * t).cos().powi(4)).collect(),
            InterferogramKind::FullySampled,
        )
        .unwrap();
        let f = fit_balanced_fringes(&ideal, w0).unwrap();
        assert!((f.visibility - 1.0).abs() < 1e-12);
        assert!((f.amplitude - 8.0).abs() < 1e-9);
        let flat = Interferogram::new(tau.clone(), vec![3.0; tau.len()], InterferogramKind::FullySampled).unwrap();
        assert!(fit_balanced_fringes(&flat, w0).unwrap().visibility < 1e-12);
        let coarse = symmetric_axis(12.0, 0.5);
        let sparse = Interferogram::new(coarse.clone(), vec![1.0; coarse.len()], InterferogramKind::FullySampled).unwrap();
        assert!(fit_balanced_fringes(&sparse, w0).is_err());
        let short = symmetric_axis(2.0, 0.05);
        let short = Interferogram::new(short.clone(), vec![1.0; short.len()], InterferogramKind::FullySampled).unwrap();
        assert!(fit_balanced_fringes(&short, w0).is_err());
    }
}
