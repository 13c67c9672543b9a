use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::interferometer::ComplexInterferogram;

/// Principal value in `(-π, π]`.
pub fn wrap_phase(p: f64) -> f64 {
    let w = (p + PI).rem_euclid(2.0 * PI) - PI;
    if w <= -PI {
        w + 2.0 * PI
    } else {
        w
    }
}

/// Contiguous runs `[start, end)` of `true` in `mask`.
pub fn valid_runs(mask: &[bool]) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut start = None;
    for (i, &m) in mask.iter().enumerate() {
        match (m, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                runs.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push((s, mask.len()));
    }
    runs
}

/// Sequential unwrap inside each contiguous valid run; nothing is carried
/// across masked gaps. Within a run the sample of largest `magnitude` (or the
/// first sample, without magnitudes) keeps its principal value. Masked
/// samples are returned unchanged.
pub fn unwrap_phase(wrapped: &[f64], mask: &[bool], magnitude: Option<&[f64]>) -> Vec<f64> {
    let mut out = wrapped.to_vec();
    for (s, e) in valid_runs(mask) {
        let anchor = match magnitude {
            Some(m) => (s..e)
                .max_by(|&a, &b| m[a].total_cmp(&m[b]))
                .unwrap_or(s),
            None => s,
        };
        let mut k = 0.0;
        for i in anchor + 1..e {
            k -= ((wrapped[i] - wrapped[i - 1]) / (2.0 * PI)).round();
            out[i] = wrapped[i] + 2.0 * PI * k;
        }
        k = 0.0;
        for i in (s..anchor).rev() {
            k -= ((wrapped[i] - wrapped[i + 1]) / (2.0 * PI)).round();
            out[i] = wrapped[i] + 2.0 * PI * k;
        }
    }
    out
}

/// Relabels the delay axis so the centroid of `|z|²` sits at zero. Returns
/// the shifted interferogram and the shift (the group-delay estimate).
pub fn remove_linear_phase(z: &ComplexInterferogram) -> Result<(ComplexInterferogram, f64)> {
    let weights: Vec<f64> = z.values.iter().map(|v| v.norm_sqr()).collect();
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::ZeroSignal);
    }
    let max = weights.iter().cloned().fold(0.0, f64::max);
    let at_max = weights.iter().filter(|&&w| w >= max * (1.0 - 1e-9)).count();
    if at_max > 1 {
        log::warn!("envelope maximum is a plateau of {at_max} samples; centroid used");
    }
    let centroid = z.tau.iter().zip(&weights).map(|(t, w)| t * w).sum::<f64>() / total;
    let tau = z.tau.iter().map(|t| t - centroid).collect();
    Ok((
        ComplexInterferogram::new(tau, z.values.clone(), z.harmonic)?,
        centroid,
    ))
}
