use serde::Serialize;

use super::spectrum::RecoveredSpectrum;
use crate::error::{invalid, Error, Result};
use crate::interferometer::Interferogram;

/// Shape of a peak standing on a flat baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakMetrics {
    /// fs, parabolic interpolation around the maximum sample.
    pub center: f64,
    /// fs, half maximum above baseline.
    pub fwhm: f64,
    pub peak_to_baseline: f64,
    pub baseline: f64,
}

/// Linear-interpolated crossing of `level` between samples `a` and `b`.
fn crossing(x: &[f64], y: &[f64], a: usize, b: usize, level: f64) -> f64 {
    let f = (level - y[a]) / (y[b] - y[a]);
    x[a] + f * (x[b] - x[a])
}

/// Baseline from the outer 10% of the scan (5% at each end).
pub fn peak_metrics(ifg: &Interferogram) -> Result<PeakMetrics> {
    let (x, y) = (&ifg.tau, &ifg.values);
    let n = y.len();
    if n < 20 {
        return Err(invalid("tau", format!("{n} samples are too few for a baseline")));
    }
    let edge = (n / 20).max(1);
    let outer: Vec<f64> = y[..edge].iter().chain(&y[n - edge..]).cloned().collect();
    let baseline = outer.iter().sum::<f64>() / outer.len() as f64;
    let scatter = (outer.iter().map(|v| (v - baseline).powi(2)).sum::<f64>() / outer.len() as f64).sqrt();
    let k = (0..n).max_by(|&a, &b| y[a].total_cmp(&y[b])).unwrap_or(0);
    let height = y[k] - baseline;
    if !(height > 3.0 * scatter && height > 1e-12 * baseline.abs().max(1e-300)) {
        return Err(Error::NoPeak(format!(
            "maximum {} is not above baseline {baseline} + 3×{scatter}",
            y[k]
        )));
    }
    let (center, top) = if k > 0 && k + 1 < n {
        let (ym, y0, yp) = (y[k - 1], y[k], y[k + 1]);
        let denom = ym - 2.0 * y0 + yp;
        if denom < 0.0 {
            let d = 0.5 * (ym - yp) / denom;
            (x[k] + d * (x[k + 1] - x[k]), y0 - 0.25 * (ym - yp) * d)
        } else {
            (x[k], y0)
        }
    } else {
        (x[k], y[k])
    };
    let level = baseline + 0.5 * (top - baseline);
    let mut l = k;
    while l > 0 && y[l] > level {
        l -= 1;
    }
    let mut r = k;
    while r + 1 < n && y[r] > level {
        r += 1;
    }
    if y[l] > level || y[r] > level {
        return Err(Error::NoPeak("peak does not fall to half maximum inside the scan".into()));
    }
    let left = crossing(x, y, l, l + 1, level);
    let right = crossing(x, y, r - 1, r, level);
    Ok(PeakMetrics {
        center,
        fwhm: right - left,
        peak_to_baseline: top / baseline,
        baseline,
    })
}

/// Width of the spectral peak in `[omega_lo, omega_hi]`, measured between the
/// outermost half-maximum crossings within the band, rad/fs.
pub fn fourier_peak_width(spec: &RecoveredSpectrum, omega_lo: f64, omega_hi: f64) -> Result<f64> {
    let idx: Vec<usize> = (0..spec.len())
        .filter(|&i| spec.omega_axis[i] >= omega_lo && spec.omega_axis[i] <= omega_hi)
        .collect();
    if idx.len() < 3 {
        return Err(invalid("band", format!("[{omega_lo}, {omega_hi}] holds fewer than 3 bins")));
    }
    let (x, y) = (&spec.omega_axis, &spec.magnitude);
    let k = *idx.iter().max_by(|&&a, &&b| y[a].total_cmp(&y[b])).expect("non-empty");
    let level = 0.5 * y[k];
    if !(level > 0.0) {
        return Err(Error::NoPeak("band is empty".into()));
    }
    let (first, last) = (idx[0], idx[idx.len() - 1]);
    let lo = idx.iter().copied().find(|&i| y[i] >= level).expect("peak qualifies");
    let hi = idx.iter().rev().copied().find(|&i| y[i] >= level).expect("peak qualifies");
    let left = if lo > first { crossing(x, y, lo - 1, lo, level) } else { x[lo] };
    let right = if hi < last { crossing(x, y, hi, hi + 1, level) } else { x[hi] };
    Ok(right - left)
}
