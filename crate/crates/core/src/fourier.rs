//! Thin wrappers over `rustfft` with the sign conventions used in this crate.
//!
//! Fields carry the time dependence `e^{-iωt}`, so a response `h(t)` maps to
//! `η(ω) = Σ h(t) e^{+iωt}`. [`to_frequency`] applies that kernel and
//! [`to_time`] inverts it (including the `1/N`).

use num_complex::Complex64;
use rustfft::FftPlanner;

/// `X_k = Σ_n x_n e^{+2πikn/N}` (unnormalized).
pub(crate) fn to_frequency(data: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(data.len()).process(data);
}

/// `x_n = (1/N) Σ_k X_k e^{-2πikn/N}`.
pub(crate) fn to_time(data: &mut [Complex64]) {
    let n = data.len();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(data);
    let scale = 1.0 / n as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// Pads `values` to `factor` times its length by repeating the edge samples.
/// Returns the padded vector and the offset of the first original sample.
pub(crate) fn edge_extend<T: Copy>(values: &[T], factor: usize) -> (Vec<T>, usize) {
    let n = values.len();
    let total = n * factor;
    let offset = (total - n) / 2;
    let mut out = Vec::with_capacity(total);
    out.extend(std::iter::repeat_n(values[0], offset));
    out.extend_from_slice(values);
    out.extend(std::iter::repeat_n(values[n - 1], total - n - offset));
    (out, offset)
}
