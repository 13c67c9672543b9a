/// Fully-sampled 0f, 1f and 2f rates for a Gaussian spectrum and no sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianRates {
    pub r0f: f64,
    pub r1f: f64,
    pub r2f: f64,
}

impl GaussianRates {
    pub fn total(&self) -> f64 {
        self.r0f + self.r1f + self.r2f
    }
}

/// `2 + e^{-α²τ²}`, `4e^{-α²τ²/4} cos(Δφ − ω0τ)` and `cos(2Δφ − 2ω0τ)`.
pub fn closed_form_rates_gaussian(tau: f64, delta_phi: f64, alpha: f64, omega_0: f64) -> GaussianRates {
    let a2t2 = (alpha * tau).powi(2);
    GaussianRates {
        r0f: 2.0 + (-a2t2).exp(),
        r1f: 4.0 * (-0.25 * a2t2).exp() * (delta_phi - omega_0 * tau).cos(),
        r2f: (2.0 * delta_phi - 2.0 * omega_0 * tau).cos(),
    }
}
