mod common;

use twophoton::media::{
    anticausal_energy_fraction, eta_identity, eta_minimum_phase, eta_notch, eta_slab, kramers_kronig_phase,
    NotchParams, SlabParams,
};
use twophoton::analysis::wrap_phase;
use twophoton::spectra::FrequencyGrid;

/// `ln η = -Aγ/(γ - i(ω-ω_c))` is the transform of a decaying exponential at
/// positive times, so `ln|η|` and `arg η` form an exact Hilbert pair.
fn lorentzian_pair(grid: &FrequencyGrid, center: f64, depth: f64, gamma: f64) -> (Vec<f64>, Vec<f64>) {
    grid.omegas()
        .iter()
        .map(|&w| {
            let x = w - center;
            let d = x * x + gamma * gamma;
            ((-depth * gamma * gamma / d).exp(), -depth * gamma * x / d)
        })
        .unzip()
}

#[test]
fn lorentzian_line_phase_matches_analytic_pair() {
    let g = FrequencyGrid::new(common::omega_0(), 1.6, 4096).unwrap();
    for (depth, gamma) in [(0.5, 0.01), (2.0, 0.02), (0.1, 0.005)] {
        let (mag, truth) = lorentzian_pair(&g, common::omega_0() + 0.05, depth, gamma);
        let phase = kramers_kronig_phase(&mag, &g).unwrap();
        let err = common::rms(phase.iter().zip(&truth).map(|(a, b)| a - b));
        let scale = common::rms(truth.iter().copied());
        assert!(err < 0.01 * scale, "depth {depth} gamma {gamma}: {err} vs {scale}");
    }
}

#[test]
fn minimum_phase_responses_are_causal() {
    let g = FrequencyGrid::new(common::omega_0(), 1.6, 4096).unwrap();
    let (mag, _) = lorentzian_pair(&g, common::omega_0() + 0.05, 1.0, 0.01);
    let line = eta_minimum_phase(&g, &mag).unwrap();
    assert!(anticausal_energy_fraction(&line) < 1e-3);
    assert!(anticausal_energy_fraction(&eta_identity(&g)) < 1e-3);
    // The steepest notch is a hard step in magnitude; its sampled response
    // needs a fine grid.
    for (steepness, n) in [(100.0, 4096), (1e4, 4096), (1e14, 65536)] {
        let g = FrequencyGrid::new(common::omega_0(), 1.6, n).unwrap();
        let p = NotchParams { steepness, ..NotchParams::measured_filter() };
        let eta = eta_notch(&g, &p).unwrap();
        let f = anticausal_energy_fraction(&eta);
        assert!(f < 1e-3, "steepness {steepness}: {f}");
    }
}

#[test]
fn step_edged_notch_leakage_shrinks_with_resolution() {
    let fractions: Vec<f64> = [2048, 8192, 32768]
        .iter()
        .map(|&n| {
            let g = FrequencyGrid::new(common::omega_0(), 1.6, n).unwrap();
            anticausal_energy_fraction(&eta_notch(&g, &NotchParams::measured_filter()).unwrap())
        })
        .collect();
    assert!(fractions.windows(2).all(|w| w[1] < 0.5 * w[0]), "{fractions:?}");
}

#[test]
fn slab_is_causal_once_its_chirp_is_delayed() {
    let g = FrequencyGrid::new(common::omega_0(), 0.8, 1024).unwrap();
    // The quadratic phase alone spreads the response symmetrically about t = 0.
    let centered = eta_slab(&g, &SlabParams::quartz()).unwrap();
    assert!(anticausal_energy_fraction(&centered) > 0.1);
    let delayed = SlabParams { inv_group_velocity: 65.0, ..SlabParams::quartz() };
    let eta = eta_slab(&g, &delayed).unwrap();
    assert!(anticausal_energy_fraction(&eta) < 1e-3);
}

#[test]
fn phase_reconstruction_is_idempotent() {
    let g = FrequencyGrid::new(common::omega_0(), 1.6, 4096).unwrap();
    for steepness in [100.0, 1e4, 1e14] {
        let p = NotchParams { steepness, ..NotchParams::measured_filter() };
        let eta = eta_notch(&g, &p).unwrap();
        let again = kramers_kronig_phase(&eta.magnitude(), &g).unwrap();
        let worst = eta
            .phase()
            .iter()
            .zip(&again)
            .map(|(a, b)| wrap_phase(a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "steepness {steepness}: {worst}");
    }
}
