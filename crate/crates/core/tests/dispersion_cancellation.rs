mod common;

use twophoton::analysis::peak_metrics;
use twophoton::interferometer::{symmetric_axis, Interferometer};
use twophoton::media::{eta_identity, eta_slab, SlabParams};
use twophoton::spectra::gaussian_alpha;
use twophoton::units::convert_path_step;

#[test]
fn no_sample_hom_dip_shape() {
    let (g, s, fwhm) = common::gaussian(15.0, 10.0, 1024);
    let alpha = gaussian_alpha(fwhm);
    let eta = eta_identity(&g);
    let ifm = Interferometer::new(&eta, &s, &common::balanced()).unwrap();
    let m = peak_metrics(&ifm.sweep_0f(&symmetric_axis(5.0 / alpha, 0.05)).unwrap()).unwrap();
    assert!((m.peak_to_baseline - 1.5).abs() < 1e-6, "{m:?}");
    let expect = 2.0 * 2f64.ln().sqrt() / alpha;
    assert!((m.fwhm - expect).abs() < 0.01 * expect, "{m:?}");
}

#[test]
fn even_orders_cancel_in_the_phase_averaged_signal() {
    let (g, s, _) = common::gaussian(15.0, 10.0, 1024);
    let cfg = common::balanced();
    let step = convert_path_step(150.0);
    let tau = symmetric_axis(150.0, step);
    let reference = {
        let eta = eta_identity(&g);
        peak_metrics(&Interferometer::new(&eta, &s, &cfg).unwrap().sweep_0f(&tau).unwrap()).unwrap()
    };
    let quartz = SlabParams::quartz();
    for k in 0..=8 {
        let p = SlabParams { half_gvd: quartz.half_gvd * k as f64 / 4.0, inv_group_velocity: 1.5, ..quartz };
        let eta = eta_slab(&g, &p).unwrap();
        let m = peak_metrics(&Interferometer::new(&eta, &s, &cfg).unwrap().sweep_0f(&tau).unwrap()).unwrap();
        assert!((m.fwhm - reference.fwhm).abs() < 0.01 * reference.fwhm, "beta {}: {m:?}", p.half_gvd);
        assert!((m.center - p.inv_group_velocity * p.length_mm).abs() < step, "{m:?}");
    }
}

#[test]
fn third_order_dispersion_reshapes_the_dip() {
    let (g, s, _) = common::gaussian(15.0, 10.0, 1024);
    let cfg = common::balanced();
    let tau = symmetric_axis(300.0, convert_path_step(150.0));
    let shape = |third_order: f64| {
        let p = SlabParams { third_order, ..SlabParams::quartz() };
        let eta = eta_slab(&g, &p).unwrap();
        peak_metrics(&Interferometer::new(&eta, &s, &cfg).unwrap().sweep_0f(&tau).unwrap()).unwrap()
    };
    let (flat, cubic) = (shape(0.0), shape(100.0));
    let change = (cubic.peak_to_baseline - flat.peak_to_baseline).abs() / (flat.peak_to_baseline - 1.0);
    assert!(change > 0.05, "{flat:?} {cubic:?}");
}
