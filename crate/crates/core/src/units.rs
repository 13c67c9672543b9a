//! Physical constants and unit conversions.

use std::f64::consts::PI;

/// Speed of light in nm/fs.
pub const SPEED_OF_LIGHT_NM_PER_FS: f64 = 299.792458;

/// Angular frequency (rad/fs) of light with vacuum wavelength `nm`.
pub fn wavelength_to_omega(nm: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT_NM_PER_FS / nm
}

/// Vacuum wavelength (nm) for angular frequency `omega` in rad/fs.
pub fn omega_to_wavelength(omega: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT_NM_PER_FS / omega
}

/// Delay step in fs produced by a path-length step of `step_nm`.
pub fn convert_path_step(step_nm: f64) -> f64 {
    step_nm / SPEED_OF_LIGHT_NM_PER_FS
}

/// Converts a wavelength FWHM centered on `center_nm` into an angular-frequency
/// FWHM using the local derivative |dω/dλ| = 2πc/λ².
pub fn fwhm_nm_to_omega(fwhm_nm: f64, center_nm: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT_NM_PER_FS * fwhm_nm / (center_nm * center_nm)
}
