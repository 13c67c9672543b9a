//! Scenario files: nested TOML tables describing source, sample, scan,
//! interferometer, noise and analysis settings.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use twophoton::analysis::{FftConfig, Window};
use twophoton::demodulation::{ModulationConfig, NoiseConfig};
use twophoton::interferometer::{symmetric_axis, MziConfig};
use twophoton::media::{NotchParams, SlabParams};
use twophoton::spectra::FrequencyGrid;
use twophoton::units::{convert_path_step, fwhm_nm_to_omega, wavelength_to_omega};

use crate::error::{CliError, Result};

pub const FULLY_SAMPLED_STEP_NM: f64 = 15.0;
pub const DOWNSAMPLED_STEP_NM: f64 = 150.0;
const MAX_SCAN_STEPS: f64 = 2e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SourceConfig {
    Gaussian {
        fwhm_nm: f64,
        #[serde(default = "default_center_nm")]
        center_nm: f64,
    },
    Supergaussian {
        fwhm_nm: f64,
        #[serde(default = "default_center_nm")]
        center_nm: f64,
        order: u32,
    },
    /// Measured spectrum; `fwhm_nm` sizes the frequency grid.
    File {
        path: PathBuf,
        fwhm_nm: f64,
        #[serde(default = "default_center_nm")]
        center_nm: f64,
    },
}

fn default_center_nm() -> f64 {
    532.0
}

impl SourceConfig {
    pub fn fwhm_nm(&self) -> f64 {
        match self {
            SourceConfig::Gaussian { fwhm_nm, .. }
            | SourceConfig::Supergaussian { fwhm_nm, .. }
            | SourceConfig::File { fwhm_nm, .. } => *fwhm_nm,
        }
    }

    pub fn center_nm(&self) -> f64 {
        match self {
            SourceConfig::Gaussian { center_nm, .. }
            | SourceConfig::Supergaussian { center_nm, .. }
            | SourceConfig::File { center_nm, .. } => *center_nm,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SampleConfig {
    None,
    Slab {
        length_mm: f64,
        #[serde(default)]
        inv_group_velocity_fs_per_mm: f64,
        half_gvd_fs2_per_mm: f64,
        #[serde(default)]
        third_order_fs3_per_mm: f64,
    },
    Notch {
        omega_n_rad_per_fs: f64,
        width_rad_per_fs: f64,
        steepness_fs2: f64,
    },
}

impl SampleConfig {
    pub fn slab(&self) -> Option<SlabParams> {
        match *self {
            SampleConfig::Slab {
                length_mm,
                inv_group_velocity_fs_per_mm,
                half_gvd_fs2_per_mm,
                third_order_fs3_per_mm,
            } => Some(SlabParams {
                length_mm,
                inv_group_velocity: inv_group_velocity_fs_per_mm,
                half_gvd: half_gvd_fs2_per_mm,
                third_order: third_order_fs3_per_mm,
            }),
            _ => None,
        }
    }

    pub fn notch(&self) -> Option<NotchParams> {
        match *self {
            SampleConfig::Notch {
                omega_n_rad_per_fs,
                width_rad_per_fs,
                steepness_fs2,
            } => Some(NotchParams {
                omega_n: omega_n_rad_per_fs,
                width: width_rad_per_fs,
                steepness: steepness_fs2,
            }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    FullySampled,
    Downsampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub mode: ScanMode,
    /// Path-length step; defaults to 15 nm (fully sampled) or 150 nm (down-sampled).
    pub step_nm: Option<f64>,
    /// Full delay range, centered on zero.
    pub tau_span_fs: f64,
}

impl ScanConfig {
    pub fn step_nm(&self) -> f64 {
        self.step_nm.unwrap_or(match self.mode {
            ScanMode::FullySampled => FULLY_SAMPLED_STEP_NM,
            ScanMode::Downsampled => DOWNSAMPLED_STEP_NM,
        })
    }

    pub fn tau_axis(&self) -> Vec<f64> {
        symmetric_axis(0.5 * self.tau_span_fs, convert_path_step(self.step_nm()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MziSection {
    pub r: f64,
    pub t: f64,
    pub reference_nm: f64,
    pub nu21_khz: f64,
    pub samples_per_period: usize,
    pub periods: usize,
}

impl Default for MziSection {
    fn default() -> Self {
        let m = ModulationConfig::default();
        Self {
            r: std::f64::consts::FRAC_1_SQRT_2,
            t: std::f64::consts::FRAC_1_SQRT_2,
            reference_nm: 632.8,
            nu21_khz: m.nu_21_khz,
            samples_per_period: m.samples_per_period,
            periods: m.periods,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub points: usize,
    /// Grid span in units of the source FWHM.
    pub span_fwhm: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            points: 4096,
            span_fwhm: 8.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    pub window: Window,
    pub zero_pad: usize,
    pub threshold: f64,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        let f = FftConfig::default();
        Self {
            window: f.window,
            zero_pad: f.zero_pad,
            threshold: f.threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub source: SourceConfig,
    pub sample: SampleConfig,
    pub scan: ScanConfig,
    #[serde(default)]
    pub mzi: MziSection,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
    #[serde(default = "default_outputs")]
    pub outputs: PathBuf,
}

fn default_outputs() -> PathBuf {
    PathBuf::from("out")
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::field(field, format!("must be positive, got {v}")))
    }
}

fn finite(field: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::field(field, format!("must be finite, got {v}")))
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Reads a scenario file; a relative spectrum path is taken relative to it.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        if let SourceConfig::File { path: p, .. } = &mut cfg.source {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        positive("source.fwhm_nm", self.source.fwhm_nm())?;
        positive("source.center_nm", self.source.center_nm())?;
        match &self.source {
            SourceConfig::Supergaussian { order, .. } if *order == 0 => {
                return Err(CliError::field("source.order", "must be at least 1"));
            }
            SourceConfig::File { path, .. } if !path.is_file() => {
                return Err(CliError::field("source.path", format!("{} is not a readable file", path.display())));
            }
            _ => {}
        }
        match &self.sample {
            SampleConfig::None => {}
            SampleConfig::Slab {
                length_mm,
                inv_group_velocity_fs_per_mm,
                half_gvd_fs2_per_mm,
                third_order_fs3_per_mm,
            } => {
                positive("sample.length_mm", *length_mm)?;
                finite("sample.inv_group_velocity_fs_per_mm", *inv_group_velocity_fs_per_mm)?;
                finite("sample.half_gvd_fs2_per_mm", *half_gvd_fs2_per_mm)?;
                finite("sample.third_order_fs3_per_mm", *third_order_fs3_per_mm)?;
            }
            SampleConfig::Notch {
                omega_n_rad_per_fs,
                width_rad_per_fs,
                steepness_fs2,
            } => {
                positive("sample.omega_n_rad_per_fs", *omega_n_rad_per_fs)?;
                positive("sample.width_rad_per_fs", *width_rad_per_fs)?;
                positive("sample.steepness_fs2", *steepness_fs2)?;
            }
        }
        positive("scan.step_nm", self.scan.step_nm())?;
        positive("scan.tau_span_fs", self.scan.tau_span_fs)?;
        let steps = self.scan.tau_span_fs / convert_path_step(self.scan.step_nm());
        if steps > MAX_SCAN_STEPS {
            return Err(CliError::field(
                "scan.tau_span_fs",
                format!("{steps:.0} delay steps exceed the limit of {MAX_SCAN_STEPS:.0}"),
            ));
        }
        if steps < 2.0 {
            return Err(CliError::field("scan.tau_span_fs", "shorter than two delay steps"));
        }
        if !(self.mzi.r > 0.0 && self.mzi.t > 0.0) || (self.mzi.r.powi(2) + self.mzi.t.powi(2) - 1.0).abs() > 1e-9 {
            return Err(CliError::field(
                "mzi.r",
                format!("need r, t > 0 with r² + t² = 1, got r = {}, t = {}", self.mzi.r, self.mzi.t),
            ));
        }
        positive("mzi.reference_nm", self.mzi.reference_nm)?;
        positive("mzi.nu21_khz", self.mzi.nu21_khz)?;
        if self.mzi.samples_per_period < 16 {
            return Err(CliError::field("mzi.samples_per_period", "must be at least 16"));
        }
        if self.mzi.periods == 0 {
            return Err(CliError::field("mzi.periods", "must be at least 1"));
        }
        if self.noise.poisson {
            positive("noise.mean_counts", self.noise.mean_counts)?;
        }
        if !(self.noise.phase_jitter_sigma.is_finite() && self.noise.phase_jitter_sigma >= 0.0) {
            return Err(CliError::field("noise.phase_jitter_sigma", "must be non-negative"));
        }
        if self.grid.points < 64 || self.grid.points % 2 != 0 {
            return Err(CliError::field("grid.points", format!("need an even count ≥ 64, got {}", self.grid.points)));
        }
        positive("grid.span_fwhm", self.grid.span_fwhm)?;
        self.frequency_grid()
            .map_err(|e| CliError::field("grid.span_fwhm", e))?;
        if self.analysis.zero_pad == 0 {
            return Err(CliError::field("analysis.zero_pad", "must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.analysis.threshold) {
            return Err(CliError::field("analysis.threshold", "must lie in [0, 1)"));
        }
        Ok(())
    }

    pub fn omega_0(&self) -> f64 {
        wavelength_to_omega(self.source.center_nm())
    }

    pub fn fwhm_omega(&self) -> f64 {
        fwhm_nm_to_omega(self.source.fwhm_nm(), self.source.center_nm())
    }

    pub fn frequency_grid(&self) -> twophoton::Result<FrequencyGrid> {
        FrequencyGrid::new(self.omega_0(), self.grid.span_fwhm * self.fwhm_omega(), self.grid.points)
    }

    pub fn mzi_config(&self) -> MziConfig {
        MziConfig {
            refl_r: self.mzi.r,
            trans_t: self.mzi.t,
            phi_1: 0.0,
            phi_2: 0.0,
            omega_p: 2.0 * self.omega_0(),
            omega_r: wavelength_to_omega(self.mzi.reference_nm),
        }
    }

    pub fn modulation(&self) -> ModulationConfig {
        ModulationConfig {
            nu_21_khz: self.mzi.nu21_khz,
            samples_per_period: self.mzi.samples_per_period,
            periods: self.mzi.periods,
        }
    }

    pub fn fft_config(&self) -> FftConfig {
        FftConfig {
            window: self.analysis.window,
            zero_pad: self.analysis.zero_pad,
            threshold: self.analysis.threshold,
            omega_r: wavelength_to_omega(self.mzi.reference_nm),
        }
    }
}
