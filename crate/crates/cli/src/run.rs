//! `simulate` and `analyze` pipelines.

use std::path::{Path, PathBuf};

use log::{info, warn};
use num_complex::Complex64;
use serde::Serialize;
use twophoton::analysis::{
    fft_interferogram, fft_real_interferogram, fit_balanced_fringes, fit_gvd, peak_metrics, recover_sample_response,
    remove_linear_phase, FftConfig, FringeFit, GvdFit, PeakMetrics, RecoveredSpectrum,
};
use twophoton::demodulation::{simulate_downsampled_scan, simulate_fully_sampled_scan, NoiseConfig};
use twophoton::interferometer::{
    axis_step, ComplexInterferogram, Harmonic, Interferogram, InterferogramKind, Interferometer,
};
use twophoton::media::{eta_identity, eta_notch, eta_slab, TransferFunction};
use twophoton::spectra::{gaussian_spectrum, load_spectrum, super_gaussian_spectrum, Spectrum};
use twophoton::units::wavelength_to_omega;

use crate::config::{SampleConfig, ScanMode, ScenarioConfig, SourceConfig};
use crate::error::{CliError, Result};
use crate::output::{emit_complex, emit_real, emit_spectrum, COMPLEX_HEADER, REAL_HEADER};

/// Reference (no-sample) scans draw their noise from a separate stream.
const REFERENCE_SEED_SALT: u64 = 0x5bd1_e995_2f3a_9c41;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AmplitudeStats {
    pub mean: f64,
    /// Standard deviation over mean.
    pub relative_std: f64,
}

impl AmplitudeStats {
    fn of(z: &[Complex64]) -> Self {
        let n = z.len() as f64;
        let mean = z.iter().map(|v| v.norm()).sum::<f64>() / n;
        let var = z.iter().map(|v| (v.norm() - mean).powi(2)).sum::<f64>() / n;
        Self {
            mean,
            relative_std: if mean > 0.0 { var.sqrt() / mean } else { f64::NAN },
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectrumSummary {
    pub peak_omega_rad_per_fs: f64,
    pub peak_magnitude: f64,
    pub valid_samples: usize,
}

impl SpectrumSummary {
    fn of(s: &RecoveredSpectrum) -> Self {
        let k = s.argmax();
        Self {
            peak_omega_rad_per_fs: s.omega_axis[k],
            peak_magnitude: s.peak,
            valid_samples: s.valid_mask.iter().filter(|v| **v).count(),
        }
    }
}

/// Contents of `fit_report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub config: ScenarioConfig,
    pub delay_samples: usize,
    pub tau_step_fs: f64,
    /// HOM (0f) peak of the delay scan.
    pub peak: Option<PeakMetrics>,
    pub fringes: Option<FringeFit>,
    pub gvd: Option<GvdFit>,
    pub z2f_amplitude: Option<AmplitudeStats>,
    pub spectrum: SpectrumSummary,
    /// Analysis steps that could not be carried out, with reasons.
    pub notes: Vec<String>,
}

#[derive(Debug)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub report: FitReport,
}

fn build_spectrum(cfg: &ScenarioConfig) -> Result<Spectrum> {
    let grid = cfg.frequency_grid()?;
    let fwhm = cfg.fwhm_omega();
    Ok(match &cfg.source {
        SourceConfig::Gaussian { .. } => gaussian_spectrum(&grid, fwhm)?,
        SourceConfig::Supergaussian { order, .. } => super_gaussian_spectrum(&grid, fwhm, *order)?,
        SourceConfig::File { path, .. } => load_spectrum(path, &grid)?,
    })
}

fn build_eta(cfg: &ScenarioConfig, spectrum: &Spectrum) -> Result<TransferFunction> {
    let grid = spectrum.grid();
    Ok(match &cfg.sample {
        SampleConfig::None => eta_identity(grid),
        s @ SampleConfig::Slab { .. } => eta_slab(grid, &s.slab().expect("slab"))?,
        s @ SampleConfig::Notch { .. } => eta_notch(grid, &s.notch().expect("notch"))?,
    })
}

/// Boxcar over one carrier period, which suppresses the 1f and 2f fringes
/// and leaves the 0f envelope of a fully-sampled trace.
fn carrier_average(full: &Interferogram, omega_0: f64) -> Result<Interferogram> {
    let step = full.step();
    let w = ((2.0 * std::f64::consts::PI / omega_0 / step).round() as usize).max(1);
    if full.values.len() < w + 1 {
        return Err(CliError::Runtime("scan shorter than one fringe period".into()));
    }
    let half = w / 2;
    let n = full.values.len() - w + 1;
    let mut tau = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    let mut acc: f64 = full.values[..w].iter().sum();
    for k in 0..n {
        if k > 0 {
            acc += full.values[k + w - 1] - full.values[k - 1];
        }
        tau.push(full.tau[k + half] - if w % 2 == 0 { 0.5 * step } else { 0.0 });
        values.push(acc / w as f64);
    }
    Ok(Interferogram::new(tau, values, InterferogramKind::Comp0f)?)
}

fn centered_spectrum(z: &ComplexInterferogram, fft: &FftConfig) -> Result<RecoveredSpectrum> {
    let (centered, delay) = remove_linear_phase(z)?;
    Ok(fft_interferogram(&centered, fft)?.with_group_delay(delay))
}

/// Runs one scenario and writes its outputs into `out_dir`.
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: &Path) -> Result<RunOutput> {
    cfg.validate()?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", out_dir.display())))?;
    let spectrum = build_spectrum(cfg)?;
    let eta = build_eta(cfg, &spectrum)?;
    let mzi = cfg.mzi_config();
    let ifm = Interferometer::new(&eta, &spectrum, &mzi)?;
    let tau = cfg.scan.tau_axis();
    let fft = cfg.fft_config();
    let omega_0 = cfg.omega_0();
    info!("{} delay steps, mode {:?}", tau.len(), cfg.scan.mode);

    let mut files = Vec::new();
    let mut notes = Vec::new();
    let mut peak = None;
    let mut fringes = None;
    let mut gvd = None;
    let mut z2f_amplitude = None;
    let recovered;

    match cfg.scan.mode {
        ScanMode::FullySampled => {
            let full = simulate_fully_sampled_scan(&ifm, &tau, &cfg.noise)?;
            files.extend(emit_real(out_dir, "fully_sampled", "Fully-sampled scan", &full.tau, &full.values)?);
            match carrier_average(&full, omega_0).and_then(|env| Ok(peak_metrics(&env)?)) {
                Ok(p) => peak = Some(p),
                Err(e) => notes.push(format!("peak metrics: {e}")),
            }
            match fit_balanced_fringes(&full, omega_0) {
                Ok(f) => fringes = Some(f),
                Err(e) => notes.push(format!("fringe fit: {e}")),
            }
            if cfg.sample.slab().is_some() {
                notes.push("gvd: fitted only from the demodulated 1f channel of a downsampled scan".into());
            }
            recovered = fft_real_interferogram(&full, &fft)?;
        }
        ScanMode::Downsampled => {
            let scan = simulate_downsampled_scan(&ifm, &tau, &cfg.modulation(), &cfg.noise)?;
            let zero: Vec<Complex64> = scan.a0f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            files.extend(emit_complex(out_dir, "comp_0f", "0f component", &tau, &zero)?);
            files.extend(emit_complex(out_dir, "comp_1f", "1f lock-in output", &tau, &scan.z1f.values)?);
            files.extend(emit_complex(out_dir, "comp_2f", "2f lock-in output", &tau, &scan.z2f.values)?);
            match peak_metrics(&scan.a0f) {
                Ok(p) => peak = Some(p),
                Err(e) => notes.push(format!("peak metrics: {e}")),
            }
            z2f_amplitude = Some(AmplitudeStats::of(&scan.z2f.values));
            recovered = centered_spectrum(&scan.z1f, &fft)?;
            if let Some(slab) = cfg.sample.slab() {
                match fit_gvd(&recovered, slab.length_mm) {
                    Ok(f) => gvd = Some(f),
                    Err(e) => notes.push(format!("gvd fit: {e}")),
                }
            }
            if !matches!(cfg.sample, SampleConfig::None) {
                let reference_eta = eta_identity(spectrum.grid());
                let reference_ifm = Interferometer::new(&reference_eta, &spectrum, &mzi)?;
                let noise = NoiseConfig { seed: cfg.noise.seed ^ REFERENCE_SEED_SALT, ..cfg.noise };
                let reference = simulate_downsampled_scan(&reference_ifm, &tau, &cfg.modulation(), &noise)?;
                let sample_1f = fft_interferogram(&scan.z1f, &fft)?;
                let reference_1f = fft_interferogram(&reference.z1f, &fft)?;
                let response = recover_sample_response(&sample_1f, &reference_1f)?;
                files.extend(emit_spectrum(out_dir, "sample_response", "Sample response η(ω)", &response)?);
            }
        }
    }
    files.extend(emit_spectrum(out_dir, "spectrum_recovered", "Recovered spectrum", &recovered)?);

    let report = FitReport {
        config: cfg.clone(),
        delay_samples: tau.len(),
        tau_step_fs: axis_step(&tau)?,
        peak,
        fringes,
        gvd,
        z2f_amplitude,
        spectrum: SpectrumSummary::of(&recovered),
        notes,
    };
    for n in &report.notes {
        warn!("{n}");
    }
    let path = out_dir.join("fit_report.json");
    let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Runtime(e.to_string()))?;
    std::fs::write(&path, json + "\n")?;
    files.push(path);
    Ok(RunOutput { files, report })
}

/// A delay scan read back from a CSV written by `simulate`.
#[derive(Debug, Clone)]
pub enum LoadedScan {
    Real(Interferogram),
    Complex(ComplexInterferogram),
}

/// Harmonic order from a file name: `..1f..` or `..2f..`; anything else is real.
pub fn harmonic_from_name(path: &Path) -> Option<Harmonic> {
    let name = path.file_stem()?.to_string_lossy().to_lowercase();
    if name.contains("1f") {
        Some(Harmonic::Z1f)
    } else if name.contains("2f") {
        Some(Harmonic::Z2f)
    } else {
        None
    }
}

pub fn load_scan(path: &Path) -> Result<LoadedScan> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| CliError::Runtime(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let complex = header == COMPLEX_HEADER;
    if !complex && header != REAL_HEADER {
        return Err(CliError::Runtime(format!(
            "{}: unrecognized header {:?}; expected {:?} or {:?}",
            path.display(),
            header,
            REAL_HEADER,
            COMPLEX_HEADER
        )));
    }
    let mut tau = Vec::new();
    let mut re = Vec::new();
    let mut im = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Runtime(e.to_string()))?;
        let field = |k: usize| -> Result<f64> {
            rec.get(k).and_then(|s| s.trim().parse().ok()).ok_or_else(|| {
                CliError::Runtime(format!("{}: row {}: bad value in column {}", path.display(), line + 2, header[k]))
            })
        };
        tau.push(field(0)?);
        re.push(field(1)?);
        if complex {
            im.push(field(2)?);
        }
    }
    match (complex, harmonic_from_name(path)) {
        (true, Some(h)) => {
            let values = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
            Ok(LoadedScan::Complex(ComplexInterferogram::new(tau, values, h)?))
        }
        (true, None) => Ok(LoadedScan::Real(Interferogram::new(tau, re, InterferogramKind::Comp0f)?)),
        (false, _) => Ok(LoadedScan::Real(Interferogram::new(tau, re, InterferogramKind::FullySampled)?)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisEntry {
    pub input: PathBuf,
    pub spectrum: SpectrumSummary,
    pub gvd: Option<GvdFit>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub reference: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub length_mm: Option<f64>,
    pub reference_nm: f64,
}

/// Re-runs the spectral analysis on existing interferograms. Writes
/// `<stem>_spectrum.csv` per input, `sample_response.csv` when a reference is
/// given, and `analysis_report.json`.
pub fn analyze(inputs: &[PathBuf], opts: &AnalyzeOptions) -> Result<Vec<PathBuf>> {
    if inputs.is_empty() {
        return Err(CliError::Config("no input files".into()));
    }
    if !(opts.reference_nm.is_finite() && opts.reference_nm > 0.0) {
        return Err(CliError::field("--laser-nm", "must be positive"));
    }
    if let Some(l) = opts.length_mm {
        if !(l.is_finite() && l > 0.0) {
            return Err(CliError::field("--length-mm", "must be positive"));
        }
    }
    let fft = FftConfig::with_omega_r(wavelength_to_omega(opts.reference_nm));
    let reference = match &opts.reference {
        Some(p) => match load_scan(p)? {
            LoadedScan::Complex(z) if z.harmonic == Harmonic::Z1f => Some(fft_interferogram(&z, &fft)?),
            _ => return Err(CliError::Runtime(format!("{}: reference must be a 1f scan", p.display()))),
        },
        None => None,
    };
    let mut files = Vec::new();
    let mut entries = Vec::new();
    let mut report_dir = None;
    for input in inputs {
        let dir = match &opts.out_dir {
            Some(d) => d.clone(),
            None => input.parent().map(Path::to_path_buf).unwrap_or_default(),
        };
        std::fs::create_dir_all(&dir)?;
        let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let mut notes = Vec::new();
        let mut gvd = None;
        let spec = match load_scan(input)? {
            LoadedScan::Real(ifg) => fft_real_interferogram(&ifg, &fft)?,
            LoadedScan::Complex(z) => {
                let spec = centered_spectrum(&z, &fft)?;
                if z.harmonic == Harmonic::Z1f {
                    if let Some(l) = opts.length_mm {
                        match fit_gvd(&spec, l) {
                            Ok(f) => gvd = Some(f),
                            Err(e) => notes.push(format!("gvd fit: {e}")),
                        }
                    }
                    if let Some(r) = &reference {
                        let response = recover_sample_response(&fft_interferogram(&z, &fft)?, r)?;
                        files.extend(emit_spectrum(&dir, "sample_response", "Sample response η(ω)", &response)?);
                    }
                }
                spec
            }
        };
        files.extend(emit_spectrum(&dir, &format!("{stem}_spectrum"), "Recovered spectrum", &spec)?);
        entries.push(AnalysisEntry { input: input.clone(), spectrum: SpectrumSummary::of(&spec), gvd, notes });
        report_dir.get_or_insert(dir);
    }
    let path = report_dir.unwrap_or_default().join("analysis_report.json");
    let json = serde_json::to_string_pretty(&entries).map_err(|e| CliError::Runtime(e.to_string()))?;
    std::fs::write(&path, json + "\n")?;
    files.push(path);
    Ok(files)
}
