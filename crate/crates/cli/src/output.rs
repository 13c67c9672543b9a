//! CSV/SVG emission. Floats use Rust's shortest round-trip formatting so
//! identical runs give identical bytes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use twophoton::analysis::{write_spectrum_csv, RecoveredSpectrum};

use crate::error::{CliError, Result};
use crate::svg::{Plot, Series};

pub const REAL_HEADER: [&str; 2] = ["tau_fs", "rate_arb"];
pub const COMPLEX_HEADER: [&str; 5] = ["tau_fs", "re_arb", "im_arb", "amp_arb", "phase_rad"];

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let f = File::create(path).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(f)))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

pub fn write_real_csv(path: &Path, tau: &[f64], values: &[f64]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(REAL_HEADER).map_err(csv_err)?;
    for (t, v) in tau.iter().zip(values) {
        w.write_record([t.to_string(), v.to_string()]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_complex_csv(path: &Path, tau: &[f64], values: &[Complex64]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(COMPLEX_HEADER).map_err(csv_err)?;
    for (t, z) in tau.iter().zip(values) {
        w.write_record([t.to_string(), z.re.to_string(), z.im.to_string(), z.norm().to_string(), z.arg().to_string()])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_spectrum(path: &Path, spec: &RecoveredSpectrum) -> Result<()> {
    let f = File::create(path).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    write_spectrum_csv(spec, BufWriter::new(f))?;
    Ok(())
}

pub fn write_svg(path: &Path, plot: &Plot) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    f.write_all(plot.render().as_bytes())?;
    f.flush()?;
    Ok(())
}

/// Writes `<stem>.csv` and `<stem>.svg` for a real trace.
pub fn emit_real(dir: &Path, stem: &str, title: &str, tau: &[f64], values: &[f64]) -> Result<Vec<PathBuf>> {
    let csv = dir.join(format!("{stem}.csv"));
    let svg = dir.join(format!("{stem}.svg"));
    write_real_csv(&csv, tau, values)?;
    write_svg(
        &svg,
        &Plot {
            title,
            x_label: "delay τ (fs)",
            y_label: "coincidence rate (arb.)",
            series: vec![Series { label: "rate", x: tau, y: values }],
        },
    )?;
    Ok(vec![csv, svg])
}

pub fn emit_complex(dir: &Path, stem: &str, title: &str, tau: &[f64], values: &[Complex64]) -> Result<Vec<PathBuf>> {
    let csv = dir.join(format!("{stem}.csv"));
    let svg = dir.join(format!("{stem}.svg"));
    write_complex_csv(&csv, tau, values)?;
    let re: Vec<f64> = values.iter().map(|z| z.re).collect();
    let im: Vec<f64> = values.iter().map(|z| z.im).collect();
    let amp: Vec<f64> = values.iter().map(|z| z.norm()).collect();
    write_svg(
        &svg,
        &Plot {
            title,
            x_label: "delay τ (fs)",
            y_label: "lock-in output (arb.)",
            series: vec![
                Series { label: "X (re)", x: tau, y: &re },
                Series { label: "Y (im)", x: tau, y: &im },
                Series { label: "amplitude", x: tau, y: &amp },
            ],
        },
    )?;
    Ok(vec![csv, svg])
}

/// Spectrum CSV plus a magnitude plot and, for valid samples, a phase plot.
pub fn emit_spectrum(dir: &Path, stem: &str, title: &str, spec: &RecoveredSpectrum) -> Result<Vec<PathBuf>> {
    let csv = dir.join(format!("{stem}.csv"));
    let svg = dir.join(format!("{stem}.svg"));
    let phase_svg = dir.join(format!("{stem}_phase.svg"));
    write_spectrum(&csv, spec)?;
    write_svg(
        &svg,
        &Plot {
            title,
            x_label: "ω (rad/fs)",
            y_label: "magnitude (normalized)",
            series: vec![Series { label: "|X|", x: &spec.omega_axis, y: &spec.magnitude }],
        },
    )?;
    let phase: Vec<f64> = spec
        .phase
        .iter()
        .zip(&spec.valid_mask)
        .map(|(&p, &v)| if v { p } else { f64::NAN })
        .collect();
    write_svg(
        &phase_svg,
        &Plot {
            title,
            x_label: "ω (rad/fs)",
            y_label: "phase (rad)",
            series: vec![Series { label: "arg X", x: &spec.omega_axis, y: &phase }],
        },
    )?;
    Ok(vec![csv, svg, phase_svg])
}
