use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twophoton_cli::{analyze, run_scenario, AnalyzeOptions, CliError, ScenarioConfig};

#[derive(Parser)]
#[command(name = "twophoton", version, about = "Phase-modulated two-photon interferometry simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write CSV, SVG and fit_report.json.
    Simulate {
        config: PathBuf,
        /// Output directory (overrides `outputs` in the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Noise seed (overrides `noise.seed`).
        #[arg(long)]
        seed: Option<u64>,
        /// Check the config and exit without simulating or writing anything.
        #[arg(long)]
        validate: bool,
    },
    /// Re-run the spectral analysis on interferogram CSVs.
    Analyze {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// No-sample 1f scan; enables sample-response recovery.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Sample length, enables the GVD fit on 1f inputs.
        #[arg(long)]
        length_mm: Option<f64>,
        /// Reference laser wavelength used by the lock-in.
        #[arg(long, default_value_t = 632.8)]
        laser_nm: f64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { config, out, seed, validate } => {
            let mut cfg = ScenarioConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.noise.seed = s;
            }
            if let Some(o) = out {
                cfg.outputs = o;
            }
            cfg.validate()?;
            if validate {
                println!("{}: ok", config.display());
                return Ok(());
            }
            let out_dir = cfg.outputs.clone();
            let res = run_scenario(&cfg, &out_dir)?;
            for f in &res.files {
                println!("{}", f.display());
            }
            if let Some(g) = res.report.gvd {
                println!("GVD = {:.3} ± {:.3} fs²/mm", g.gvd, g.gvd_uncertainty);
            }
            Ok(())
        }
        Command::Analyze { inputs, reference, out, length_mm, laser_nm } => {
            let files = analyze(
                &inputs,
                &AnalyzeOptions { reference, out_dir: out, length_mm, reference_nm: laser_nm },
            )?;
            for f in &files {
                println!("{}", f.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
