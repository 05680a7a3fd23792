use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bpam_core::error::{Error, Result};
use bpam_core::experiment::csv_io::{format_design_table, write_design, write_sweep};
use bpam_core::experiment::{evaluate, run_design, run_sweep, ExperimentConfig, Preset};

/// Binary PAM constellations for correlated sources on a two-sender Gaussian MAC.
#[derive(Parser, Debug)]
#[command(name = "bpam", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    opts: Overrides,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the constellation of every scheme.
    Design,
    /// Exact error, union bound and optional simulation at the first noise point.
    Evaluate,
    /// Monte-Carlo estimate at every noise point (one million trials unless set).
    Simulate,
    /// Error-rate curves over all noise points.
    Sweep,
    /// Run a named setup: table2, table3, fig4 ... fig9.
    Reproduce { preset: String },
}

#[derive(Args, Debug)]
struct Overrides {
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Extra `key=value` assignment, applied last; may repeat.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Joint probabilities p00,p01,p10,p11.
    #[arg(long, global = true, allow_hyphen_values = true)]
    p_joint: Option<String>,
    #[arg(long, global = true)]
    p1: Option<String>,
    #[arg(long, global = true)]
    p2: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma_m: Option<String>,
    #[arg(long, global = true)]
    e1: Option<String>,
    #[arg(long, global = true)]
    e2: Option<String>,
    /// Waveform correlation(s), comma-separated.
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma_phi: Option<String>,
    /// SNR list in dB; `start:stop:step` ranges allowed.
    #[arg(long, global = true, allow_hyphen_values = true)]
    snr_db: Option<String>,
    /// Noise variance list.
    #[arg(long, global = true)]
    sigma2: Option<String>,
    /// paper-section-IV, table-reproduction or direct-sigma2.
    #[arg(long, global = true)]
    convention: Option<String>,
    /// antipodal, individual, joint, numerical or all.
    #[arg(long, global = true)]
    schemes: Option<String>,
    #[arg(long, global = true)]
    trials: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// CSV destination; standard output when absent.
    #[arg(long, global = true)]
    output: Option<String>,
    /// Grid points per sender for the numerical search.
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Explicit a10,a11,a20,a21 to evaluate instead of the schemes.
    #[arg(long, global = true, allow_hyphen_values = true)]
    amplitudes: Option<String>,
}

impl Overrides {
    fn apply(&self, config: &mut ExperimentConfig) -> Result<()> {
        let flags = [
            ("p_joint", &self.p_joint),
            ("p1", &self.p1),
            ("p2", &self.p2),
            ("gamma_m", &self.gamma_m),
            ("e1", &self.e1),
            ("e2", &self.e2),
            ("gamma_phi", &self.gamma_phi),
            ("snr_db", &self.snr_db),
            ("sigma2", &self.sigma2),
            ("convention", &self.convention),
            ("schemes", &self.schemes),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("output", &self.output),
            ("grid", &self.grid),
            ("amplitudes", &self.amplitudes),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                config.set(key, v)?;
            }
        }
        for assignment in &self.set {
            let (k, v) = assignment.split_once('=').ok_or_else(|| Error::Config {
                line: None,
                field: assignment.clone(),
                message: "expected KEY=VALUE".into(),
            })?;
            config.set(k.trim(), v.trim())?;
        }
        Ok(())
    }
}

fn sink(config: &ExperimentConfig) -> Result<Box<dyn Write>> {
    Ok(match &config.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<()> {
    let (mut config, base_preset) = match &cli.command {
        Command::Reproduce { preset } => {
            let p: Preset = preset.parse()?;
            (p.config(), Some(p))
        }
        _ => (ExperimentConfig::default(), None),
    };
    if let Some(path) = &cli.opts.config {
        let text = std::fs::read_to_string(path)?;
        config.apply_text(&text)?;
    }
    cli.opts.apply(&mut config)?;
    if matches!(cli.command, Command::Simulate) && config.trials == 0 {
        config.trials = 1_000_000;
    }
    config.validate()?;

    let table = match cli.command {
        Command::Design => true,
        Command::Reproduce { .. } => base_preset.is_some_and(Preset::is_table),
        _ => false,
    };
    if table {
        let rows = run_design(&config)?;
        print!("{}", format_design_table(&rows));
        if config.output.is_some() {
            write_design(&rows, sink(&config)?)?;
        }
        return Ok(());
    }
    let rows = match cli.command {
        Command::Evaluate => evaluate(&config)?,
        _ => run_sweep(&config)?,
    };
    write_sweep(&rows, sink(&config)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bpam: {e}");
            if e.is_config_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
