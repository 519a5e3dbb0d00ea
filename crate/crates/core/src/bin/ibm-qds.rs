use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use ibm_qds::scan::{parse_config, run_command, Command, Settings};
use ibm_qds::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Spectrum,
    Be2,
    Wavefunction,
    Potential,
    Classify,
    OracleCheck,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Be2 => Command::Be2,
            Cmd::Wavefunction => Command::Wavefunction,
            Cmd::Potential => Command::Potential,
            Cmd::Classify => Command::Classify,
            Cmd::OracleCheck => Command::OracleCheck,
        }
    }
}

/// Spectra, transition strengths and phase classification of the
/// five-dimensional boson model along the U(5) to O(6) path.
#[derive(Debug, Parser)]
#[command(name = "ibm-qds", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,

    /// Comma-separated boson numbers
    #[arg(long = "N", value_name = "LIST")]
    n_list: Option<String>,
    /// Comma-separated alpha values (overrides the grid)
    #[arg(long, value_name = "LIST")]
    alpha: Option<String>,
    #[arg(long)]
    alpha_min: Option<String>,
    #[arg(long)]
    alpha_max: Option<String>,
    /// Grid points, endpoints included (also the beta points of `potential`)
    #[arg(long)]
    steps: Option<String>,
    /// Highest seniority reported by `spectrum`
    #[arg(long)]
    vmax: Option<String>,
    /// Levels per seniority
    #[arg(long)]
    levels: Option<String>,
    /// Classifier tolerance
    #[arg(long)]
    tol: Option<String>,
    /// Levels used by the classifier
    #[arg(long)]
    phase_levels: Option<String>,
    /// Alpha spacing of the `classify` scan
    #[arg(long)]
    grid: Option<String>,
    /// Seniority for `wavefunction`
    #[arg(long)]
    v: Option<String>,
    /// State index for `wavefunction`
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    beta_max: Option<String>,
    /// Emit per-alpha verdicts instead of widths (`classify`, CSV)
    #[arg(long)]
    verdicts: bool,
    #[arg(long)]
    threads: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// Flat `key = value` file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Cli {
    fn settings(&self) -> Result<Settings, Error> {
        let mut raw = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        let flags = [
            ("N", &self.n_list),
            ("alpha", &self.alpha),
            ("alpha-min", &self.alpha_min),
            ("alpha-max", &self.alpha_max),
            ("steps", &self.steps),
            ("vmax", &self.vmax),
            ("levels", &self.levels),
            ("tol", &self.tol),
            ("phase-levels", &self.phase_levels),
            ("grid", &self.grid),
            ("v", &self.v),
            ("k", &self.k),
            ("beta-max", &self.beta_max),
            ("threads", &self.threads),
            ("format", &self.format),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                raw.insert(key.to_string(), v.clone());
            }
        }
        if self.verdicts {
            raw.insert("verdicts".into(), "true".into());
        }
        if let Some(out) = &self.out {
            raw.insert("out".into(), out.display().to_string());
        }
        Settings::resolve(self.command.into(), &raw)
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let settings = cli.settings()?;
    let command: Command = cli.command.into();
    let mut buf = Vec::new();
    let mut exec = || run_command(command, &settings, &mut buf);
    let outcome = match settings.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(exec)?,
        None => exec()?,
    };
    match &settings.out {
        Some(path) => std::fs::write(path, &buf)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(&buf)?;
            stdout.flush()?;
        }
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("ibm-qds: check failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("ibm-qds: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
