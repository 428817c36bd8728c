//! Command-line front end.
//!
//! Configuration is layered: built-in defaults, then a `key = value` file
//! (`--config`, or the file named by `PTDIRAC_CONFIG`), then `--key value`
//! flags. Exit codes: 0 success, 1 a check failed, 2 usage or config error.

pub mod commands;
pub mod config;
pub mod report;

use crate::params::Vary;
use crate::spectral::SpectralError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{ConfigError, Format, RunConfig};
use report::Render;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use thiserror::Error;

pub const CONFIG_ENV: &str = "PTDIRAC_CONFIG";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Output(String),
    #[error("{0}")]
    Failure(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failure(_) | CliError::Spectral(_) => 1,
            _ => 2,
        }
    }
}

/// Keys shared by every subcommand; each mirrors a config-file key.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Config file of `key = value` lines (overrides $PTDIRAC_CONFIG)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long = "v_f", global = true)]
    pub v_f: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k1: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b0: Option<String>,
    #[arg(long, global = true)]
    pub e: Option<String>,
    #[arg(long, global = true)]
    pub c: Option<String>,
    #[arg(long, global = true)]
    pub hbar: Option<String>,
    /// Levels reported, n = 0..n_max-1
    #[arg(long = "n_max", global = true)]
    pub n_max: Option<String>,
    /// I or II
    #[arg(long, global = true)]
    pub branch: Option<String>,
    /// primary or time-reversed
    #[arg(long, global = true)]
    pub valley: Option<String>,
    /// Truncation level of the matrix oracle
    #[arg(long = "n_tr", global = true)]
    pub n_tr: Option<String>,
    /// Relative classification tolerance
    #[arg(long, global = true)]
    pub tol: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<String>,
    /// text, csv or json
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<String>,
}

impl CommonArgs {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let fields = [
            ("v_f", &self.v_f),
            ("lambda", &self.lambda),
            ("k1", &self.k1),
            ("b0", &self.b0),
            ("e", &self.e),
            ("c", &self.c),
            ("hbar", &self.hbar),
            ("n_max", &self.n_max),
            ("branch", &self.branch),
            ("valley", &self.valley),
            ("n_tr", &self.n_tr),
            ("tol", &self.tol),
            ("seed", &self.seed),
            ("format", &self.format),
            ("output", &self.output),
        ];
        fields
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k, v.clone())))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VaryArg {
    Lambda,
    B0,
}

impl From<VaryArg> for Vary {
    fn from(v: VaryArg) -> Self {
        match v {
            VaryArg::Lambda => Vary::Lambda,
            VaryArg::B0 => Vary::B0,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ptdirac", version, about = "PT phase transition of a Dirac oscillator with imaginary Rashba coupling")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form levels, mass gap, critical values and phase verdicts
    Analytic,
    /// Symbolic identity checks plus the matrix oracle; exit 1 on any failure
    Verify {
        /// Add eps·σ_x(z + z̄) to the Hamiltonians (negative control)
        #[arg(long)]
        perturb: Option<f64>,
    },
    /// Eigenvalues of the truncated matrix
    Spectrum {
        /// Skip the random similarity transform
        #[arg(long)]
        raw: bool,
        /// Also write the (scrambled) matrix to this file
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Level data over a parameter grid (CSV by default)
    Sweep {
        #[arg(long, value_enum, default_value = "lambda")]
        vary: VaryArg,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long, default_value_t = 400)]
        steps: usize,
        /// Geometric grid
        #[arg(long)]
        log: bool,
        /// Add matrix-oracle columns
        #[arg(long)]
        numeric: bool,
        /// Oracle on every k-th grid point
        #[arg(long, default_value_t = 10)]
        decimate: usize,
    },
    /// Analytic and bisected transition point
    Critical {
        #[arg(long, value_enum, default_value = "lambda")]
        vary: VaryArg,
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<f64>,
        #[arg(long = "bisect_tol", default_value_t = 1e-7)]
        bisect_tol: f64,
    },
    /// Lowest-Landau-level annihilation residuals
    Lll {
        #[arg(long = "l_max", default_value_t = 20)]
        l_max: u32,
    },
    /// Ladder commutator and Jaynes-Cummings factorization residuals
    Jc {
        #[arg(long, default_value_t = 30)]
        degree: u32,
        #[arg(long = "exact_degree", default_value_t = 8)]
        exact_degree: u32,
    },
}

fn default_range(vary: Vary) -> (f64, f64) {
    match vary {
        Vary::Lambda => (0.0, 2.0),
        Vary::B0 => (1.0, 20.0),
    }
}

fn render<R: Render>(report: &R, format: Format) -> String {
    match format {
        Format::Text => report.text(),
        Format::Csv => report.csv(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

fn emit(cfg: &RunConfig, body: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => std::fs::write(path, body).map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => out.write_all(body.as_bytes()).map_err(|e| CliError::Output(e.to_string())),
    }
}

fn execute(cli: Cli, env_config: Option<PathBuf>, out: &mut dyn Write) -> Result<i32, CliError> {
    let file = cli.common.config.clone().or(env_config);
    let overrides = cli.common.overrides();
    let overrides: Vec<(&str, String)> = overrides.iter().map(|(k, v)| (*k, v.clone())).collect();
    let mut cfg = RunConfig::resolve(file.as_deref(), &overrides)?;
    let ok = |passed: bool| if passed { 0 } else { 1 };
    match cli.command {
        Command::Analytic => {
            emit(&cfg, &render(&commands::analytic(&cfg), cfg.format), out)?;
            Ok(0)
        }
        Command::Verify { perturb } => {
            let report = commands::verify(&cfg, perturb);
            emit(&cfg, &render(&report, cfg.format), out)?;
            Ok(ok(report.passed))
        }
        Command::Spectrum { raw, dump } => {
            let report = commands::spectrum(&cfg, raw, dump.as_deref())?;
            emit(&cfg, &render(&report, cfg.format), out)?;
            Ok(0)
        }
        Command::Sweep {
            vary,
            from,
            to,
            steps,
            log,
            numeric,
            decimate,
        } => {
            let vary = Vary::from(vary);
            let (lo, hi) = default_range(vary);
            let spec = commands::SweepSpec {
                vary,
                from: from.unwrap_or(lo),
                to: to.unwrap_or(hi),
                steps,
                log,
                numeric: numeric.then_some(decimate.max(1)),
            };
            if cfg.format == Format::Text {
                cfg.format = Format::Csv;
            }
            emit(&cfg, &render(&commands::sweep(&cfg, &spec)?, cfg.format), out)?;
            Ok(0)
        }
        Command::Critical {
            vary,
            lo,
            hi,
            bisect_tol,
        } => {
            let bracket = match (lo, hi) {
                (Some(a), Some(b)) => Some((a, b)),
                (None, None) => None,
                _ => return Err(CliError::Usage("--lo and --hi go together".into())),
            };
            let report = commands::critical(&cfg, vary.into(), bracket, bisect_tol)?;
            emit(&cfg, &render(&report, cfg.format), out)?;
            Ok(ok(report.agree))
        }
        Command::Lll { l_max } => {
            let report = commands::lll(&cfg, l_max);
            emit(&cfg, &render(&report, cfg.format), out)?;
            Ok(ok(report.passed))
        }
        Command::Jc { degree, exact_degree } => {
            let report = commands::jc(&cfg, degree, exact_degree)?;
            emit(&cfg, &render(&report, cfg.format), out)?;
            Ok(ok(report.passed))
        }
    }
}

/// Parses `args` (program name first) and runs the command. `env_config` is
/// the value of `PTDIRAC_CONFIG`, if set. Returns the exit code.
pub fn run(args: Vec<OsString>, env_config: Option<PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli, env_config, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point of the binary.
pub fn main() -> i32 {
    let env_config = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os().collect(), env_config, &mut stdout.lock(), &mut stderr.lock())
}
