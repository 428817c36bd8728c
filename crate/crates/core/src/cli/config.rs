//! Run configuration: defaults, `key = value` files and flag overrides.

use crate::params::{Branch, PhysParams, Valley};
use crate::spectral::{DEFAULT_N_TR, DEFAULT_TOL};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Every key accepted in a config file and as a `--key value` flag.
pub const KEYS: [&str; 15] = [
    "v_f", "lambda", "k1", "b0", "e", "c", "hbar", "n_max", "branch", "valley", "n_tr", "tol", "seed", "format",
    "output",
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("{origin}: expected `key = value`, got `{line}`")]
    Syntax { origin: String, line: String },
    #[error("bad value for `{key}`: `{value}` ({reason})")]
    BadValue { key: String, value: String, reason: String },
    #[error("cannot read config file {path}: {reason}")]
    Io { path: String, reason: String },
    #[error(transparent)]
    Params(#[from] crate::params::ParamsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: PhysParams,
    /// Levels reported, `n = 0..n_max−1`.
    pub n_max: usize,
    pub branch: Branch,
    pub valley: Valley,
    pub n_tr: usize,
    /// Relative tolerance of the numerical classification.
    pub tol: f64,
    pub seed: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: PhysParams::default(),
            n_max: 5,
            branch: Branch::I,
            valley: Valley::Primary,
            n_tr: DEFAULT_N_TR,
            tol: DEFAULT_TOL,
            seed: 1,
            format: Format::Text,
            output: None,
        }
    }
}

fn bad(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::BadValue {
        key: key.into(),
        value: value.into(),
        reason: reason.into(),
    }
}

fn finite(key: &str, value: &str) -> Result<f64, ConfigError> {
    let x: f64 = value.parse().map_err(|_| bad(key, value, "not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad(key, value, "not finite"))
    }
}

fn count(key: &str, value: &str, min: usize) -> Result<usize, ConfigError> {
    let n: usize = value.parse().map_err(|_| bad(key, value, "not a non-negative integer"))?;
    if n < min {
        return Err(bad(key, value, format!("must be at least {min}")));
    }
    Ok(n)
}

pub fn parse_branch(value: &str) -> Option<Branch> {
    match value.to_ascii_lowercase().as_str() {
        "i" | "1" => Some(Branch::I),
        "ii" | "2" => Some(Branch::II),
        _ => None,
    }
}

pub fn parse_valley(value: &str) -> Option<Valley> {
    match value.to_ascii_lowercase().as_str() {
        "primary" | "h" => Some(Valley::Primary),
        "time-reversed" | "time_reversed" | "tr" => Some(Valley::TimeReversed),
        _ => None,
    }
}

impl RunConfig {
    /// Sets one key. Parameter values are checked for finiteness here and
    /// for physical validity in [`RunConfig::finish`].
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let p = &mut self.params;
        match key {
            "v_f" => p.v_f = finite(key, value)?,
            "lambda" => p.lambda = finite(key, value)?,
            "k1" => p.k1 = finite(key, value)?,
            "b0" => p.b0 = finite(key, value)?,
            "e" => p.e = finite(key, value)?,
            "c" => p.c = finite(key, value)?,
            "hbar" => p.hbar = finite(key, value)?,
            "n_max" => self.n_max = count(key, value, 1)?,
            "n_tr" => self.n_tr = count(key, value, 3)?,
            "branch" => self.branch = parse_branch(value).ok_or_else(|| bad(key, value, "expected I or II"))?,
            "valley" => {
                self.valley = parse_valley(value).ok_or_else(|| bad(key, value, "expected primary or time-reversed"))?
            }
            "tol" => {
                let t = finite(key, value)?;
                if t <= 0.0 {
                    return Err(bad(key, value, "must be positive"));
                }
                self.tol = t;
            }
            "seed" => self.seed = value.parse().map_err(|_| bad(key, value, "not an unsigned integer"))?,
            "format" => {
                self.format = match value {
                    "text" => Format::Text,
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(bad(key, value, "expected text, csv or json")),
                }
            }
            "output" => self.output = Some(PathBuf::from(value)),
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                origin: format!("{origin}:{}", i + 1),
                line: raw.trim().into(),
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        self.apply_text(&text, &path.display().to_string())
    }

    pub fn finish(self) -> Result<Self, ConfigError> {
        self.params.validate()?;
        Ok(self)
    }

    /// Defaults, then the config file, then flag overrides in order.
    pub fn resolve(file: Option<&Path>, overrides: &[(&str, String)]) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        if let Some(path) = file {
            cfg.apply_file(path)?;
        }
        for (key, value) in overrides {
            cfg.set(key, value)?;
        }
        cfg.finish()
    }
}
