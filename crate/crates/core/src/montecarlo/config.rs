use std::str::FromStr;

use serde::Serialize;

use super::Windows;
use crate::error::{Error, Result};

/// Monte Carlo parameters, readable from a flat `key = value` file.
///
/// Keys: `L`, `mu_hat`, `d`, `blocks`, `samples`, `seed`, `window_i`,
/// `window_j` (the last two as `lo,hi`). Blank lines and `#` comments are
/// ignored. A missing `mu_hat` means the default upper bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub l: usize,
    pub mu_hat: Option<f64>,
    pub d: usize,
    pub blocks: usize,
    pub samples: usize,
    pub seed: u64,
    pub windows: Windows,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            l: 6,
            mu_hat: None,
            d: 2,
            blocks: 100,
            samples: 1000,
            seed: 0,
            windows: Windows::default(),
        }
    }
}

fn value<T: FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::Precondition(format!("bad value {raw:?} for {key}")))
}

fn pair(key: &str, raw: &str) -> Result<(f64, f64)> {
    let (lo, hi) = raw
        .split_once(',')
        .ok_or_else(|| Error::Precondition(format!("{key} needs lo,hi, got {raw:?}")))?;
    Ok((value(key, lo.trim())?, value(key, hi.trim())?))
}

impl ExperimentConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, raw: &str) -> Result<()> {
        match key {
            "L" => self.l = value(key, raw)?,
            "mu_hat" => self.mu_hat = Some(value(key, raw)?),
            "d" => self.d = value(key, raw)?,
            "blocks" => self.blocks = value(key, raw)?,
            "samples" => self.samples = value(key, raw)?,
            "seed" => self.seed = value(key, raw)?,
            "window_i" => self.windows.i = pair(key, raw)?,
            "window_j" => self.windows.j = pair(key, raw)?,
            _ => return Err(Error::Precondition(format!("unknown setting {key:?}"))),
        }
        Ok(())
    }

    /// Reads settings on top of the defaults.
    pub fn parse(text: &str) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, raw) = line.split_once('=').ok_or_else(|| {
                Error::Precondition(format!("line {}: expected key = value", lineno + 1))
            })?;
            cfg.set(key.trim(), raw.trim())?;
        }
        cfg.windows.validate()?;
        Ok(cfg)
    }
}
