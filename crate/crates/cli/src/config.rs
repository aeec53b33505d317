//! Flat `key = value` configuration files and flag/config/default layering.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

/// Keys accepted in a configuration file; each mirrors the long flag of the same name.
pub const KEYS: &[&str] = &[
    "snr-db",
    "eta",
    "lambda0",
    "lambda1",
    "lambda2",
    "mean-gain0",
    "mean-gain1",
    "mean-gain2",
    "rth",
    "schemes",
    "modes",
    "metrics",
    "preset",
    "trials",
    "seed",
    "workers",
    "quad",
    "out",
    "plot",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    /// Parses `key = value` lines. Blank lines and lines starting with `#` are
    /// ignored; underscores in keys are read as dashes.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "config line {}: expected key = value, got {line:?}",
                    i + 1
                )));
            };
            let key = key.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key {key:?}",
                    i + 1
                )));
            }
            if entries
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(CliError::Usage(format!(
                    "config line {}: duplicate key {key:?}",
                    i + 1
                )));
            }
        }
        Ok(ConfigFile { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Typed value of `key`, if present.
    pub fn get<T>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| CliError::Usage(format!("config key {key}: {e}")))
            })
            .transpose()
    }

    /// The flag value if given, otherwise the config value.
    pub fn pick<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}
