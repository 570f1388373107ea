//! Cap overrides and the optional experiment config file.
//!
//! Resolution order for every setting: command-line flag, then config file,
//! then environment variable, then built-in default.

use std::env;
use std::path::Path;

use anyhow::Context;
use mecsize_core::{
    DEFAULT_ENUMERATION_CAP, DEFAULT_ORACLE_CAP, DEFAULT_REJECTION_BUDGET, DEFAULT_SIGNATURE_CAP,
};
use serde::Deserialize;

pub const ENV_SIGNATURE_CAP: &str = "MECSIZE_SIGNATURE_CAP";
pub const ENV_ORACLE_CAP: &str = "MECSIZE_ORACLE_CAP";
pub const ENV_ENUMERATION_CAP: &str = "MECSIZE_ENUMERATION_CAP";
pub const ENV_REJECTION_BUDGET: &str = "MECSIZE_REJECTION_BUDGET";

/// Size limits for the exhaustive machinery.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub signature: u32,
    pub oracle: u32,
    pub enumeration: usize,
    pub rejection_budget: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            signature: DEFAULT_SIGNATURE_CAP,
            oracle: DEFAULT_ORACLE_CAP,
            enumeration: DEFAULT_ENUMERATION_CAP,
            rejection_budget: DEFAULT_REJECTION_BUDGET,
        }
    }
}

impl Caps {
    /// Defaults overridden by environment variables where present.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Some(v) = env_parse::<u32>(ENV_SIGNATURE_CAP) {
            caps.signature = v;
        }
        if let Some(v) = env_parse::<u32>(ENV_ORACLE_CAP) {
            caps.oracle = v;
        }
        if let Some(v) = env_parse::<usize>(ENV_ENUMERATION_CAP) {
            caps.enumeration = v;
        }
        if let Some(v) = env_parse::<u64>(ENV_REJECTION_BUDGET) {
            caps.rejection_budget = v;
        }
        caps
    }
}

fn env_parse<T: core::str::FromStr>(key: &str) -> Option<T> {
    env::var(key).ok().and_then(|v| v.parse().ok())
}

/// Optional TOML config for the experiment commands; keys mirror the flags.
/// Flags win over config values.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n: Option<Vec<u32>>,
    pub p: Option<Vec<f64>>,
    pub p_rule: Option<String>,
    pub c: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub max_n: Option<u32>,
    pub suite: Option<String>,
    pub format: Option<String>,
    pub output: Option<String>,
    pub failures_dir: Option<String>,
    pub signature_cap: Option<u32>,
    pub oracle_cap: Option<u32>,
    pub enumeration_cap: Option<usize>,
    pub rejection_budget: Option<u64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config file {}", path.display()))
    }

    pub fn apply_caps(&self, caps: &mut Caps) {
        if let Some(v) = self.signature_cap {
            caps.signature = v;
        }
        if let Some(v) = self.oracle_cap {
            caps.oracle = v;
        }
        if let Some(v) = self.enumeration_cap {
            caps.enumeration = v;
        }
        if let Some(v) = self.rejection_budget {
            caps.rejection_budget = v;
        }
    }
}
