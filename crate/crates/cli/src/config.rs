//! Experiment configuration: one self-contained TOML document describing
//! the benchmark list, the scheme grid and the attack matrix.
//!
//! ```toml
//! name = "table3"
//! table = "t3"
//! benchmarks = ["fixtures/74283.bench", "fixtures/c499.bench"]
//!
//! [[schemes]]
//! label = "SARLock"          # row/column label; defaults to the scheme name
//! scheme = "sarlock"
//! n_key = [5, 6, 7, 8, 9]
//! lock_seed = 1
//!   [schemes.attack]
//!   kind = "sweep"           # sweep | miter
//!   mode = "exhaustive"      # random | exhaustive
//!   hold = 1                 # cycles per pattern, or "auto" for n_c + 1
//!   seeds = [1]              # one attack round per seed
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use locklab::locking::Scheme;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse {path}: {source}")]
    Toml {
        path: PathBuf,
        source: Box<toml::de::Error>,
    },
    #[error("config `{0}`: {1}")]
    Invalid(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableId {
    T2,
    T3,
    T4,
    Area,
}

impl TableId {
    pub fn file_stem(self) -> &'static str {
        match self {
            TableId::T2 => "table2",
            TableId::T3 => "table3",
            TableId::T4 => "table4",
            TableId::Area => "area",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AttackKindConfig {
    #[default]
    Sweep,
    Miter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ModeConfig {
    Random,
    #[default]
    Exhaustive,
}

/// Hold length per pattern: a fixed cycle count or `"auto"` = `n_c + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum HoldSpec {
    Fixed(usize),
    Named(AutoHold),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoHold {
    Auto,
}

impl Default for HoldSpec {
    fn default() -> Self {
        HoldSpec::Named(AutoHold::Auto)
    }
}

impl HoldSpec {
    pub fn resolve(self, n_c: usize) -> usize {
        match self {
            HoldSpec::Fixed(h) => h,
            HoldSpec::Named(AutoHold::Auto) => n_c + 1,
        }
    }
}

fn default_seeds() -> Vec<u64> {
    vec![1]
}

fn default_lock_seed() -> u64 {
    1
}

#[derive(Debug, Clone, Deserialize)]
pub struct AttackConfig {
    #[serde(default)]
    pub kind: AttackKindConfig,
    #[serde(default)]
    pub mode: ModeConfig,
    #[serde(default)]
    pub hold: HoldSpec,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub budget: Option<usize>,
}

impl Default for AttackConfig {
    fn default() -> Self {
        AttackConfig {
            kind: AttackKindConfig::default(),
            mode: ModeConfig::default(),
            hold: HoldSpec::default(),
            seeds: default_seeds(),
            budget: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    #[serde(default)]
    pub label: Option<String>,
    pub n_key: Vec<usize>,
    /// Camouflaged-DFF counts; only meaningful for C-SAR (defaults to `[1]`
    /// there and `[0]` elsewhere).
    #[serde(default)]
    pub n_c: Option<Vec<usize>>,
    #[serde(default = "default_lock_seed")]
    pub lock_seed: u64,
    #[serde(default)]
    pub attack: AttackConfig,
}

impl SchemeConfig {
    pub fn label(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| self.scheme.name().to_string())
    }

    pub fn n_c_values(&self) -> Vec<usize> {
        match &self.n_c {
            Some(v) => v.clone(),
            None if self.scheme == Scheme::Csar => vec![1],
            None => vec![0],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub table: TableId,
    pub benchmarks: Vec<PathBuf>,
    #[serde(default)]
    pub jj_costs: Option<PathBuf>,
    pub schemes: Vec<SchemeConfig>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let cfg: ExperimentConfig =
            toml::from_str(&text).map_err(|source| ConfigError::Toml {
                path: path.to_path_buf(),
                source: Box::new(source),
            })?;
        // Relative benchmark paths resolve against the config's directory.
        let base = path.parent().unwrap_or(Path::new("."));
        let cfg = ExperimentConfig {
            benchmarks: cfg
                .benchmarks
                .iter()
                .map(|p| if p.is_relative() { base.join(p) } else { p.clone() })
                .collect(),
            jj_costs: cfg.jj_costs.map(|p| if p.is_relative() { base.join(p) } else { p }),
            ..cfg
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |msg: String| Err(ConfigError::Invalid(self.name.clone(), msg));
        if self.benchmarks.is_empty() {
            return err("benchmark list is empty".into());
        }
        for b in &self.benchmarks {
            if !b.exists() {
                return err(format!("benchmark file {} does not exist", b.display()));
            }
        }
        if let Some(p) = &self.jj_costs {
            if !p.exists() {
                return err(format!("jj cost table {} does not exist", p.display()));
            }
        }
        if self.schemes.is_empty() {
            return err("scheme list is empty".into());
        }
        for s in &self.schemes {
            if s.n_key.is_empty() {
                return err(format!("scheme {}: empty n_key range", s.label()));
            }
            if s.n_c_values().is_empty() {
                return err(format!("scheme {}: empty n_c range", s.label()));
            }
            if s.attack.seeds.is_empty() {
                return err(format!("scheme {}: seeds must be explicit", s.label()));
            }
            if s.scheme == Scheme::Csar && s.n_c_values().iter().any(|&c| c == 0) {
                return err(format!("scheme {}: C-SAR requires n_c >= 1", s.label()));
            }
        }
        Ok(())
    }
}
