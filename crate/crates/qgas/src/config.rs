//! Declarative run configuration, read from TOML. Unknown keys are rejected.
//!
//! ```toml
//! [system]
//! eps = [1.0, 0.0]
//! particles = 5
//! q = 2.0
//! hbar = 1.0
//!
//! [zeros_beta]
//! target = "correlation"
//! beta = [-0.5, 0.5]
//! beta1 = [-10.0, 10.0]
//! grid = [16, 128]
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use qgas_core::{DeformationParam, SystemSpec, Target};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemSection,
    pub zeros_poly: ZerosPolySection,
    pub zeros_beta: ZerosBetaSection,
    pub correlator: CorrelatorSection,
    pub oracle: OracleSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemSection {
    pub eps: Vec<f64>,
    pub particles: usize,
    pub q: f64,
    pub hbar: f64,
}

impl Default for SystemSection {
    fn default() -> Self {
        Self {
            eps: vec![1.0, 0.0],
            particles: 5,
            q: 2.0,
            hbar: 1.0,
        }
    }
}

impl SystemSection {
    pub fn spec(&self) -> CliResult<SystemSpec> {
        let q = DeformationParam::new(self.q)
            .map_err(|e| CliError::Config(format!("[system] q: {e}")))?;
        SystemSpec::new(self.eps.clone(), self.particles, q, self.hbar)
            .map_err(|e| CliError::Config(format!("[system]: {e}")))
    }
}

/// Which z-plane polynomial a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ZeroKind {
    /// Partition function: Fisher zeros.
    Fisher,
    /// Correlation numerator.
    Correlation,
}

impl ZeroKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ZeroKind::Fisher => "fisher",
            ZeroKind::Correlation => "correlation",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fisher" => Some(ZeroKind::Fisher),
            "correlation" => Some(ZeroKind::Correlation),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZerosPolySection {
    pub kinds: Vec<ZeroKind>,
}

impl Default for ZerosPolySection {
    fn default() -> Self {
        Self {
            kinds: vec![ZeroKind::Fisher, ZeroKind::Correlation],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BetaTarget {
    #[default]
    Partition,
    Correlation,
}

impl BetaTarget {
    pub fn target(self) -> Target {
        match self {
            BetaTarget::Partition => Target::Partition,
            BetaTarget::Correlation => Target::Correlation,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BetaTarget::Partition => "partition",
            BetaTarget::Correlation => "correlation",
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZerosBetaSection {
    pub target: BetaTarget,
    /// `[β_min, β_max]`; one commensurate period is used when absent.
    pub beta: Option<[f64; 2]>,
    pub beta1: Option<[f64; 2]>,
    /// `[m, k]` cells along β and β₁.
    pub grid: Option<[usize; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorrelatorSection {
    pub beta: f64,
    pub tau_start: f64,
    pub tau_stop: f64,
    pub points: usize,
    /// A local minimum of `|C|` below `zero_threshold·|C(0)|` is reported.
    pub zero_threshold: f64,
}

impl Default for CorrelatorSection {
    fn default() -> Self {
        Self {
            beta: 0.0,
            tau_start: 0.0,
            tau_stop: 20.0,
            points: 2001,
            zero_threshold: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSection {
    /// Random parameter points per equivalence case.
    pub samples: usize,
    /// Perturb q on the matrix side of one sub-check; the suite must then fail.
    pub corrupt_q: bool,
}

impl Default for OracleSection {
    fn default() -> Self {
        Self {
            samples: 5,
            corrupt_q: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub format: Format,
    pub svg: bool,
    pub seed: u64,
    pub threads: Option<usize>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            format: Format::Csv,
            svg: false,
            seed: 0,
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}
