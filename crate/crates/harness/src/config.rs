//! Run configuration: what to run, on which engine, with which parameters.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Profile,
    Flow,
    Check,
    Deficit,
    Kernel,
    Battery,
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Profile => "profile",
            Self::Flow => "flow",
            Self::Check => "check",
            Self::Deficit => "deficit",
            Self::Kernel => "kernel",
            Self::Battery => "battery",
        })
    }
}

/// `gauss`, `sphere:<n>` or `line:<potential name | table.csv>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum EngineSpec {
    Gauss,
    Sphere(usize),
    Line(String),
}

impl EngineSpec {
    /// Table path when the line engine reads a tabulated potential.
    pub fn line_table(&self) -> Option<&Path> {
        match self {
            Self::Line(src) if src.ends_with(".csv") => Some(Path::new(src)),
            _ => None,
        }
    }
}

impl fmt::Display for EngineSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Gauss => f.write_str("gauss"),
            Self::Sphere(n) => write!(f, "sphere:{n}"),
            Self::Line(src) => write!(f, "line:{src}"),
        }
    }
}

impl FromStr for EngineSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = match s.split_once(':') {
            Some((h, t)) => (h, Some(t)),
            None => (s, None),
        };
        match (head, tail) {
            ("gauss", None) => Ok(Self::Gauss),
            ("sphere", Some(n)) => {
                let n: usize = n
                    .parse()
                    .map_err(|_| HarnessError::Usage(format!("sphere dimension {n:?} is not an integer")))?;
                if n < 2 {
                    return Err(HarnessError::Usage(format!("sphere dimension must be ≥ 2, got {n}")));
                }
                Ok(Self::Sphere(n))
            }
            ("sphere", None) => Ok(Self::Sphere(3)),
            ("line", Some(src)) if !src.is_empty() => Ok(Self::Line(src.to_string())),
            ("line", None) => Ok(Self::Line("gaussian".into())),
            _ => Err(HarnessError::Usage(format!("unknown engine {s:?}"))),
        }
    }
}

impl TryFrom<String> for EngineSpec {
    type Error = HarnessError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<EngineSpec> for String {
    fn from(e: EngineSpec) -> String {
        e.to_string()
    }
}

fn default_tolerance() -> f64 {
    1e-9
}

fn default_out() -> PathBuf {
    PathBuf::from("gamma-lab-out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    pub engine: EngineSpec,
    pub operation: String,
    /// Numeric operation parameters (`t`, `kappa`, `eps`, `v`, ...).
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    /// Named choices (`f`, `family`, ...).
    #[serde(default)]
    pub options: BTreeMap<String, String>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: CommandKind, engine: EngineSpec, operation: impl Into<String>) -> Self {
        Self {
            command,
            engine,
            operation: operation.into(),
            params: BTreeMap::new(),
            options: BTreeMap::new(),
            tolerance: default_tolerance(),
            out: default_out(),
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| HarnessError::Usage(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.operation.is_empty() {
            return Err(HarnessError::Usage("operation name is empty".into()));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(HarnessError::Usage(format!(
                "tolerance must be ≥ 0, got {}",
                self.tolerance
            )));
        }
        if let Some((k, v)) = self.params.iter().find(|(_, v)| !v.is_finite()) {
            return Err(HarnessError::Usage(format!("parameter {k} = {v} is not finite")));
        }
        for key in ["t", "kappa", "eps"] {
            if let Some(v) = self.params.get(key) {
                if !(*v > 0.0) {
                    return Err(HarnessError::Usage(format!("{key} must be positive, got {v}")));
                }
            }
        }
        if let Some(v) = self.params.get("v") {
            if !(*v > 0.0 && *v < 1.0) {
                return Err(HarnessError::Usage(format!("volume must lie in (0,1), got {v}")));
            }
        }
        Ok(())
    }

    pub fn param(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }

    pub fn option(&self, key: &str) -> Option<&str> {
        self.options.get(key).map(String::as_str)
    }

    /// Canonical serialization; field order is fixed and maps are sorted.
    pub fn canonical_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// SHA-256 of the canonical JSON.
    pub fn hash(&self) -> Result<String> {
        Ok(format!("{:x}", Sha256::digest(self.canonical_json()?.as_bytes())))
    }
}
