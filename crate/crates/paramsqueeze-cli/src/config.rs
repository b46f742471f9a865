//! Run configuration read from TOML. Every section rejects unknown keys.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use paramsqueeze::atomfield::{AtomParams, BathSpec, Temperature};
use paramsqueeze::mode_evolution::SolverConfig;
use paramsqueeze::profiles::{ParametricProfile, Table};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub profile: Option<ProfileSection>,
    pub atom: Option<AtomSection>,
    pub bath: Option<BathSection>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputSection,
    /// Directory of the config file; relative table paths resolve against it.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSection {
    Constant {
        omega: f64,
        t_a: f64,
        t_b: f64,
        #[serde(default)]
        shift: f64,
    },
    PiecewiseLinear {
        omega_i: f64,
        omega_f: f64,
        t_a: f64,
        t_b: f64,
        #[serde(default)]
        shift: f64,
    },
    SineSquared {
        omega_i: f64,
        omega_f: f64,
        t_a: f64,
        t_b: f64,
        n: u32,
        #[serde(default)]
        shift: f64,
    },
    SmoothSeptic {
        omega_i: f64,
        omega_f: f64,
        t_a: f64,
        t_b: f64,
        #[serde(default)]
        shift: f64,
    },
    /// Two-column text file of t and ω²(t).
    Custom {
        table: PathBuf,
        #[serde(default)]
        shift: f64,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSection {
    pub m: f64,
    pub gamma: f64,
    pub omega_r: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaSetting {
    Inverse(f64),
    Named(ZeroTemperature),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroTemperature {
    ZeroTemperature,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathSection {
    /// Inverse temperature, or the string "zero_temperature".
    pub beta_t: BetaSetting,
    #[serde(default)]
    pub eta: f64,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub directory: PathBuf,
    pub format: Format,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { directory: PathBuf::from("."), format: Format::Csv }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg: RunConfig =
            toml::from_str(&text).map_err(|e| anyhow!("{}: {}", path.display(), e))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.solver.validate()?;
        Ok(cfg)
    }

    pub fn profile(&self) -> anyhow::Result<ParametricProfile> {
        let sec = self.profile.as_ref().ok_or_else(|| anyhow!("config has no [profile] section"))?;
        let (p, shift) = match sec {
            ProfileSection::Constant { omega, t_a, t_b, shift } => {
                (ParametricProfile::constant(*omega, *t_a, *t_b)?, *shift)
            }
            ProfileSection::PiecewiseLinear { omega_i, omega_f, t_a, t_b, shift } => {
                (ParametricProfile::piecewise_linear(*omega_i, *omega_f, *t_a, *t_b)?, *shift)
            }
            ProfileSection::SineSquared { omega_i, omega_f, t_a, t_b, n, shift } => {
                (ParametricProfile::sine_squared(*omega_i, *omega_f, *t_a, *t_b, *n)?, *shift)
            }
            ProfileSection::SmoothSeptic { omega_i, omega_f, t_a, t_b, shift } => {
                (ParametricProfile::smooth_septic(*omega_i, *omega_f, *t_a, *t_b)?, *shift)
            }
            ProfileSection::Custom { table, shift } => {
                let path = self.base_dir.join(table);
                (ParametricProfile::custom(Table::from_file(&path)?)?, *shift)
            }
        };
        Ok(p.with_shift(shift)?)
    }

    pub fn atom(&self) -> anyhow::Result<AtomParams> {
        let a = self.atom.ok_or_else(|| anyhow!("config has no [atom] section"))?;
        Ok(AtomParams::new(a.m, a.gamma, a.omega_r)?)
    }

    pub fn bath(&self) -> anyhow::Result<BathSpec> {
        let b = self.bath.ok_or_else(|| anyhow!("config has no [bath] section"))?;
        let temp = match b.beta_t {
            BetaSetting::Inverse(beta) => Temperature::Finite(beta),
            BetaSetting::Named(ZeroTemperature::ZeroTemperature) => Temperature::Zero,
        };
        Ok(BathSpec::new(temp, b.eta, b.theta)?)
    }
}
