//! Simulation configuration: JSON schema, defaults mirroring the reference
//! chloroform constants, and the run manifest that makes a simulation
//! reproducible.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use qcorrsim_core::{
    BellDiagonalCoeffs, ChannelSelection, OptimizerSettings, RelaxationParams, TimeGrid,
};

/// Initial-state source: exactly one of the two variants.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    /// Bell-diagonal coefficients (the default is synthetic: the constants
    /// reproduce the published sudden-change time, the experimental
    /// preparation values are not public).
    #[serde(rename_all = "kebab-case")]
    Bell { c_x: f64, c_y: f64, c_z: f64 },
    /// Path to a deviation-matrix JSON file (`re`/`im` 4x4 arrays).
    StateFile(PathBuf),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub struct RelaxationConfig {
    pub t1_a: f64,
    pub t1_b: f64,
    pub t2_a: f64,
    pub t2_b: f64,
    pub epsilon: f64,
}

impl Default for RelaxationConfig {
    fn default() -> Self {
        Self {
            t1_a: 2.5,
            t1_b: 7.0,
            t2_a: 0.31,
            t2_b: 0.12,
            epsilon: 1e-5,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelChoice {
    Pd,
    Gad,
    Both,
}

impl ChannelChoice {
    pub fn to_selection(self) -> ChannelSelection {
        match self {
            ChannelChoice::Pd => ChannelSelection::PhaseDampingOnly,
            ChannelChoice::Gad => ChannelSelection::AmplitudeDampingOnly,
            ChannelChoice::Both => ChannelSelection::Both,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pd" => Ok(ChannelChoice::Pd),
            "gad" => Ok(ChannelChoice::Gad),
            "both" => Ok(ChannelChoice::Both),
            other => bail!("unknown channel selection '{other}' (expected pd|gad|both)"),
        }
    }
}

/// Sampling grid: either the coupling-synchronized grid `t_m = m/(4J)` or an
/// explicit list of times.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum GridConfig {
    #[serde(rename_all = "kebab-case")]
    Coupling { j_coupling: f64, m_max: usize },
    Times(Vec<f64>),
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig::Coupling {
            j_coupling: 215.1,
            m_max: 250,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub struct OptimizerConfig {
    pub grid_theta: usize,
    pub grid_phi: usize,
    pub refine_iters: usize,
    pub tolerance: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        let s = OptimizerSettings::default();
        Self {
            grid_theta: s.grid_theta,
            grid_phi: s.grid_phi,
            refine_iters: s.refine_iters,
            tolerance: s.tolerance,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SimulationConfig {
    pub initial: InitialState,
    #[serde(default)]
    pub relaxation: RelaxationConfig,
    pub channels: ChannelChoice,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub residual_amplitude: f64,
    #[serde(default)]
    pub output: OutputConfig,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            initial: InitialState::Bell {
                c_x: 0.41,
                c_y: 0.41,
                c_z: 0.30,
            },
            relaxation: RelaxationConfig::default(),
            channels: ChannelChoice::Both,
            grid: GridConfig::default(),
            optimizer: OptimizerConfig::default(),
            residual_amplitude: 0.0,
            output: OutputConfig::default(),
        }
    }
}

impl SimulationConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("config file {} is not valid", path.display()))
    }

    pub fn relaxation_params(&self) -> Result<RelaxationParams> {
        let r = &self.relaxation;
        Ok(RelaxationParams::new(
            r.t1_a, r.t1_b, r.t2_a, r.t2_b, r.epsilon,
        )?)
    }

    pub fn optimizer_settings(&self) -> Result<OptimizerSettings> {
        let o = &self.optimizer;
        Ok(OptimizerSettings::new(
            o.grid_theta,
            o.grid_phi,
            o.refine_iters,
            o.tolerance,
        )?)
    }

    pub fn time_grid(&self) -> Result<TimeGrid> {
        match &self.grid {
            GridConfig::Coupling { j_coupling, m_max } => {
                Ok(qcorrsim_core::sampling_grid(*j_coupling, *m_max)?)
            }
            GridConfig::Times(times) => Ok(TimeGrid::new(times.clone())?),
        }
    }

    /// Coupling frequency when the grid is coupling-synchronized; the scalar
    /// rotation step is skipped for explicit time lists.
    pub fn j_coupling(&self) -> Option<f64> {
        match &self.grid {
            GridConfig::Coupling { j_coupling, .. } => Some(*j_coupling),
            GridConfig::Times(_) => None,
        }
    }

    pub fn bell_coeffs(&self) -> Result<Option<BellDiagonalCoeffs>> {
        match &self.initial {
            InitialState::Bell { c_x, c_y, c_z } => {
                Ok(Some(BellDiagonalCoeffs::new(*c_x, *c_y, *c_z)?))
            }
            InitialState::StateFile(_) => Ok(None),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.relaxation_params()?;
        self.optimizer_settings()?;
        self.time_grid()?;
        self.bell_coeffs()?;
        if !(self.residual_amplitude.is_finite() && self.residual_amplitude >= 0.0) {
            bail!(
                "residual amplitude must be non-negative, got {}",
                self.residual_amplitude
            );
        }
        if let InitialState::StateFile(path) = &self.initial {
            if !path.is_file() {
                bail!("state file {} is not readable", path.display());
            }
        }
        Ok(())
    }
}

/// Everything needed to reproduce a simulation run plus headline results.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunManifest {
    pub config: SimulationConfig,
    pub version: String,
    pub duration_seconds: f64,
    /// Detected change time of the classical-correlation curve, when the
    /// two-segment fit reports one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_star: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}
