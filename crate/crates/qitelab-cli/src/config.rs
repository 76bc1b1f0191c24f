//! Experiment configuration: a flat key-value file with sections, with
//! command-line overrides applied on top. The resolved configuration is
//! echoed next to the run outputs so a run can be reproduced exactly.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Global seed for every stochastic choice in the run.
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub system: SystemConfig,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub evolver: EvolverConfig,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// Preset name (see `presets`).
    pub preset: Option<String>,
    /// Integral file for the molecular presets.
    pub fcidump: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    /// `ghf` | `determinant` | `file`
    #[serde(default = "default_initial_kind")]
    pub kind: String,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    /// Occupied mode indices for `determinant`.
    pub occupation: Option<Vec<usize>>,
    /// Amplitude file for `file` (lines `re im`).
    pub path: Option<String>,
}

fn default_initial_kind() -> String {
    "ghf".into()
}

fn default_restarts() -> usize {
    10
}

impl Default for InitialConfig {
    fn default() -> Self {
        InitialConfig {
            kind: default_initial_kind(),
            restarts: default_restarts(),
            occupation: None,
            path: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolverConfig {
    /// `exact-ite` | `trot-ite` | `qite`
    #[serde(default = "default_evolver_kind")]
    pub kind: String,
    #[serde(default = "default_dtau")]
    pub dtau: f64,
    /// Total imaginary time; the step count is `round(tau / dtau)`.
    #[serde(default = "default_tau")]
    pub tau: f64,
    /// Domain size parameter of the unitary fit.
    #[serde(default = "default_nu")]
    pub nu: usize,
    /// `cg` | `svd`
    #[serde(default = "default_solver")]
    pub solver: String,
    #[serde(default = "default_solver_tol")]
    pub solver_tol: f64,
}

fn default_evolver_kind() -> String {
    "trot-ite".into()
}
fn default_dtau() -> f64 {
    0.1
}
fn default_tau() -> f64 {
    10.0
}
fn default_nu() -> usize {
    1
}
fn default_solver() -> String {
    "cg".into()
}
fn default_solver_tol() -> f64 {
    1e-10
}

impl Default for EvolverConfig {
    fn default() -> Self {
        EvolverConfig {
            kind: default_evolver_kind(),
            dtau: default_dtau(),
            tau: default_tau(),
            nu: default_nu(),
            solver: default_solver(),
            solver_tol: default_solver_tol(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    /// Diagonalize for reference energies and fidelities.
    #[serde(default = "default_true")]
    pub spectrum: bool,
    /// Emit the orbital mutual-information matrix (fermionic systems).
    #[serde(default)]
    pub mutual_information: bool,
}

fn default_true() -> bool {
    true
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        DiagnosticsConfig { spectrum: true, mutual_information: false }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Output directory; relative paths resolve under `QITELAB_OUT_ROOT`
    /// when that variable is set.
    pub dir: Option<String>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| format!("config parse error: {e}"))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}
