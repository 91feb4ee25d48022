//! TOML run configuration.
//!
//! ```toml
//! [[nodes]]
//! A = [[0.0]]
//! B = [[1.0]]
//! C = [[1.0]]
//! H = [[1.0]]
//!
//! [topology]
//! m = 1
//! beta = [[0.0]]
//! delta = [1]
//!
//! [horizon]
//! t0 = 0.0
//! t1 = 1.0
//! intervals = 200
//! ```
//!
//! Optional tables: `[perturbation]`, `[perturbation.estimation]`,
//! `[steering]`, `[contraction]` and `[outputs]`. Unknown keys are rejected.

use serde::{Deserialize, Serialize};

use crate::controllability::DEFAULT_INTERVALS;
use crate::perturbation::NodeNonlinearity;
use crate::steering::{
    ControlInterpolation, DEFAULT_FP_TOLERANCE, DEFAULT_MAX_ITERATIONS, DEFAULT_SIM_REFINEMENT,
};

pub type Rows = Vec<Vec<f64>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub nodes: Vec<NodeConfig>,
    pub topology: TopologyConfig,
    pub horizon: HorizonConfig,
    #[serde(default)]
    pub perturbation: PerturbationConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steering: Option<SteeringConfig>,
    #[serde(default)]
    pub contraction: ContractionConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeConfig {
    #[serde(rename = "A")]
    pub a: Rows,
    #[serde(rename = "B")]
    pub b: Rows,
    #[serde(rename = "C")]
    pub c: Rows,
    #[serde(rename = "H")]
    pub h: Rows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyConfig {
    pub m: usize,
    pub beta: Rows,
    pub delta: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HorizonConfig {
    pub t0: f64,
    pub t1: f64,
    #[serde(default = "default_intervals")]
    pub intervals: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationConfig {
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_declared: Option<f64>,
    /// One entry per node; empty means unperturbed.
    #[serde(default)]
    pub nodes: Vec<NodeNonlinearity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimation: Option<EstimationConfig>,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        Self {
            rho: default_rho(),
            alpha_declared: None,
            nodes: Vec::new(),
            estimation: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimationConfig {
    /// `[lo, hi]` applied to every state component.
    #[serde(rename = "box", default = "default_box")]
    pub sample_box: [f64; 2],
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for EstimationConfig {
    fn default() -> Self {
        Self {
            sample_box: default_box(),
            samples: default_samples(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteeringConfig {
    pub x0: Vec<f64>,
    pub x1: Vec<f64>,
    #[serde(default = "default_fp_tolerance")]
    pub fp_tolerance: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default = "default_sim_refinement")]
    pub sim_refinement: usize,
    #[serde(default)]
    pub interpolation: ControlInterpolation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractionConfig {
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
}

impl Default for ContractionConfig {
    fn default() -> Self {
        Self {
            pairs: default_pairs(),
            seed: 0,
            amplitude: default_amplitude(),
        }
    }
}

/// File names, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub report: String,
    pub trajectory: String,
    pub control: String,
    pub contraction: String,
    pub plot_dir: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            report: "report.json".into(),
            trajectory: "trajectory.csv".into(),
            control: "control.csv".into(),
            contraction: "contraction.json".into(),
            plot_dir: "plot".into(),
        }
    }
}

fn default_intervals() -> usize {
    DEFAULT_INTERVALS
}
fn default_rho() -> f64 {
    1.0
}
fn default_box() -> [f64; 2] {
    [-1.0, 1.0]
}
fn default_samples() -> usize {
    10_000
}
fn default_fp_tolerance() -> f64 {
    DEFAULT_FP_TOLERANCE
}
fn default_max_iterations() -> usize {
    DEFAULT_MAX_ITERATIONS
}
fn default_sim_refinement() -> usize {
    DEFAULT_SIM_REFINEMENT
}
fn default_pairs() -> usize {
    200
}
fn default_amplitude() -> f64 {
    0.5
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    /// Fills every implicit default so the result re-parses to itself:
    /// per-node perturbations become explicit, and an undeclared `α` gets an
    /// explicit estimation block.
    pub fn normalized(&self) -> Self {
        let mut out = self.clone();
        if out.perturbation.nodes.is_empty() {
            out.perturbation.nodes = vec![NodeNonlinearity::Zero; out.nodes.len()];
        }
        if out.perturbation.alpha_declared.is_none() && out.perturbation.estimation.is_none() {
            out.perturbation.estimation = Some(EstimationConfig::default());
        }
        out
    }
}
