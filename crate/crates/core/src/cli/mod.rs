//! Configuration-driven entry points behind the `netsteer` binary.
//!
//! Exit status: 0 when the run completes (whatever the verdict), 1 for usage,
//! parse and I/O failures, 2 when the configuration describes an invalid
//! network or problem.

pub mod config;
pub mod report;

use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::controllability::{kalman_rank, quadrature_check, GramianData, TimeHorizon};
use crate::linalg::DenseMatrix;
use crate::network::{assemble, validate, NetworkTopology, NetworkedSystem, NodeDynamics};
use crate::perturbation::{
    check_boyd_wong, compute_m, estimate_holder_constant, resolve_alpha, AlphaChoice,
    NodeNonlinearity, Perturbation, SampleBox,
};
use crate::steering::{picard_solve, verify_contraction, ContractionReport, SteeringProblem, SteeringResult};

pub use config::RunConfig;
pub use report::AnalysisReport;
use report::{Dimensions, LinearControllability, SteeringSummary};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("malformed configuration: {0}")]
    Malformed(String),
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Validation(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "netsteer", version, about = "Controllability analysis and steering of perturbed networked systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every controllability hypothesis and write the analysis report.
    Analyze(RunOptions),
    /// Analyze, then compute and verify the steering trajectory.
    Steer(RunOptions),
    /// Sample the Hölder ratio of the solution map against M.
    CheckContraction(RunOptions),
    /// Print the normalized configuration.
    DumpConfig(RunOptions),
}

#[derive(Debug, Clone, Args)]
pub struct RunOptions {
    /// Path to the TOML configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Directory receiving all output files.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also report the Gramian drift between K and 2K intervals.
    #[arg(long)]
    pub quadrature_check: bool,
    /// Override the estimation and contraction-check seeds.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl RunOptions {
    pub fn new(config: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self {
            config: config.into(),
            out: out.into(),
            quadrature_check: false,
            seed: None,
        }
    }
}

/// Reads and parses the configuration, applying the seed override.
pub fn load_config(opts: &RunOptions) -> Result<RunConfig, RunError> {
    let text = fs::read_to_string(&opts.config).map_err(|source| RunError::Read {
        path: opts.config.clone(),
        source,
    })?;
    let mut cfg = RunConfig::from_toml(&text).map_err(|e| RunError::Parse {
        path: opts.config.clone(),
        message: e.to_string(),
    })?;
    if let Some(seed) = opts.seed {
        if let Some(est) = cfg.perturbation.estimation.as_mut() {
            est.seed = seed;
        }
        cfg.contraction.seed = seed;
    }
    Ok(cfg)
}

/// Everything derived from a configuration before any analysis runs.
#[derive(Debug, Clone)]
pub struct Model {
    pub nodes: Vec<NodeDynamics>,
    pub topology: NetworkTopology,
    pub sys: NetworkedSystem,
    pub horizon: TimeHorizon,
    pub perturbation: Perturbation,
    pub alpha: AlphaChoice,
}

fn matrix(rows: &[Vec<f64>], node: Option<usize>, field: &str) -> Result<DenseMatrix, RunError> {
    DenseMatrix::from_rows(rows).map_err(|e| {
        let owner = node.map_or_else(|| "topology".to_string(), |i| format!("node {i}"));
        RunError::Malformed(format!("{owner}, field {field}: {e}"))
    })
}

impl Model {
    pub fn from_config(cfg: &RunConfig) -> Result<Self, RunError> {
        let nodes = cfg
            .nodes
            .iter()
            .enumerate()
            .map(|(pos, nc)| {
                let i = pos + 1;
                Ok(NodeDynamics::new(
                    i,
                    matrix(&nc.a, Some(i), "A")?,
                    matrix(&nc.b, Some(i), "B")?,
                    matrix(&nc.c, Some(i), "C")?,
                    matrix(&nc.h, Some(i), "H")?,
                ))
            })
            .collect::<Result<Vec<_>, RunError>>()?;
        let topology = NetworkTopology::new(
            matrix(&cfg.topology.beta, None, "beta")?,
            cfg.topology.delta.clone(),
            cfg.topology.m,
        );
        let diags = validate(&nodes, &topology);
        if !diags.is_empty() {
            let text: Vec<String> = diags.iter().map(ToString::to_string).collect();
            return Err(RunError::Validation(text.join("; ")));
        }
        let sys = assemble(&nodes, &topology).map_err(|e| RunError::Validation(e.to_string()))?;
        let horizon = TimeHorizon::new(cfg.horizon.t0, cfg.horizon.t1, cfg.horizon.intervals)
            .map_err(|e| RunError::Validation(e.to_string()))?;

        let pc = &cfg.perturbation;
        let families = if pc.nodes.is_empty() {
            vec![NodeNonlinearity::Zero; nodes.len()]
        } else {
            pc.nodes.clone()
        };
        let invalid = |e: crate::Error| RunError::Validation(e.to_string());
        // α is not known yet; estimate with a provisional declaration
        let provisional = Perturbation::new(&sys, families.clone(), pc.rho, 0.0).map_err(invalid)?;
        let estimation = match (&pc.estimation, pc.alpha_declared) {
            (Some(est), _) => Some(est.clone()),
            (None, None) => Some(config::EstimationConfig::default()),
            (None, Some(_)) => None,
        };
        let estimated = match estimation {
            Some(est) => {
                let [lo, hi] = est.sample_box;
                if !(lo <= hi) {
                    return Err(RunError::Validation(format!("estimation box [{lo}, {hi}] is empty")));
                }
                let region = SampleBox::uniform(sys.n(), lo, hi, (horizon.t0(), horizon.t1()));
                Some(estimate_holder_constant(&provisional, pc.rho, &region, est.samples, est.seed).map_err(invalid)?)
            }
            None => None,
        };
        let alpha = resolve_alpha(pc.alpha_declared, estimated).map_err(invalid)?;
        let perturbation = Perturbation::new(&sys, families, pc.rho, alpha.value).map_err(invalid)?;
        Ok(Self {
            nodes,
            topology,
            sys,
            horizon,
            perturbation,
            alpha,
        })
    }

    pub fn steering_problem(&self, cfg: &RunConfig) -> Result<Option<SteeringProblem>, RunError> {
        let Some(sc) = &cfg.steering else {
            return Ok(None);
        };
        if !(sc.fp_tolerance > 0.0) || sc.max_iterations == 0 || sc.sim_refinement == 0 {
            return Err(RunError::Validation(
                "steering needs fp_tolerance > 0, max_iterations ≥ 1 and sim_refinement ≥ 1".into(),
            ));
        }
        let prob = SteeringProblem::new(
            self.sys.clone(),
            self.perturbation.clone(),
            self.horizon,
            sc.x0.clone(),
            sc.x1.clone(),
        )
        .map_err(|e| RunError::Validation(e.to_string()))?
        .with_fp_tolerance(sc.fp_tolerance)
        .with_max_iterations(sc.max_iterations)
        .with_sim_refinement(sc.sim_refinement)
        .with_interpolation(sc.interpolation);
        Ok(Some(prob))
    }
}

/// Runs the hypothesis checks in order and collects them into a report.
pub fn analyze(model: &Model, with_quadrature_check: bool) -> AnalysisReport {
    let sys = &model.sys;
    let n = sys.n();
    let mut warnings = Vec::new();
    if let Some(w) = &model.alpha.warning {
        warnings.push(w.clone());
    }

    let rank = kalman_rank(sys);
    let gramian = GramianData::new(sys, &model.horizon);
    let (min_eig, max_eig, data) = match gramian {
        Ok(data) => (data.factor.min_eig(), data.factor.max_eig(), Some(data)),
        Err(crate::Error::NotControllable { min_eig, max_eig }) => (min_eig, max_eig, None),
        Err(e) => unreachable!("Gramian construction only fails on the PD gate: {e}"),
    };
    let pd = data.is_some();
    if !pd {
        warnings.push(format!(
            "linear part is not controllable: Gramian eigenvalues in [{min_eig:e}, {max_eig:e}]"
        ));
    }
    if pd != (rank == n) {
        warnings.push(format!(
            "Kalman rank {rank} of {n} disagrees with the Gramian positive-definiteness gate"
        ));
    }

    let bounds = data.as_ref().map(|d| d.bounds(sys));
    let rho = model.perturbation.rho();
    let m = bounds.map(|b| compute_m(&b, model.alpha.value, &model.horizon));
    let boyd_wong = m.map(|m| check_boyd_wong(m, rho).expect("M and rho validated"));
    if let Some(bw) = &boyd_wong {
        if !bw.satisfied_globally {
            match bw.valid_interval {
                Some(iv) => warnings.push(format!(
                    "M t^rho < t fails near zero; it holds only for t > {:e}",
                    iv.low
                )),
                None => warnings.push(format!("M = {} is not below 1", bw.m)),
            }
        }
    }

    let quadrature = if with_quadrature_check {
        let check = quadrature_check(sys, &model.horizon).expect("doubling keeps the horizon valid");
        if !check.within_tolerance {
            warnings.push(format!(
                "Gramian changes by {:e} (relative) when the interval count is doubled",
                check.relative_drift
            ));
        }
        Some(check)
    } else {
        None
    };

    AnalysisReport {
        dimensions: Dimensions {
            n,
            p: sys.p(),
            nodes: model.nodes.len(),
        },
        linear: LinearControllability {
            kalman_rank: rank,
            rank_full: rank == n,
            gramian_min_eig: min_eig,
            gramian_max_eig: max_eig,
            gramian_positive_definite: pd,
        },
        bounds,
        alpha: model.alpha.clone(),
        m,
        rho,
        controllable_by_theorem: boyd_wong.is_some_and(|b| b.satisfied_globally),
        boyd_wong,
        quadrature_check: quadrature,
        steering: None,
        warnings,
    }
}

pub fn run_analyze(opts: &RunOptions) -> Result<AnalysisReport, RunError> {
    let cfg = load_config(opts)?;
    let model = Model::from_config(&cfg)?;
    let report = analyze(&model, opts.quadrature_check);
    report::write_json(&opts.out.join(&cfg.outputs.report), &report)?;
    Ok(report)
}

/// Analysis plus steering. Files are written even when the iteration does not
/// converge; an uncontrollable linear part leaves only the report.
pub fn run_steer(opts: &RunOptions) -> Result<(AnalysisReport, Option<SteeringResult>), RunError> {
    let cfg = load_config(opts)?;
    let model = Model::from_config(&cfg)?;
    let prob = model
        .steering_problem(&cfg)?
        .ok_or_else(|| RunError::Validation("steer needs a [steering] table".into()))?;
    let mut report = analyze(&model, opts.quadrature_check);
    let result = match picard_solve(&prob) {
        Ok(res) => {
            if !res.converged {
                report.warnings.push(format!(
                    "fixed-point iteration stopped after {} iterations without converging",
                    res.iterations
                ));
            }
            report.steering = Some(SteeringSummary::from(&res));
            Some(res)
        }
        Err(e) => {
            report.warnings.push(format!("steering skipped: {e}"));
            None
        }
    };
    let out = &opts.out;
    report::write_json(&out.join(&cfg.outputs.report), &report)?;
    if let Some(res) = &result {
        let times = &res.trajectory.times;
        report::write_series_csv(&out.join(&cfg.outputs.trajectory), "x", times, &res.trajectory.states)?;
        report::write_series_csv(&out.join(&cfg.outputs.control), "u", times, &res.controls)?;
        report::emit_plot_data(res, &out.join(&cfg.outputs.plot_dir))?;
    }
    Ok((report, result))
}

/// Samples trajectory pairs around the straight-line guess (zero states when
/// no `[steering]` table is given).
pub fn run_check_contraction(opts: &RunOptions) -> Result<ContractionReport, RunError> {
    let cfg = load_config(opts)?;
    let model = Model::from_config(&cfg)?;
    let prob = match model.steering_problem(&cfg)? {
        Some(p) => p,
        None => {
            let zeros = vec![0.0; model.sys.n()];
            SteeringProblem::new(
                model.sys.clone(),
                model.perturbation.clone(),
                model.horizon,
                zeros.clone(),
                zeros,
            )
            .map_err(|e| RunError::Validation(e.to_string()))?
        }
    };
    let c = &cfg.contraction;
    let rep = verify_contraction(&prob, c.pairs, c.seed, c.amplitude)
        .map_err(|e| RunError::Validation(e.to_string()))?;
    report::write_json(&opts.out.join(&cfg.outputs.contraction), &rep)?;
    Ok(rep)
}

pub fn dump_config(opts: &RunOptions) -> Result<String, RunError> {
    Ok(load_config(opts)?.normalized().to_toml())
}

fn print_summary(report: &AnalysisReport) {
    println!(
        "n = {}, p = {}, Kalman rank = {}, Gramian PD = {}",
        report.dimensions.n, report.dimensions.p, report.linear.kalman_rank, report.linear.gramian_positive_definite
    );
    if let (Some(m), Some(bw)) = (report.m, &report.boyd_wong) {
        println!(
            "alpha = {} ({:?}), M = {m}, rho = {}, condition satisfied = {}",
            report.alpha.value, report.alpha.source, report.rho, bw.satisfied_globally
        );
    }
    if let Some(s) = &report.steering {
        println!(
            "steering: {} iterations, converged = {}, terminal error (fixed point / simulated) = {:e} / {:e}",
            s.iterations, s.converged, s.terminal_error_fixed_point, s.terminal_error_simulated
        );
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
}

fn dispatch(command: &Command) -> Result<(), RunError> {
    match command {
        Command::Analyze(opts) => print_summary(&run_analyze(opts)?),
        Command::Steer(opts) => print_summary(&run_steer(opts)?.0),
        Command::CheckContraction(opts) => {
            let r = run_check_contraction(opts)?;
            println!(
                "{} pairs: max ratio {} (sup), {} (L2); M = {}; within bound = {}",
                r.pairs, r.max_ratio_sup, r.max_ratio_l2, r.m, r.within_bound
            );
        }
        Command::DumpConfig(opts) => print!("{}", dump_config(opts)?),
    }
    Ok(())
}

/// Parses `std::env::args` and runs the chosen subcommand.
pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
